#include "fadecap/achievability.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "fadecap/bounds.hpp"

namespace fadecap {

namespace {

constexpr double kLn2 = 0.6931471805599453;
// Exact decoding is used while m * n stays within this work budget per trial.
constexpr std::uint64_t kExactDecodeBudget = 600000;
constexpr std::size_t kCompetitorPanel = 512;

// Precomputed per-trial state for scoring many codewords against one
// realized (gains, output) pair: only the residual term depends on the
// codeword, everything else is shared.
class BlockScorer {
 public:
  BlockScorer(const GainTrajectory& gains, const Block& output,
              const CovarianceMatrix& q, double sigma2)
      : gains_(&gains.gains), inv_sigma2_ln2_(1.0 / (sigma2 * kLn2)) {
    const std::size_t n = gains.length();
    if (output.length() != n)
      throw std::invalid_argument("threshold_decode: output length mismatch");
    base_ = 0.0;
    outputs_ = &output.symbols;
    const Eigen::Index nr = gains.gains.empty() ? 0 : gains.gains[0].rows();
    scratch_.resize(nr);
    const ComplexMatrix eye = ComplexMatrix::Identity(nr, nr);
    for (std::size_t i = 0; i < n; ++i) {
      const ComplexMatrix& g = gains.gains[i];
      ComplexMatrix m = eye + g * q.matrix() * g.adjoint() / sigma2;
      m = 0.5 * (m + m.adjoint()).eval();
      Eigen::LLT<ComplexMatrix> llt(m);
      if (llt.info() != Eigen::Success)
        throw std::invalid_argument("threshold_decode: covariance factorization failed");
      double logdet_half = 0.0;
      for (Eigen::Index k = 0; k < nr; ++k)
        logdet_half += std::log2(llt.matrixLLT()(k, k).real());
      const double quad = output.symbols[i].dot(llt.solve(output.symbols[i])).real();
      base_ += 2.0 * logdet_half + quad / (sigma2 * kLn2);
    }
  }

  // Normalized block information density of one codeword. Reuses one scratch
  // vector so scoring a large codebook performs no allocations.
  double normalized(const Block& codeword) const {
    const std::size_t n = gains_->size();
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      scratch_.noalias() = (*gains_)[i] * codeword.symbols[i];
      scratch_ -= (*outputs_)[i];
      resid += scratch_.squaredNorm();
    }
    return (base_ - resid * inv_sigma2_ln2_) / static_cast<double>(n);
  }

 private:
  const std::vector<ComplexMatrix>* gains_;
  const std::vector<ComplexVector>* outputs_;
  double base_;
  double inv_sigma2_ln2_;
  mutable ComplexVector scratch_;
};

Block draw_block(const CovarianceFactor& factor, std::size_t n, RngStream& rng) {
  Block block;
  block.symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) block.symbols.push_back(factor.sample(rng));
  return block;
}

}  // namespace

Codebook build_codebook(std::size_t m, std::size_t n, const CovarianceMatrix& q,
                        RngStream rng) {
  if (m < 1) throw std::invalid_argument("build_codebook: m must be at least 1");
  if (n < 1) throw std::invalid_argument("build_codebook: n must be at least 1");
  const CovarianceFactor factor(q.matrix());
  Codebook cb{m, n, q, {}, rng.master_seed()};
  cb.codewords.reserve(m);
  for (std::size_t w = 0; w < m; ++w) cb.codewords.push_back(draw_block(factor, n, rng));
  return cb;
}

DecodeOutcome threshold_decode(const Block& output, const GainTrajectory& gains,
                               const Codebook& codebook, double threshold_bits,
                               double sigma2) {
  if (codebook.block_length != gains.length())
    throw std::invalid_argument("threshold_decode: block length mismatch");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("threshold_decode: sigma2 must be positive");
  const BlockScorer scorer(gains, output, codebook.q, sigma2);
  DecodeOutcome outcome;
  for (std::size_t w = 0; w < codebook.codewords.size(); ++w) {
    if (scorer.normalized(codebook.codewords[w]) > threshold_bits) {
      ++outcome.passing_count;
      if (outcome.passing_count == 1)
        outcome.decision = w;
      else
        outcome.decision.reset();
    }
  }
  return outcome;
}

FeinsteinBound feinstein_rhs(const ChannelParams& params, const CovarianceMatrix& q,
                             std::size_t n, double rate_bits, double gamma_bits,
                             std::size_t trials, RngStream rng, int threads) {
  params.validate();
  if (n < 1) throw std::invalid_argument("feinstein_rhs: n must be at least 1");
  if (!(gamma_bits > 0.0))
    throw std::invalid_argument("feinstein_rhs: gamma must be positive");
  if (!(rate_bits >= 0.0)) throw std::invalid_argument("feinstein_rhs: rate must be nonnegative");
  if (trials < 1) throw std::invalid_argument("feinstein_rhs: trials must be positive");
  const double beta = params.p - q.trace();
  if (!(beta > 0.0))
    throw std::invalid_argument(
        "feinstein_rhs: covariance trace must sit strictly below the power budget");

  FeinsteinBound bound;
  const double threshold = rate_bits + gamma_bits;
  const CovarianceFactor factor(q.matrix());
  McEstimate tail = run_mc(trials, rng.substream(1), threads, [&](RngStream& stream) {
    GainTrajectory traj = evolve_gains(params, n, stream);
    Block input = draw_block(factor, n, stream);
    TransmitResult tx = transmit(params, traj, input, stream);
    const double density =
        info_density_block(traj, input, tx.output, q, params.sigma2).normalized;
    return density <= threshold ? 1.0 : 0.0;
  });
  bound.info_tail = tail.mean;
  bound.info_tail_std_error = tail.std_error;

  bound.power_tail_mc =
      empirical_power_tail(q.matrix(), beta, n, trials, rng.substream(2), threads);
  bound.power_tail_mc_std_error = std::sqrt(
      bound.power_tail_mc * (1.0 - bound.power_tail_mc) / static_cast<double>(trials));
  bound.power_tail_analytic =
      std::exp2(-static_cast<double>(n) * make_power_margin(params.p, beta).exponent);
  bound.threshold_term = std::exp2(-static_cast<double>(n) * gamma_bits);
  return bound;
}

McEstimate simulate_error(const ChannelParams& params, std::uint64_t m, std::size_t n,
                          const CovarianceMatrix& q, double gamma_bits,
                          std::size_t trials, RngStream rng, int threads) {
  params.validate();
  if (m < 2) throw std::invalid_argument("simulate_error: need at least two messages");
  if (n < 1) throw std::invalid_argument("simulate_error: n must be at least 1");
  if (trials < 1) throw std::invalid_argument("simulate_error: trials must be positive");
  const double rate = std::log2(static_cast<double>(m)) / static_cast<double>(n);
  const double threshold = rate + gamma_bits;

  if (m <= kExactDecodeBudget / n) {
    const Codebook cb = build_codebook(static_cast<std::size_t>(m), n, q, rng.substream(1));
    return run_mc(trials, rng.substream(2), threads, [&](RngStream& stream) {
      const std::size_t msg = stream.uniform_below(m);
      GainTrajectory traj = evolve_gains(params, n, stream);
      const TransmitResult tx = transmit(params, traj, cb.codewords[msg], stream);
      const DecodeOutcome out =
          threshold_decode(tx.output, traj, cb, threshold, params.sigma2);
      const bool ok = out.decision.has_value() && *out.decision == msg;
      return ok ? 0.0 : 1.0;
    });
  }

  // Ensemble form for codebooks too large to materialize: score the true
  // codeword exactly and fold the m - 1 independent competitors in through
  // their conditional pass probability, estimated on a fixed panel.
  const CovarianceFactor factor(q.matrix());
  const double others = static_cast<double>(m - 1);
  return run_mc(trials, rng.substream(2), threads, [&](RngStream& stream) {
    GainTrajectory traj = evolve_gains(params, n, stream);
    Block truth = draw_block(factor, n, stream);
    const TransmitResult tx = transmit(params, traj, truth, stream);
    const BlockScorer scorer(traj, tx.output, q, params.sigma2);
    if (scorer.normalized(truth) <= threshold) return 1.0;
    std::size_t passers = 0;
    for (std::size_t k = 0; k < kCompetitorPanel; ++k)
      if (scorer.normalized(draw_block(factor, n, stream)) > threshold) ++passers;
    if (passers == 0) return 0.0;
    const double q1 = static_cast<double>(passers) / kCompetitorPanel;
    return -std::expm1(others * std::log1p(-q1));
  });
}

std::uint64_t message_count_for_rate(std::size_t n, double rate_bits) {
  if (n < 1) throw std::invalid_argument("message_count_for_rate: n must be at least 1");
  if (!(rate_bits > 0.0))
    throw std::invalid_argument("message_count_for_rate: rate must be positive");
  const double bits = static_cast<double>(n) * rate_bits;
  if (bits >= 62.0) return std::uint64_t{1} << 62;
  const double m = std::round(std::exp2(bits));
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(m));
}

}  // namespace fadecap
