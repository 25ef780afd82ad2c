#include "fadecap/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace fadecap {

void ChannelParams::validate() const {
  if (n_t < 1) throw std::invalid_argument("ChannelParams: n_t must be at least 1");
  if (n_r < 1) throw std::invalid_argument("ChannelParams: n_r must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("ChannelParams: alpha must lie in [0, 1)");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("ChannelParams: sigma2 must be positive");
  if (!(p > 0.0)) throw std::invalid_argument("ChannelParams: p must be positive");
}

GainTrajectory evolve_gains(const ChannelParams& params, std::size_t n, RngStream& rng) {
  params.validate();
  if (n < 1) throw std::invalid_argument("evolve_gains: n must be at least 1");
  const double sa = std::sqrt(params.alpha);
  const double sw = std::sqrt(1.0 - params.alpha);
  GainTrajectory traj;
  traj.gains.reserve(n);
  traj.innovations.reserve(n - 1);
  traj.gains.push_back(sample_ginibre(params.n_r, params.n_t, rng));
  for (std::size_t i = 1; i < n; ++i) {
    traj.innovations.push_back(sample_ginibre(params.n_r, params.n_t, rng));
    traj.gains.push_back(sa * traj.gains.back() + sw * traj.innovations.back());
  }
  return traj;
}

GainTrajectory gains_closed_form(const ComplexMatrix& g1,
                                 const std::vector<ComplexMatrix>& innovations,
                                 double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("gains_closed_form: alpha must lie strictly in (0, 1)");
  for (const auto& w : innovations)
    if (w.rows() != g1.rows() || w.cols() != g1.cols())
      throw std::invalid_argument("gains_closed_form: innovation shape mismatch");
  const double sa = std::sqrt(alpha);
  const double sw = std::sqrt(1.0 - alpha);
  GainTrajectory traj;
  traj.gains.reserve(innovations.size() + 1);
  traj.innovations = innovations;
  for (std::size_t i = 1; i <= innovations.size() + 1; ++i) {
    ComplexMatrix g = std::pow(sa, static_cast<double>(i - 1)) * g1;
    // innovations[j - 2] is W_j in 1-based time.
    for (std::size_t j = 2; j <= i; ++j)
      g += sw * std::pow(sa, static_cast<double>(i - j)) * innovations[j - 2];
    traj.gains.push_back(std::move(g));
  }
  return traj;
}

TransmitResult transmit(const ChannelParams& params, const GainTrajectory& gains,
                        const Block& input, RngStream& rng) {
  params.validate();
  const std::size_t n = gains.length();
  if (input.length() != n)
    throw std::invalid_argument("transmit: input length does not match the trajectory");
  const double sn = std::sqrt(params.sigma2);
  TransmitResult result;
  result.output.symbols.reserve(n);
  result.noise.symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix& g = gains.gains[i];
    if (g.rows() != params.n_r || g.cols() != params.n_t)
      throw std::invalid_argument("transmit: gain shape does not match the parameters");
    if (input.symbols[i].size() != params.n_t)
      throw std::invalid_argument("transmit: input symbol dimension mismatch");
    ComplexVector noise(params.n_r);
    for (int k = 0; k < params.n_r; ++k) noise(k) = sn * rng.cnormal();
    result.output.symbols.push_back(g * input.symbols[i] + noise);
    result.noise.symbols.push_back(std::move(noise));
  }
  return result;
}

StationarityReport marginal_stationarity_report(const ChannelParams& params,
                                                std::size_t n, std::size_t trials,
                                                RngStream rng, int threads) {
  params.validate();
  if (n < 1) throw std::invalid_argument("marginal_stationarity_report: n must be at least 1");
  if (trials < 2)
    throw std::invalid_argument("marginal_stationarity_report: trials must be at least 2");
  const Eigen::Index d = static_cast<Eigen::Index>(params.n_r) * params.n_t;

  const std::size_t batch = 256;
  const std::size_t batches = batch_count(trials, batch);
  std::vector<std::vector<ComplexMatrix>> partial(batches);
  parallel_batches(batches, threads, [&](std::size_t b) {
    const std::size_t count = std::min(batch, trials - b * batch);
    RngStream stream = rng.substream(b);
    std::vector<ComplexMatrix> acc(n, ComplexMatrix::Zero(d, d));
    for (std::size_t t = 0; t < count; ++t) {
      const GainTrajectory traj = evolve_gains(params, n, stream);
      for (std::size_t i = 0; i < n; ++i) {
        const ComplexVector v = traj.gains[i].reshaped();
        acc[i] += v * v.adjoint();
      }
    }
    partial[b] = std::move(acc);
  });

  std::vector<ComplexMatrix> total(n, ComplexMatrix::Zero(d, d));
  for (std::size_t b = 0; b < batches; ++b)
    for (std::size_t i = 0; i < n; ++i) total[i] += partial[b][i];

  StationarityReport report;
  report.trajectory_length = n;
  report.trials = trials;
  report.threshold = 5.0 / std::sqrt(static_cast<double>(trials));
  report.insufficient_samples = trials < 100;
  report.max_covariance_deviation.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix cov = total[i] / static_cast<double>(trials);
    const double dev = (cov - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    report.max_covariance_deviation.push_back(dev);
    if (dev > report.threshold) report.flagged_indices.push_back(i);
  }
  return report;
}

}  // namespace fadecap
