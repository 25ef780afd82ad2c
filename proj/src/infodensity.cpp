#include "fadecap/infodensity.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "fadecap/capacity.hpp"

namespace fadecap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_symbol_dims(const ComplexMatrix& gains, const ComplexVector& input,
                       const ComplexVector& output, const CovarianceMatrix& q,
                       const char* who) {
  if (q.dim() != gains.cols())
    throw std::invalid_argument(std::string(who) + ": covariance does not match gain columns");
  if (input.size() != gains.cols())
    throw std::invalid_argument(std::string(who) + ": input dimension mismatch");
  if (output.size() != gains.rows())
    throw std::invalid_argument(std::string(who) + ": output dimension mismatch");
}

}  // namespace

double info_density_symbol(const ComplexMatrix& gains, const ComplexVector& input,
                           const ComplexVector& output, const CovarianceMatrix& q,
                           double sigma2) {
  check_symbol_dims(gains, input, output, q, "info_density_symbol");
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("info_density_symbol: sigma2 must be positive");
  if (gains.rows() == 1 && gains.cols() == 1) {
    const double s = std::norm(gains(0, 0)) * q.matrix()(0, 0).real() / sigma2;
    const double resid = std::norm(output(0) - gains(0, 0) * input(0));
    const double quad = std::norm(output(0)) / (1.0 + s);
    return std::log2(1.0 + s) + (quad - resid) / (sigma2 * kLn2);
  }
  const Eigen::Index nr = gains.rows();
  ComplexMatrix m =
      ComplexMatrix::Identity(nr, nr) + gains * q.matrix() * gains.adjoint() / sigma2;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::LLT<ComplexMatrix> llt(m);
  // m dominates the identity, so a factorization failure means bad input.
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("info_density_symbol: conditional covariance factorization failed");
  double half = 0.0;
  for (Eigen::Index i = 0; i < nr; ++i) half += std::log2(llt.matrixLLT()(i, i).real());
  const double bits = 2.0 * half;
  const double resid = (output - gains * input).squaredNorm();
  const double quad = output.dot(llt.solve(output)).real();
  return bits + (quad - resid) / (sigma2 * kLn2);
}

double density_ratio_direct(const ComplexMatrix& gains, const ComplexVector& input,
                            const ComplexVector& output, const CovarianceMatrix& q,
                            double sigma2) {
  check_symbol_dims(gains, input, output, q, "density_ratio_direct");
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("density_ratio_direct: sigma2 must be positive");
  const Eigen::Index nr = gains.rows();
  // Conditional law given the input: output ~ N_C(g t, sigma2 I).
  const double ln_det_noise = static_cast<double>(nr) * std::log(sigma2);
  const double quad_noise = (output - gains * input).squaredNorm() / sigma2;
  // Output law with the input integrated out: N_C(0, g q g^H + sigma2 I).
  ComplexMatrix cov = gains * q.matrix() * gains.adjoint() +
                      sigma2 * ComplexMatrix::Identity(nr, nr);
  cov = 0.5 * (cov + cov.adjoint()).eval();
  Eigen::LLT<ComplexMatrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cov, Eigen::EigenvaluesOnly);
    throw NotPositiveDefiniteError(
        "density_ratio_direct: output covariance is numerically singular",
        es.eigenvalues()(0));
  }
  double ln_det_cov = 0.0;
  for (Eigen::Index i = 0; i < nr; ++i)
    ln_det_cov += std::log(llt.matrixLLT()(i, i).real());
  ln_det_cov *= 2.0;
  const double quad_cov = output.dot(llt.solve(output)).real();
  // log2 p(z | g, t) - log2 p(z | g); the pi^nr factors cancel.
  const double ln_ratio = (ln_det_cov - ln_det_noise) + (quad_cov - quad_noise);
  return ln_ratio / kLn2;
}

InfoDensitySample info_density_block(const GainTrajectory& gains, const Block& input,
                                     const Block& output, const CovarianceMatrix& q,
                                     double sigma2) {
  const std::size_t n = gains.length();
  if (n == 0) throw std::invalid_argument("info_density_block: empty trajectory");
  if (input.length() != n || output.length() != n)
    throw std::invalid_argument("info_density_block: block length mismatch");
  InfoDensitySample sample;
  sample.per_symbol.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    sample.per_symbol.push_back(
        info_density_symbol(gains.gains[i], input.symbols[i], output.symbols[i], q, sigma2));
    sample.total_bits += sample.per_symbol.back();
  }
  sample.normalized = sample.total_bits / static_cast<double>(n);
  return sample;
}

VarianceReport variance_study(const ChannelParams& params, const CovarianceMatrix& q,
                              const std::vector<std::size_t>& block_lengths,
                              std::size_t trials, RngStream rng, int threads) {
  params.validate();
  if (block_lengths.empty())
    throw std::invalid_argument("variance_study: no block lengths given");
  if (trials < 2) throw std::invalid_argument("variance_study: trials must be at least 2");
  const CovarianceFactor factor(q.matrix());
  VarianceReport report;
  report.block_lengths = block_lengths;
  report.trials = trials;
  for (std::size_t li = 0; li < block_lengths.size(); ++li) {
    const std::size_t n = block_lengths[li];
    if (n < 1) throw std::invalid_argument("variance_study: block lengths must be positive");
    McAccumulator acc = run_mc_accumulate(
        trials, rng.substream(li), threads,
        [&](std::size_t, std::size_t count, RngStream& stream, McAccumulator& a) {
          for (std::size_t t = 0; t < count; ++t) {
            const GainTrajectory traj = evolve_gains(params, n, stream);
            Block input;
            input.symbols.reserve(n);
            for (std::size_t i = 0; i < n; ++i) input.symbols.push_back(factor.sample(stream));
            const TransmitResult tx = transmit(params, traj, input, stream);
            a.add(info_density_block(traj, input, tx.output, q, params.sigma2).normalized);
          }
        },
        512);
    report.means.push_back(acc.mean());
    report.variances.push_back(acc.sample_variance());
  }
  return report;
}

namespace {

// Per-batch accumulator for the lag study: running sums of the per-trial
// trajectory mean v and the per-trial lagged products u(l), plus their
// squares and cross products for the delta-method standard errors.
struct LagSums {
  std::size_t trials = 0;
  double sv = 0.0, svv = 0.0;
  std::vector<double> su, suu, suv;

  explicit LagSums(std::size_t lags = 0) : su(lags), suu(lags), suv(lags) {}

  void absorb(const LagSums& o) {
    trials += o.trials;
    sv += o.sv;
    svv += o.svv;
    for (std::size_t l = 0; l < su.size(); ++l) {
      su[l] += o.su[l];
      suu[l] += o.suu[l];
      suv[l] += o.suv[l];
    }
  }
};

}  // namespace

LagDecayReport lag_covariance_study(const ChannelParams& params, const CovarianceMatrix& q,
                                    std::size_t max_lag, std::size_t trials,
                                    RngStream rng, int threads) {
  params.validate();
  if (max_lag < 1) throw std::invalid_argument("lag_covariance_study: max_lag must be positive");
  if (trials < 2)
    throw std::invalid_argument("lag_covariance_study: trials must be at least 2");
  const std::size_t len = max_lag + 1;
  const ComplexMatrix& qm = q.matrix();

  const std::size_t batch = 512;
  const std::size_t batches = batch_count(trials, batch);
  std::vector<LagSums> partial(batches, LagSums(max_lag));
  parallel_batches(batches, threads, [&](std::size_t b) {
    const std::size_t count = std::min(batch, trials - b * batch);
    RngStream stream = rng.substream(b);
    LagSums sums(max_lag);
    std::vector<double> ld(len);
    for (std::size_t t = 0; t < count; ++t) {
      const GainTrajectory traj = evolve_gains(params, len, stream);
      double v = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        ld[i] = capacity_integrand(traj.gains[i], qm, params.sigma2);
        v += ld[i];
      }
      v /= static_cast<double>(len);
      sums.trials += 1;
      sums.sv += v;
      sums.svv += v * v;
      for (std::size_t l = 1; l <= max_lag; ++l) {
        double u = 0.0;
        for (std::size_t i = 0; i + l < len; ++i) u += ld[i] * ld[i + l];
        u /= static_cast<double>(len - l);
        sums.su[l - 1] += u;
        sums.suu[l - 1] += u * u;
        sums.suv[l - 1] += u * v;
      }
    }
    partial[b] = std::move(sums);
  });

  LagSums total(max_lag);
  for (const LagSums& s : partial) total.absorb(s);

  const double tn = static_cast<double>(total.trials);
  const double vbar = total.sv / tn;
  const double var_v = (total.svv - tn * vbar * vbar) / (tn - 1.0);

  LagDecayReport report;
  for (std::size_t l = 1; l <= max_lag; ++l) {
    const double ubar = total.su[l - 1] / tn;
    const double var_u = (total.suu[l - 1] - tn * ubar * ubar) / (tn - 1.0);
    const double cov_uv = (total.suv[l - 1] - tn * ubar * vbar) / (tn - 1.0);
    const double cov = ubar - vbar * vbar;
    // Delta method for g(u, v) = u - v^2 on the trial means.
    const double var_est =
        (var_u + 4.0 * vbar * vbar * var_v - 4.0 * vbar * cov_uv) / tn;
    report.lags.push_back(l);
    report.covariances.push_back(cov);
    report.std_errors.push_back(std::sqrt(std::max(var_est, 0.0)));
  }

  if (params.alpha > 0.0) {
    // amplitude * rate^lag by least squares on log(cov) over usable lags.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t usable = 0;
    for (std::size_t i = 0; i < report.lags.size(); ++i) {
      if (report.covariances[i] <= 0.0) continue;
      const double x = static_cast<double>(report.lags[i]);
      const double y = std::log(report.covariances[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++usable;
    }
    if (usable >= 2) {
      const double un = static_cast<double>(usable);
      const double denom = un * sxx - sx * sx;
      if (denom > 0.0) {
        const double slope = (un * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / un;
        report.fitted_rate = std::exp(slope);
        report.fitted_amplitude = std::exp(intercept);
        report.fit_performed = true;
      }
    }
  }
  return report;
}

}  // namespace fadecap
