#include "fadecap/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fadecap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

double power_tail_bound(double rho, double delta, std::size_t n) {
  if (!(rho > 0.0)) throw std::invalid_argument("power_tail_bound: rho must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("power_tail_bound: delta must be positive");
  if (n < 1) throw std::invalid_argument("power_tail_bound: n must be at least 1");
  const double d = delta / rho;
  return std::exp(static_cast<double>(n) * (std::log1p(d) - d));
}

double beta_hat(double p, double beta) {
  if (!(p > 0.0)) throw std::invalid_argument("beta_hat: p must be positive");
  if (!(beta > 0.0 && beta < p))
    throw std::invalid_argument("beta_hat: beta must lie strictly in (0, p)");
  const double x = beta / (p - beta);
  return (x - std::log1p(x)) / kLn2;
}

PowerMargin make_power_margin(double p, double beta) {
  PowerMargin m;
  m.p = p;
  m.beta = beta;
  m.exponent = beta_hat(p, beta);  // validates p and beta
  m.p_hat = p - beta;
  return m;
}

double mgf_norm_sq(const ComplexMatrix& cov, double beta) {
  require_hermitian(cov, "mgf_norm_sq");
  const double trace = cov.trace().real();
  if (trace > 0.0 && beta >= 1.0 / trace)
    throw std::domain_error("mgf_norm_sq: beta must be below 1 / trace(cov)");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cov, Eigen::EigenvaluesOnly);
  const double floor = -kPsdTol * std::max(trace, 0.0);
  double value = 1.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    double mu = es.eigenvalues()(i);
    if (mu < floor)
      throw std::invalid_argument("mgf_norm_sq: covariance is not positive semidefinite");
    mu = std::max(mu, 0.0);
    value /= 1.0 - beta * mu;
  }
  return value;
}

double empirical_power_tail(const ComplexMatrix& cov, double delta, std::size_t n,
                            std::size_t trials, RngStream rng, int threads) {
  if (n < 1) throw std::invalid_argument("empirical_power_tail: n must be at least 1");
  if (trials < 1) throw std::invalid_argument("empirical_power_tail: trials must be positive");
  const CovarianceFactor factor(cov);
  const double threshold = static_cast<double>(n) * (factor.trace() + delta);
  McEstimate est = run_mc(trials, rng, threads, [&](RngStream& stream) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += factor.sample(stream).squaredNorm();
    return s >= threshold ? 1.0 : 0.0;
  });
  return est.mean;
}

void TailBoundQuery::validate() const {
  if (!(rho > 0.0) || !(delta > 0.0) || n < 1)
    throw std::invalid_argument("TailBoundQuery: rho, delta and n must be positive");
  require_hermitian(cov, "TailBoundQuery");
  if (cov.trace().real() > rho * (1.0 + kPsdTol))
    throw std::invalid_argument("TailBoundQuery: covariance trace exceeds rho");
}

std::size_t InequalityReport::total_violations() const {
  std::size_t total = 0;
  for (const auto& c : checks) total += c.violations;
  return total;
}

namespace {

struct SlackTracker {
  InequalityCheck check;
  double tol;

  SlackTracker(std::string name, double tol_) : tol(tol_) { check.name = std::move(name); }

  void observe(double slack) {
    if (check.instances == 0 || slack < check.worst_slack) check.worst_slack = slack;
    ++check.instances;
    if (slack < -tol) ++check.violations;
  }
};

ComplexMatrix random_hermitian(Eigen::Index d, RngStream& rng) {
  const ComplexMatrix a = sample_ginibre(d, d, rng);
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_psd(Eigen::Index d, Eigen::Index inner, RngStream& rng) {
  const ComplexMatrix a = sample_ginibre(d, inner, rng);
  return a * a.adjoint();
}

double brute_lower_sum(std::size_t n, double alpha) {
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t k = 1; k < i; ++k) s += std::pow(alpha, static_cast<double>(i - k));
  return s;
}

}  // namespace

InequalityReport check_matrix_inequalities(RngStream rng, std::size_t instances,
                                           double tol) {
  if (instances < 1)
    throw std::invalid_argument("check_matrix_inequalities: instances must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("check_matrix_inequalities: tol must be positive");

  SlackTracker norm_dom("operator_norm_dominates", tol);
  SlackTracker logdet_shift("logdet_shift_bound", tol);
  SlackTracker power_mean("scalar_power_mean", tol);
  SlackTracker trace_budget("average_power_trace", tol);
  SlackTracker concavity("logdet_average_concavity", tol);
  SlackTracker geom_closed("geometric_sum_closed_form", tol);
  SlackTracker geom_bound("geometric_sum_cap", tol);
  SlackTracker fourth("fourth_moment_cap", tol);

  for (std::size_t inst = 0; inst < instances; ++inst) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform_below(5));

    {
      // ||A|| I - A stays positive semidefinite for Hermitian A.
      const ComplexMatrix a = random_hermitian(d, rng);
      const double norm = operator_norm(a);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
          norm * ComplexMatrix::Identity(d, d) - a, Eigen::EigenvaluesOnly);
      norm_dom.observe(es.eigenvalues()(0) / std::max(1.0, norm));
    }
    {
      // log det(A + B) <= log det A + log det(I + B / lambda_min(A)).
      const ComplexMatrix a =
          random_psd(d, d, rng) + 0.2 * ComplexMatrix::Identity(d, d);
      const Eigen::Index inner = 1 + static_cast<Eigen::Index>(rng.uniform_below(
                                         static_cast<std::uint64_t>(d)));
      const ComplexMatrix b = random_psd(d, inner, rng);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues()(0);
      const double lhs = logdet_hpd(a + b);
      const double rhs =
          logdet_hpd(a) +
          logdet_hpd(ComplexMatrix::Identity(d, d) + b / lmin);
      logdet_shift.observe((rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
    {
      // |a + b|^l <= 2^{l-1} (|a|^l + |b|^l) for integer l >= 0.
      const double a = 3.0 * rng.normal();
      const double b = 3.0 * rng.normal();
      const int ell = static_cast<int>(rng.uniform_below(9));
      const double lhs = std::pow(std::abs(a + b), ell);
      const double rhs = std::pow(2.0, ell - 1) *
                         (std::pow(std::abs(a), ell) + std::pow(std::abs(b), ell));
      power_mean.observe((rhs - lhs) / std::max(1.0, rhs));
    }
    {
      // Codeword ensembles respecting the per-block average power budget have
      // averaged per-symbol covariance with trace within the same budget.
      const std::size_t n = 1 + rng.uniform_below(8);
      const std::size_t words = 1 + rng.uniform_below(24);
      const double p = 0.5 + 2.0 * rng.uniform();
      std::vector<ComplexMatrix> q(n, ComplexMatrix::Zero(d, d));
      for (std::size_t w = 0; w < words; ++w) {
        std::vector<ComplexVector> t;
        double power = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          ComplexVector s(d);
          for (Eigen::Index k = 0; k < d; ++k) s(k) = rng.cnormal();
          power += s.squaredNorm();
          t.push_back(std::move(s));
        }
        // Scale so the block's average power lands at a random point within p.
        const double scale =
            std::sqrt(rng.uniform() * p * static_cast<double>(n) / std::max(power, 1e-12));
        for (std::size_t i = 0; i < n; ++i)
          q[i] += (scale * t[i]) * (scale * t[i]).adjoint() / static_cast<double>(words);
      }
      ComplexMatrix avg = ComplexMatrix::Zero(d, d);
      for (const auto& qi : q) avg += qi / static_cast<double>(n);
      trace_budget.observe((p - avg.trace().real()) / p);
    }
    {
      // Averaging inside log det dominates averaging outside (concavity).
      const std::size_t terms = 2 + rng.uniform_below(5);
      ComplexMatrix avg = ComplexMatrix::Zero(d, d);
      double mean_logdet = 0.0;
      for (std::size_t j = 0; j < terms; ++j) {
        const ComplexMatrix m =
            ComplexMatrix::Identity(d, d) + random_psd(d, d, rng);
        avg += m / static_cast<double>(terms);
        mean_logdet += logdet_hpd(m) / static_cast<double>(terms);
      }
      const double lhs = mean_logdet;
      const double rhs = logdet_hpd(0.5 * (avg + avg.adjoint()).eval());
      concavity.observe((rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
    {
      const std::size_t n = 1 + rng.uniform_below(20);
      const double alpha = 0.05 + 0.9 * rng.uniform();
      const GeometricSums sums = geometric_double_sums(n, alpha);
      const double brute = brute_lower_sum(n, alpha);
      geom_closed.observe(-std::abs(sums.lower_sum - brute) /
                          std::max(1.0, std::abs(brute)));
      geom_bound.observe((sums.bound - sums.lower_sum) / sums.bound);
    }
    {
      // E||X||^4 = trace^2 + trace(cov^2) <= 2 trace^2 for any PSD covariance.
      const Eigen::Index inner = 1 + static_cast<Eigen::Index>(rng.uniform_below(
                                         static_cast<std::uint64_t>(d)));
      const ComplexMatrix cov = random_psd(d, inner, rng);
      const double tr = cov.trace().real();
      const double lhs = fourth_moment_norm(cov);
      const double rhs = 2.0 * tr * tr;
      fourth.observe((rhs - lhs) / std::max(1.0, rhs));
    }
  }

  InequalityReport report;
  report.checks = {norm_dom.check,   logdet_shift.check, power_mean.check,
                   trace_budget.check, concavity.check,  geom_closed.check,
                   geom_bound.check, fourth.check};
  return report;
}

GeometricSums geometric_double_sums(std::size_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("geometric_double_sums: n must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("geometric_double_sums: alpha must lie in [0, 1)");
  GeometricSums sums;
  sums.bound = static_cast<double>(n) / (1.0 - alpha);
  if (alpha == 0.0) return sums;
  // Row sums of the two triangles: the row at index i contributes
  // (alpha - alpha^i) / (1 - alpha) below the diagonal and the mirrored
  // (alpha - alpha^{n-i+1}) / (1 - alpha) above it.
  for (std::size_t i = 1; i <= n; ++i) {
    sums.lower_sum += (alpha - std::pow(alpha, static_cast<double>(i))) / (1.0 - alpha);
    sums.upper_sum +=
        (alpha - std::pow(alpha, static_cast<double>(n - i + 1))) / (1.0 - alpha);
  }
  return sums;
}

double fourth_moment_norm(const ComplexMatrix& cov) {
  require_hermitian(cov, "fourth_moment_norm");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cov, Eigen::EigenvaluesOnly);
  const double trace = cov.trace().real();
  if (es.eigenvalues()(0) < -kPsdTol * std::max(trace, 0.0))
    throw std::invalid_argument("fourth_moment_norm: covariance is not positive semidefinite");
  const double sq = (cov * cov).trace().real();
  return trace * trace + sq;
}

MomentScan operator_norm_moment_scan(Eigen::Index rows, Eigen::Index cols, int ell,
                                     std::size_t samples, RngStream rng, int threads) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("operator_norm_moment_scan: dimensions must be positive");
  if (ell < 1 || ell > 8)
    throw std::invalid_argument("operator_norm_moment_scan: ell must lie in [1, 8]");
  if (samples < 2 * kMcBatchSamples)
    throw std::invalid_argument("operator_norm_moment_scan: too few samples for a half/full split");

  const std::size_t batches = batch_count(samples, kMcBatchSamples);
  std::vector<McAccumulator> accs(batches);
  parallel_batches(batches, threads, [&](std::size_t b) {
    const std::size_t count = std::min(kMcBatchSamples, samples - b * kMcBatchSamples);
    RngStream stream = rng.substream(b);
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < count; ++i) {
      fill_ginibre(g, stream);
      accs[b].add(std::pow(operator_norm(g), ell));
    }
  });

  // Half/full split at batch granularity, merged in batch order.
  const std::size_t half_batches = batches / 2;
  std::vector<McAccumulator> first(accs.begin(), accs.begin() + half_batches);
  McAccumulator half = reduce_pairwise(std::move(first));
  McAccumulator full = reduce_pairwise(std::move(accs));

  MomentScan scan;
  scan.half_mean = half.mean();
  scan.full_mean = full.mean();
  scan.samples = full.count();
  scan.relative_change =
      std::abs(scan.full_mean - scan.half_mean) / std::max(std::abs(scan.full_mean), 1e-300);
  return scan;
}

}  // namespace fadecap
