#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fadecap/mc.hpp"
#include "fadecap/numerics.hpp"

namespace fadecap {

/// Chernoff tail bound for the average power of n i.i.d. Gaussian blocks with
/// per-block mean power rho:
///   P[sum ||X_i||^2 >= n (rho + delta)] <= ((1 + delta/rho) e^{-delta/rho})^n,
/// strictly inside (0, 1) for delta > 0.
double power_tail_bound(double rho, double delta, std::size_t n);

/// Exponent of the analytic codeword power-overflow bound 2^{-n beta_hat}:
/// for budget p and back-off beta in (0, p), with p_hat = p - beta,
///   beta_hat = beta / (p_hat ln 2) - log2(1 + beta / p_hat), always > 0.
double beta_hat(double p, double beta);

struct PowerMargin {
  double p = 0.0;
  double beta = 0.0;
  double p_hat = 0.0;     // p - beta
  double exponent = 0.0;  // beta_hat(p, beta)
};

PowerMargin make_power_margin(double p, double beta);

/// E[exp(beta ||X||^2)] for X ~ N_C(0, cov): the product of (1 - beta mu)^-1
/// over the covariance spectrum. Defined for beta < 1 / trace(cov); beyond
/// that the density argument it feeds breaks down, so the call throws.
double mgf_norm_sq(const ComplexMatrix& cov, double beta);

/// Fraction of trials in which the summed squared norm of n i.i.d. draws from
/// N_C(0, cov) reaches n (trace(cov) + delta).
double empirical_power_tail(const ComplexMatrix& cov, double delta, std::size_t n,
                            std::size_t trials, RngStream rng, int threads = 1);

/// Grid cell for tail experiments; cov must carry trace at most rho.
struct TailBoundQuery {
  double rho = 1.0;
  double delta = 1.0;
  std::size_t n = 1;
  ComplexMatrix cov;

  void validate() const;
};

struct InequalityCheck {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  // Smallest normalized slack seen; nonnegative slack means the inequality
  // held with room, anything below -tol counted as a violation.
  double worst_slack = 0.0;
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  std::size_t total_violations() const;
};

/// Randomized audit of the deterministic matrix/scalar inequalities the
/// achievability analysis leans on: spectral-norm domination, the shifted
/// log-determinant bound, the scalar power-mean bound, the averaged transmit
/// power budget, concavity of log det, geometric double-sum identities and
/// their n/(1-alpha) cap, and the fourth-moment bound for Gaussian vectors.
InequalityReport check_matrix_inequalities(RngStream rng, std::size_t instances,
                                           double tol);

struct GeometricSums {
  double lower_sum = 0.0;  // sum over i of sum_{k<i} alpha^{i-k}
  double upper_sum = 0.0;  // sum over i of sum_{k>i} alpha^{k-i}
  double bound = 0.0;      // n / (1 - alpha)
};

/// Closed-form values of the triangular geometric double sums over an n-block
/// index range with ratio alpha in [0, 1). Both triangles carry the same
/// value by index symmetry.
GeometricSums geometric_double_sums(std::size_t n, double alpha);

/// E ||X||^4 for X ~ N_C(0, cov): trace(cov)^2 + trace(cov^2).
double fourth_moment_norm(const ComplexMatrix& cov);

/// Running-mean stabilization probe for E[operator_norm(G)^ell] over Ginibre
/// draws: compares the mean over roughly the first half of the samples with
/// the mean over all of them. A small relative change is evidence the moment
/// is finite and the estimate has settled; this is a heuristic, not a proof.
struct MomentScan {
  double half_mean = 0.0;
  double full_mean = 0.0;
  double relative_change = 0.0;
  std::size_t samples = 0;
};

MomentScan operator_norm_moment_scan(Eigen::Index rows, Eigen::Index cols, int ell,
                                     std::size_t samples, RngStream rng,
                                     int threads = 1);

}  // namespace fadecap
