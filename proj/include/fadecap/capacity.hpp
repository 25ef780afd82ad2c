#pragma once

#include <cstddef>

#include "fadecap/channel.hpp"
#include "fadecap/mc.hpp"
#include "fadecap/numerics.hpp"

namespace fadecap {

/// log2 det(I + G q G^H / sigma2): the per-realization rate of a Gaussian
/// input with covariance q against gain matrix G under receiver side
/// information.
double capacity_integrand(const ComplexMatrix& gains, const ComplexMatrix& q,
                          double sigma2);

/// Monte Carlo estimate of the ergodic objective
///   phi(q) = E[log2 det(I + G q G^H / sigma2)]
/// over unit Gaussian gain draws. Passing the same stream value replays the
/// same gain set (common random numbers), which the solver and the
/// finite-difference checks rely on.
McEstimate phi(const CovarianceMatrix& q, const ChannelParams& params,
               std::size_t samples, RngStream rng, int threads = 1);

/// Monte Carlo estimate of the gradient of phi at q,
///   (1 / (sigma2 ln 2)) E[G^H (I + G q G^H / sigma2)^{-1} G],
/// Hermitian by construction. Uses the same per-sample gain draws as phi for
/// a given stream value.
ComplexMatrix phi_gradient(const CovarianceMatrix& q, const ChannelParams& params,
                           std::size_t samples, RngStream rng, int threads = 1);

struct SolverOptions {
  std::size_t samples_per_iteration = 20000;
  std::size_t max_iterations = 200;
  double step_size = 0.0;   // 0 picks the scale-aware default 0.1 * sigma2 * ln2 / n_r
  double tolerance = 1e-5;  // bits of objective improvement
  std::size_t restarts = 1;
  std::size_t final_samples = 0;  // fresh draws for the returned estimate; 0 reuses samples_per_iteration

  void validate() const;
};

struct SolveResult {
  McEstimate capacity;
  CovarianceMatrix argmax;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Maximizes the sample-average objective over the feasible covariance set by
/// projected gradient ascent with step halving, from the isotropic start
/// (p / n_t) I (plus random feasible restarts when requested). The gain
/// sample set is frozen for the whole ascent; the returned capacity is
/// re-estimated on fresh draws. Convergence means the improvement stayed
/// below `tolerance` for five consecutive iterations; hitting
/// `max_iterations` first leaves `converged` false.
SolveResult solve_capacity(const ChannelParams& params, const SolverOptions& opts,
                           RngStream rng, int threads = 1);

/// Single-antenna reference value E[log2(1 + snr X)], X standard exponential,
/// by adaptive Simpson quadrature on the damped integrand; absolute error is
/// controlled to well below 1e-8.
double siso_capacity_quadrature(double snr);

}  // namespace fadecap
