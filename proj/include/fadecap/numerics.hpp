#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace fadecap {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Hermitian symmetry tolerance, relative to the largest entry magnitude.
inline constexpr double kHermitianTol = 1e-12;
// Eigenvalue floor for "positive semidefinite within tolerance", relative to
// the matrix trace (or the relevant power scale when the trace vanishes).
inline constexpr double kPsdTol = 1e-10;

/// Thrown when a positive-definite factorization is requested for a matrix
/// whose spectrum crosses zero. Carries the offending eigenvalue.
struct NotPositiveDefiniteError : std::domain_error {
  NotPositiveDefiniteError(const std::string& what, double eig)
      : std::domain_error(what), smallest_eigenvalue(eig) {}
  double smallest_eigenvalue;
};

/// Reproducible random stream addressed by (master_seed, stream_index).
/// Distinct addresses give statistically independent sequences; equal
/// addresses replay the identical sequence. Streams are value types: copying
/// one and drawing from both yields the same draws twice, which is how
/// common-random-number reuse is expressed throughout this library.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  /// Standard real Gaussian, mean zero, variance one.
  double normal();
  /// Circularly symmetric complex Gaussian with unit variance
  /// (real and imaginary parts are independent N(0, 1/2)).
  std::complex<double> cnormal();
  /// Uniform draw in [0, 1).
  double uniform();
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Derives the k-th child stream. The derivation is a pure function of
  /// (stream_index, k), so it does not disturb this stream's state. Used to
  /// hand every Monte Carlo batch its own stream regardless of which worker
  /// thread executes it.
  RngStream substream(std::uint64_t k) const;

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_index() const { return index_; }

 private:
  std::uint64_t master_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);
void require_hermitian(const ComplexMatrix& a, const char* who);

/// Fills `a` with i.i.d. cnormal draws in a fixed (column-major) order.
void fill_ginibre(ComplexMatrix& a, RngStream& rng);

/// Matrix with independent unit complex Gaussian entries.
ComplexMatrix sample_ginibre(Eigen::Index rows, Eigen::Index cols, RngStream& rng);

/// Precomputed spectral factor V with cov = V V^H, used to draw
/// zero-mean circularly symmetric Gaussian vectors as V u with u of
/// i.i.d. unit complex Gaussian entries. Rank-deficient covariances are
/// handled by keeping only the strictly positive part of the spectrum, so
/// draws always lie in the range of cov. Construction rejects inputs that
/// are not Hermitian or that have an eigenvalue below -kPsdTol * trace.
class CovarianceFactor {
 public:
  explicit CovarianceFactor(const ComplexMatrix& cov);

  ComplexVector sample(RngStream& rng) const;
  Eigen::Index dim() const { return dim_; }
  Eigen::Index rank() const { return factor_.cols(); }
  double trace() const { return trace_; }

 private:
  Eigen::Index dim_;
  double trace_;
  ComplexMatrix factor_;  // dim x rank
};

/// One-shot draw from N_C(0, cov). Prefer CovarianceFactor in loops.
ComplexVector sample_gaussian_vector(const ComplexMatrix& cov, RngStream& rng);

/// Base-2 log-determinant of a Hermitian positive definite matrix via
/// Cholesky, falling back to an eigendecomposition near the definiteness
/// boundary. Throws NotPositiveDefiniteError when the spectrum reaches zero.
double logdet_hpd(const ComplexMatrix& a);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// Transmit covariance constrained to the feasible set: Hermitian, positive
/// semidefinite within kPsdTol, trace at most the power budget (within
/// kPsdTol slack). The trace constraint is an inequality; interior points
/// are perfectly valid.
class CovarianceMatrix {
 public:
  CovarianceMatrix(ComplexMatrix q, double power_budget);

  const ComplexMatrix& matrix() const { return q_; }
  double power_budget() const { return budget_; }
  double trace() const { return trace_; }
  Eigen::Index dim() const { return q_.rows(); }

 private:
  ComplexMatrix q_;
  double budget_;
  double trace_;
};

/// Frobenius-nearest member of the feasible set: eigenvalues are clipped to
/// be nonnegative and, when their sum still exceeds the budget, shifted by
/// the scalar found by 1-D search so the clipped sum equals the budget.
/// Inputs already feasible come back unchanged up to factorization roundoff.
CovarianceMatrix project_to_feasible(const ComplexMatrix& h, double power_budget);

}  // namespace fadecap
