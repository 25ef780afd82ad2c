#include "fadecap/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace fadecap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed), index_(stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

double RngStream::normal() { return gauss_(engine_); }

std::complex<double> RngStream::cnormal() {
  const double re = gauss_(engine_);
  const double im = gauss_(engine_);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

RngStream RngStream::substream(std::uint64_t k) const {
  return RngStream(master_, splitmix64(index_ + 0x9E3779B97F4A7C15ULL * (k + 1)));
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double diff = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return diff <= tol * scale;
}

void require_hermitian(const ComplexMatrix& a, const char* who) {
  if (!is_hermitian(a))
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

void fill_ginibre(ComplexMatrix& a, RngStream& rng) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.cnormal();
}

ComplexMatrix sample_ginibre(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("sample_ginibre: dimensions must be positive");
  ComplexMatrix a(rows, cols);
  fill_ginibre(a, rng);
  return a;
}

CovarianceFactor::CovarianceFactor(const ComplexMatrix& cov) : dim_(cov.rows()) {
  require_hermitian(cov, "CovarianceFactor");
  trace_ = cov.trace().real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cov);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("CovarianceFactor: eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const double floor = -kPsdTol * std::max(trace_, 0.0);
  if (lam(0) < floor)
    throw std::invalid_argument(
        "CovarianceFactor: covariance is not positive semidefinite within tolerance");
  const double cutoff = 1e-12 * std::max(lam(dim_ - 1), 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < dim_; ++i)
    if (lam(i) > cutoff) ++rank;
  factor_.resize(dim_, rank);
  // Largest eigenvalue first so the draw order is scale-descending.
  Eigen::Index c = 0;
  for (Eigen::Index i = dim_ - 1; i >= 0; --i) {
    if (lam(i) > cutoff) factor_.col(c++) = es.eigenvectors().col(i) * std::sqrt(lam(i));
  }
}

ComplexVector CovarianceFactor::sample(RngStream& rng) const {
  const Eigen::Index r = factor_.cols();
  if (r == 0) return ComplexVector::Zero(dim_);
  ComplexVector u(r);
  for (Eigen::Index i = 0; i < r; ++i) u(i) = rng.cnormal();
  return factor_ * u;
}

ComplexVector sample_gaussian_vector(const ComplexMatrix& cov, RngStream& rng) {
  return CovarianceFactor(cov).sample(rng);
}

double logdet_hpd(const ComplexMatrix& a) {
  require_hermitian(a, "logdet_hpd");
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() == Eigen::Success) {
    double bits = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < a.rows(); ++i) bits += std::log2(l(i, i).real());
    return 2.0 * bits;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam(0) <= 0.0) {
    std::ostringstream msg;
    msg << "logdet_hpd: matrix is not positive definite (smallest eigenvalue "
        << lam(0) << ")";
    throw NotPositiveDefiniteError(msg.str(), lam(0));
  }
  double bits = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) bits += std::log2(lam(i));
  return bits;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

CovarianceMatrix::CovarianceMatrix(ComplexMatrix q, double power_budget)
    : q_(std::move(q)), budget_(power_budget) {
  if (!(budget_ > 0.0))
    throw std::invalid_argument("CovarianceMatrix: power budget must be positive");
  require_hermitian(q_, "CovarianceMatrix");
  trace_ = q_.trace().real();
  const double scale = std::max(trace_, budget_);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(q_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -kPsdTol * scale)
    throw std::invalid_argument(
        "CovarianceMatrix: matrix is not positive semidefinite within tolerance");
  if (trace_ > budget_ + kPsdTol * scale)
    throw std::invalid_argument("CovarianceMatrix: trace exceeds the power budget");
}

CovarianceMatrix project_to_feasible(const ComplexMatrix& h, double power_budget) {
  if (!(power_budget > 0.0))
    throw std::invalid_argument("project_to_feasible: power budget must be positive");
  require_hermitian(h, "project_to_feasible");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  Eigen::VectorXd x = es.eigenvalues().cwiseMax(0.0);
  if (x.sum() > power_budget) {
    // Shift-and-clip: sum of (lambda - theta)^+ is continuous and strictly
    // decreasing in theta, so bisection pins the budget-active solution.
    double lo = 0.0, hi = es.eigenvalues().maxCoeff();
    for (int it = 0; it < 200; ++it) {
      const double theta = 0.5 * (lo + hi);
      const double s = (es.eigenvalues().array() - theta).max(0.0).sum();
      (s > power_budget ? lo : hi) = theta;
    }
    const double theta = 0.5 * (lo + hi);
    x = (es.eigenvalues().array() - theta).max(0.0);
  }
  ComplexMatrix q =
      es.eigenvectors() * x.asDiagonal() * es.eigenvectors().adjoint();
  q = 0.5 * (q + q.adjoint()).eval();
  return CovarianceMatrix(std::move(q), power_budget);
}

}  // namespace fadecap
