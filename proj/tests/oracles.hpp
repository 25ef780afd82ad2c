// Independent reference implementations used only by the tests. These are
// deliberately written with different algorithms than the library code they
// check (series/continued fractions instead of quadrature, brute-force
// enumeration instead of closed forms, finite differences instead of the
// analytic gradient).
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "fadecap/capacity.hpp"
#include "fadecap/numerics.hpp"

namespace oracles {

/// Exponential integral E1(x) for x > 0: power series below 1, modified
/// Lentz continued fraction above. Absolute accuracy ~1e-14 over the range
/// the tests exercise.
inline double expint_e1(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("expint_e1: x must be positive");
  constexpr double kEulerGamma = 0.57721566490153286060651209;
  if (x <= 1.0) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 64; ++k) {
      term *= -x / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // Lentz evaluation of E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
  constexpr double kTiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

/// Scalar Rayleigh-fading ergodic rate e^{1/snr} E1(1/snr) / ln 2 in bits.
inline double siso_capacity(double snr) {
  return std::exp(1.0 / snr) * expint_e1(1.0 / snr) / std::log(2.0);
}

/// O(n^2) enumeration of sum_i sum_{k<i} alpha^{i-k} (lower triangle) and the
/// mirrored upper triangle.
struct BruteGeometric {
  double lower = 0.0;
  double upper = 0.0;
};

inline BruteGeometric brute_geometric_sums(std::size_t n, double alpha) {
  BruteGeometric out;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 1; k < i; ++k) out.lower += std::pow(alpha, double(i - k));
    for (std::size_t k = i + 1; k <= n; ++k) out.upper += std::pow(alpha, double(k - i));
  }
  return out;
}

/// Central finite-difference gradient of the Monte Carlo objective along the
/// Hermitian coordinate basis, with common random numbers: every evaluation
/// replays the same gain draws, so the difference isolates the derivative.
inline fadecap::ComplexMatrix finite_difference_gradient(
    const fadecap::ComplexMatrix& q, double budget, const fadecap::ChannelParams& params,
    std::size_t samples, const fadecap::RngStream& rng, double eps) {
  using fadecap::ComplexMatrix;
  const Eigen::Index d = q.rows();
  ComplexMatrix grad = ComplexMatrix::Zero(d, d);
  const auto value = [&](const ComplexMatrix& m) {
    return fadecap::phi(fadecap::CovarianceMatrix(m, budget), params, samples, rng).mean;
  };
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = r; c < d; ++c) {
      if (r == c) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        e(r, r) = 1.0;
        grad(r, r) = (value(q + eps * e) - value(q - eps * e)) / (2.0 * eps);
      } else {
        ComplexMatrix re = ComplexMatrix::Zero(d, d);
        re(r, c) = re(c, r) = 1.0;
        ComplexMatrix im = ComplexMatrix::Zero(d, d);
        im(r, c) = std::complex<double>(0.0, 1.0);
        im(c, r) = std::complex<double>(0.0, -1.0);
        const double dre = (value(q + eps * re) - value(q - eps * re)) / (2.0 * eps);
        const double dim = (value(q + eps * im) - value(q - eps * im)) / (2.0 * eps);
        // Convention d(phi) = tr(grad dQ) with both factors Hermitian, so the
        // two real perturbations pin down 2 Re grad_rc and 2 Im grad_rc.
        grad(r, c) = 0.5 * std::complex<double>(dre, dim);
        grad(c, r) = std::conj(grad(r, c));
      }
    }
  }
  return grad;
}

inline double binomial_std_error(double p_hat, std::size_t trials) {
  return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / double(trials));
}

}  // namespace oracles
