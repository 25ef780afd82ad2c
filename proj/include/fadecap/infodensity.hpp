#pragma once

#include <cstddef>
#include <vector>

#include "fadecap/channel.hpp"
#include "fadecap/numerics.hpp"

namespace fadecap {

/// Per-symbol information density in bits for a Gaussian input with
/// covariance q against observed gains g, input t and output z:
///   log2 det(I + g q g^H / s2)
///   - |z - g t|^2 / (s2 ln 2) + z^H (I + g q g^H / s2)^{-1} z / (s2 ln 2).
double info_density_symbol(const ComplexMatrix& gains, const ComplexVector& input,
                           const ComplexVector& output, const CovarianceMatrix& q,
                           double sigma2);

/// Same quantity evaluated the pedestrian way: the two conditional Gaussian
/// log-densities are formed separately from their covariances and subtracted.
/// Kept as an independent cross-check of info_density_symbol; throws
/// NotPositiveDefiniteError if the output covariance is numerically singular.
double density_ratio_direct(const ComplexMatrix& gains, const ComplexVector& input,
                            const ComplexVector& output, const CovarianceMatrix& q,
                            double sigma2);

struct InfoDensitySample {
  std::vector<double> per_symbol;  // bits
  double total_bits = 0.0;
  double normalized = 0.0;  // total / block length
};

/// Block information density: the per-symbol values summed over the block.
/// With receiver side information the block density is exactly additive.
InfoDensitySample info_density_block(const GainTrajectory& gains, const Block& input,
                                     const Block& output, const CovarianceMatrix& q,
                                     double sigma2);

struct VarianceReport {
  std::vector<std::size_t> block_lengths;
  std::vector<double> means;      // of normalized block density, bits
  std::vector<double> variances;  // sample variance of the normalized density
  std::size_t trials = 0;
};

/// Empirical mean/variance of the normalized block information density for
/// i.i.d. Gaussian inputs with covariance q, per block length.
VarianceReport variance_study(const ChannelParams& params, const CovarianceMatrix& q,
                              const std::vector<std::size_t>& block_lengths,
                              std::size_t trials, RngStream rng, int threads = 1);

struct LagDecayReport {
  std::vector<std::size_t> lags;  // 1..max_lag
  std::vector<double> covariances;
  std::vector<double> std_errors;
  double fitted_rate = 0.0;
  double fitted_amplitude = 0.0;
  bool fit_performed = false;
};

/// Autocovariance of the per-symbol rate term log2 det(I + G_i q G_i^H / s2)
/// along the gain trajectory, as a function of the time lag, plus a geometric
/// amplitude * rate^lag fit (log-domain least squares over the lags whose
/// covariance estimate is positive). No fit is attempted at alpha = 0, where
/// every lag covariance should be statistical noise around zero.
LagDecayReport lag_covariance_study(const ChannelParams& params, const CovarianceMatrix& q,
                                    std::size_t max_lag, std::size_t trials,
                                    RngStream rng, int threads = 1);

}  // namespace fadecap
