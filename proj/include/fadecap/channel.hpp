#pragma once

#include <cstddef>
#include <vector>

#include "fadecap/mc.hpp"
#include "fadecap/numerics.hpp"

namespace fadecap {

/// Dimensions and scalars of the block-fading model: at symbol time i the
/// receiver sees z_i = G_i t_i + noise, with the N_R x N_T gain matrix G_i
/// following a first-order Gauss-Markov recursion with memory alpha and the
/// noise i.i.d. circular Gaussian with per-component variance sigma2. The
/// transmitter works under the average power budget p.
struct ChannelParams {
  int n_t = 1;
  int n_r = 1;
  double alpha = 0.0;  // memory in [0, 1); 0 is the i.i.d. fading edge case
  double sigma2 = 1.0;
  double p = 1.0;

  void validate() const;
};

/// Gain matrices G_1..G_n together with the innovations W_2..W_n that drove
/// them (innovations[j] produced gains[j + 1]).
struct GainTrajectory {
  std::vector<ComplexMatrix> gains;
  std::vector<ComplexMatrix> innovations;

  std::size_t length() const { return gains.size(); }
};

/// A block of column-vector symbols (transmit blocks have dimension N_T per
/// symbol, receive blocks N_R).
struct Block {
  std::vector<ComplexVector> symbols;

  std::size_t length() const { return symbols.size(); }
};

/// Runs the gain recursion G_i = sqrt(alpha) G_{i-1} + sqrt(1-alpha) W_i from
/// a fresh unit Gaussian start G_1, keeping the innovations.
GainTrajectory evolve_gains(const ChannelParams& params, std::size_t n, RngStream& rng);

/// Rebuilds the trajectory from (G_1, W_2..W_n) by the explicit weighted sum
///   G_i = alpha^{(i-1)/2} G_1 + sqrt(1-alpha) * sum_j alpha^{(i-j)/2} W_j,
/// deliberately not reusing the recursion so the two construction routes stay
/// independent. Requires 0 < alpha < 1.
GainTrajectory gains_closed_form(const ComplexMatrix& g1,
                                 const std::vector<ComplexMatrix>& innovations,
                                 double alpha);

struct TransmitResult {
  Block output;
  Block noise;
};

/// Pushes an input block through the fading channel, drawing fresh noise.
TransmitResult transmit(const ChannelParams& params, const GainTrajectory& gains,
                        const Block& input, RngStream& rng);

/// Per-index check that the marginal law of the gains stays at the unit
/// Gaussian: the sample covariance of vec(G_i) is compared entrywise against
/// the identity. Indices whose worst entry deviates by more than five
/// standard errors are flagged.
struct StationarityReport {
  std::size_t trajectory_length = 0;
  std::size_t trials = 0;
  double threshold = 0.0;                        // 5 / sqrt(trials)
  std::vector<double> max_covariance_deviation;  // one entry per time index
  std::vector<std::size_t> flagged_indices;
  bool insufficient_samples = false;  // too few trials for the threshold to mean much
};

StationarityReport marginal_stationarity_report(const ChannelParams& params,
                                                std::size_t n, std::size_t trials,
                                                RngStream rng, int threads = 1);

}  // namespace fadecap
