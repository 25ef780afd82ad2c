#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fadecap/channel.hpp"
#include "fadecap/infodensity.hpp"
#include "fadecap/mc.hpp"
#include "fadecap/numerics.hpp"

namespace fadecap {

/// Random code: message_count blocks of block_length symbols, drawn i.i.d.
/// from N_C(0, q). The sampling covariance is kept with the codewords so the
/// decoder can evaluate densities against the same input law.
struct Codebook {
  std::size_t message_count = 0;
  std::size_t block_length = 0;
  CovarianceMatrix q;
  std::vector<Block> codewords;
  std::uint64_t master_seed = 0;
};

Codebook build_codebook(std::size_t m, std::size_t n, const CovarianceMatrix& q,
                        RngStream rng);

/// Decoder verdict: the decision is the unique codeword whose normalized block
/// information density clears the threshold; zero or multiple passers leave it
/// empty (an erasure).
struct DecodeOutcome {
  std::optional<std::size_t> decision;
  std::size_t passing_count = 0;
};

DecodeOutcome threshold_decode(const Block& output, const GainTrajectory& gains,
                               const Codebook& codebook, double threshold_bits,
                               double sigma2);

/// Achievability bound pieces for blocklength n at the given rate: the
/// information-spectrum tail, the codeword power-overflow probability (both
/// its Monte Carlo estimate and the analytic 2^{-n beta_hat} form), and the
/// exact 2^{-n gamma} threshold term. total() uses the analytic overflow term
/// so it stays a valid bound at any trial count.
struct FeinsteinBound {
  double info_tail = 0.0;
  double info_tail_std_error = 0.0;
  double power_tail_mc = 0.0;
  double power_tail_mc_std_error = 0.0;
  double power_tail_analytic = 0.0;
  double threshold_term = 0.0;

  double total() const { return info_tail + power_tail_analytic + threshold_term; }
};

/// Estimates P[i/n <= rate + gamma] over fresh (gains, input, noise) draws,
/// the power-overflow terms for the back-off beta = p - trace(q), and the
/// threshold term. Requires trace(q) strictly below the power budget.
FeinsteinBound feinstein_rhs(const ChannelParams& params, const CovarianceMatrix& q,
                             std::size_t n, double rate_bits, double gamma_bits,
                             std::size_t trials, RngStream rng, int threads = 1);

/// Average decoding error of the random code with m messages at threshold
/// log2(m)/n + gamma, over uniformly drawn messages and fresh channels;
/// erasures count as errors. Small codes are decoded exactly against a
/// materialized codebook. When m * n exceeds the exact-decoding budget the
/// codebook is marginalized out: by message symmetry the error equals
///   E[ 1{i_true/n <= threshold} + 1{i_true/n > threshold} (1 - (1 - q1)^{m-1}) ],
/// where q1 is the conditional probability that one independent codeword
/// clears the threshold against the realized (gains, output); q1 is estimated
/// per trial from a fixed panel of fresh competitor codewords. When q1 sits
/// below the panel's resolution the competitor term is underestimated; the
/// shortfall is bounded by the union term 2^{-n gamma} (a mismatched codeword
/// clears the threshold with probability at most 2^{-n (rate + gamma)}, and
/// there are fewer than 2^{n rate} competitors).
McEstimate simulate_error(const ChannelParams& params, std::uint64_t m, std::size_t n,
                          const CovarianceMatrix& q, double gamma_bits,
                          std::size_t trials, RngStream rng, int threads = 1);

/// Number of messages whose rate log2(m)/n best matches the requested rate,
/// saturating at 2^62 where the count type would overflow.
std::uint64_t message_count_for_rate(std::size_t n, double rate_bits);

}  // namespace fadecap
