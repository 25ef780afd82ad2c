#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fadecap/numerics.hpp"

namespace fadecap {

// Fixed Monte Carlo batch granularity. Batch b of a study always draws from
// substream(b) of the study's base stream and the per-batch results are
// reduced in batch order, so estimates do not depend on how many worker
// threads happened to execute the batches.
inline constexpr std::size_t kMcBatchSamples = 8192;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t master_seed = 0;
};

/// Streaming mean/variance accumulator (Welford update, Chan merge).
class McAccumulator {
 public:
  void add(double x);
  void merge(const McAccumulator& o);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double sample_variance() const;
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Merges accumulators pairwise in index order; deterministic for any input
/// produced by any worker arrangement.
McAccumulator reduce_pairwise(std::vector<McAccumulator> accs);

/// Runs fn(batch_index) for every index in [0, batches), spreading batches
/// across at most `threads` workers by index stride. fn must only touch
/// per-batch state; exceptions are rethrown on the calling thread.
void parallel_batches(std::size_t batches, int threads,
                      const std::function<void(std::size_t)>& fn);

inline std::size_t batch_count(std::size_t samples, std::size_t batch_size) {
  return (samples + batch_size - 1) / batch_size;
}

/// Scalar Monte Carlo driver. BatchFn has signature
///   void(std::size_t batch, std::size_t count, RngStream& rng, McAccumulator& acc)
/// and must push exactly `count` values drawn from `rng`.
template <typename BatchFn>
McAccumulator run_mc_accumulate(std::size_t samples, const RngStream& base,
                                int threads, BatchFn&& fn,
                                std::size_t batch_size = kMcBatchSamples) {
  if (samples == 0) throw std::invalid_argument("run_mc: samples must be positive");
  const std::size_t batches = batch_count(samples, batch_size);
  std::vector<McAccumulator> accs(batches);
  parallel_batches(batches, threads, [&](std::size_t b) {
    const std::size_t first = b * batch_size;
    const std::size_t count = std::min(batch_size, samples - first);
    RngStream rng = base.substream(b);
    fn(b, count, rng, accs[b]);
  });
  return reduce_pairwise(std::move(accs));
}

/// Per-draw convenience wrapper: DrawFn is double(RngStream&).
template <typename DrawFn>
McEstimate run_mc(std::size_t samples, const RngStream& base, int threads,
                  DrawFn&& draw, std::size_t batch_size = kMcBatchSamples) {
  McAccumulator acc = run_mc_accumulate(
      samples, base, threads,
      [&](std::size_t, std::size_t count, RngStream& rng, McAccumulator& a) {
        for (std::size_t i = 0; i < count; ++i) a.add(draw(rng));
      },
      batch_size);
  return McEstimate{acc.mean(), acc.standard_error(), acc.count(),
                    base.master_seed()};
}

/// Matrix-valued Monte Carlo mean. BatchFn has signature
///   void(std::size_t batch, std::size_t count, RngStream& rng, ComplexMatrix& sum)
/// and must add `count` sample matrices into `sum` (already zero-sized rows x cols).
template <typename BatchFn>
ComplexMatrix run_mc_matrix_mean(Eigen::Index rows, Eigen::Index cols,
                                 std::size_t samples, const RngStream& base,
                                 int threads, BatchFn&& fn,
                                 std::size_t batch_size = kMcBatchSamples) {
  if (samples == 0) throw std::invalid_argument("run_mc: samples must be positive");
  const std::size_t batches = batch_count(samples, batch_size);
  std::vector<ComplexMatrix> sums(batches);
  parallel_batches(batches, threads, [&](std::size_t b) {
    const std::size_t first = b * batch_size;
    const std::size_t count = std::min(batch_size, samples - first);
    RngStream rng = base.substream(b);
    sums[b] = ComplexMatrix::Zero(rows, cols);
    fn(b, count, rng, sums[b]);
  });
  // Pairwise reduction in batch order.
  std::size_t width = sums.size();
  while (width > 1) {
    const std::size_t half = width / 2;
    for (std::size_t i = 0; i < half; ++i) sums[i] = sums[2 * i] + sums[2 * i + 1];
    if (width % 2 == 1) sums[half] = sums[width - 1];
    width = half + width % 2;
  }
  return sums[0] / static_cast<double>(samples);
}

}  // namespace fadecap
