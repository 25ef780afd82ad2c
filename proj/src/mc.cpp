#include "fadecap/mc.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace fadecap {

void McAccumulator::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void McAccumulator::merge(const McAccumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double d = o.mean_ - mean_;
  const double nt = na + nb;
  mean_ += d * nb / nt;
  m2_ += o.m2_ + d * d * na * nb / nt;
  n_ += o.n_;
}

double McAccumulator::sample_variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

double McAccumulator::standard_error() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(sample_variance() / static_cast<double>(n_));
}

McAccumulator reduce_pairwise(std::vector<McAccumulator> accs) {
  if (accs.empty()) return {};
  std::size_t width = accs.size();
  while (width > 1) {
    const std::size_t half = width / 2;
    for (std::size_t i = 0; i < half; ++i) {
      McAccumulator merged = accs[2 * i];
      merged.merge(accs[2 * i + 1]);
      accs[i] = merged;
    }
    if (width % 2 == 1) accs[half] = accs[width - 1];
    width = half + width % 2;
  }
  return accs[0];
}

void parallel_batches(std::size_t batches, int threads,
                      const std::function<void(std::size_t)>& fn) {
  if (batches == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), batches);
  if (workers <= 1) {
    for (std::size_t b = 0; b < batches; ++b) fn(b);
    return;
  }
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < batches; b += workers) fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fadecap
