#pragma once

// Deterministic block-parallel map-reduce. Work is cut into fixed-size blocks
// independent of the worker count; workers only decide who computes which
// block, and partial results are combined in block order. Results are
// therefore bitwise identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace eraser::parallel {

inline constexpr std::uint64_t kBlockSize = 4096;

/// Worker count: ERASER_SIM_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
[[nodiscard]] inline unsigned worker_count() {
  if (const char* env = std::getenv("ERASER_SIM_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
    } catch (const std::exception&) {
      // fall through to the default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls `fn(block_index, begin, end)` for every block covering [0, n) and
/// returns the per-block results in block order.
template <typename Result, typename Fn>
[[nodiscard]] std::vector<Result> map_blocks(std::uint64_t n, Fn&& fn, unsigned workers = worker_count()) {
  const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Result> out(n_blocks);
  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t begin = b * kBlockSize;
    out[b] = fn(b, begin, std::min(n, begin + kBlockSize));
  };

  const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));
  if (n_threads <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    return out;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
        try {
          run_block(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();  // joins
  if (error) std::rethrow_exception(error);
  return out;
}

/// Pairwise (cascade) summation; deterministic for a given input order.
[[nodiscard]] inline double pairwise_sum(std::span<const double> v) noexcept {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace eraser::parallel
