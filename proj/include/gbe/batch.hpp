#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbe/core.hpp"

namespace gbe {

enum class SamplerKind { Dense, Tridiagonal, Mcmc, Exact };

std::string_view sampler_name(SamplerKind kind);
/// Parses "dense", "tridiagonal", "mcmc" or "exact".
std::optional<SamplerKind> parse_sampler(std::string_view name);

/// Samples are produced in fixed-size chunks; chunk c of sampler s draws from
/// RngStream(seed, stream_id(s, c)). Results therefore do not depend on the
/// number of worker threads.
inline constexpr std::size_t kBatchChunk = 4096;
std::uint64_t batch_stream_id(SamplerKind kind, std::uint64_t chunk);

struct BatchOptions {
  /// Number of traces per row. The exact sampler only knows t1 and t2.
  int r_max = 2;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Per-chunk chain settings; n_steps is derived from the chunk length.
  std::int64_t mcmc_burn_in = 1000;
  std::int64_t mcmc_thinning = 50;
  /// Defaults to 0.5 / sqrt(beta) when unset.
  std::optional<double> mcmc_proposal_scale;
};

/// n_samples rows of traces t1..t_{r_max}, row-major.
struct TraceBatch {
  int r_max = 0;
  std::vector<double> data;

  std::size_t size() const { return r_max == 0 ? 0 : data.size() / static_cast<std::size_t>(r_max); }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * static_cast<std::size_t>(r_max), static_cast<std::size_t>(r_max)};
  }
  /// Column of t_r (1-based r) across all rows.
  std::vector<double> column(int r) const;
};

TraceBatch sample_trace_batch(SamplerKind kind, const EnsembleParams& params, std::size_t n_samples,
                              std::uint64_t seed, const BatchOptions& opts = {});

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on up to `threads`
/// workers and rethrows the first exception.
template <typename Fn>
void parallel_chunks(std::size_t n_chunks, unsigned threads, Fn&& fn);

unsigned resolve_threads(unsigned requested);

}  // namespace gbe

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace gbe {

template <typename Fn>
void parallel_chunks(std::size_t n_chunks, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n_chunks, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        fn(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gbe
