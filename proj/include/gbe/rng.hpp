#pragma once

#include <cstdint>
#include <random>

namespace gbe {

/// Seedable random stream. Equal (seed, stream_id) pairs replay the same
/// sequence bit for bit on every platform: the engine and seed_seq algorithms
/// are fixed by the standard and all variate transforms are implemented here
/// rather than taken from <random> distributions.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();

  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal variate (Marsaglia polar method).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gbe
