#pragma once

#include <array>
#include <cstdint>

namespace rpz {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure and stateless:
/// the output depends only on (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter ctr, Key key) noexcept;
};

/// Counter-based random stream keyed by (master seed, stream index).
///
/// Every draw is addressed by an explicit draw index, so a Monte Carlo trial
/// that uses stream = trial index produces the same numbers no matter which
/// worker runs it or in which order trials are scheduled.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

  /// Raw 64 random bits for draw `index`.
  std::uint64_t bits(std::uint64_t index) const noexcept;

  /// Uniform in the open interval (0, 1) with 53-bit resolution.
  double uniform(std::uint64_t index) const noexcept;

  /// Exponential(1) by inversion: -log(1 - U). Always strictly positive.
  double exponential(std::uint64_t index) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace rpz
