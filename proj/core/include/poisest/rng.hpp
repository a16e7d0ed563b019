#pragma once

#include <cstdint>
#include <limits>

namespace poisest {

struct SeedSpec {
  std::uint64_t master_seed = 0;
};

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator so it can be
/// handed to standard algorithms such as std::sample.
///
/// Streams are never seeded directly by callers; use derive_stream so that
/// the stream attached to (seed, index) is the same no matter which worker
/// thread produces it.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double on the open interval (0, 1) with 53 random bits.
  double uniform01() noexcept;

 private:
  std::uint64_t s_[4];
};

/// One splitmix64 finalisation step (Steele, Lea & Flood 2014).
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Child seed for index `index` of a parent seed. The index is spread by the
/// golden-ratio increment and both words pass through the splitmix64
/// finaliser, so neighbouring indices yield unrelated streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

inline Stream derive_stream(std::uint64_t parent, std::uint64_t index) noexcept {
  return Stream(derive_seed(parent, index));
}

}  // namespace poisest
