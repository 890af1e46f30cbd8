#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace gicl {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// One splitmix64 step: advance `state` by the golden gamma and return the
/// finalised output.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += kGoldenGamma;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// splitmix64 applied once to `x` (as a stateless mixer).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept { return splitmix64_next(x); }

/// Purpose tags keep the neighbour and demonstration draws for one anchor on
/// independent streams.
enum class DrawPurpose : std::uint64_t {
  Neighbors = 0x6E65696768626F72ULL,  // "neighbor"
  Demos = 0x64656D6F73000000ULL,      // "demos"
};

/// Seed for one selection decision:
/// splitmix64(seed ^ (anchor_key * golden) ^ purpose).
constexpr std::uint64_t derive_stream_seed(std::uint64_t global_seed, std::uint64_t anchor_key,
                                           DrawPurpose purpose) noexcept {
  return splitmix64(global_seed ^ (anchor_key * kGoldenGamma) ^ static_cast<std::uint64_t>(purpose));
}

/// Link-prediction anchors are keyed by (src << 32) | dst.
constexpr std::uint64_t pair_anchor_key(std::uint32_t src, std::uint32_t dst) noexcept {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

/// Deterministic stream of splitmix64 outputs.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t next() noexcept { return splitmix64_next(state_); }
  /// Uniform-ish draw in [0, bound) by reduction modulo `bound` (bound > 0).
  constexpr std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// Partial Fisher-Yates: after the call the first min(count, items.size())
/// entries are the draw, in draw order. Position i swaps with i + below(n - i).
template <typename T>
void partial_shuffle(std::span<T> items, std::size_t count, SplitMix64& rng) {
  const std::size_t n = items.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace gicl
