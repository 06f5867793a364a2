#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace csiaug {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Derives a child seed from a parent seed and an ordered list of keys:
///
///   h = mix64(parent)
///   for each key k:  h = mix64(h ^ mix64(k + kGoldenGamma))
///
/// docs/random.md spells this out so other implementations can reproduce
/// every stream bit-exactly.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(parent);
  for (auto k : keys) h = mix64(h ^ mix64(k + kGoldenGamma));
  return h;
}

/// FNV-1a hash of a tag, used to turn names into derive_seed keys.
constexpr std::uint64_t tag_key(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// SplitMix64 generator. Every draw is defined in terms of next_u64() so
/// the sequence is identical on every platform.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// 53-bit uniform real in [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform real in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, bound) by rejection: draws below
  /// (2^64 - bound) mod bound are discarded. bound == 0 returns 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Unbiased integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept;

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace csiaug
