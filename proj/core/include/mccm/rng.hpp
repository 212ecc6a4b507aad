#pragma once

#include <cstdint>
#include <initializer_list>

#include "mccm/assortment.hpp"

namespace mccm {

/** splitmix64 finalizer; a strong, cheap 64-bit mixer. */
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/**
 * Deterministic counter-based generator (splitmix64). Streams derived from
 * the same key words always produce the same sequence, independent of any
 * other stream, which makes sampling order- and schedule-independent.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  /** Uniform double in [0, 1). */
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /** Uniform double in (0, 1); safe to pass through log(). */
  double next_double_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/** Derives an independent stream state from a seed and a list of key words. */
constexpr std::uint64_t derive_stream(std::uint64_t seed,
                                      std::initializer_list<std::uint64_t> words) {
  std::uint64_t s = mix64(seed + 0x9E3779B97F4A7C15ull);
  for (std::uint64_t w : words) s = mix64(s ^ (w + 0x9E3779B97F4A7C15ull));
  return s;
}

/** Stable 64-bit key for an assortment (folds the sorted members). */
inline std::uint64_t assortment_hash(const Assortment& s) {
  std::uint64_t h = mix64(0xA5A5A5A5A5A5A5A5ull ^ static_cast<std::uint64_t>(s.size()));
  for (int p : s.products()) h = mix64(h ^ static_cast<std::uint64_t>(p));
  return h;
}

}  // namespace mccm
