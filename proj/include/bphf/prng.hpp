#pragma once

// Deterministic pseudorandomness: mt19937_64 (fully specified by the
// standard, so streams are identical across platforms) with unbiased
// rejection sampling for color draws. Retry streams derive as seed + retry.

#include <cstdint>
#include <random>

namespace bphf {

class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound) without modulo bias.
  std::uint32_t next_below(std::uint32_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t threshold = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      std::uint64_t x = engine_();
      if (x < threshold) return static_cast<std::uint32_t>(x % bound);
    }
  }

  // Bernoulli(num/den) with exact integer comparison, den > 0, 0 <= num <= den.
  bool next_bernoulli(std::uint64_t num, std::uint64_t den) {
    return next_below(static_cast<std::uint32_t>(den)) < num;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace bphf
