#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace dimlab {

// Deterministic bit supply for the samplers.  Raw mt19937_64 output is
// pinned by the standard, so a given seed yields the same stream on every
// platform and toolchain; bits are consumed most-significant first.  We
// never go through std::uniform_int_distribution, whose mapping is
// implementation-defined.
class BitSource {
 public:
  explicit BitSource(std::uint64_t seed) : eng_(seed) {}

  int bit() {
    if (left_ == 0) {
      buf_ = eng_();
      left_ = 64;
    }
    --left_;
    return static_cast<int>((buf_ >> left_) & 1u);
  }

  // Uniform in [0, n), n >= 1, by rejection on bit_width(n-1) bits.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("BitSource::below: n must be >= 1");
    if (n == 1) return 0;
    int k = std::bit_width(n - 1);
    for (;;) {
      std::uint64_t v = 0;
      for (int i = 0; i < k; ++i) v = (v << 1) | static_cast<std::uint64_t>(bit());
      if (v < n) return v;
    }
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t buf_ = 0;
  int left_ = 0;
};

}  // namespace dimlab
