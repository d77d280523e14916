#pragma once

// Exact arithmetic on the binary circle.
//
// A DyadicPoint is a point of [0,1) with a finite binary expansion,
// stored as mantissa / 2^depth with 0 <= mantissa < 2^depth.  Digits are
// 1-indexed from the binary point: digit k of x is bit (depth - k) of the
// mantissa for k <= depth, and 0 for k > depth.  We always work with the
// eventually-zero expansion, so every value has exactly one representation
// at a given depth and 0.0111... never appears.
//
// Everything here is immutable and exact; the only "rounding" anywhere is
// the explicit truncation performed by shift/dilate mod 1, which is exact
// arithmetic on the circle, not floating point.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace dimlab {

class DyadicPoint {
 public:
  DyadicPoint() : mantissa_(0), depth_(0) {}
  DyadicPoint(mpz_class mantissa, std::int64_t depth);

  const mpz_class& mantissa() const { return mantissa_; }
  std::int64_t depth() const { return depth_; }
  bool is_zero() const { return mantissa_ == 0; }

  // 1-indexed digit after the binary point; 0 beyond the stored depth.
  int digit(std::int64_t k) const;

  mpq_class as_mpq() const;

  // "0.b1b2...bn" (depth digits, possibly none).
  std::string to_digit_string() const;
  // "0x<hex mantissa>/<depth>" -- compact form for deep points.
  std::string to_hex_string() const;

  // Accepts both textual forms above.
  static DyadicPoint parse(const std::string& text);

  // Order by numeric value (depths may differ).
  friend std::strong_ordering operator<=>(const DyadicPoint& x, const DyadicPoint& y);
  friend bool operator==(const DyadicPoint& x, const DyadicPoint& y);

 private:
  mpz_class mantissa_;
  std::int64_t depth_;
};

// Distance from a circle point to the nearest integer: a value in [0, 1/2]
// kept as numerator / 2^depth.  (1/2 is representable, so this is not a
// DyadicPoint.)
class ExactDistance {
 public:
  ExactDistance() : num_(0), depth_(0) {}
  ExactDistance(mpz_class num, std::int64_t depth);

  const mpz_class& numerator() const { return num_; }
  std::int64_t depth() const { return depth_; }
  bool is_zero() const { return num_ == 0; }

  mpq_class as_mpq() const;

  // Compare against 2^-m (m >= 0): negative / zero / positive like <=>.
  int cmp_pow2(std::int64_t m) const;

  // Smallest e with value < 2^e, i.e. bitlength(num) - depth; nullopt for 0.
  std::optional<std::int64_t> log2_upper_bound() const;

  friend std::strong_ordering operator<=>(const ExactDistance& x, const ExactDistance& y);
  friend bool operator==(const ExactDistance& x, const ExactDistance& y);

 private:
  mpz_class num_;
  std::int64_t depth_;
};

// 2^n * x mod 1: drops the leading n digits, depth becomes max(depth-n, 0).
DyadicPoint shift_mod1(const DyadicPoint& x, std::int64_t n);

// h * x mod 1 for a positive integer h; depth is unchanged.  h == 0 is
// rejected (dilation by 0 collapses the circle).
DyadicPoint dilate_mod1(const mpz_class& h, const DyadicPoint& x);
DyadicPoint dilate_mod1(std::uint64_t h, const DyadicPoint& x);

// (x + y) mod 1 at depth max(x.depth, y.depth).
DyadicPoint add_mod1(const DyadicPoint& x, const DyadicPoint& y);

// min(x, 1-x): distance from x to the nearest integer.
ExactDistance dist_nearest_int(const DyadicPoint& x);

}  // namespace dimlab
