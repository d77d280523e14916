#pragma once

// Interleaved block schedules.
//
// A BlockSchedule is a pair of position sequences 0 = a_1 <= b_1 < a_2 <
// b_2 < ... < a_K < b_K marking the "free" digit blocks (a_i, b_i] and the
// forced gaps (b_i, a_{i+1}] between them.  Positions are 1-indexed digit
// indices after the binary point.  Endpoints are big integers: synthesized
// schedules outgrow any fixed width within a couple dozen blocks.
//
// The relaxed flavour (a_1 >= 0 instead of == 0) exists for shifted
// schedules, whose first block starts late; every downstream computation
// treats positions at or before a_1 as free.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace dimlab {

class BlockSchedule {
 public:
  // Validates the interleaving and throws std::invalid_argument naming the
  // first broken inequality.  relaxed_first allows a_1 >= 0.
  static BlockSchedule create(std::vector<mpz_class> a, std::vector<mpz_class> b,
                              bool relaxed_first = false);
  static BlockSchedule create_i64(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b,
                                  bool relaxed_first = false);

  std::size_t blocks() const { return a_.size(); }  // K

  // 1-indexed endpoints.
  const mpz_class& a(std::size_t i) const;
  const mpz_class& b(std::size_t i) const;
  bool relaxed_first() const { return relaxed_first_; }

  // sum_{i<=k} (b_i - a_i) plus, for the tied flavour, one unit per block.
  mpz_class free_sum(std::size_t k) const;
  mpz_class tied_sum(std::size_t k) const;

  bool operator==(const BlockSchedule& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  BlockSchedule(std::vector<mpz_class> a, std::vector<mpz_class> b, bool relaxed);
  std::vector<mpz_class> a_, b_;
  bool relaxed_first_;
};

enum class RatioKind {
  FreeOverNextA,  // sum (b_i - a_i) / a_{k+1}, k = 1..K-1   (lower family)
  FreeOverEndB,   // sum (b_i - a_i) / b_k,     k = 1..K     (upper family)
  TiedOverNextA,  // sum (b_i - a_i + 1) / a_{k+1}
  TiedOverEndB,   // sum (b_i - a_i + 1) / b_k
  NaturalDensity  // |free positions <= b_k| / b_k
};

struct RatioProfile {
  RatioKind kind;
  std::size_t first_k = 1;        // block index of values.front()
  std::vector<mpq_class> values;  // entry j is the value at k = first_k + j

  std::size_t last_k() const { return first_k + values.size() - 1; }
  const mpq_class& at_k(std::size_t k) const;
};

struct DimensionProfiles {
  RatioProfile lower;  // over a_{k+1}
  RatioProfile upper;  // over b_k
};

DimensionProfiles free_ratio_profile(const BlockSchedule& s);
DimensionProfiles tied_ratio_profile(const BlockSchedule& s);

// |{free positions} ∩ [1, N]| / N for N >= 1.
mpq_class natural_density(const BlockSchedule& s, const mpz_class& N);
// The density evaluated at N = b_k for each block (skipping b_k = 0).
RatioProfile natural_density_profile(const BlockSchedule& s);

// Inclusive range of block indices.
struct BlockWindow {
  std::size_t lo = 1, hi = 1;
};

// Last third of [first_k, last_k], at least two indices when available.
BlockWindow default_window(std::size_t first_k, std::size_t last_k);

mpq_class window_min(const RatioProfile& p, BlockWindow w);
mpq_class window_max(const RatioProfile& p, BlockWindow w);

// Exact difference quotient over the window endpoints (Stolz form), e.g.
// (free_sum(hi) - free_sum(lo)) / (a_{hi+1} - a_{lo+1}) for FreeOverNextA.
// Always a rational in [0, 1] for a valid schedule; equals the profile's
// limit exactly whenever the schedule tail is an arithmetic progression.
// Falls back to the profile value at lo when the window has one index.
mpq_class window_slope(const BlockSchedule& s, RatioKind kind, BlockWindow w);

struct SynthesizedSchedule {
  BlockSchedule schedule;
  std::vector<mpq_class> quotients;  // b_k / a_{k+1}, k = 1..K-1
};

// Builds a K-block schedule whose quotient profile b_k / a_{k+1} approaches
// d (a rational in [0, 1]), with |b_k/a_{k+1} - d| <= 2/k for every k < K,
// a_i + i < b_i throughout, and b_i/a_i strictly increasing from i = 2 on.
SynthesizedSchedule synthesize(const mpq_class& d, std::size_t K);

// The schedule (a_i + i, b_i); requires a_i + i < b_i for every i and
// returns a relaxed-first schedule (its a_1 is 1, not 0).
BlockSchedule prime_shift(const BlockSchedule& s);

}  // namespace dimlab
