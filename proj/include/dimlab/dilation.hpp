#pragma once

// Dilation sequences and their orbits on the binary circle.
//
// Three flavours of sequence drive x -> h x (mod 1):
//   Explicit     -- hand-given integer multipliers h_j;
//   PowerBlocks  -- h = 2^n for every n in a schedule gap (b_i, a_{i+1}];
//   IPGenerated  -- h = 2^n for n ranging over all finite sums of distinct
//                   generators, enumerated by the bitmask of the sum.
//
// The power-block exponents matter because of a separation effect: a point
// of the set built on the shifted schedule (a_i + i, b_i) has zeros filling
// (b_{i-1}, a_i + i], so shifting it by any n in the gap ending at block i
// leaves at most the tail past a_i + i, i.e. ||2^n x|| <= 2^-(a_i + i - n).
// Summed over the whole sequence those bounds stay below 1, which is what
// keeps such orbits pinned near 0 instead of equidistributing.

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "dimlab/digitset.hpp"
#include "dimlab/dyadic.hpp"
#include "dimlab/schedule.hpp"

namespace dimlab {

enum class SequenceKind { Explicit, PowerBlocks, IPGenerated };

class DilationSequence {
 public:
  static DilationSequence explicit_terms(std::vector<mpz_class> multipliers);
  static DilationSequence power_blocks(const BlockSchedule& s);
  static DilationSequence ip_generated(std::vector<std::int64_t> generators);

  SequenceKind kind() const { return kind_; }
  // Terms available: multipliers/exponents, or 2^m - 1 nonempty masks.
  std::size_t size() const;

  // Exponent of term j (0-based; for IPGenerated j encodes mask j + 1).
  std::int64_t exponent(std::size_t j) const;
  const mpz_class& multiplier(std::size_t j) const;  // Explicit only

  const std::vector<std::int64_t>& exponents() const;   // PowerBlocks only
  const std::vector<std::int64_t>& generators() const;  // IPGenerated only

 private:
  DilationSequence(SequenceKind kind) : kind_(kind) {}
  SequenceKind kind_;
  std::vector<mpz_class> multipliers_;
  std::vector<std::int64_t> exponents_;
  std::vector<std::int64_t> generators_;
};

// Sum of the generators picked out by mask bits: bit k-1 selects
// generators[k-1].  1 <= mask < 2^(#generators).
std::int64_t ip_term(const std::vector<std::int64_t>& generators, std::uint64_t mask);

struct OrbitRecord {
  std::size_t index = 0;                 // term number (IP: the mask)
  std::optional<std::int64_t> exponent;  // set for the power-of-two kinds
  std::optional<mpz_class> multiplier;   // set for Explicit
  DyadicPoint value;                     // h x mod 1
  ExactDistance dist0;                   // distance to the nearest integer
};

std::vector<OrbitRecord> orbit(const DilationSequence& seq, const DyadicPoint& x,
                               std::size_t count);

// The shift-separation bounds, term by term.
struct SeparationRow {
  std::int64_t exponent = 0;   // n, lying in the gap that ends at block i
  std::size_t block = 0;       // that i
  std::int64_t bound_log2 = 0; // bound is 2^-(a_i + i - n)
  ExactDistance dist;
  bool ok = false;
  mpq_class ratio;  // dist / bound
};

// Checks ||2^n x|| <= 2^-(a_i + i - n) for every power-block exponent of s.
// x must not visibly leave the free set of the shifted schedule; its tail
// past depth(x) is taken as all zeros.  Only the worst row is kept.
struct SeparationCheck {
  std::size_t checked = 0;
  bool all_ok = false;
  SeparationRow worst;
};

SeparationCheck separation_bound_check(const BlockSchedule& s, const DyadicPoint& x);

// Exact value of the full bound budget: the sum of 2^-(a_i + i - n) over
// every power-block exponent.  Provably < 1 for every valid schedule; the
// exact value lets callers confirm it digit for digit.
mpq_class tail_bound_sum(const BlockSchedule& s);

// Partial sums of ||2^{n_j} (h x)|| for each dilation factor h = 1..h_max
// over the first `count` terms of the sequence.  A partial sum only ever
// bounds the full one from below: crossing 1 is conclusive, staying under
// it is not, and below_one records just that.
struct DensityProbe {
  std::uint64_t h = 0;
  mpq_class partial_sum;
  bool below_one = false;
};

std::vector<DensityProbe> density_probes(const DilationSequence& seq, const DyadicPoint& x,
                                         std::uint64_t h_max, std::size_t count);

// Largest circular run of empty cells among 2^cells_log2 equal cells,
// as a fraction of the circle.
mpq_class gap_statistic(const std::vector<DyadicPoint>& values, int cells_log2);

// One-stop summary of how un-equidistributed a power-block orbit is.
struct OrbitDiagnostics {
  std::size_t terms = 0;
  bool within_quarter = false;   // every ||2^n x|| <= 2^-2
  ExactDistance tail_max;        // max distance over the last quarter of terms
  mpq_class bound_budget;        // tail_bound_sum of the schedule
  mpq_class empty_arc;           // gap_statistic of the orbit values
};

OrbitDiagnostics orbit_diagnostics(const BlockSchedule& s, const DyadicPoint& x,
                                   int cells_log2 = 4);

}  // namespace dimlab
