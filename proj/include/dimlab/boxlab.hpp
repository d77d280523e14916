#pragma once

// Box-counting diagnostics for digit-constrained sets.
//
// Everything here works on the exact dyadic cover counts N(n) = number of
// depth-n atoms meeting the set.  log2 N(n) is a staircase in n: it climbs
// by one through block positions, stays flat through forced-gap positions
// (tied runs add a single step where each run starts).  The ratio
// log2 N(n) / n therefore rises through blocks and decays through gaps,
// which puts its local extremes at block ends and gap ends; the window
// estimates below only ever look there.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dimlab/digitset.hpp"
#include "dimlab/rng.hpp"
#include "dimlab/schedule.hpp"

namespace dimlab {

enum class DepthZone { BlockInterior, BlockEnd, GapInterior, GapEnd };

// Zone of depth n (1 <= n <= b_K).  Block ends win ties; the free prefix
// of a shifted schedule counts as block interior.
DepthZone classify_depth(const DigitSet& set, std::int64_t n);

// log2 N(n) - log2 N(n-1) as the staircase shape dictates.
std::int64_t expected_step(const DigitSet& set, std::int64_t n);

struct CountRow {
  std::int64_t n = 0;
  std::int64_t log2_count = 0;
  mpq_class ratio;  // log2 N(n) / n, canonical
  DepthZone zone = DepthZone::BlockInterior;
  std::optional<std::int64_t> empirical;  // distinct sampled atoms, if sampling ran
};

struct CountProfile {
  std::vector<CountRow> rows;  // depths 1..n_max
  const CountRow& at(std::int64_t n) const;
};

CountProfile count_profile(const DigitSet& set, std::int64_t n_max);

// Distinct depth-n atoms hit by `samples` uniform draws.  Never exceeds
// the exact count and reaches it once the draw pool saturates.
std::int64_t empirical_box_count(const DigitSet& set, std::int64_t n, std::int64_t samples,
                                 BitSource& bits);

// Count profile with the empirical column filled from one pool of
// depth-n_max draws, truncated at every depth.
CountProfile sampled_count_profile(const DigitSet& set, std::int64_t n_max, std::int64_t samples,
                                   BitSource& bits);

// Checks the staircase shape of log2 N and the rise/fall shape of the
// ratio at every scanned depth (all of them up to 2^21, a neighborhood of
// every block boundary beyond that).  On failure *why names the first bad
// depth.
bool trace_shape_ok(const DigitSet& set, std::string* why = nullptr);

// Count-trace dimension estimate over a window of block indices: the
// ratio's local minima sit at gap ends, its local maxima at block ends.
struct WindowEstimate {
  BlockWindow window;
  mpq_class lower;  // min of log2 N(a_{k+1}) / a_{k+1} over the window
  mpq_class upper;  // max of log2 N(b_k) / b_k over the window
};

WindowEstimate window_estimate(const DigitSet& set, BlockWindow w);

// Side-by-side dimension estimates for a set with at least three blocks
// and an anchored schedule (a_1 = 0).
//
// The headline numbers are difference quotients of log2 N taken across
// the tail window along the two block-aligned subsequences; for schedules
// whose tail is an arithmetic progression they are the exact limits.  The
// profile extremes and the raw count-trace estimate over the same windows
// come along so a caller can see how far the finite-depth data sits from
// the headline.  boundary_match confirms, with exact rational arithmetic,
// that the count trace at block/gap ends reproduces the schedule's ratio
// families (for tied sets the b_k count is one short of the family
// numerator, since the k-th run only starts at b_k + 1; the check accounts
// for exactly that offset).
struct DimensionReport {
  SetKind kind = SetKind::FreeBlocks;
  std::size_t blocks = 0;
  BlockWindow lower_window, upper_window;
  mpq_class lower, upper;          // headline difference quotients
  mpq_class lower_min, lower_max;  // lower ratio family over lower_window
  mpq_class upper_min, upper_max;  // upper ratio family over upper_window
  WindowEstimate counts;           // raw trace estimate over upper_window
  bool boundary_match = false;
  bool shape_ok = false;
};

DimensionReport dimension_report(const DigitSet& set);

}  // namespace dimlab
