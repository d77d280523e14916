#pragma once

// The natural mass distributions carried by digit-constrained sets.
//
// Free digits flip a fair coin; forced-gap digits cost nothing (they are
// 0 for free sets, and a whole tied run spends a single coin).  At depth n
// every surviving atom has therefore picked up the same number of coins
// E(n), and carries mass exactly 2^-E(n).  interval_measure reads the mass
// off that closed form; brute_force_measure rebuilds it by walking the
// digit choices one position at a time, so the two have no code in common
// past the schedule itself.

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "dimlab/digitset.hpp"

namespace dimlab {

// Mass of the depth-n atom [l/2^n, (l+1)/2^n).
struct AtomMass {
  std::int64_t n = 0;
  std::optional<std::int64_t> log2_mass;  // nullopt: the atom misses the set
  mpq_class value() const;                // 0 or 2^log2_mass, exact
};

AtomMass interval_measure(const DigitSet& set, std::int64_t n, const mpz_class& l);

// Oracle: accumulates the mass of the atom by branching on every coin
// among the first n positions.  Needs 2^E(n) <= 2^20 branches.
mpq_class brute_force_measure(const DigitSet& set, std::int64_t n, const mpz_class& l);

// Largest n*(d - eps) - E(n) over 0 <= n <= n_max, against the budget
// 1 + d.  A pass means every dyadic atom down to depth n_max obeys
// mass <= 2^(1+d) * (atom length)^(d-eps).
struct HolderCheck {
  mpq_class exponent;  // d - eps
  std::int64_t n_max = 0;
  mpq_class max_log2_ratio;
  std::int64_t argmax_n = 0;
  mpq_class bound;  // 1 + d
  bool ok = false;
};

HolderCheck holder_check(const DigitSet& set, const mpq_class& d, const mpq_class& eps,
                         std::int64_t n_max);

// One row per depth 1..n_max.  Every surviving atom at a given depth
// carries the same mass, so the leftmost one (l = 0 always survives)
// witnesses the depth's ratio; worst_l names it for the export.
struct HolderRow {
  std::int64_t n = 0;
  mpz_class worst_l;
  mpq_class log2_ratio;  // log2 mu(I) + n (d - eps)
};

std::vector<HolderRow> holder_sweep(const DigitSet& set, const mpq_class& d,
                                    const mpq_class& eps, std::int64_t n_max);

}  // namespace dimlab
