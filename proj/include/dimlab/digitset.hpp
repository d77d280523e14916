#pragma once

// Digit-constrained subsets of [0,1) described by a block schedule.
//
// FreeAt      -- free exactly on an explicit set of digit positions
//                (normalized to block form on construction, behaves like
//                FreeBlocks afterwards);
// FreeBlocks  -- digits inside every gap block (b_i, a_{i+1}] are forced
//                to 0;
// TiedBlocks  -- digits inside each gap block must all agree (the block
//                is all 0s or all 1s).
//
// Work at finite depth n happens on the dyadic atoms [l/2^n, (l+1)/2^n).
// A depth-n prefix decides membership only up to the constraints whose
// positions it can see; the tri-state Membership reports exactly that.

#include <cstdint>
#include <functional>
#include <vector>

#include "dimlab/dyadic.hpp"
#include "dimlab/rng.hpp"
#include "dimlab/schedule.hpp"

namespace dimlab {

enum class SetKind { FreeAt, FreeBlocks, TiedBlocks };
enum class Membership { yes, no, undetermined };

// Which cover family an enumeration targets: atoms ending at a block end
// (depth b_k) or at a gap end (depth a_{k+1}, tied sets only).
enum class CoverFamily { AtBlockEnd, AtGapEnd };

class DigitSet {
 public:
  DigitSet(SetKind kind, BlockSchedule schedule);

  // X free exactly on S (1-indexed positions, non-empty): runs of S become
  // blocks, everything below and between is a forced gap.
  static DigitSet from_free_positions(const std::vector<std::int64_t>& S);

  SetKind kind() const { return kind_; }
  bool tied() const { return kind_ == SetKind::TiedBlocks; }
  const BlockSchedule& schedule() const { return sched_; }
  std::size_t blocks() const { return a_.size(); }

  // int64 view of the endpoints (construction rejects schedules whose
  // positions no digit-level walk could reach anyway).
  std::int64_t a64(std::size_t i) const { return a_[i - 1]; }
  std::int64_t b64(std::size_t i) const { return b_[i - 1]; }
  std::int64_t depth_limit() const { return b_.back(); }  // b_K

  // Free positions (not inside a gap block) at or before n; n <= b_K.
  std::int64_t free_count(std::int64_t n) const;
  // Gap blocks whose first position is at or before n.
  std::int64_t gaps_started(std::int64_t n) const;
  // log2 of the number of depth-n atoms meeting the set.
  std::int64_t log2_atom_count(std::int64_t n) const;

 private:
  SetKind kind_;
  BlockSchedule sched_;
  std::vector<std::int64_t> a_, b_;
  std::vector<std::int64_t> free_at_b_;  // free positions <= b_i, per block
};

Membership member(const DigitSet& set, const DyadicPoint& x);

// The count of depth-n atoms meeting the set is always a power of two.
struct CoverCount {
  std::int64_t n = 0;
  std::int64_t log2_count = 0;
  mpz_class value() const;
};

// Closed-form count at depth n (0 <= n <= b_K).
CoverCount exact_cover_count(const DigitSet& set, std::int64_t n);

// Oracle: walks every l in [0, 2^n) and checks the digit constraints
// literally.  n <= 24.
std::int64_t brute_cover_count(const DigitSet& set, std::int64_t n);

std::int64_t cover_depth(const DigitSet& set, std::size_t k, CoverFamily family);
std::int64_t cover_log2_cardinality(const DigitSet& set, std::size_t k, CoverFamily family);

// The canonical family for the kind: block ends for free sets, gap ends
// for tied sets.
CoverFamily primary_family(SetKind kind);

// All cover points of the family at block index k, ascending.  Refuses
// (std::invalid_argument, reporting the exact log2 cardinality) when the
// cardinality exceeds 2^log2_cap.
std::vector<DyadicPoint> enumerate_cover(const DigitSet& set, std::size_t k,
                                         CoverFamily family, std::int64_t log2_cap = 24);
std::vector<DyadicPoint> enumerate_cover(const DigitSet& set, std::size_t k,
                                         std::int64_t log2_cap = 24);

// Streaming flavour of the same enumeration.
void for_each_cover_point(const DigitSet& set, std::size_t k, CoverFamily family,
                          const std::function<void(const DyadicPoint&)>& fn,
                          std::int64_t log2_cap = 24);

// Uniform draw over the depth-n atoms meeting the set (free digits are
// fair coins; a tied gap block spends one coin on its whole run).
DyadicPoint sample_point(const DigitSet& set, std::int64_t depth, BitSource& bits);
DyadicPoint sample_point(const DigitSet& set, std::int64_t depth, std::uint64_t seed);

}  // namespace dimlab
