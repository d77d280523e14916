#include "dimlab/digitset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dimlab {

namespace {

constexpr std::int64_t kPositionCap = std::int64_t{1} << 60;

std::int64_t to_i64(const mpz_class& z) {
  if (z > kPositionCap)
    throw std::invalid_argument(
        "digit set: schedule position " + z.get_str() +
        " is beyond any reachable digit depth (cap 2^60)");
  return static_cast<std::int64_t>(z.get_si());
}

}  // namespace

DigitSet::DigitSet(SetKind kind, BlockSchedule schedule)
    : kind_(kind), sched_(std::move(schedule)) {
  std::size_t K = sched_.blocks();
  a_.reserve(K);
  b_.reserve(K);
  free_at_b_.reserve(K);
  std::int64_t acc = 0;
  for (std::size_t i = 1; i <= K; ++i) {
    a_.push_back(to_i64(sched_.a(i)));
    b_.push_back(to_i64(sched_.b(i)));
    if (i == 1) acc = a_[0];  // positions 1..a_1 are free (relaxed schedules)
    acc += b_[i - 1] - a_[i - 1];
    free_at_b_.push_back(acc);
  }
}

DigitSet DigitSet::from_free_positions(const std::vector<std::int64_t>& S) {
  if (S.empty()) throw std::invalid_argument("digit set: free position set must be non-empty");
  std::vector<std::int64_t> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 1)
    throw std::invalid_argument("digit set: positions are 1-indexed, got " +
                                std::to_string(sorted.front()));
  std::vector<std::int64_t> a, b;
  if (sorted.front() > 1) {  // forced digits before the first run: empty first block
    a.push_back(0);
    b.push_back(0);
  }
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[j] + 1) ++j;
    a.push_back(sorted[i] - 1);
    b.push_back(sorted[j]);
    i = j + 1;
  }
  return DigitSet(SetKind::FreeAt, BlockSchedule::create_i64(a, b));
}

std::int64_t DigitSet::free_count(std::int64_t n) const {
  if (n < 0 || n > depth_limit())
    throw std::invalid_argument("digit set: depth " + std::to_string(n) +
                                " outside [0, b_K = " + std::to_string(depth_limit()) + "]");
  if (n <= a_[0]) return n;
  // first block i with b_i >= n
  auto it = std::lower_bound(b_.begin(), b_.end(), n);
  std::size_t i = static_cast<std::size_t>(it - b_.begin());  // 0-based
  std::int64_t before = i == 0 ? a_[0] : free_at_b_[i - 1];
  return n > a_[i] ? before + (n - a_[i]) : before;
}

std::int64_t DigitSet::gaps_started(std::int64_t n) const {
  // gaps i = 1..K-1 with b_i < n
  auto it = std::lower_bound(b_.begin(), b_.end(), n);
  auto started = static_cast<std::int64_t>(it - b_.begin());
  return std::min<std::int64_t>(started, static_cast<std::int64_t>(blocks()) - 1);
}

std::int64_t DigitSet::log2_atom_count(std::int64_t n) const {
  return free_count(n) + (tied() ? gaps_started(n) : 0);
}

Membership member(const DigitSet& set, const DyadicPoint& x) {
  std::size_t K = set.blocks();
  std::int64_t depth = x.depth();
  for (std::size_t i = 1; i + 1 <= K; ++i) {
    std::int64_t lo = set.b64(i) + 1;
    std::int64_t hi = std::min(set.a64(i + 1), depth);
    if (lo > hi) continue;
    if (set.tied()) {
      int ref = x.digit(lo);
      for (std::int64_t p = lo + 1; p <= hi; ++p)
        if (x.digit(p) != ref) return Membership::no;
    } else {
      for (std::int64_t p = lo; p <= hi; ++p)
        if (x.digit(p) != 0) return Membership::no;
    }
  }
  bool complete = K <= 1 || depth >= set.a64(K);
  return complete ? Membership::yes : Membership::undetermined;
}

mpz_class CoverCount::value() const {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, static_cast<unsigned long>(log2_count));
  return v;
}

CoverCount exact_cover_count(const DigitSet& set, std::int64_t n) {
  return CoverCount{n, set.log2_atom_count(n)};  // free_count validates n
}

std::int64_t brute_cover_count(const DigitSet& set, std::int64_t n) {
  if (n < 0 || n > 24)
    throw std::invalid_argument("brute_cover_count: depth must lie in [0, 24]");
  if (n > set.depth_limit())
    throw std::invalid_argument("brute_cover_count: depth exceeds b_K");
  // Visible gap runs, as (lo, hi) position pairs.
  std::vector<std::pair<std::int64_t, std::int64_t>> gaps;
  for (std::size_t i = 1; i + 1 <= set.blocks(); ++i) {
    std::int64_t lo = set.b64(i) + 1, hi = std::min(set.a64(i + 1), n);
    if (lo <= hi) gaps.emplace_back(lo, hi);
  }
  const bool tied = set.tied();
  std::int64_t count = 0;
  for (std::uint64_t l = 0; l < (std::uint64_t{1} << n); ++l) {
    bool ok = true;
    for (const auto& [lo, hi] : gaps) {
      // digit p of l is bit (n - p)
      int ref = tied ? static_cast<int>((l >> (n - lo)) & 1u) : 0;
      for (std::int64_t p = tied ? lo + 1 : lo; p <= hi && ok; ++p)
        ok = static_cast<int>((l >> (n - p)) & 1u) == ref;
      if (!ok) break;
    }
    if (ok) ++count;
  }
  return count;
}

CoverFamily primary_family(SetKind kind) {
  return kind == SetKind::TiedBlocks ? CoverFamily::AtGapEnd : CoverFamily::AtBlockEnd;
}

std::int64_t cover_depth(const DigitSet& set, std::size_t k, CoverFamily family) {
  if (k < 1 || k > set.blocks())
    throw std::invalid_argument("cover: block index k must lie in [1, K]");
  if (family == CoverFamily::AtGapEnd) {
    if (!set.tied())
      throw std::invalid_argument("cover: gap-end family needs a tied set");
    if (k + 1 > set.blocks())
      throw std::invalid_argument("cover: gap-end family needs k <= K - 1");
    return set.a64(k + 1);
  }
  return set.b64(k);
}

std::int64_t cover_log2_cardinality(const DigitSet& set, std::size_t k, CoverFamily family) {
  return set.log2_atom_count(cover_depth(set, k, family));
}

namespace {

// One independent binary choice of the enumeration: either a single free
// position or a whole visible gap run (tied sets).
struct Slot {
  std::int64_t lo, hi;  // controlled positions, inclusive
};

std::vector<Slot> slots_up_to(const DigitSet& set, std::int64_t depth) {
  std::vector<Slot> slots;
  auto add_free_run = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t p = lo; p <= hi; ++p) slots.push_back({p, p});
  };
  std::size_t K = set.blocks();
  add_free_run(1, std::min(set.a64(1), depth));
  for (std::size_t i = 1; i <= K; ++i) {
    add_free_run(set.a64(i) + 1, std::min(set.b64(i), depth));
    if (i + 1 <= K) {
      std::int64_t lo = set.b64(i) + 1, hi = std::min(set.a64(i + 1), depth);
      if (set.tied() && lo <= hi) slots.push_back({lo, hi});
    }
    if (set.b64(i) >= depth) break;
  }
  return slots;
}

mpz_class slot_mask(const Slot& s, std::int64_t depth) {
  mpz_class m = 0;
  for (std::int64_t p = s.lo; p <= s.hi; ++p)
    mpz_setbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(depth - p));
  return m;
}

}  // namespace

void for_each_cover_point(const DigitSet& set, std::size_t k, CoverFamily family,
                          const std::function<void(const DyadicPoint&)>& fn,
                          std::int64_t log2_cap) {
  std::int64_t depth = cover_depth(set, k, family);
  std::int64_t log2n = set.log2_atom_count(depth);
  if (log2n > log2_cap || log2n >= 62)
    throw std::invalid_argument("cover enumeration refused: 2^" + std::to_string(log2n) +
                                " atoms exceed the cap 2^" +
                                std::to_string(std::min<std::int64_t>(log2_cap, 61)));
  auto slots = slots_up_to(set, depth);
  if (static_cast<std::int64_t>(slots.size()) != log2n)
    throw std::logic_error("cover enumeration: slot count disagrees with the closed form");
  std::size_t m = slots.size();
  std::vector<mpz_class> masks(m);
  for (std::size_t j = 0; j < m; ++j) masks[j] = slot_mask(slots[j], depth);
  // Counter bit (m-1-j) drives slot j, so values come out ascending.
  mpz_class mant = 0;
  std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t c = 0;; ++c) {
    fn(DyadicPoint(mant, depth));
    if (c + 1 == total) break;
    std::uint64_t delta = c ^ (c + 1);
    for (int beta = 0; delta >> beta; ++beta) {
      std::size_t j = m - 1 - static_cast<std::size_t>(beta);
      if ((c + 1) >> beta & 1u)
        mant += masks[j];
      else
        mant -= masks[j];
    }
  }
}

std::vector<DyadicPoint> enumerate_cover(const DigitSet& set, std::size_t k, CoverFamily family,
                                         std::int64_t log2_cap) {
  std::vector<DyadicPoint> out;
  std::int64_t log2n = cover_log2_cardinality(set, k, family);
  if (log2n <= log2_cap && log2n < 31) out.reserve(std::size_t{1} << log2n);
  for_each_cover_point(
      set, k, family, [&](const DyadicPoint& p) { out.push_back(p); }, log2_cap);
  return out;
}

std::vector<DyadicPoint> enumerate_cover(const DigitSet& set, std::size_t k,
                                         std::int64_t log2_cap) {
  return enumerate_cover(set, k, primary_family(set.kind()), log2_cap);
}

DyadicPoint sample_point(const DigitSet& set, std::int64_t depth, BitSource& bits) {
  if (depth < 0 || depth > set.depth_limit())
    throw std::invalid_argument("sample_point: depth outside [0, b_K]");
  mpz_class mant = 0;
  for (const auto& slot : slots_up_to(set, depth)) {
    if (!bits.bit()) continue;
    for (std::int64_t p = slot.lo; p <= slot.hi; ++p)
      mpz_setbit(mant.get_mpz_t(), static_cast<mp_bitcnt_t>(depth - p));
  }
  return DyadicPoint(std::move(mant), depth);
}

DyadicPoint sample_point(const DigitSet& set, std::int64_t depth, std::uint64_t seed) {
  BitSource bits(seed);
  return sample_point(set, depth, bits);
}

}  // namespace dimlab
