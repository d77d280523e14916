#include "dimlab/boxlab.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace dimlab {

namespace {

mpq_class rat(std::int64_t num, std::int64_t den) {
  mpq_class q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

// First block index k with b_k >= n (n <= b_K guaranteed by callers).
std::size_t block_at_or_after(const DigitSet& set, std::int64_t n) {
  std::size_t lo = 1, hi = set.blocks();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (set.b64(mid) >= n)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

DepthZone classify_depth(const DigitSet& set, std::int64_t n) {
  if (n < 1 || n > set.depth_limit())
    throw std::invalid_argument("classify_depth: depth " + std::to_string(n) +
                                " outside [1, b_K = " + std::to_string(set.depth_limit()) + "]");
  std::size_t k = block_at_or_after(set, n);
  if (set.b64(k) == n) return DepthZone::BlockEnd;
  if (n > set.a64(k)) return DepthZone::BlockInterior;
  if (k == 1) return DepthZone::BlockInterior;  // free prefix of a shifted schedule
  return n == set.a64(k) ? DepthZone::GapEnd : DepthZone::GapInterior;
}

std::int64_t expected_step(const DigitSet& set, std::int64_t n) {
  DepthZone z = classify_depth(set, n);
  if (z == DepthZone::BlockInterior || z == DepthZone::BlockEnd) return 1;
  if (!set.tied()) return 0;
  bool run_start = n == 1 || classify_depth(set, n - 1) == DepthZone::BlockEnd;
  return run_start ? 1 : 0;
}

const CountRow& CountProfile::at(std::int64_t n) const {
  if (n < 1 || n > static_cast<std::int64_t>(rows.size()))
    throw std::out_of_range("count profile: no row for depth " + std::to_string(n));
  return rows[static_cast<std::size_t>(n - 1)];
}

CountProfile count_profile(const DigitSet& set, std::int64_t n_max) {
  if (n_max < 1 || n_max > set.depth_limit())
    throw std::invalid_argument("count profile: n_max outside [1, b_K]");
  if (n_max > (std::int64_t{1} << 20))
    throw std::invalid_argument("count profile: capped at 2^20 rows");
  CountProfile p;
  p.rows.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    CountRow row;
    row.n = n;
    row.log2_count = set.log2_atom_count(n);
    row.ratio = rat(row.log2_count, n);
    row.zone = classify_depth(set, n);
    p.rows.push_back(std::move(row));
  }
  return p;
}

std::int64_t empirical_box_count(const DigitSet& set, std::int64_t n, std::int64_t samples,
                                 BitSource& bits) {
  if (samples < 1) throw std::invalid_argument("empirical count: needs at least one sample");
  std::set<mpz_class> seen;
  for (std::int64_t t = 0; t < samples; ++t) seen.insert(sample_point(set, n, bits).mantissa());
  return static_cast<std::int64_t>(seen.size());
}

CountProfile sampled_count_profile(const DigitSet& set, std::int64_t n_max, std::int64_t samples,
                                   BitSource& bits) {
  if (samples < 1) throw std::invalid_argument("sampled profile: needs at least one sample");
  if (samples > (std::int64_t{1} << 20))
    throw std::invalid_argument("sampled profile: capped at 2^20 samples");
  CountProfile p = count_profile(set, n_max);  // validates n_max
  std::vector<mpz_class> pool;
  pool.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t t = 0; t < samples; ++t)
    pool.push_back(sample_point(set, n_max, bits).mantissa());
  for (auto& row : p.rows) {
    std::set<mpz_class> seen;
    mpz_class tr;
    for (const auto& m : pool) {
      mpz_fdiv_q_2exp(tr.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(n_max - row.n));
      seen.insert(tr);
    }
    row.empirical = static_cast<std::int64_t>(seen.size());
  }
  return p;
}

namespace {

std::vector<std::int64_t> scan_depths(const DigitSet& set) {
  std::int64_t top = set.depth_limit();
  std::vector<std::int64_t> depths;
  if (top <= (std::int64_t{1} << 21)) {
    depths.resize(static_cast<std::size_t>(top));
    for (std::int64_t n = 1; n <= top; ++n) depths[static_cast<std::size_t>(n - 1)] = n;
    return depths;
  }
  // Around every boundary the staircase might kink at.
  for (std::size_t k = 1; k <= set.blocks(); ++k) {
    for (std::int64_t c : {set.a64(k), set.b64(k)})
      for (std::int64_t n = c - 2; n <= c + 2; ++n)
        if (n >= 1 && n <= top) depths.push_back(n);
  }
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  return depths;
}

}  // namespace

bool trace_shape_ok(const DigitSet& set, std::string* why) {
  for (std::int64_t n : scan_depths(set)) {
    std::int64_t here = set.log2_atom_count(n);
    std::int64_t prev = n == 1 ? 0 : set.log2_atom_count(n - 1);
    std::int64_t step = here - prev;
    std::int64_t want = expected_step(set, n);
    if (step != want) {
      if (why)
        *why = "step at n = " + std::to_string(n) + " is " + std::to_string(step) + ", expected " +
               std::to_string(want);
      return false;
    }
    if (n == 1) continue;
    mpq_class r = rat(here, n), rp = rat(prev, n - 1);
    if (step == 1 && r < rp) {
      if (why) *why = "ratio fell across the block position n = " + std::to_string(n);
      return false;
    }
    if (step == 0 && (r > rp || (prev > 0 && r == rp))) {
      if (why) *why = "ratio failed to fall across the gap position n = " + std::to_string(n);
      return false;
    }
  }
  return true;
}

WindowEstimate window_estimate(const DigitSet& set, BlockWindow w) {
  std::size_t K = set.blocks();
  if (w.lo < 1 || w.lo > w.hi || w.hi > K)
    throw std::invalid_argument("window estimate: bad block window");
  WindowEstimate est;
  est.window = w;
  bool have_upper = false;
  for (std::size_t k = w.lo; k <= w.hi; ++k) {
    if (set.b64(k) == 0) continue;
    mpq_class r = rat(set.log2_atom_count(set.b64(k)), set.b64(k));
    if (!have_upper || r > est.upper) est.upper = r;
    have_upper = true;
  }
  if (!have_upper) throw std::invalid_argument("window estimate: no positive block end in window");
  bool have_lower = false;
  for (std::size_t k = w.lo; k <= std::min(w.hi, K - 1); ++k) {
    mpq_class r = rat(set.log2_atom_count(set.a64(k + 1)), set.a64(k + 1));
    if (!have_lower || r < est.lower) est.lower = r;
    have_lower = true;
  }
  if (!have_lower) {
    // No gap end inside the window (single-block schedules): the block-end
    // ratios stand in.
    est.lower = est.upper;
    for (std::size_t k = w.lo; k <= w.hi; ++k) {
      if (set.b64(k) == 0) continue;
      mpq_class r = rat(set.log2_atom_count(set.b64(k)), set.b64(k));
      if (r < est.lower) est.lower = r;
    }
  }
  return est;
}

namespace {

bool boundaries_match(const DigitSet& set, const DimensionProfiles& profiles) {
  std::size_t K = set.blocks();
  for (std::size_t k = 1; k + 1 <= K; ++k) {
    std::int64_t n = set.a64(k + 1);
    if (rat(set.log2_atom_count(n), n) != profiles.lower.at_k(k)) return false;
  }
  for (std::size_t k = profiles.upper.first_k; k <= K; ++k) {
    std::int64_t L = set.log2_atom_count(set.b64(k));
    if (set.tied()) ++L;  // the k-th run starts past b_k
    if (rat(L, set.b64(k)) != profiles.upper.at_k(k)) return false;
  }
  return true;
}

}  // namespace

DimensionReport dimension_report(const DigitSet& set) {
  std::size_t K = set.blocks();
  if (K < 3) throw std::invalid_argument("dimension report: needs at least three blocks");
  if (set.a64(1) != 0)
    throw std::invalid_argument("dimension report: needs an anchored schedule (a_1 = 0)");
  const BlockSchedule& s = set.schedule();
  auto profiles = set.tied() ? tied_ratio_profile(s) : free_ratio_profile(s);
  DimensionReport rep;
  rep.kind = set.kind();
  rep.blocks = K;
  rep.lower_window = default_window(1, K - 1);
  rep.upper_window = default_window(profiles.upper.first_k, K);
  RatioKind lower_kind = set.tied() ? RatioKind::TiedOverNextA : RatioKind::FreeOverNextA;
  RatioKind upper_kind = set.tied() ? RatioKind::TiedOverEndB : RatioKind::FreeOverEndB;
  rep.lower = window_slope(s, lower_kind, rep.lower_window);
  rep.upper = window_slope(s, upper_kind, rep.upper_window);
  rep.lower_min = window_min(profiles.lower, rep.lower_window);
  rep.lower_max = window_max(profiles.lower, rep.lower_window);
  rep.upper_min = window_min(profiles.upper, rep.upper_window);
  rep.upper_max = window_max(profiles.upper, rep.upper_window);
  rep.counts = window_estimate(set, rep.upper_window);
  rep.boundary_match = boundaries_match(set, profiles);
  rep.shape_ok = trace_shape_ok(set);
  return rep;
}

}  // namespace dimlab
