#include "dimlab/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace dimlab {

namespace {

std::string str(const mpz_class& z) { return z.get_str(); }

}  // namespace

BlockSchedule::BlockSchedule(std::vector<mpz_class> a, std::vector<mpz_class> b, bool relaxed)
    : a_(std::move(a)), b_(std::move(b)), relaxed_first_(relaxed) {}

BlockSchedule BlockSchedule::create(std::vector<mpz_class> a, std::vector<mpz_class> b,
                                    bool relaxed_first) {
  if (a.empty()) throw std::invalid_argument("schedule: needs at least one block");
  if (a.size() != b.size())
    throw std::invalid_argument("schedule: a and b must have equal length (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
  if (!relaxed_first) {
    if (a[0] != 0)
      throw std::invalid_argument("schedule: a[1] = 0 violated (a[1] = " + str(a[0]) + ")");
  } else if (a[0] < 0) {
    throw std::invalid_argument("schedule: a[1] >= 0 violated (a[1] = " + str(a[0]) + ")");
  }
  if (a[0] > b[0])
    throw std::invalid_argument("schedule: a[1] <= b[1] violated (" + str(a[0]) + " > " +
                                str(b[0]) + ")");
  for (std::size_t i = 1; i < a.size(); ++i) {
    // 1-indexed names in messages
    if (b[i - 1] >= a[i])
      throw std::invalid_argument("schedule: b[" + std::to_string(i) + "] < a[" +
                                  std::to_string(i + 1) + "] violated (" + str(b[i - 1]) +
                                  " >= " + str(a[i]) + ")");
    if (a[i] >= b[i])
      throw std::invalid_argument("schedule: a[" + std::to_string(i + 1) + "] < b[" +
                                  std::to_string(i + 1) + "] violated (" + str(a[i]) +
                                  " >= " + str(b[i]) + ")");
  }
  return BlockSchedule(std::move(a), std::move(b), relaxed_first);
}

BlockSchedule BlockSchedule::create_i64(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b, bool relaxed_first) {
  std::vector<mpz_class> az(a.begin(), a.end()), bz(b.begin(), b.end());
  return create(std::move(az), std::move(bz), relaxed_first);
}

const mpz_class& BlockSchedule::a(std::size_t i) const {
  if (i < 1 || i > a_.size()) throw std::out_of_range("schedule: block index out of range");
  return a_[i - 1];
}

const mpz_class& BlockSchedule::b(std::size_t i) const {
  if (i < 1 || i > b_.size()) throw std::out_of_range("schedule: block index out of range");
  return b_[i - 1];
}

mpz_class BlockSchedule::free_sum(std::size_t k) const {
  if (k > blocks()) throw std::out_of_range("schedule: free_sum index out of range");
  mpz_class s = 0;
  for (std::size_t i = 1; i <= k; ++i) s += b(i) - a(i);
  return s;
}

mpz_class BlockSchedule::tied_sum(std::size_t k) const {
  return free_sum(k) + static_cast<unsigned long>(k);
}

const mpq_class& RatioProfile::at_k(std::size_t k) const {
  if (k < first_k || k > last_k()) throw std::out_of_range("profile: index out of range");
  return values[k - first_k];
}

namespace {

mpq_class canon(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

RatioProfile over_next_a(const BlockSchedule& s, RatioKind kind, bool tied) {
  RatioProfile p{kind, 1, {}};
  mpz_class num = 0;
  for (std::size_t k = 1; k + 1 <= s.blocks(); ++k) {
    num += s.b(k) - s.a(k) + (tied ? 1 : 0);
    p.values.push_back(canon(num, s.a(k + 1)));  // a_{k+1} >= b_k + 1 >= 1
  }
  return p;
}

RatioProfile over_end_b(const BlockSchedule& s, RatioKind kind, bool tied) {
  // b_1 = 0 (legal when the first block is empty) has no depth to divide
  // by; the profile then starts at k = 2.
  RatioProfile p{kind, s.b(1) == 0 ? std::size_t{2} : std::size_t{1}, {}};
  mpz_class num = 0;
  for (std::size_t k = 1; k <= s.blocks(); ++k) {
    num += s.b(k) - s.a(k) + (tied ? 1 : 0);
    if (k >= p.first_k) p.values.push_back(canon(num, s.b(k)));
  }
  if (p.first_k > s.blocks()) p.values.clear();  // K = 1 with b_1 = 0
  return p;
}

}  // namespace

DimensionProfiles free_ratio_profile(const BlockSchedule& s) {
  return {over_next_a(s, RatioKind::FreeOverNextA, false),
          over_end_b(s, RatioKind::FreeOverEndB, false)};
}

DimensionProfiles tied_ratio_profile(const BlockSchedule& s) {
  return {over_next_a(s, RatioKind::TiedOverNextA, true),
          over_end_b(s, RatioKind::TiedOverEndB, true)};
}

mpq_class natural_density(const BlockSchedule& s, const mpz_class& N) {
  if (N < 1) throw std::invalid_argument("natural_density: N must be >= 1");
  mpz_class count = 0;
  for (std::size_t i = 1; i <= s.blocks(); ++i) {
    mpz_class hi = std::min(s.b(i), N);
    if (hi > s.a(i)) count += hi - s.a(i);
  }
  return canon(count, N);
}

RatioProfile natural_density_profile(const BlockSchedule& s) {
  RatioProfile p{RatioKind::NaturalDensity, s.b(1) == 0 ? std::size_t{2} : std::size_t{1}, {}};
  for (std::size_t k = p.first_k; k <= s.blocks(); ++k)
    p.values.push_back(natural_density(s, s.b(k)));
  return p;
}

BlockWindow default_window(std::size_t first_k, std::size_t last_k) {
  if (last_k < first_k) throw std::invalid_argument("window: empty index range");
  std::size_t n = last_k - first_k + 1;
  std::size_t width = std::max<std::size_t>(2, (n + 2) / 3);
  width = std::min(width, n);
  return {last_k - width + 1, last_k};
}

namespace {

void check_window(const RatioProfile& p, BlockWindow w) {
  if (w.lo > w.hi) throw std::invalid_argument("window: lo > hi");
  if (w.lo < p.first_k || w.hi > p.last_k())
    throw std::invalid_argument("window: [" + std::to_string(w.lo) + ", " +
                                std::to_string(w.hi) + "] outside profile range [" +
                                std::to_string(p.first_k) + ", " +
                                std::to_string(p.last_k()) + "]");
}

}  // namespace

mpq_class window_min(const RatioProfile& p, BlockWindow w) {
  check_window(p, w);
  mpq_class m = p.at_k(w.lo);
  for (std::size_t k = w.lo + 1; k <= w.hi; ++k) m = std::min(m, p.at_k(k));
  return m;
}

mpq_class window_max(const RatioProfile& p, BlockWindow w) {
  check_window(p, w);
  mpq_class m = p.at_k(w.lo);
  for (std::size_t k = w.lo + 1; k <= w.hi; ++k) m = std::max(m, p.at_k(k));
  return m;
}

mpq_class window_slope(const BlockSchedule& s, RatioKind kind, BlockWindow w) {
  if (w.lo > w.hi) throw std::invalid_argument("window: lo > hi");
  bool tied = kind == RatioKind::TiedOverNextA || kind == RatioKind::TiedOverEndB;
  bool over_a = kind == RatioKind::FreeOverNextA || kind == RatioKind::TiedOverNextA;
  if (kind == RatioKind::NaturalDensity)
    throw std::invalid_argument("window_slope: not defined for the density profile");
  std::size_t max_hi = over_a ? s.blocks() - 1 : s.blocks();
  if (w.hi > max_hi || w.lo < 1)
    throw std::invalid_argument("window_slope: window outside the schedule");
  if (w.lo == w.hi) {
    mpz_class num = tied ? s.tied_sum(w.lo) : s.free_sum(w.lo);
    const mpz_class& den = over_a ? s.a(w.lo + 1) : s.b(w.lo);
    if (den == 0) throw std::invalid_argument("window_slope: zero depth at the window index");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  mpz_class num = (tied ? s.tied_sum(w.hi) : s.free_sum(w.hi)) -
                  (tied ? s.tied_sum(w.lo) : s.free_sum(w.lo));
  mpz_class den = over_a ? mpz_class(s.a(w.hi + 1) - s.a(w.lo + 1))
                         : mpz_class(s.b(w.hi) - s.b(w.lo));
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

SynthesizedSchedule synthesize(const mpq_class& d, std::size_t K) {
  if (d < 0 || d > 1) throw std::invalid_argument("synthesize: d must lie in [0, 1]");
  if (K < 1) throw std::invalid_argument("synthesize: K must be >= 1");
  std::vector<mpz_class> a{0}, b{2};
  a.reserve(K);
  b.reserve(K);
  const mpz_class p = d.get_num(), q = d.get_den();
  for (std::size_t i = 1; i < K; ++i) {
    mpz_class an;  // a_{i+1}
    if (p == 0) {
      an = b[i - 1] * static_cast<unsigned long>(i + 1);
    } else if (p == q) {
      an = b[i - 1] + 1;
    } else {
      mpz_cdiv_q(an.get_mpz_t(), mpz_class(b[i - 1] * q).get_mpz_t(), p.get_mpz_t());
    }
    // b_{i+1}: keep a + (i+1) < b, keep b/a strictly increasing, and push
    // the ratio slowly toward infinity.
    mpz_class bn = an + static_cast<unsigned long>(i + 2);
    if (i >= 2) {
      mpz_class t;
      mpz_fdiv_q(t.get_mpz_t(), mpz_class(an * b[i - 1]).get_mpz_t(), a[i - 1].get_mpz_t());
      bn = std::max(bn, mpz_class(t + 1));
    }
    mpz_class t2;
    mpz_cdiv_q_ui(t2.get_mpz_t(), mpz_class(an * static_cast<unsigned long>(17 + i)).get_mpz_t(),
                  16);
    bn = std::max(bn, t2);
    a.push_back(std::move(an));
    b.push_back(std::move(bn));
  }
  SynthesizedSchedule out{BlockSchedule::create(std::move(a), std::move(b)), {}};
  const BlockSchedule& s = out.schedule;
  for (std::size_t k = 1; k + 1 <= K; ++k) {
    mpq_class qk(s.b(k), s.a(k + 1));
    qk.canonicalize();
    // contract: |b_k/a_{k+1} - d| <= 2/k
    mpq_class err = qk - d;
    if (err < 0) err = -err;
    if (err * static_cast<unsigned long>(k) > 2)
      throw std::logic_error("synthesize: quotient contract missed at k = " + std::to_string(k));
    out.quotients.push_back(std::move(qk));
  }
  for (std::size_t i = 1; i <= K; ++i)
    if (s.a(i) + static_cast<unsigned long>(i) >= s.b(i))
      throw std::logic_error("synthesize: a_i + i < b_i missed at i = " + std::to_string(i));
  for (std::size_t i = 3; i <= K; ++i)
    if (s.b(i) * s.a(i - 1) <= s.b(i - 1) * s.a(i))  // b_i/a_i <= b_{i-1}/a_{i-1}
      throw std::logic_error("synthesize: ratio growth missed at i = " + std::to_string(i));
  return out;
}

BlockSchedule prime_shift(const BlockSchedule& s) {
  std::vector<mpz_class> a, b;
  a.reserve(s.blocks());
  b.reserve(s.blocks());
  for (std::size_t i = 1; i <= s.blocks(); ++i) {
    mpz_class ai = s.a(i) + static_cast<unsigned long>(i);
    if (ai >= s.b(i))
      throw std::invalid_argument("prime_shift: a[" + std::to_string(i) + "] + " +
                                  std::to_string(i) + " < b[" + std::to_string(i) +
                                  "] violated (" + ai.get_str() + " >= " + s.b(i).get_str() +
                                  ")");
    a.push_back(std::move(ai));
    b.push_back(s.b(i));
  }
  return BlockSchedule::create(std::move(a), std::move(b), /*relaxed_first=*/true);
}

}  // namespace dimlab
