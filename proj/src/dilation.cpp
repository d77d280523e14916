#include "dimlab/dilation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dimlab {

namespace {

constexpr std::int64_t kDepthCap = std::int64_t{1} << 60;
constexpr std::int64_t kTermCap = std::int64_t{1} << 22;

std::int64_t to_i64(const mpz_class& z, const char* what) {
  if (z > kDepthCap)
    throw std::invalid_argument(std::string(what) + " " + z.get_str() +
                                " is beyond any reachable digit depth (cap 2^60)");
  return static_cast<std::int64_t>(z.get_si());
}

mpz_class pow2(std::int64_t e) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return v;
}

}  // namespace

DilationSequence DilationSequence::explicit_terms(std::vector<mpz_class> multipliers) {
  if (multipliers.empty())
    throw std::invalid_argument("dilation sequence: needs at least one multiplier");
  for (const auto& h : multipliers)
    if (h < 1) throw std::invalid_argument("dilation sequence: multipliers must be >= 1");
  DilationSequence seq(SequenceKind::Explicit);
  seq.multipliers_ = std::move(multipliers);
  return seq;
}

DilationSequence DilationSequence::power_blocks(const BlockSchedule& s) {
  std::size_t K = s.blocks();
  if (K < 2) throw std::invalid_argument("power blocks: the schedule has no gaps");
  mpz_class total = 0;
  for (std::size_t i = 1; i + 1 <= K; ++i) total += s.a(i + 1) - s.b(i);
  if (total > kTermCap)
    throw std::invalid_argument("power blocks: " + total.get_str() + " terms exceed the cap 2^22");
  DilationSequence seq(SequenceKind::PowerBlocks);
  seq.exponents_.reserve(static_cast<std::size_t>(total.get_si()));
  for (std::size_t i = 1; i + 1 <= K; ++i) {
    std::int64_t lo = to_i64(s.b(i), "power blocks: exponent") + 1;
    std::int64_t hi = to_i64(s.a(i + 1), "power blocks: exponent");
    for (std::int64_t n = lo; n <= hi; ++n) seq.exponents_.push_back(n);
  }
  return seq;
}

DilationSequence DilationSequence::ip_generated(std::vector<std::int64_t> generators) {
  if (generators.empty() || generators.size() > 62)
    throw std::invalid_argument("ip sequence: needs 1..62 generators");
  std::int64_t sum = 0;
  for (std::int64_t g : generators) {
    if (g < 1) throw std::invalid_argument("ip sequence: generators must be >= 1");
    sum += g;
    if (sum > kDepthCap) throw std::invalid_argument("ip sequence: generator sum exceeds 2^60");
  }
  DilationSequence seq(SequenceKind::IPGenerated);
  seq.generators_ = std::move(generators);
  return seq;
}

std::size_t DilationSequence::size() const {
  switch (kind_) {
    case SequenceKind::Explicit:
      return multipliers_.size();
    case SequenceKind::PowerBlocks:
      return exponents_.size();
    case SequenceKind::IPGenerated:
      return (std::size_t{1} << generators_.size()) - 1;
  }
  return 0;
}

std::int64_t DilationSequence::exponent(std::size_t j) const {
  if (j >= size()) throw std::out_of_range("dilation sequence: term index out of range");
  switch (kind_) {
    case SequenceKind::PowerBlocks:
      return exponents_[j];
    case SequenceKind::IPGenerated:
      return ip_term(generators_, static_cast<std::uint64_t>(j) + 1);
    case SequenceKind::Explicit:
      break;
  }
  throw std::invalid_argument("dilation sequence: explicit terms have no exponent");
}

const mpz_class& DilationSequence::multiplier(std::size_t j) const {
  if (kind_ != SequenceKind::Explicit)
    throw std::invalid_argument("dilation sequence: only explicit sequences store multipliers");
  if (j >= size()) throw std::out_of_range("dilation sequence: term index out of range");
  return multipliers_[j];
}

const std::vector<std::int64_t>& DilationSequence::exponents() const {
  if (kind_ != SequenceKind::PowerBlocks)
    throw std::invalid_argument("dilation sequence: exponent list is a power-block feature");
  return exponents_;
}

const std::vector<std::int64_t>& DilationSequence::generators() const {
  if (kind_ != SequenceKind::IPGenerated)
    throw std::invalid_argument("dilation sequence: generators are an ip-sequence feature");
  return generators_;
}

std::int64_t ip_term(const std::vector<std::int64_t>& generators, std::uint64_t mask) {
  if (generators.empty() || generators.size() > 62)
    throw std::invalid_argument("ip term: needs 1..62 generators");
  if (mask < 1 || mask >= (std::uint64_t{1} << generators.size()))
    throw std::invalid_argument("ip term: mask outside [1, 2^m)");
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < generators.size(); ++k)
    if (mask >> k & 1u) sum += generators[k];
  return sum;
}

std::vector<OrbitRecord> orbit(const DilationSequence& seq, const DyadicPoint& x,
                               std::size_t count) {
  count = std::min(count, seq.size());
  std::vector<OrbitRecord> records;
  records.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    OrbitRecord rec;
    if (seq.kind() == SequenceKind::Explicit) {
      rec.index = j;
      rec.multiplier = seq.multiplier(j);
      rec.value = dilate_mod1(*rec.multiplier, x);
    } else {
      rec.index = seq.kind() == SequenceKind::IPGenerated ? j + 1 : j;  // masks are 1-based
      rec.exponent = seq.exponent(j);
      rec.value = shift_mod1(x, *rec.exponent);
    }
    rec.dist0 = dist_nearest_int(rec.value);
    records.push_back(std::move(rec));
  }
  return records;
}

SeparationCheck separation_bound_check(const BlockSchedule& s, const DyadicPoint& x) {
  std::size_t K = s.blocks();
  if (K < 2) throw std::invalid_argument("separation check: the schedule has no gaps");
  BlockSchedule shifted = prime_shift(s);
  DigitSet carrier(SetKind::FreeBlocks, shifted);
  if (member(carrier, x) == Membership::no)
    throw std::invalid_argument("separation check: the point leaves the shifted-schedule set");

  SeparationCheck out;
  out.all_ok = true;
  bool have_worst = false;
  std::int64_t best_score = 0, best_e = 0;
  mpz_class best_num;
  for (std::size_t i = 2; i <= K; ++i) {
    std::int64_t lo = to_i64(s.b(i - 1), "separation check: exponent") + 1;
    std::int64_t hi = to_i64(s.a(i), "separation check: exponent");
    for (std::int64_t n = lo; n <= hi; ++n) {
      std::int64_t beta = to_i64(s.a(i), "separation check: bound") +
                          static_cast<std::int64_t>(i) - n;  // bound 2^-beta
      ExactDistance dist = dist_nearest_int(shift_mod1(x, n));
      bool ok = dist.cmp_pow2(beta) <= 0;
      out.all_ok = out.all_ok && ok;
      ++out.checked;
      const mpz_class& m = dist.numerator();
      std::int64_t e = beta - dist.depth();
      bool take = false;
      if (!have_worst) {
        take = true;
      } else if (m != 0) {
        std::int64_t score =
            static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2)) + e;
        if (score > best_score) {
          take = true;
        } else if (score == best_score) {
          // Same power-of-two stratum: compare m * 2^e exactly.
          mpz_class lhs = m, rhs = best_num;
          if (e >= best_e)
            lhs <<= static_cast<unsigned long>(e - best_e);
          else
            rhs <<= static_cast<unsigned long>(best_e - e);
          take = lhs > rhs;
        }
      }
      if (take) {
        have_worst = true;
        best_num = m;
        best_e = e;
        best_score = m == 0 ? INT64_MIN
                            : static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2)) + e;
        out.worst.exponent = n;
        out.worst.block = i;
        out.worst.bound_log2 = beta;
        out.worst.dist = dist;
        out.worst.ok = ok;
      }
    }
  }
  mpq_class ratio(best_num);
  if (best_e >= 0)
    ratio *= pow2(best_e);
  else
    ratio /= pow2(-best_e);
  ratio.canonicalize();
  out.worst.ratio = ratio;
  return out;
}

mpq_class tail_bound_sum(const BlockSchedule& s) {
  std::size_t K = s.blocks();
  if (K < 2) throw std::invalid_argument("tail bound sum: the schedule has no gaps");
  // Gap i contributes sum_{t=i}^{T_i} 2^-t with T_i = a_i + i - b_{i-1} - 1.
  std::vector<std::int64_t> tops;
  std::int64_t t_max = 0;
  for (std::size_t i = 2; i <= K; ++i) {
    mpz_class top = s.a(i) + static_cast<unsigned long>(i) - s.b(i - 1) - 1;
    if (top > kTermCap)
      throw std::invalid_argument("tail bound sum: exact form needs gap depth <= 2^22");
    tops.push_back(top.get_si());
    t_max = std::max(t_max, tops.back());
  }
  mpz_class num = 0;
  for (std::size_t i = 2; i <= K; ++i) {
    std::int64_t top = tops[i - 2];
    num += pow2(t_max + 1 - static_cast<std::int64_t>(i)) - pow2(t_max - top);
  }
  mpq_class sum(num);
  sum /= pow2(t_max);
  return sum;
}

std::vector<DensityProbe> density_probes(const DilationSequence& seq, const DyadicPoint& x,
                                         std::uint64_t h_max, std::size_t count) {
  if (h_max < 1) throw std::invalid_argument("density probes: h_max must be >= 1");
  count = std::min(count, seq.size());
  if (count < 1) throw std::invalid_argument("density probes: no terms to sum");
  std::vector<DensityProbe> probes;
  probes.reserve(static_cast<std::size_t>(h_max));
  mpz_class full = pow2(x.depth());
  for (std::uint64_t h = 1; h <= h_max; ++h) {
    DyadicPoint xh = dilate_mod1(h, x);
    mpz_class total = 0;
    for (std::size_t j = 0; j < count; ++j) {
      DyadicPoint v = seq.kind() == SequenceKind::Explicit ? dilate_mod1(seq.multiplier(j), xh)
                                                           : shift_mod1(xh, seq.exponent(j));
      ExactDistance dist = dist_nearest_int(v);
      // Distances come back at their own depth; line them up under x's.
      total += dist.numerator() << static_cast<unsigned long>(x.depth() - dist.depth());
    }
    DensityProbe probe;
    probe.h = h;
    probe.below_one = total < full;
    mpq_class sum(total);
    sum /= full;
    probe.partial_sum = sum;
    probes.push_back(std::move(probe));
  }
  return probes;
}

mpq_class gap_statistic(const std::vector<DyadicPoint>& values, int cells_log2) {
  if (cells_log2 < 0 || cells_log2 > 20)
    throw std::invalid_argument("gap statistic: cells_log2 must lie in [0, 20]");
  std::size_t cells = std::size_t{1} << cells_log2;
  std::vector<bool> occupied(cells, false);
  for (const auto& v : values) {
    mpz_class cell;
    if (v.depth() >= cells_log2)
      mpz_fdiv_q_2exp(cell.get_mpz_t(), v.mantissa().get_mpz_t(),
                      static_cast<mp_bitcnt_t>(v.depth() - cells_log2));
    else
      mpz_mul_2exp(cell.get_mpz_t(), v.mantissa().get_mpz_t(),
                   static_cast<mp_bitcnt_t>(cells_log2 - v.depth()));
    occupied[cell.get_ui()] = true;
  }
  std::vector<std::size_t> hits;
  for (std::size_t c = 0; c < cells; ++c)
    if (occupied[c]) hits.push_back(c);
  if (hits.empty()) return mpq_class(1);
  std::size_t longest = 0;
  for (std::size_t t = 0; t < hits.size(); ++t) {
    std::size_t next = t + 1 < hits.size() ? hits[t + 1] : hits[0] + cells;
    longest = std::max(longest, next - hits[t] - 1);
  }
  mpq_class frac(static_cast<unsigned long>(longest), static_cast<unsigned long>(cells));
  frac.canonicalize();
  return frac;
}

OrbitDiagnostics orbit_diagnostics(const BlockSchedule& s, const DyadicPoint& x, int cells_log2) {
  DilationSequence seq = DilationSequence::power_blocks(s);
  std::size_t N = seq.size();
  OrbitDiagnostics diag;
  diag.terms = N;
  diag.within_quarter = true;
  std::vector<DyadicPoint> values;
  values.reserve(N);
  std::size_t tail_from = N - (N + 3) / 4;
  for (std::size_t j = 0; j < N; ++j) {
    DyadicPoint v = shift_mod1(x, seq.exponent(j));
    ExactDistance dist = dist_nearest_int(v);
    diag.within_quarter = diag.within_quarter && dist.cmp_pow2(2) <= 0;
    if (j >= tail_from && diag.tail_max < dist) diag.tail_max = dist;
    values.push_back(std::move(v));
  }
  diag.bound_budget = tail_bound_sum(s);
  diag.empty_arc = gap_statistic(values, cells_log2);
  return diag;
}

}  // namespace dimlab
