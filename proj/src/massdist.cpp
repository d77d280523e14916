#include "dimlab/massdist.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dimlab {

namespace {

void check_atom(const DigitSet& set, std::int64_t n, const mpz_class& l) {
  if (n < 0 || n > set.depth_limit())
    throw std::invalid_argument("measure: depth " + std::to_string(n) + " outside [0, b_K]");
  if (l < 0 || mpz_sizeinbase(l.get_mpz_t(), 2) > static_cast<std::size_t>(n) + (l == 0 ? 1 : 0))
    throw std::invalid_argument("measure: atom index outside [0, 2^n)");
}

}  // namespace

mpq_class AtomMass::value() const {
  if (!log2_mass) return mpq_class(0);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(-*log2_mass));
  mpq_class q(1);
  q /= den;
  return q;
}

AtomMass interval_measure(const DigitSet& set, std::int64_t n, const mpz_class& l) {
  check_atom(set, n, l);
  if (member(set, DyadicPoint(l, n)) == Membership::no) return AtomMass{n, std::nullopt};
  return AtomMass{n, -set.log2_atom_count(n)};
}

mpq_class brute_force_measure(const DigitSet& set, std::int64_t n, const mpz_class& l) {
  check_atom(set, n, l);
  if (n > (std::int64_t{1} << 20))
    throw std::invalid_argument("brute measure: depth capped at 2^20");
  struct State {
    mpz_class mant;
    int ref = -1;  // digit a live tied run is committed to
  };
  std::vector<State> states{State{}};
  int coins = 0;
  std::size_t K = set.blocks();
  for (std::int64_t p = 1; p <= n; ++p) {
    // Literal classification of position p against the endpoint lists.
    bool in_gap = false, run_start = false;
    for (std::size_t i = 1; i + 1 <= K; ++i) {
      if (p > set.b64(i) && p <= set.a64(i + 1)) {
        in_gap = true;
        run_start = p == set.b64(i) + 1;
        break;
      }
    }
    std::vector<State> next;
    if (!in_gap) {  // a coin toss on this digit
      if (++coins > 20) throw std::invalid_argument("brute measure: more than 2^20 branches");
      next.reserve(states.size() * 2);
      for (const auto& st : states)
        for (int d = 0; d <= 1; ++d) next.push_back({st.mant * 2 + d, st.ref});
    } else if (set.tied() && run_start) {  // one coin for the whole run
      if (++coins > 20) throw std::invalid_argument("brute measure: more than 2^20 branches");
      next.reserve(states.size() * 2);
      for (const auto& st : states)
        for (int d = 0; d <= 1; ++d) next.push_back({st.mant * 2 + d, d});
    } else if (set.tied()) {  // forced to follow the run's digit
      next.reserve(states.size());
      for (const auto& st : states) {
        if (st.ref < 0) throw std::logic_error("brute measure: run digit used before its start");
        next.push_back({st.mant * 2 + st.ref, st.ref});
      }
    } else {  // forced 0
      next.reserve(states.size());
      for (const auto& st : states) next.push_back({st.mant * 2, st.ref});
    }
    states = std::move(next);
  }
  int hits = 0;
  for (const auto& st : states) hits += st.mant == l;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(coins));
  mpq_class mass(hits);
  mass /= den;
  return mass;
}

namespace {

void check_holder_args(const DigitSet& set, const mpq_class& d, const mpq_class& eps,
                       std::int64_t n_max) {
  if (d < 0 || d > 1) throw std::invalid_argument("holder check: d must lie in [0, 1]");
  if (eps <= 0 || eps > d) throw std::invalid_argument("holder check: eps must lie in (0, d]");
  if (n_max < 0 || n_max > set.depth_limit())
    throw std::invalid_argument("holder check: n_max outside [0, b_K]");
  if (n_max > (std::int64_t{1} << 21))
    throw std::invalid_argument("holder check: depth range capped at 2^21");
}

}  // namespace

HolderCheck holder_check(const DigitSet& set, const mpq_class& d, const mpq_class& eps,
                         std::int64_t n_max) {
  check_holder_args(set, d, eps, n_max);
  HolderCheck out;
  out.exponent = d - eps;
  out.n_max = n_max;
  out.bound = 1 + d;
  const mpz_class p = out.exponent.get_num(), q = out.exponent.get_den();
  mpz_class best = 0;  // n = 0 contributes 0
  out.argmax_n = 0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    mpz_class cand = n * p - set.log2_atom_count(n) * q;
    if (cand > best) {
      best = cand;
      out.argmax_n = n;
    }
  }
  out.max_log2_ratio = mpq_class(best) / mpq_class(q);
  out.ok = out.max_log2_ratio <= out.bound;
  return out;
}

std::vector<HolderRow> holder_sweep(const DigitSet& set, const mpq_class& d,
                                    const mpq_class& eps, std::int64_t n_max) {
  check_holder_args(set, d, eps, n_max);
  const mpq_class exponent = d - eps;
  const mpz_class p = exponent.get_num(), q = exponent.get_den();
  std::vector<HolderRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    HolderRow row;
    row.n = n;
    row.worst_l = 0;
    row.log2_ratio = mpq_class(n * p - set.log2_atom_count(n) * q) / mpq_class(q);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dimlab
