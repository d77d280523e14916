#include "dimlab/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dimlab {

namespace {

using ojson = nlohmann::ordered_json;

bool digits_only(const std::string& s, std::size_t from = 0) {
  if (from >= s.size()) return false;
  for (std::size_t i = from; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

ojson mpz_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

mpz_class mpz_from_json(const ojson& e, const char* what) {
  if (e.is_number_integer() && !e.is_number_unsigned())
    return mpz_class(static_cast<long>(e.get<std::int64_t>()));
  if (e.is_number_unsigned()) return mpz_class(static_cast<unsigned long>(e.get<std::uint64_t>()));
  if (e.is_string()) {
    const std::string s = e.get<std::string>();
    std::size_t from = !s.empty() && s[0] == '-' ? 1 : 0;
    if (!digits_only(s, from))
      throw std::invalid_argument(std::string(what) + ": \"" + s + "\" is not an integer");
    return mpz_class(s);
  }
  if (e.is_number_float())
    throw std::invalid_argument(std::string(what) +
                                ": not an integer (quote very large values as strings)");
  throw std::invalid_argument(std::string(what) + ": entries must be integers or integer strings");
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

const char* zone_name(DepthZone z) {
  switch (z) {
    case DepthZone::BlockInterior: return "block-interior";
    case DepthZone::BlockEnd: return "block-end";
    case DepthZone::GapInterior: return "gap-interior";
    case DepthZone::GapEnd: return "gap-end";
  }
  return "?";
}

const char* kind_name(SequenceKind k) {
  switch (k) {
    case SequenceKind::Explicit: return "explicit";
    case SequenceKind::PowerBlocks: return "power-blocks";
    case SequenceKind::IPGenerated: return "ip";
  }
  return "?";
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("not a rational: \"" + text + "\" (want \"p/q\" or an integer)");
  };
  const std::size_t slash = text.find('/');
  std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  std::string den = slash == std::string::npos ? std::string("1") : text.substr(slash + 1);
  std::size_t from = !num.empty() && (num[0] == '-' || num[0] == '+') ? 1 : 0;
  if (!digits_only(num, from) || !digits_only(den)) throw bad();
  if (num[0] == '+') num.erase(0, 1);  // mpz_set_str takes no plus sign
  const mpz_class d(den);
  if (d == 0) throw std::invalid_argument("not a rational: \"" + text + "\" (denominator 0)");
  mpq_class q{mpz_class(num)};
  q /= d;
  return q;
}

std::string format_rational(const mpq_class& q) { return q.get_str(); }

std::string decimal_annotation(const mpq_class& q, int digits) {
  if (digits < 1 || digits > 64)
    throw std::invalid_argument("decimal annotation: digits must lie in [1, 64]");
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const mpz_class num = abs(q.get_num()), den = q.get_den();
  mpz_class scaled;  // round(|q| * 10^digits), half away from zero
  mpz_fdiv_q(scaled.get_mpz_t(), mpz_class(2 * num * pow10 + den).get_mpz_t(),
             mpz_class(2 * den).get_mpz_t());
  std::string s = scaled.get_str();
  if (s.size() <= static_cast<std::size_t>(digits))
    s.insert(0, std::string(static_cast<std::size_t>(digits) + 1 - s.size(), '0'));
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  std::size_t last = s.find_last_not_of('0');
  if (s[last] == '.') ++last;
  s.erase(last + 1);
  if (sgn(q) < 0 && scaled != 0) s.insert(0, "-");
  return s;
}

std::string schedule_to_json(const BlockSchedule& s) {
  ojson a = ojson::array(), b = ojson::array();
  for (std::size_t i = 1; i <= s.blocks(); ++i) {
    a.push_back(mpz_to_json(s.a(i)));
    b.push_back(mpz_to_json(s.b(i)));
  }
  ojson j;
  j["a"] = std::move(a);
  j["b"] = std::move(b);
  if (s.relaxed_first()) j["relaxed_first"] = true;
  return dump(j);
}

BlockSchedule schedule_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("schedule JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    throw std::invalid_argument("schedule JSON: want an object with \"a\" and \"b\" arrays");
  const auto endpoints = [](const ojson& arr, const char* name) {
    if (!arr.is_array() || arr.empty())
      throw std::invalid_argument(std::string("schedule JSON: \"") + name +
                                  "\" must be a non-empty array");
    std::vector<mpz_class> out;
    out.reserve(arr.size());
    for (const auto& e : arr) out.push_back(mpz_from_json(e, name));
    return out;
  };
  return BlockSchedule::create(endpoints(j["a"], "a"), endpoints(j["b"], "b"),
                               j.value("relaxed_first", false));
}

BlockSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schedule_from_json(buf.str());
}

void save_schedule(const BlockSchedule& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write schedule file: " + path);
  out << schedule_to_json(s);
  if (!out.flush()) throw std::runtime_error("failed writing schedule file: " + path);
}

std::string ratio_rows_csv(std::size_t first_k, const std::vector<mpq_class>& values) {
  std::string out = "k,numerator,denominator,decimal\n";
  for (std::size_t j = 0; j < values.size(); ++j) {
    const mpq_class& v = values[j];
    out += std::to_string(first_k + j) + ',' + v.get_num().get_str() + ',' +
           v.get_den().get_str() + ',' + decimal_annotation(v) + '\n';
  }
  return out;
}

std::string profile_csv(const RatioProfile& p) { return ratio_rows_csv(p.first_k, p.values); }

std::string count_json(const CoverCount& c) {
  ojson j;
  j["n"] = c.n;
  j["log2_count"] = c.log2_count;
  if (c.log2_count <= 62) j["count"] = static_cast<std::int64_t>(c.value().get_si());
  return dump(j);
}

std::string count_profile_csv(const std::vector<LabeledProfile>& profiles) {
  std::string out = "set,n,log2_count,ratio_num,ratio_den,ratio_decimal,zone,empirical\n";
  for (const auto& lp : profiles) {
    for (const auto& row : lp.profile.rows) {
      out += lp.label + ',' + std::to_string(row.n) + ',' + std::to_string(row.log2_count) + ',' +
             row.ratio.get_num().get_str() + ',' + row.ratio.get_den().get_str() + ',' +
             decimal_annotation(row.ratio) + ',' + zone_name(row.zone) + ',';
      if (row.empirical) out += std::to_string(*row.empirical);
      out += '\n';
    }
  }
  return out;
}

std::string measure_json(const AtomMass& m, const mpz_class& l) {
  ojson j;
  j["n"] = m.n;
  j["l"] = mpz_to_json(l);
  if (m.log2_mass)
    j["log2_measure"] = *m.log2_mass;
  else
    j["log2_measure"] = nullptr;
  return dump(j);
}

std::string holder_json(const HolderCheck& h) {
  ojson j;
  j["exponent"] = format_rational(h.exponent);
  j["n_max"] = h.n_max;
  j["max_log2_ratio"] = format_rational(h.max_log2_ratio);
  j["argmax_n"] = h.argmax_n;
  j["bound"] = format_rational(h.bound);
  j["ok"] = h.ok;
  return dump(j);
}

std::string holder_sweep_csv(const std::vector<HolderRow>& rows) {
  std::string out = "n,worst_l,ratio_num,ratio_den,ratio_decimal\n";
  for (const auto& row : rows)
    out += std::to_string(row.n) + ',' + row.worst_l.get_str() + ',' +
           row.log2_ratio.get_num().get_str() + ',' + row.log2_ratio.get_den().get_str() + ',' +
           decimal_annotation(row.log2_ratio) + '\n';
  return out;
}

std::string orbit_csv(const DilationSequence& seq, const std::vector<OrbitRecord>& records,
                      std::size_t digits) {
  std::string out = "index,term,value,dist_log2\n";
  for (const auto& r : records) {
    std::string term;
    switch (seq.kind()) {
      case SequenceKind::Explicit:
        term = r.multiplier->get_str();
        break;
      case SequenceKind::PowerBlocks:
        term = std::to_string(*r.exponent);
        break;
      case SequenceKind::IPGenerated: {
        const auto& g = seq.generators();
        for (std::size_t k = 0; k < g.size(); ++k)
          if (r.index >> k & 1u) {
            if (!term.empty()) term += '+';
            term += std::to_string(g[k]);
          }
        break;
      }
    }
    std::string value = r.value.to_digit_string();
    if (value.size() > digits + 2) {  // "0." plus the digit budget
      value.resize(digits + 2);
      value += "...";
    }
    out += std::to_string(r.index) + ',' + term + ',' + value + ',';
    out += r.dist0.is_zero() ? std::string("-inf") : std::to_string(*r.dist0.log2_upper_bound());
    out += '\n';
  }
  return out;
}

namespace {

ojson window_ranges(const DimensionReport& r) {
  ojson j;
  j["lower_min"] = format_rational(r.lower_min);
  j["lower_max"] = format_rational(r.lower_max);
  j["upper_min"] = format_rational(r.upper_min);
  j["upper_max"] = format_rational(r.upper_max);
  return j;
}

ojson count_trace(const DimensionReport& r) {
  ojson j;
  j["lower"] = format_rational(r.counts.lower);
  j["upper"] = format_rational(r.counts.upper);
  j["boundary_match"] = r.boundary_match;
  return j;
}

}  // namespace

std::string dims_report_json(const DimensionReport& free_report,
                             const DimensionReport& tied_report) {
  ojson formula;
  formula["d1"] = format_rational(free_report.lower);
  formula["d2"] = format_rational(free_report.upper);
  formula["d1_tied"] = format_rational(tied_report.lower);
  formula["d2_tied"] = format_rational(tied_report.upper);
  ojson ranges;
  ranges["free"] = window_ranges(free_report);
  ranges["tied"] = window_ranges(tied_report);
  ojson empirical;
  empirical["free"] = count_trace(free_report);
  empirical["tied"] = count_trace(tied_report);

  std::size_t lo = free_report.lower_window.lo, hi = free_report.lower_window.hi;
  for (const BlockWindow& w : {free_report.upper_window, tied_report.lower_window,
                               tied_report.upper_window}) {
    lo = std::min(lo, w.lo);
    hi = std::max(hi, w.hi);
  }

  ojson j;
  j["formula"] = std::move(formula);
  j["formula_window"] = std::move(ranges);
  j["empirical"] = std::move(empirical);
  j["monotonicity_pass"] = free_report.shape_ok && tied_report.shape_ok;
  j["window"] = ojson::array({lo, hi});
  return dump(j);
}

std::string orbit_report_json(const OrbitReport& r) {
  ojson j;
  j["sequence"] = kind_name(r.kind);
  j["terms"] = r.terms;
  j["cells_log2"] = r.cells_log2;
  if (r.power) {
    j["within_quarter"] = r.power->within_quarter;
    j["tail_max"] = format_rational(r.power->tail_max.as_mpq());
    j["bound_budget"] = format_rational(r.power->bound_budget);
    j["empty_arc"] = format_rational(r.power->empty_arc);
  } else if (r.empty_arc) {
    j["empty_arc"] = format_rational(*r.empty_arc);
  }
  if (r.separation) {
    ojson s;
    s["checked"] = r.separation->checked;
    s["all_ok"] = r.separation->all_ok;
    ojson w;
    w["exponent"] = r.separation->worst.exponent;
    w["block"] = r.separation->worst.block;
    w["bound_log2"] = r.separation->worst.bound_log2;
    w["distance"] = format_rational(r.separation->worst.dist.as_mpq());
    w["ratio"] = format_rational(r.separation->worst.ratio);
    s["worst"] = std::move(w);
    j["separation"] = std::move(s);
  } else {
    j["separation"] = nullptr;
    if (!r.separation_note.empty()) j["separation_note"] = r.separation_note;
  }
  if (!r.density.empty()) {
    ojson probes = ojson::array();
    for (const auto& p : r.density) {
      ojson e;
      e["h"] = p.h;
      e["partial_sum"] = format_rational(p.partial_sum);
      e["below_one"] = p.below_one;
      probes.push_back(std::move(e));
    }
    j["density"] = std::move(probes);
  }
  return dump(j);
}

}  // namespace dimlab
