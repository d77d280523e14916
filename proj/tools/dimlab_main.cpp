// dimlab: digit-constrained subsets of [0,1), their box-dimension
// profiles, the mass distributions they carry, and dilation orbits.
//
// Subcommands: synth, dims, cover, measure, holder, orbit, ip, report.
// All sampled output is pinned by --seed (the DIMLAB_SEED environment
// variable overrides the flag); identical invocations produce identical
// bytes.  Rationals cross the command line as "p/q"; decimal columns in
// the output are annotations, never inputs.

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <gmpxx.h>

#include "dimlab/boxlab.hpp"
#include "dimlab/digitset.hpp"
#include "dimlab/dilation.hpp"
#include "dimlab/dyadic.hpp"
#include "dimlab/io.hpp"
#include "dimlab/massdist.hpp"
#include "dimlab/rng.hpp"
#include "dimlab/schedule.hpp"

namespace {

using namespace dimlab;

std::vector<mpz_class> to_mpz_list(const std::vector<std::string>& items, const char* flag) {
  std::vector<mpz_class> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    try {
      out.emplace_back(item);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(std::string(flag) + ": \"" + item + "\" is not an integer");
    }
  }
  return out;
}

std::vector<std::int64_t> to_i64_list(const std::vector<std::string>& items, const char* flag) {
  std::vector<std::int64_t> out;
  for (const mpz_class& z : to_mpz_list(items, flag)) {
    if (!z.fits_slong_p())
      throw std::invalid_argument(std::string(flag) + ": " + z.get_str() + " is too large");
    out.push_back(z.get_si());
  }
  return out;
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("DIMLAB_SEED");
  if (!env || !*env) return flag_seed;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (env[0] == '-' || env[0] == '+' || errno != 0 || end == env || *end != '\0')
    throw std::invalid_argument("DIMLAB_SEED is not an unsigned integer");
  return v;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing file: " + path);
}

// ---- shared option groups -------------------------------------------------

struct SchedArgs {
  std::vector<std::string> a, b;
  std::string file;
  bool relaxed = false;
};

void add_schedule_opts(CLI::App* sc, SchedArgs& s) {
  auto* a = sc->add_option("--a", s.a, "block starts a_1,a_2,... (a_1 = 0)")->delimiter(',');
  auto* b = sc->add_option("--b", s.b, "block ends b_1,b_2,...")->delimiter(',');
  sc->add_option("--schedule", s.file, "schedule JSON file {\"a\":[...],\"b\":[...]}")
      ->excludes(a)
      ->excludes(b);
  sc->add_flag("--relaxed", s.relaxed, "allow a_1 > 0 (inline lists only)");
}

bool has_schedule(const SchedArgs& s) { return !s.file.empty() || !s.a.empty() || !s.b.empty(); }

BlockSchedule resolve_schedule(const SchedArgs& s) {
  if (!s.file.empty()) return load_schedule(s.file);
  if (s.a.empty() || s.b.empty())
    throw std::invalid_argument("give a schedule: --a and --b lists, or --schedule FILE");
  return BlockSchedule::create(to_mpz_list(s.a, "--a"), to_mpz_list(s.b, "--b"), s.relaxed);
}

void add_kind_opt(CLI::App* sc, std::string& kind) {
  sc->add_option("--kind", kind, "digit rule in the gaps: free (all 0) or tied (all equal)")
      ->check(CLI::IsMember({"free", "tied"}));
}

SetKind parse_kind(const std::string& kind) {
  return kind == "tied" ? SetKind::TiedBlocks : SetKind::FreeBlocks;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string d;
  std::size_t blocks = 0;
  std::string out;
};

void run_synth(const SynthArgs& a) {
  auto syn = synthesize(parse_rational(a.d), a.blocks);
  if (a.out.empty())
    std::cout << schedule_to_json(syn.schedule) << "\n";
  else
    save_schedule(syn.schedule, a.out);
  std::cout << ratio_rows_csv(1, syn.quotients);
}

// ---- dims -------------------------------------------------------------------

struct DimsArgs {
  SchedArgs sched;
  std::string csv;
  std::int64_t n_max = -1;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

void run_dims(const DimsArgs& a) {
  BlockSchedule s = resolve_schedule(a.sched);
  DigitSet free_set(SetKind::FreeBlocks, s), tied_set(SetKind::TiedBlocks, s);
  std::int64_t n_max = a.n_max < 0 ? free_set.depth_limit() : a.n_max;
  if (n_max > free_set.depth_limit())
    throw std::invalid_argument("depth cap: --n-max " + std::to_string(n_max) +
                                " exceeds b_K = " + std::to_string(free_set.depth_limit()));
  std::cout << dims_report_json(dimension_report(free_set), dimension_report(tied_set));
  if (a.csv.empty()) return;

  std::vector<LabeledProfile> profiles;
  if (a.samples > 0) {
    BitSource bits(effective_seed(a.seed));
    profiles.push_back({"free", sampled_count_profile(free_set, n_max, a.samples, bits)});
    profiles.push_back({"tied", sampled_count_profile(tied_set, n_max, a.samples, bits)});
  } else {
    profiles.push_back({"free", count_profile(free_set, n_max)});
    profiles.push_back({"tied", count_profile(tied_set, n_max)});
  }
  write_file(a.csv, count_profile_csv(profiles));
}

// ---- cover ------------------------------------------------------------------

struct CoverArgs {
  SchedArgs sched;
  std::string kind = "free";
  std::int64_t n = -1;
  std::int64_t k = -1;
  std::string family;
  bool count_only = false;
  std::int64_t log2_cap = 24;
};

void run_cover(const CoverArgs& a) {
  DigitSet set(parse_kind(a.kind), resolve_schedule(a.sched));
  if ((a.n < 0) == (a.k < 0))
    throw std::invalid_argument("give exactly one of --n (depth) or --k (block index)");
  if (a.n >= 0) {
    std::cout << count_json(exact_cover_count(set, a.n));
    return;
  }
  CoverFamily family = a.family.empty()        ? primary_family(set.kind())
                       : a.family == "gap-end" ? CoverFamily::AtGapEnd
                                               : CoverFamily::AtBlockEnd;
  std::size_t k = static_cast<std::size_t>(a.k);
  if (a.count_only) {
    std::cout << count_json(
        CoverCount{cover_depth(set, k, family), cover_log2_cardinality(set, k, family)});
    return;
  }
  std::ostringstream lines;  // buffered so a refusal prints nothing
  for_each_cover_point(
      set, k, family, [&](const DyadicPoint& p) { lines << p.to_digit_string() << '\n'; },
      a.log2_cap);
  std::cout << lines.str();
}

// ---- measure ----------------------------------------------------------------

struct MeasureArgs {
  SchedArgs sched;
  std::string kind = "free";
  std::int64_t n = 0;
  std::string l;
};

void run_measure(const MeasureArgs& a) {
  DigitSet set(parse_kind(a.kind), resolve_schedule(a.sched));
  mpz_class l = to_mpz_list({a.l}, "--l").front();
  std::cout << measure_json(interval_measure(set, a.n, l), l);
}

// ---- holder -----------------------------------------------------------------

struct HolderArgs {
  SchedArgs sched;
  std::string kind = "free";
  std::string d, eps;
  std::int64_t n_max = -1;
  std::string csv;
};

void run_holder(const HolderArgs& a) {
  DigitSet set(parse_kind(a.kind), resolve_schedule(a.sched));
  mpq_class d = parse_rational(a.d), eps = parse_rational(a.eps);
  std::int64_t n_max = a.n_max < 0 ? set.depth_limit() : a.n_max;
  std::cout << holder_json(holder_check(set, d, eps, n_max));
  if (!a.csv.empty()) write_file(a.csv, holder_sweep_csv(holder_sweep(set, d, eps, n_max)));
}

// ---- orbit / report ---------------------------------------------------------

struct OrbitArgs {
  SchedArgs sched;
  std::vector<std::string> generators, multipliers;
  bool ip = false;
  std::string x;
  bool sample = false;
  std::int64_t depth = -1;
  std::uint64_t seed = 0;
  std::int64_t count = 256;
  std::int64_t h_max = 0;
  int cells_log2 = 4;
  std::int64_t width = 64;
};

void add_orbit_opts(CLI::App* sc, OrbitArgs& a) {
  add_schedule_opts(sc, a.sched);
  sc->add_flag("--ip", a.ip, "IP sequence generated by the schedule's gap exponents");
  sc->add_option("--generators", a.generators, "IP generators g_1,g_2,... (no schedule needed)")
      ->delimiter(',');
  sc->add_option("--multipliers", a.multipliers, "explicit dilation factors h_1,h_2,...")
      ->delimiter(',');
  auto* x = sc->add_option("--x", a.x, "base point, \"0.digits\" or \"0x<hex>/<depth>\"");
  sc->add_flag("--sample", a.sample, "draw the base point from the shifted-schedule set")
      ->excludes(x);
  sc->add_option("--depth", a.depth, "sampling depth (default: b_K)");
  sc->add_option("--seed", a.seed, "sampling seed (DIMLAB_SEED overrides)");
  sc->add_option("--count", a.count, "terms to dump (0 = all; capped at 2^22)");
  sc->add_option("--h-max", a.h_max, "also probe partial sums for dilates h = 1..h_max");
  sc->add_option("--cells-log2", a.cells_log2, "resolution of the empty-arc statistic");
  sc->add_option("--width", a.width, "digit budget per printed value");
}

struct OrbitSetup {
  std::optional<BlockSchedule> schedule;
  std::optional<DilationSequence> seq;
  DyadicPoint x;
};

OrbitSetup make_orbit_setup(const OrbitArgs& a) {
  OrbitSetup s;
  if (has_schedule(a.sched)) s.schedule = resolve_schedule(a.sched);

  if (!a.multipliers.empty()) {
    if (a.ip || !a.generators.empty())
      throw std::invalid_argument("--multipliers cannot mix with --ip or --generators");
    s.seq = DilationSequence::explicit_terms(to_mpz_list(a.multipliers, "--multipliers"));
  } else if (!a.generators.empty()) {
    s.seq = DilationSequence::ip_generated(to_i64_list(a.generators, "--generators"));
  } else if (a.ip) {
    if (!s.schedule)
      throw std::invalid_argument("--ip takes its generators from a schedule's gaps; give one");
    s.seq = DilationSequence::ip_generated(DilationSequence::power_blocks(*s.schedule).exponents());
  } else {
    if (!s.schedule)
      throw std::invalid_argument(
          "give a schedule (--a/--b or --schedule), or --generators/--multipliers");
    s.seq = DilationSequence::power_blocks(*s.schedule);
  }

  if (a.sample) {
    if (!s.schedule)
      throw std::invalid_argument("--sample draws from the shifted-schedule set; give a schedule");
    DigitSet carrier(SetKind::FreeBlocks, prime_shift(*s.schedule));
    std::int64_t depth = a.depth < 0 ? carrier.depth_limit() : a.depth;
    s.x = sample_point(carrier, depth, effective_seed(a.seed));
  } else if (!a.x.empty()) {
    s.x = DyadicPoint::parse(a.x);
  } else {
    throw std::invalid_argument("give a base point: --x DIGITS or --sample");
  }
  return s;
}

void run_orbit(const OrbitArgs& a, bool dump_csv) {
  OrbitSetup setup = make_orbit_setup(a);
  const DilationSequence& seq = *setup.seq;

  std::size_t count = a.count <= 0 ? seq.size()
                                   : std::min<std::size_t>(static_cast<std::size_t>(a.count),
                                                           seq.size());
  if (count > (std::size_t{1} << 22))
    throw std::invalid_argument("orbit dump capped at 2^22 terms; pass a smaller --count");
  auto records = orbit(seq, setup.x, count);
  if (dump_csv) {
    std::cout << orbit_csv(seq, records, static_cast<std::size_t>(std::max<std::int64_t>(
                                             a.width, 1)));
    std::cout << "\n";
  }

  OrbitReport rep;
  rep.kind = seq.kind();
  rep.cells_log2 = a.cells_log2;
  if (seq.kind() == SequenceKind::PowerBlocks) {
    rep.terms = seq.size();
    rep.power = orbit_diagnostics(*setup.schedule, setup.x, a.cells_log2);
    try {
      DigitSet carrier(SetKind::FreeBlocks, prime_shift(*setup.schedule));
      if (member(carrier, setup.x) != Membership::no)
        rep.separation = separation_bound_check(*setup.schedule, setup.x);
      else
        rep.separation_note = "the point leaves the shifted-schedule set";
    } catch (const std::invalid_argument& e) {
      rep.separation_note = e.what();
    }
  } else {
    rep.terms = records.size();
    std::vector<DyadicPoint> values;
    values.reserve(records.size());
    for (const auto& r : records) values.push_back(r.value);
    rep.empty_arc = gap_statistic(values, a.cells_log2);
  }
  if (a.h_max > 0)
    rep.density = density_probes(seq, setup.x, static_cast<std::uint64_t>(a.h_max), count);
  std::cout << orbit_report_json(rep);
}

// ---- ip ---------------------------------------------------------------------

struct IpArgs {
  std::vector<std::string> generators;
  std::uint64_t mask = 0;
  std::uint64_t max_mask = 0;
};

void run_ip(const IpArgs& a) {
  // Routing through the sequence factory applies its generator checks.
  auto seq = DilationSequence::ip_generated(to_i64_list(a.generators, "--generators"));
  const auto& gens = seq.generators();
  if ((a.mask == 0) == (a.max_mask == 0))
    throw std::invalid_argument("give exactly one of --mask or --max-mask (both nonzero)");
  std::string out = "mask,term\n";
  if (a.mask != 0) {
    out += std::to_string(a.mask) + ',' + std::to_string(ip_term(gens, a.mask)) + '\n';
  } else {
    if (a.max_mask > (std::uint64_t{1} << 22))
      throw std::invalid_argument("mask listing capped at 2^22 rows");
    for (std::uint64_t m = 1; m <= a.max_mask; ++m)
      out += std::to_string(m) + ',' + std::to_string(ip_term(gens, m)) + '\n';
  }
  std::cout << out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digit-constrained sets on the binary circle: dimensions, measures, orbits"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "build a schedule whose quotient profile b_k/a_{k+1} approaches d");
  synth->add_option("--d", synth_args.d, "target quotient, a rational in [0,1] like \"1/3\"")
      ->required();
  synth->add_option("--blocks", synth_args.blocks, "number of blocks K")->required();
  synth->add_option("--out", synth_args.out, "write the schedule JSON here instead of stdout");
  synth->callback([&] { run_synth(synth_args); });

  DimsArgs dims_args;
  auto* dims = app.add_subcommand(
      "dims", "dimension report for both digit rules, with exact boundary checks");
  add_schedule_opts(dims, dims_args.sched);
  dims->add_option("--csv", dims_args.csv, "write the per-depth count profile here");
  dims->add_option("--n-max", dims_args.n_max, "profile depth (default: b_K)");
  dims->add_option("--samples", dims_args.samples, "also sample this many points per depth");
  dims->add_option("--seed", dims_args.seed, "sampling seed (DIMLAB_SEED overrides)");
  dims->callback([&] { run_dims(dims_args); });

  CoverArgs cover_args;
  auto* cover = app.add_subcommand("cover", "cover counts and cover-point enumerations");
  add_schedule_opts(cover, cover_args.sched);
  add_kind_opt(cover, cover_args.kind);
  cover->add_option("--n", cover_args.n, "depth: print the atom count at depth n");
  cover->add_option("--k", cover_args.k, "block index: enumerate the cover family there");
  cover->add_option("--family", cover_args.family, "which family at --k")
      ->check(CLI::IsMember({"block-end", "gap-end"}));
  cover->add_flag("--count-only", cover_args.count_only, "print the count instead of the points");
  cover->add_option("--log2-cap", cover_args.log2_cap, "refuse enumerations past 2^cap points");
  cover->callback([&] { run_cover(cover_args); });

  MeasureArgs measure_args;
  auto* measure = app.add_subcommand("measure", "mass of one dyadic atom [l/2^n, (l+1)/2^n)");
  add_schedule_opts(measure, measure_args.sched);
  add_kind_opt(measure, measure_args.kind);
  measure->add_option("--n", measure_args.n, "atom depth")->required();
  measure->add_option("--l", measure_args.l, "atom index in [0, 2^n)")->required();
  measure->callback([&] { run_measure(measure_args); });

  HolderArgs holder_args;
  auto* holder = app.add_subcommand(
      "holder", "check mass <= 2^(1+d) length^(d-eps) over all depths up to n-max");
  add_schedule_opts(holder, holder_args.sched);
  add_kind_opt(holder, holder_args.kind);
  holder->add_option("--d", holder_args.d, "dimension parameter, rational in [0,1]")->required();
  holder->add_option("--eps", holder_args.eps, "slack, rational in (0,d]")->required();
  holder->add_option("--n-max", holder_args.n_max, "deepest level to check (default: b_K)");
  holder->add_option("--csv", holder_args.csv, "write the per-depth sweep here");
  holder->callback([&] { run_holder(holder_args); });

  OrbitArgs orbit_args;
  auto* orbit_cmd =
      app.add_subcommand("orbit", "dump an orbit term by term, then summarize it");
  add_orbit_opts(orbit_cmd, orbit_args);
  orbit_cmd->callback([&] { run_orbit(orbit_args, true); });

  IpArgs ip_args;
  auto* ip = app.add_subcommand("ip", "finite-sum terms of an IP set of exponents");
  ip->add_option("--generators", ip_args.generators, "generators g_1,g_2,...")
      ->delimiter(',')
      ->required();
  ip->add_option("--mask", ip_args.mask, "one term: sum of the generators the bits select");
  ip->add_option("--max-mask", ip_args.max_mask, "list the terms for masks 1..max");
  ip->callback([&] { run_ip(ip_args); });

  OrbitArgs report_args;
  auto* report = app.add_subcommand("report", "orbit summary JSON only, no term dump");
  add_orbit_opts(report, report_args);
  report->callback([&] { run_orbit(report_args, false); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
