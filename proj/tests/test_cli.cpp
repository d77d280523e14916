#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dimlab/boxlab.hpp"
#include "dimlab/digitset.hpp"
#include "dimlab/dilation.hpp"
#include "dimlab/io.hpp"
#include "dimlab/massdist.hpp"
#include "dimlab/schedule.hpp"
#include "doctest.h"

using namespace dimlab;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the installed binary through the shell, capturing stdout; stderr is
// dropped so error-path tests stay quiet.  `env` goes in front verbatim,
// e.g. "DIMLAB_SEED=7".
RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string("'") + DIMLAB_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kArith13 =
    "--a 0,4,8,12,16,20,24,28,32,36,40,44,48 --b 2,6,10,14,18,22,26,30,34,38,42,46,50";

BlockSchedule arith13() {
  std::vector<mpz_class> a, b;
  for (int k = 0; k < 13; ++k) {
    a.emplace_back(4 * k);
    b.emplace_back(4 * k + 2);
  }
  return BlockSchedule::create(a, b);
}

}  // namespace

TEST_CASE("identical invocations produce identical bytes") {
  const std::vector<std::string> commands = {
      "synth --d 1/3 --blocks 8",
      std::string("dims ") + kArith13,
      "cover --a 0,4 --b 2,6 --kind tied --k 1",
      "measure --a 0,4 --b 2,6 --kind tied --n 5 --l 25",
      "holder --a 0,4,8 --b 2,6,10 --d 1/2 --eps 1/8",
      "orbit --a 0,5,12 --b 3,9,17 --x 0.11100001100000011 --h-max 2",
      "orbit --a 0,5,12 --b 3,9,17 --sample --seed 5",
      "report --a 0,5,12 --b 3,9,17 --sample --seed 42 --cells-log2 3",
      "ip --generators 3,5,11 --max-mask 7",
  };
  for (const auto& cmd : commands) {
    CAPTURE(cmd);
    RunResult first = run_cli(cmd), second = run_cli(cmd);
    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(!first.out.empty());
  }
}

TEST_CASE("DIMLAB_SEED overrides the flag") {
  const std::string cmd = "report --a 0,5,12 --b 3,9,17 --sample";
  RunResult flag11 = run_cli(cmd + " --seed 11");
  RunResult env_wins = run_cli(cmd + " --seed 999", "DIMLAB_SEED=11");
  RunResult flag999 = run_cli(cmd + " --seed 999");
  CHECK(flag11.exit_code == 0);
  CHECK(env_wins.out == flag11.out);
  CHECK(flag999.out != flag11.out);
  RunResult bad_env = run_cli(cmd, "DIMLAB_SEED=x");
  CHECK(bad_env.exit_code == 1);
}

TEST_CASE("stdout matches the library serializers") {
  auto s = arith13();
  CHECK(run_cli(std::string("dims ") + kArith13).out ==
        dims_report_json(dimension_report(DigitSet(SetKind::FreeBlocks, s)),
                         dimension_report(DigitSet(SetKind::TiedBlocks, s))));

  DigitSet small(SetKind::FreeBlocks, BlockSchedule::create_i64({0, 4}, {2, 6}));
  std::string lines;
  for (const auto& p : enumerate_cover(small, 2, CoverFamily::AtBlockEnd))
    lines += p.to_digit_string() + "\n";
  CHECK(run_cli("cover --a 0,4 --b 2,6 --k 2 --family block-end").out == lines);
  CHECK(run_cli("cover --a 0,4 --b 2,6 --n 5").out == count_json(exact_cover_count(small, 5)));

  CHECK(run_cli("measure --a 0,4 --b 2,6 --n 4 --l 12").out ==
        measure_json(interval_measure(small, 4, 12), 12));

  auto syn = synthesize(mpq_class(1) / 3, 6);
  CHECK(run_cli("synth --d 1/3 --blocks 6").out ==
        schedule_to_json(syn.schedule) + "\n" + ratio_rows_csv(1, syn.quotients));
}

TEST_CASE("orbit dump is the CSV plus the summary") {
  auto s = BlockSchedule::create_i64({0, 5, 12}, {3, 9, 17});
  auto seq = DilationSequence::power_blocks(s);
  auto x = DyadicPoint::parse("0.11100001100000011");
  std::string out = run_cli("orbit --a 0,5,12 --b 3,9,17 --x 0.11100001100000011").out;
  std::string csv = orbit_csv(seq, orbit(seq, x, seq.size()));
  REQUIRE(out.substr(0, csv.size()) == csv);
  CHECK(out.substr(csv.size(), 1) == "\n");
  CHECK(out.find("\"bound_budget\": \"19/32\"") != std::string::npos);
  CHECK(out.find("\"all_ok\": true") != std::string::npos);

  // The summary alone, for a point that visibly leaves the shifted set.
  std::string skipped = run_cli("report --a 0,5,12 --b 3,9,17 --x 0.1111").out;
  CHECK(skipped.find("index,term") == std::string::npos);
  CHECK(skipped.find("\"separation\": null") != std::string::npos);
  CHECK(skipped.find("\"separation_note\": \"the point leaves the shifted-schedule set\"") !=
        std::string::npos);
}

TEST_CASE("file outputs round-trip") {
  const std::string sched_path = "cli_synth_out.tmp.json";
  RunResult synth = run_cli("synth --d 2/5 --blocks 7 --out " + sched_path);
  CHECK(synth.exit_code == 0);
  auto expected = synthesize(mpq_class(2) / 5, 7);
  CHECK(load_schedule(sched_path) == expected.schedule);
  CHECK(synth.out == ratio_rows_csv(1, expected.quotients));  // JSON went to the file

  RunResult dims = run_cli(std::string("dims ") + kArith13 + " --csv cli_dims.tmp.csv --n-max 20");
  CHECK(dims.exit_code == 0);
  auto s = arith13();
  CHECK(slurp("cli_dims.tmp.csv") ==
        count_profile_csv({{"free", count_profile(DigitSet(SetKind::FreeBlocks, s), 20)},
                           {"tied", count_profile(DigitSet(SetKind::TiedBlocks, s), 20)}}));

  RunResult holder =
      run_cli("holder --a 0,4 --b 2,6 --d 1/2 --eps 1/4 --csv cli_holder.tmp.csv");
  CHECK(holder.exit_code == 0);
  DigitSet small(SetKind::FreeBlocks, BlockSchedule::create_i64({0, 4}, {2, 6}));
  CHECK(slurp("cli_holder.tmp.csv") ==
        holder_sweep_csv(holder_sweep(small, mpq_class(1) / 2, mpq_class(1) / 4, 6)));

  // A schedule file is accepted wherever inline lists are.
  RunResult via_file = run_cli("dims --schedule " + sched_path);
  auto direct = dimension_report(DigitSet(SetKind::FreeBlocks, expected.schedule));
  CHECK(via_file.exit_code == 0);
  CHECK(via_file.out.find("\"d1\": \"" + format_rational(direct.lower) + "\"") !=
        std::string::npos);

  for (const char* f : {"cli_synth_out.tmp.json", "cli_dims.tmp.csv", "cli_holder.tmp.csv"})
    std::remove(f);
}

TEST_CASE("contract violations exit nonzero and print nothing on stdout") {
  const std::vector<std::string> bad = {
      "synth --d 2 --blocks 5",                         // d outside [0,1]
      "synth --d x/y --blocks 5",                       // bad rational
      "dims",                                           // no schedule
      "dims --a 0,4 --b 2,6",                           // too few blocks for a report
      "dims --a 0,4,8 --b 2,6,10 --csv x.csv --n-max 99",  // past b_K
      "cover --a 0,4 --b 2,6 --n 3 --k 1",              // both selectors
      "cover --a 0,4 --b 2,6",                          // neither selector
      "cover --a 0,4 --b 2,6 --k 2 --log2-cap 1",       // enumeration refused
      "cover --a 0,4 --b 2,6 --kind tied --k 2 --family gap-end",  // k > K-1
      "measure --a 0,4 --b 2,6 --n 4 --l 99",           // atom index out of range
      "measure --a 0,4 --b 2,6 --n 4",                  // missing required --l
      "holder --a 0,4 --b 2,6 --d 1/2 --eps 3/4",       // eps > d
      "orbit --a 0 --b 2 --x 0.1",                      // one block, no gap exponents
      "orbit --x 0.1",                                  // no sequence source
      "orbit --a 0,5,12 --b 3,9,17",                    // no base point
      "orbit --a 0,5,12 --b 3,9,17 --x 0.2",            // not a digit string
      "ip --generators 3,5 --mask 3 --max-mask 5",      // both selectors
      "ip --generators 3,5",                            // neither
      "ip --generators 0 --mask 1",                     // generator below 1
      "nonsense",                                       // unknown subcommand
      "--frobnicate",                                   // unknown flag
  };
  for (const auto& cmd : bad) {
    CAPTURE(cmd);
    RunResult r = run_cli(cmd);
    CHECK(r.exit_code != 0);
    CHECK(r.out.empty());
  }
  std::remove("x.csv");
}

TEST_CASE("schedule endpoints past 64 bits are accepted as strings") {
  const std::string path = "cli_big.tmp.json";
  mpz_class huge = mpz_class(1) << 70;
  save_schedule(BlockSchedule::create({0, huge}, {2, huge + 5}), path);
  // Construction of a digit-level walker over such a schedule must refuse,
  // but the file itself parses: the complaint names the position budget.
  RunResult r = run_cli("cover --schedule " + path + " --n 2");
  CHECK(r.exit_code == 1);
  std::remove(path.c_str());
}
