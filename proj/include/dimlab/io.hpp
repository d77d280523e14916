#pragma once

// Text formats for the CLI: schedules and reports as JSON, profiles and
// orbits as CSV, rationals as "p/q".  Every value printed here comes from
// exact integer arithmetic — the decimal columns are annotations computed
// in integers too — so output is reproducible byte for byte.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dimlab/boxlab.hpp"
#include "dimlab/digitset.hpp"
#include "dimlab/dilation.hpp"
#include "dimlab/massdist.hpp"
#include "dimlab/schedule.hpp"

namespace dimlab {

// "p/q" with q > 0, or a bare integer.  Throws std::invalid_argument.
mpq_class parse_rational(const std::string& text);
// Canonical text: "p/q", or plain "p" when the denominator is 1.
std::string format_rational(const mpq_class& q);

// Fixed-point annotation: `digits` places, round half away from zero,
// trailing zeros trimmed down to one.  Display only — never parsed back.
std::string decimal_annotation(const mpq_class& q, int digits = 12);

// {"a":[...],"b":[...]}, endpoints as numbers when they fit 64 bits and as
// decimal strings past that; "relaxed_first":true appears only when set.
std::string schedule_to_json(const BlockSchedule& s);
BlockSchedule schedule_from_json(const std::string& text);
BlockSchedule load_schedule(const std::string& path);
void save_schedule(const BlockSchedule& s, const std::string& path);

// "k,numerator,denominator,decimal" rows, k counting from first_k.
std::string ratio_rows_csv(std::size_t first_k, const std::vector<mpq_class>& values);
std::string profile_csv(const RatioProfile& p);

// {"n":...,"log2_count":...} plus "count" whenever it fits 64 bits.
std::string count_json(const CoverCount& c);

struct LabeledProfile {
  std::string label;
  CountProfile profile;
};

// "set,n,log2_count,ratio_num,ratio_den,ratio_decimal,zone,empirical"
// rows for each profile in turn; empirical stays empty unless sampling ran.
std::string count_profile_csv(const std::vector<LabeledProfile>& profiles);

// {"n":...,"l":...,"log2_measure":<int or null>}
std::string measure_json(const AtomMass& m, const mpz_class& l);

// The verdict of holder_check with rationals as "p/q".
std::string holder_json(const HolderCheck& h);
// "n,worst_l,ratio_num,ratio_den,ratio_decimal" rows of a holder_sweep.
std::string holder_sweep_csv(const std::vector<HolderRow>& rows);

// "index,term,value,dist_log2" rows.  term is the exponent, the
// "+"-joined generator sum (IP masks), or the multiplier (explicit).
// Digit strings are cut at `digits` places with a trailing "...";
// dist_log2 is the smallest e with distance < 2^e, "-inf" at exact zero.
std::string orbit_csv(const DilationSequence& seq, const std::vector<OrbitRecord>& records,
                      std::size_t digits = 64);

// Dimension summary for one schedule under both digit rules: the formula
// difference quotients, their window ranges, the raw count-trace estimates
// with exact boundary agreement, the staircase-shape verdict, and the
// union of the block windows everything was read from.
std::string dims_report_json(const DimensionReport& free_report,
                             const DimensionReport& tied_report);

// Orbit summary.  The power-block extras (diagnostics, separation) are
// optional because they only exist for that sequence kind and because the
// separation check is skipped — with a note — when the base point visibly
// leaves the shifted-schedule set.
struct OrbitReport {
  SequenceKind kind = SequenceKind::PowerBlocks;
  std::size_t terms = 0;
  int cells_log2 = 4;
  std::optional<OrbitDiagnostics> power;
  std::optional<SeparationCheck> separation;
  std::string separation_note;         // set when the check was skipped
  std::optional<mpq_class> empty_arc;  // non-power kinds
  std::vector<DensityProbe> density;
};

std::string orbit_report_json(const OrbitReport& r);

}  // namespace dimlab
