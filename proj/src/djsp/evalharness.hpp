#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "djsp/events.hpp"
#include "djsp/jsp_core.hpp"
#include "djsp/solver.hpp"
#include "djsp/textio.hpp"

namespace djsp {

/// Scores rescheduler responses — our own policies' targets or parsed
/// external text — for feasibility, optimality and reasoning-mode
/// selection. All checks are pure given (scenario, response, config);
/// re-evaluating identical inputs reproduces the identical report.

struct EvalConfig {
  // Fast responses must reproduce the post-event task list exactly before
  // their schedule is scored. Clearing this instead checks the schedule
  // against the response's own task list (internal consistency only).
  bool strict_tasks = true;
  double time_limit_secs = kDefaultTimeLimitSecs;  // per exact solve
};

// Optimality is three-valued: Unknown when an exact solve hit the time
// limit, so the comparison could not be decided either way.
enum class Verdict { No, Yes, Unknown };

std::string to_string(Verdict verdict);

struct FeasibilityCheck {
  bool feasible = false;
  std::string reason;  // first failure; empty when feasible
  // The instance the response denotes (fast: the scoring reference;
  // slow: the parsed final task block) and a feasible schedule for it
  // (fast: the response's own; slow: the re-solver's).
  std::optional<Instance> instance;
  std::optional<Schedule> schedule;
  int makespan = -1;  // of `schedule`; -1 when absent
};

struct OptimalityCheck {
  Verdict optimal = Verdict::No;
  int response_makespan = -1;  // -1 when a slow re-solve stayed unproven
  int optimal_makespan = -1;   // -1 when the reference solve timed out
  std::string note;            // time-limit diagnostics
};

struct ScenarioRow {
  int index = 0;
  Mode true_mode = Mode::Fast;    // classify_mode over the event list
  Mode chosen_mode = Mode::Fast;  // detected from the response shape
  bool parsed = false;
  bool feasible = false;
  Verdict optimal = Verdict::No;
  int response_makespan = -1;
  int optimal_makespan = -1;
  std::optional<double> gap;  // (response - optimum) / optimum
  int moved_unaffected = -1;  // stability; -1 on rows without a schedule
  std::string reason;         // why parse/feasibility failed, or timeout note
};

// 2x2 tabulation of true mode against chosen mode, Fast row/column first.
struct ModeMatrix {
  std::array<std::array<int, 2>, 2> counts{{{0, 0}, {0, 0}}};
  std::array<std::optional<double>, 2> row_accuracy{};  // per true mode

  int total() const;
};

struct EvalReport {
  int total = 0;
  int parsed = 0;
  int feasible = 0;
  int optimal = 0;
  int unknown_optimal = 0;        // feasible rows with an undecided verdict
  double feasibility_rate = 0.0;  // feasible / total; 0 when total == 0
  double optimality_rate = 0.0;   // optimal / total
  std::optional<double> mean_gap;  // over feasible rows with a known gap
  int moved_unaffected_total = 0;  // summed stability metric
  std::vector<ScenarioRow> per_scenario;
  ModeMatrix mode_matrix;
  std::vector<std::string> diagnostics;
};

// Shape-based detection: Fast iff the text contains a schedule segment.
// Mirrors the auto-mode discrimination used when parsing responses.
Mode detect_response_mode(const std::string& response_text);

// Task-list equality for scoring: jobs and (non-empty) maintenance lists
// must match; machine_count may differ, because the text formats cannot
// recover trailing machines that no operation uses.
bool same_tasks(const Instance& a, const Instance& b);

// Fast-shaped responses: parsed, task list equal to the processor's
// post-event instance (under strict_tasks), and the schedule validates
// against it. Slow-shaped responses: the final task block parses into a
// well-formed instance that the exact solver schedules (solver
// compatibility) — ground-truth equality is deliberately not required.
// Never throws for a bad response; the reason is recorded instead.
FeasibilityCheck check_feasibility(const Scenario& scenario,
                                   const ParsedResponse& response,
                                   const EvalConfig& config = {});

// Compares the response makespan with the exact optimum of the post-event
// instance. Requires a response that passes check_feasibility under the
// same config (DomainError otherwise). Time-limited solves that fail to
// prove optimality yield Verdict::Unknown with a note.
OptimalityCheck check_optimality(const Scenario& scenario,
                                 const ParsedResponse& response,
                                 const EvalConfig& config = {});

// Scores aligned scenario/response-text lists; DomainError on a length
// mismatch. Responses are parsed per their scenario's mode; auto-tagged
// scenarios are scored by the shape the response actually took. Counts
// obey optimal <= feasible <= parsed <= total; Unknown verdicts are
// excluded from `optimal` and listed in `diagnostics`. The report is
// invariant under permutation of the (scenario, response) pairs, up to
// row order.
EvalReport evaluate_responses(const std::vector<Scenario>& scenarios,
                              const std::vector<std::string>& response_texts,
                              const EvalConfig& config = {});

// Tabulates (true mode, chosen mode) pairs. DomainError when the list is
// empty or contains Mode::Auto.
ModeMatrix mode_selection_matrix(
    const std::vector<std::pair<Mode, Mode>>& records);

// "73.33%": percent with two decimals, round-half-up, exact integer
// arithmetic. A zero or negative total renders "0.00%".
std::string format_percent(int count, int total);

// The same rounding applied to a plain fraction (used for gap display).
std::string format_percent(double fraction);

// Human-readable report: summary as stable `key: value` lines, then one
// line per scenario, then `# `-prefixed diagnostics.
std::string format_report(const EvalReport& report);

// The same report as a single-line JSON document with sorted keys;
// byte-deterministic for identical reports.
std::string report_to_json(const EvalReport& report);

}  // namespace djsp
