#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "djsp/evalharness.hpp"
#include "djsp/events.hpp"
#include "djsp/ft06.hpp"
#include "djsp/judge.hpp"
#include "djsp/repair.hpp"
#include "djsp/solver.hpp"
#include "djsp/textio.hpp"
#include "golden_fixture.hpp"
#include "scenario_fixtures.hpp"

using namespace djsp;

namespace {

Scenario fast_scenario(std::uint64_t seed) {
  SamplingConfig config;
  config.mode = Mode::Fast;
  return sample_scenario(config, seed);
}

Scenario slow_scenario(std::uint64_t seed) {
  SamplingConfig config;
  config.mode = Mode::Slow;
  return sample_scenario(config, seed);
}

bool has_maintenance_event(const Scenario& scenario) {
  return std::any_of(scenario.events.begin(), scenario.events.end(),
                     [](const DynamicEvent& event) {
                       return std::holds_alternative<MachineMaintenance>(event);
                     });
}

// Fast scenarios whose post-event instance has no maintenance windows, so
// a uniform right-shift of the optimal schedule stays feasible.
std::vector<Scenario> shiftable_fast_scenarios(int count,
                                               std::uint64_t start_seed) {
  std::vector<Scenario> out;
  for (std::uint64_t seed = start_seed;
       static_cast<int>(out.size()) < count; ++seed) {
    Scenario scenario = fast_scenario(seed);
    if (!has_maintenance_event(scenario)) out.push_back(std::move(scenario));
  }
  return out;
}

// A parseable fast response whose schedule is the exact optimum delayed by
// `delta` everywhere: feasible (no windows) but suboptimal by exactly delta.
std::string shifted_response(const Scenario& scenario, int delta) {
  const ProcessorTrace trace = run_processor(scenario.baseline, scenario.events);
  const SolveResult solved = solve_exact(trace.final);
  REQUIRE(solved.status == SolveStatus::Optimal);
  Schedule shifted;
  for (const auto& [ref, start] : solved.schedule.starts) {
    shifted.starts[ref] = start + delta;
  }
  return format_tasks_text(trace.final, "The new tasks") +
         format_schedule_text(trace.final, shifted);
}

// Parses cleanly as tasks + schedule, but the schedule overlaps two ops on
// M0 and the task list matches no sampled scenario.
const std::string kBadTasksResponse =
    "The new tasks: J1: {(O1, M0, PT3)} J2: {(O1, M0, PT4)}"
    "The schedules of machine M0 are: {(J1, O1, 3, 0-3),(J2, O1, 4, 2-6)}"
    "MakeSpan=6";

ParsedResponse parse_for(const Scenario& scenario, const std::string& text) {
  return parse_model_output(text, scenario.mode);
}

}  // namespace

TEST_CASE("format_percent uses round-half-up to two decimals") {
  CHECK(format_percent(22, 30) == "73.33%");
  CHECK(format_percent(14, 30) == "46.67%");
  CHECK(format_percent(10, 30) == "33.33%");
  CHECK(format_percent(20, 30) == "66.67%");
  CHECK(format_percent(30, 30) == "100.00%");
  CHECK(format_percent(0, 30) == "0.00%");
  CHECK(format_percent(0, 0) == "0.00%");
  CHECK(format_percent(1, 3) == "33.33%");
  CHECK(format_percent(2, 3) == "66.67%");
  CHECK(format_percent(1, 8) == "12.50%");
  // Exact .xx5 halves round up, not to even.
  CHECK(format_percent(1, 800) == "0.13%");
  CHECK(format_percent(3, 800) == "0.38%");
  CHECK(format_percent(1, 16) == "6.25%");

  CHECK(format_percent(22.0 / 30.0) == "73.33%");
  CHECK(format_percent(0.0) == "0.00%");
  CHECK(format_percent(1.0) == "100.00%");
  CHECK(format_percent(0.05454) == "5.45%");
  CHECK(format_percent(-0.0125) == "-1.25%");
}

TEST_CASE("detect_response_mode splits on the schedule segment marker") {
  const Scenario fast = fast_scenario(3);
  CHECK(detect_response_mode(build_target(fast, FastPolicy::ExactResolve)) ==
        Mode::Fast);
  CHECK(detect_response_mode(golden::kModelOutput) == Mode::Slow);
  CHECK(detect_response_mode("free-form words") == Mode::Slow);
  CHECK(detect_response_mode("The schedules of machine M0 are: {}") ==
        Mode::Fast);
}

TEST_CASE("same_tasks ignores machine_count and empty window lists") {
  Instance a;
  a.machine_count = 2;
  a.jobs[1] = {{0, 3}, {1, 2}};
  Instance b = a;
  b.machine_count = 5;
  CHECK(same_tasks(a, b));

  b.maintenance[0] = {};  // empty list, not representable in text
  CHECK(same_tasks(a, b));

  add_window(b.maintenance[0], {2, 4});
  CHECK_FALSE(same_tasks(a, b));
  add_window(a.maintenance[0], {2, 4});
  CHECK(same_tasks(a, b));

  b.jobs[1][0].duration = 4;
  CHECK_FALSE(same_tasks(a, b));
}

TEST_CASE("mode_selection_matrix tabulates counts and per-row accuracy") {
  std::vector<std::pair<Mode, Mode>> records(30, {Mode::Fast, Mode::Fast});
  ModeMatrix matrix = mode_selection_matrix(records);
  CHECK(matrix.counts[0][0] == 30);
  CHECK(matrix.counts[0][1] == 0);
  CHECK(matrix.total() == 30);
  REQUIRE(matrix.row_accuracy[0].has_value());
  CHECK(format_percent(*matrix.row_accuracy[0]) == "100.00%");
  CHECK_FALSE(matrix.row_accuracy[1].has_value());

  records.clear();
  for (int i = 0; i < 10; ++i) records.push_back({Mode::Slow, Mode::Slow});
  for (int i = 0; i < 20; ++i) records.push_back({Mode::Slow, Mode::Fast});
  matrix = mode_selection_matrix(records);
  CHECK(matrix.counts[1][1] == 10);
  CHECK(matrix.counts[1][0] == 20);
  REQUIRE(matrix.row_accuracy[1].has_value());
  CHECK(format_percent(*matrix.row_accuracy[1]) == "33.33%");
  CHECK(format_percent(matrix.counts[1][0], 30) == "66.67%");

  matrix = mode_selection_matrix({{Mode::Fast, Mode::Fast}});
  CHECK(matrix.total() == 1);
  CHECK(format_percent(*matrix.row_accuracy[0]) == "100.00%");

  CHECK_THROWS_AS(mode_selection_matrix({}), DomainError);
  CHECK_THROWS_AS(mode_selection_matrix({{Mode::Auto, Mode::Fast}}),
                  DomainError);
  CHECK_THROWS_AS(mode_selection_matrix({{Mode::Fast, Mode::Auto}}),
                  DomainError);
}

TEST_CASE("exact-resolve fast targets are feasible and optimal") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CAPTURE(seed);
    const Scenario scenario = fast_scenario(seed);
    const std::string target = build_target(scenario, FastPolicy::ExactResolve);
    const ParsedResponse response = parse_for(scenario, target);
    REQUIRE(response.parse_ok);

    const FeasibilityCheck feasibility = check_feasibility(scenario, response);
    REQUIRE(feasibility.feasible);
    CHECK(feasibility.reason.empty());
    REQUIRE(feasibility.instance.has_value());
    REQUIRE(feasibility.schedule.has_value());

    const OptimalityCheck optimality = check_optimality(scenario, response);
    CHECK(optimality.optimal == Verdict::Yes);
    CHECK(optimality.response_makespan == optimality.optimal_makespan);
    CHECK(feasibility.makespan == optimality.response_makespan);
  }
}

TEST_CASE("local-repair fast targets stay feasible with zero stability cost") {
  std::vector<Scenario> scenarios;
  std::vector<std::string> responses;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    scenarios.push_back(fast_scenario(seed));
    responses.push_back(build_target(scenarios.back(), FastPolicy::LocalRepair));
  }
  const EvalReport report = evaluate_responses(scenarios, responses);
  CHECK(report.total == 40);
  CHECK(report.parsed == 40);
  CHECK(report.feasible == 40);
  CHECK(report.unknown_optimal == 0);
  CHECK(report.moved_unaffected_total == 0);
  int suboptimal = 0;
  for (const ScenarioRow& row : report.per_scenario) {
    CAPTURE(row.index);
    CHECK(row.feasible);
    CHECK(row.moved_unaffected == 0);
    CHECK(row.response_makespan >= row.optimal_makespan);
    if (row.optimal == Verdict::No) {
      ++suboptimal;
      REQUIRE(row.gap.has_value());
      CHECK(*row.gap > 0.0);
    } else {
      CHECK(row.optimal == Verdict::Yes);
    }
  }
  CHECK(report.optimal == 40 - suboptimal);
  // Right-shifting is measurably suboptimal on at least one scenario.
  CHECK(suboptimal > 0);
}

TEST_CASE("fast scoring rejects wrong tasks and broken schedules") {
  const Scenario scenario = fast_scenario(11);
  const ProcessorTrace trace = run_processor(scenario.baseline, scenario.events);

  ParsedResponse unparsed;
  unparsed.parse_ok = false;
  FeasibilityCheck check = check_feasibility(scenario, unparsed);
  CHECK_FALSE(check.feasible);
  CHECK(check.reason == "response did not parse");

  // Baseline tasks instead of post-event tasks: rejected under strict
  // scoring, accepted as internally consistent when relaxed.
  ParsedResponse stale;
  stale.parse_ok = true;
  stale.final_tasks = scenario.baseline;
  stale.final_schedule = scenario.baseline_schedule;
  check = check_feasibility(scenario, stale);
  CHECK_FALSE(check.feasible);
  CHECK(check.reason == "task list does not match the post-event instance");

  EvalConfig relaxed;
  relaxed.strict_tasks = false;
  check = check_feasibility(scenario, stale, relaxed);
  CHECK(check.feasible);

  // Correct tasks, corrupted schedule.
  const SolveResult solved = solve_exact(trace.final);
  ParsedResponse corrupt;
  corrupt.parse_ok = true;
  corrupt.final_tasks = trace.final;
  Schedule broken = solved.schedule;
  REQUIRE_FALSE(broken.starts.empty());
  broken.starts.begin()->second += 1000;  // tear a hole and break precedence
  corrupt.final_schedule = broken;
  check = check_feasibility(scenario, corrupt);
  CHECK_FALSE(check.feasible);
  CHECK(check.reason.substr(0, 20) == "schedule infeasible:");

  // The handcrafted overlap text parses but cannot validate even against
  // its own task list.
  const ParsedResponse overlapping =
      parse_model_output(kBadTasksResponse, Mode::Fast);
  REQUIRE(overlapping.parse_ok);
  check = check_feasibility(scenario, overlapping, relaxed);
  CHECK_FALSE(check.feasible);
  CHECK(check.reason.find("overlap") != std::string::npos);
}

TEST_CASE("slow targets and the captured golden output are slow-feasible") {
  const Scenario scenario = golden_scenario();

  const std::string target = build_target(scenario, FastPolicy::ExactResolve);
  const ParsedResponse from_target = parse_for(scenario, target);
  REQUIRE(from_target.parse_ok);
  const FeasibilityCheck target_check = check_feasibility(scenario, from_target);
  REQUIRE(target_check.feasible);
  const OptimalityCheck target_opt = check_optimality(scenario, from_target);
  CHECK(target_opt.optimal == Verdict::Yes);

  const ParsedResponse from_capture =
      parse_model_output(golden::kModelOutput, Mode::Slow);
  REQUIRE(from_capture.parse_ok);
  const FeasibilityCheck capture_check =
      check_feasibility(scenario, from_capture);
  CHECK(capture_check.feasible);
  CHECK(capture_check.makespan > 0);
}

TEST_CASE("check_optimality refuses infeasible responses") {
  const Scenario scenario = fast_scenario(2);
  ParsedResponse unparsed;
  unparsed.parse_ok = false;
  CHECK_THROWS_AS(check_optimality(scenario, unparsed), DomainError);
}

TEST_CASE("time-limited solves yield unknown optimality verdicts") {
  const Scenario scenario = slow_scenario(1);
  const ProcessorTrace trace = run_processor(scenario.baseline, scenario.events);
  REQUIRE(solve_exact(trace.final, std::chrono::duration<double>(0.0)).status !=
          SolveStatus::Optimal);

  EvalConfig config;
  config.time_limit_secs = 0.0;
  const std::string target = build_target(scenario, FastPolicy::ExactResolve);
  const EvalReport report = evaluate_responses({scenario}, {target}, config);
  REQUIRE(report.per_scenario.size() == 1);
  const ScenarioRow& row = report.per_scenario.front();
  CHECK(row.parsed);
  CHECK(row.feasible);
  CHECK(row.optimal == Verdict::Unknown);
  CHECK(report.parsed == 1);
  CHECK(report.feasible == 1);
  CHECK(report.optimal == 0);
  CHECK(report.unknown_optimal == 1);
  REQUIRE(report.diagnostics.size() == 1);
  CHECK(report.diagnostics.front().find("optimality unknown") !=
        std::string::npos);
  CHECK(format_report(report).find("optimal=unknown") != std::string::npos);
}

TEST_CASE("evaluate_responses reproduces the fixture arithmetic") {
  const std::vector<Scenario> scenarios = shiftable_fast_scenarios(30, 0);
  std::vector<std::string> responses;
  double expected_gap_sum = 0.0;
  for (int i = 0; i < 30; ++i) {
    if (i < 14) {
      responses.push_back(build_target(scenarios[i], FastPolicy::ExactResolve));
    } else if (i < 22) {
      responses.push_back(shifted_response(scenarios[i], 5));
      const ProcessorTrace trace =
          run_processor(scenarios[i].baseline, scenarios[i].events);
      expected_gap_sum += 5.0 / solve_exact(trace.final).makespan;
    } else if (i < 26) {
      responses.push_back(kBadTasksResponse);
    } else {
      responses.push_back("@@@ nothing resembling a schedule @@@");
    }
  }

  const EvalReport report = evaluate_responses(scenarios, responses);
  CHECK(report.total == 30);
  CHECK(report.parsed == 26);
  CHECK(report.feasible == 22);
  CHECK(report.optimal == 14);
  CHECK(report.unknown_optimal == 0);
  CHECK(report.optimal <= report.feasible);
  CHECK(report.feasible <= report.parsed);
  CHECK(report.parsed <= report.total);
  CHECK(report.feasibility_rate == doctest::Approx(22.0 / 30.0));
  CHECK(report.optimality_rate == doctest::Approx(14.0 / 30.0));
  REQUIRE(report.mean_gap.has_value());
  CHECK(*report.mean_gap == doctest::Approx(expected_gap_sum / 22.0));

  // All 30 scenarios are single-event (fast); 26 responses carry a
  // schedule segment, 4 are shapeless garbage.
  CHECK(report.mode_matrix.counts[0][0] == 26);
  CHECK(report.mode_matrix.counts[0][1] == 4);
  CHECK(format_percent(*report.mode_matrix.row_accuracy[0]) == "86.67%");

  const ScenarioRow& shifted_row = report.per_scenario[14];
  CHECK(shifted_row.optimal == Verdict::No);
  CHECK(shifted_row.response_makespan == shifted_row.optimal_makespan + 5);
  CHECK(report.per_scenario[22].parsed);
  CHECK_FALSE(report.per_scenario[22].feasible);
  CHECK_FALSE(report.per_scenario[26].parsed);

  const std::string text = format_report(report);
  CHECK(text.find("total: 30\n") != std::string::npos);
  CHECK(text.find("feasibility_rate: 73.33%\n") != std::string::npos);
  CHECK(text.find("optimality_rate: 46.67%\n") != std::string::npos);
  CHECK(text.find("scenario 0: true=fast chosen=fast parsed=yes feasible=yes "
                  "optimal=yes") != std::string::npos);
  CHECK(text.find("parsed=no") != std::string::npos);

  const nlohmann::json doc = nlohmann::json::parse(report_to_json(report));
  CHECK(doc.at("total") == 30);
  CHECK(doc.at("feasible") == 22);
  CHECK(doc.at("optimal") == 14);
  CHECK(doc.at("feasibility_percent") == "73.33%");
  CHECK(doc.at("optimality_percent") == "46.67%");
  CHECK(doc.at("per_scenario").size() == 30);
  CHECK(doc.at("per_scenario").at(14).at("optimal") == "no");
  CHECK(doc.at("mode_matrix").at("counts").at(0).at(0) == 26);

  // Aggregates are invariant under permutation of the pairs.
  std::vector<Scenario> rotated_scenarios(scenarios.begin() + 7,
                                          scenarios.end());
  rotated_scenarios.insert(rotated_scenarios.end(), scenarios.begin(),
                           scenarios.begin() + 7);
  std::vector<std::string> rotated_responses(responses.begin() + 7,
                                             responses.end());
  rotated_responses.insert(rotated_responses.end(), responses.begin(),
                           responses.begin() + 7);
  const EvalReport rotated =
      evaluate_responses(rotated_scenarios, rotated_responses);
  CHECK(rotated.parsed == report.parsed);
  CHECK(rotated.feasible == report.feasible);
  CHECK(rotated.optimal == report.optimal);
  CHECK(rotated.mode_matrix.counts == report.mode_matrix.counts);
  REQUIRE(rotated.mean_gap.has_value());
  CHECK(*rotated.mean_gap == doctest::Approx(*report.mean_gap));

  // Re-evaluating identical inputs reproduces the identical report.
  const EvalReport again = evaluate_responses(scenarios, responses);
  CHECK(format_report(again) == text);
  CHECK(report_to_json(again) == report_to_json(report));
}

TEST_CASE("slow ground-truth targets score a perfect report") {
  std::vector<Scenario> scenarios;
  std::vector<std::string> responses;
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    scenarios.push_back(slow_scenario(seed));
    responses.push_back(build_target(scenarios.back(), FastPolicy::ExactResolve));
  }
  const EvalReport report = evaluate_responses(scenarios, responses);
  CHECK(report.total == 12);
  CHECK(report.parsed == 12);
  CHECK(report.feasible == 12);
  CHECK(report.optimal == 12);
  CHECK(format_percent(report.feasible, report.total) == "100.00%");
  CHECK(format_percent(report.optimal, report.total) == "100.00%");
  CHECK(report.mode_matrix.counts[1][1] == 12);
  CHECK(format_percent(*report.mode_matrix.row_accuracy[1]) == "100.00%");
  REQUIRE(report.mean_gap.has_value());
  CHECK(*report.mean_gap == doctest::Approx(0.0));
  for (const ScenarioRow& row : report.per_scenario) {
    CHECK(row.moved_unaffected == -1);  // no schedule in slow responses
  }
}

TEST_CASE("all-garbage responses score zero without errors") {
  std::vector<Scenario> scenarios;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    scenarios.push_back(slow_scenario(seed));
  }
  const std::vector<std::string> responses(30, "word salad, no structure");
  const EvalReport report = evaluate_responses(scenarios, responses);
  CHECK(report.total == 30);
  CHECK(report.parsed == 0);
  CHECK(report.feasible == 0);
  CHECK(report.optimal == 0);
  CHECK(format_percent(report.feasible, report.total) == "0.00%");
  CHECK(format_percent(report.optimal, report.total) == "0.00%");
  CHECK_FALSE(report.mean_gap.has_value());
  for (const ScenarioRow& row : report.per_scenario) {
    CHECK_FALSE(row.parsed);
    CHECK_FALSE(row.reason.empty());
  }
}

TEST_CASE("argument errors and the empty report") {
  const Scenario scenario = fast_scenario(0);
  CHECK_THROWS_AS(evaluate_responses({scenario}, {}), DomainError);
  CHECK_THROWS_AS(evaluate_responses({}, {"text"}), DomainError);

  const EvalReport empty = evaluate_responses({}, {});
  CHECK(empty.total == 0);
  CHECK(empty.feasibility_rate == 0.0);
  CHECK_FALSE(empty.mean_gap.has_value());
  CHECK(empty.mode_matrix.total() == 0);
  CHECK_FALSE(empty.mode_matrix.row_accuracy[0].has_value());
  const std::string text = format_report(empty);
  CHECK(text.find("total: 0\n") != std::string::npos);
  CHECK(text.find("feasibility_rate: 0.00%\n") != std::string::npos);
  CHECK(text.find("mean_gap: n/a\n") != std::string::npos);
  CHECK(text.find("accuracy=n/a") != std::string::npos);
}

TEST_CASE("auto-tagged scenarios are scored by the shape the response took") {
  Scenario base = fast_scenario(17);
  const Scenario auto_scenario = as_auto_variant(base);
  REQUIRE(auto_scenario.mode == Mode::Auto);

  // Fast-shaped answer: the auto target itself (single event routes fast).
  const std::string fast_answer =
      build_target(auto_scenario, FastPolicy::ExactResolve);
  REQUIRE(detect_response_mode(fast_answer) == Mode::Fast);

  // Slow-shaped answer to the same scenario: re-tag and build a slow target.
  Scenario slow_tagged = base;
  slow_tagged.mode = Mode::Slow;
  const std::string slow_answer =
      build_target(slow_tagged, FastPolicy::ExactResolve);
  REQUIRE(detect_response_mode(slow_answer) == Mode::Slow);

  const EvalReport report = evaluate_responses(
      {auto_scenario, auto_scenario}, {fast_answer, slow_answer});
  CHECK(report.parsed == 2);
  CHECK(report.feasible == 2);
  CHECK(report.optimal == 2);
  CHECK(report.per_scenario[0].chosen_mode == Mode::Fast);
  CHECK(report.per_scenario[1].chosen_mode == Mode::Slow);
  CHECK(report.per_scenario[0].true_mode == Mode::Fast);
  CHECK(report.per_scenario[1].true_mode == Mode::Fast);
  CHECK(report.mode_matrix.counts[0][0] == 1);
  CHECK(report.mode_matrix.counts[0][1] == 1);
  CHECK(format_percent(*report.mode_matrix.row_accuracy[0]) == "50.00%");
}

TEST_CASE("stability metric matches an independent recount") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    CAPTURE(seed);
    const Scenario scenario = fast_scenario(seed);
    const std::string target = build_target(scenario, FastPolicy::ExactResolve);
    const EvalReport report = evaluate_responses({scenario}, {target});
    REQUIRE(report.per_scenario.size() == 1);
    const ScenarioRow& row = report.per_scenario.front();
    REQUIRE(row.feasible);

    const ProcessorTrace trace =
        run_processor(scenario.baseline, scenario.events);
    const SolveResult solved = solve_exact(trace.final);
    const std::set<OpRef> affected = affected_operations(
        scenario.baseline, scenario.baseline_schedule, scenario.events);
    int moved = 0;
    for (const auto& [label, ops] : trace.final.jobs) {
      const auto baseline_job = scenario.baseline.jobs.find(label);
      if (baseline_job == scenario.baseline.jobs.end()) continue;
      const int shared =
          std::min(static_cast<int>(ops.size()),
                   static_cast<int>(baseline_job->second.size()));
      for (int op = 0; op < shared; ++op) {
        const OpRef ref{label, op};
        if (affected.count(ref) != 0) continue;
        const auto now = solved.schedule.starts.find(ref);
        const auto then = scenario.baseline_schedule.starts.find(ref);
        if (now != solved.schedule.starts.end() &&
            then != scenario.baseline_schedule.starts.end() &&
            now->second != then->second) {
          ++moved;
        }
      }
    }
    CHECK(row.moved_unaffected == moved);
  }
}
