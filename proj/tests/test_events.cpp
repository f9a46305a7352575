#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <set>
#include <string>
#include <vector>

#include "djsp/events.hpp"
#include "djsp/ft06.hpp"
#include "djsp/jsp_core.hpp"
#include "djsp/solver.hpp"
#include "scenario_fixtures.hpp"

using namespace djsp;

TEST_CASE("apply_event: processing time change") {
  const Instance before = ft06();
  const Instance after = apply_event(before, ProcessingTimeChange{3, 0, 5, 10});
  CHECK(after.jobs.at(3)[0] == Operation{2, 10});
  CHECK(after.jobs.at(3)[1] == before.jobs.at(3)[1]);
  // Everything else is untouched.
  Instance expected = before;
  expected.jobs[3][0].duration = 10;
  CHECK(after == expected);
}

TEST_CASE("apply_event: machine change keeps the duration") {
  const Instance after = apply_event(ft06(), MachineChange{5, 0, 2, 0});
  CHECK(after.jobs.at(5)[0] == Operation{0, 9});
}

TEST_CASE("apply_event: maintenance merges into the window list") {
  Instance state = ft06();
  state = apply_event(state, MachineMaintenance{1, {8, 11}});
  CHECK(state.windows_for(1) == std::vector<Window>{{8, 11}});
  state = apply_event(state, MachineMaintenance{1, {10, 14}});
  CHECK(state.windows_for(1) == std::vector<Window>{{8, 14}});
  state = apply_event(state, MachineMaintenance{1, {14, 15}});
  CHECK(state.windows_for(1) == std::vector<Window>{{8, 14}, {14, 15}});
  CHECK(state.jobs == ft06().jobs);  // job data never altered
}

TEST_CASE("apply_event: cancellation and insertion") {
  Instance tiny;
  tiny.machine_count = 1;
  tiny.jobs[1] = {{0, 4}};
  const Instance empty = apply_event(tiny, JobCancellation{1});
  CHECK(empty.jobs.empty());
  CHECK(empty.machine_count == 1);

  const Instance grown =
      apply_event(tiny, JobInsertion{2, {{0, 2}, {0, 1}}});
  CHECK(grown.jobs.size() == 2);
  CHECK(grown.jobs.at(2) == std::vector<Operation>{{0, 2}, {0, 1}});
}

TEST_CASE("apply_event rejects stale and malformed events") {
  const Instance base = ft06();
  CHECK_THROWS_AS(apply_event(base, ProcessingTimeChange{3, 0, 7, 10}), DomainError);
  CHECK_THROWS_AS(apply_event(base, ProcessingTimeChange{3, 0, 5, 0}), DomainError);
  CHECK_THROWS_AS(apply_event(base, MachineChange{5, 0, 1, 0}), DomainError);
  CHECK_THROWS_AS(apply_event(base, MachineChange{5, 0, 2, 6}), DomainError);
  CHECK_THROWS_AS(apply_event(base, JobCancellation{9}), DomainError);
  CHECK_THROWS_AS(apply_event(base, ProcessingTimeChange{1, 6, 5, 6}), DomainError);
  CHECK_THROWS_AS(apply_event(base, JobInsertion{3, {{0, 1}}}), DomainError);
  CHECK_THROWS_AS(apply_event(base, JobInsertion{7, {}}), DomainError);
  CHECK_THROWS_AS(apply_event(base, JobInsertion{7, {{9, 1}}}), DomainError);
  CHECK_THROWS_AS(apply_event(base, MachineMaintenance{9, {0, 1}}), DomainError);
  CHECK_THROWS_AS(apply_event(base, MachineMaintenance{1, {5, 5}}), DomainError);
  CHECK_THROWS_AS(apply_event(base, MachineMaintenance{1, {-1, 5}}), DomainError);
}

TEST_CASE("reversible events restore the original instance exactly") {
  const Instance base = ft06();
  Instance state = apply_event(base, ProcessingTimeChange{3, 0, 5, 10});
  state = apply_event(state, ProcessingTimeChange{3, 0, 10, 5});
  CHECK(state == base);

  state = apply_event(base, MachineChange{5, 0, 2, 0});
  state = apply_event(state, MachineChange{5, 0, 0, 2});
  CHECK(state == base);

  state = apply_event(base, JobInsertion{7, {{0, 3}, {4, 2}}});
  state = apply_event(state, JobCancellation{7});
  CHECK(state == base);
}

TEST_CASE("run_processor replays the golden five-event scenario") {
  const Scenario scenario = golden_scenario();
  const ProcessorTrace trace =
      run_processor(scenario.baseline, scenario.events);
  REQUIRE(trace.steps.size() == 5);
  CHECK(trace.final == trace.steps.back().state_after);

  // Intermediate states change one fact at a time.
  CHECK(trace.steps[0].state_after.jobs.at(3)[0] == Operation{2, 10});
  CHECK(trace.steps[0].state_after.jobs.at(4)[2] == Operation{2, 5});
  CHECK(trace.steps[1].state_after.jobs.at(4)[2] == Operation{2, 9});
  CHECK(trace.steps[1].state_after.jobs.at(5)[0] == Operation{2, 9});
  CHECK(trace.steps[2].state_after.jobs.at(5)[0] == Operation{0, 9});
  CHECK(trace.steps[2].state_after.jobs.at(6)[5] == Operation{2, 1});
  CHECK(trace.steps[3].state_after.jobs.at(6)[5] == Operation{0, 1});
  CHECK(trace.steps[3].state_after.maintenance.empty());

  // Final state: all five disturbances applied.
  const Instance& fin = trace.final;
  CHECK(fin.jobs.at(3)[0] == Operation{2, 10});
  CHECK(fin.jobs.at(4)[2] == Operation{2, 9});
  CHECK(fin.jobs.at(5)[0] == Operation{0, 9});
  CHECK(fin.jobs.at(6)[5] == Operation{0, 1});
  CHECK(fin.windows_for(1) == std::vector<Window>{{8, 11}});
  CHECK_NOTHROW(check_instance(fin));
}

TEST_CASE("run_processor folds associatively and reports step indices") {
  const Scenario scenario = golden_scenario();
  const std::vector<DynamicEvent> head(scenario.events.begin(),
                                       scenario.events.begin() + 2);
  const std::vector<DynamicEvent> tail(scenario.events.begin() + 2,
                                       scenario.events.end());
  const Instance direct = run_processor(scenario.baseline, scenario.events).final;
  const Instance staged =
      run_processor(run_processor(scenario.baseline, head).final, tail).final;
  CHECK(direct == staged);

  const ProcessorTrace empty = run_processor(scenario.baseline, {});
  CHECK(empty.steps.empty());
  CHECK(empty.final == scenario.baseline);

  try {
    run_processor(scenario.baseline,
                  {ProcessingTimeChange{3, 0, 5, 10},
                   ProcessingTimeChange{3, 0, 5, 7}});  // stale after step 1
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    CHECK(std::string(err.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("a cancelled job can be modified before but not after") {
  Instance base;
  base.machine_count = 2;
  base.jobs[1] = {{0, 2}, {1, 3}};
  base.jobs[2] = {{1, 1}};
  const ProcessorTrace trace = run_processor(
      base, {ProcessingTimeChange{1, 0, 2, 5}, JobCancellation{1}});
  CHECK(trace.steps[0].state_after.jobs.at(1)[0].duration == 5);
  CHECK(!trace.final.jobs.count(1));
  CHECK_THROWS_AS(
      run_processor(base, {JobCancellation{1}, ProcessingTimeChange{1, 0, 2, 5}}),
      DomainError);
}

TEST_CASE("sample_scenario is deterministic and rejects auto mode") {
  SamplingConfig config;
  config.mode = Mode::Fast;
  CHECK(sample_scenario(config, 123) == sample_scenario(config, 123));
  CHECK(sample_scenario(config, 123) != sample_scenario(config, 124));

  config.mode = Mode::Auto;
  CHECK_THROWS_AS(sample_scenario(config, 1), DomainError);
}

TEST_CASE("sampled baselines are permutation-shaped with an optimal schedule") {
  SamplingConfig config;
  config.mode = Mode::Slow;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Scenario scenario = sample_scenario(config, seed);
    const int n = static_cast<int>(scenario.baseline.jobs.size());
    CHECK(n >= 2);
    CHECK(n <= 6);
    CHECK(scenario.baseline.machine_count >= 2);
    CHECK(scenario.baseline.machine_count <= 6);
    for (const auto& [label, ops] : scenario.baseline.jobs) {
      REQUIRE(static_cast<int>(ops.size()) == scenario.baseline.machine_count);
      std::set<int> machines;
      for (const Operation& op : ops) {
        machines.insert(op.machine);
        CHECK(op.duration >= 1);
        CHECK(op.duration <= 10);
      }
      CHECK(static_cast<int>(machines.size()) == scenario.baseline.machine_count);
    }
    CHECK(validate(scenario.baseline, scenario.baseline_schedule).feasible);
    CHECK(makespan(scenario.baseline, scenario.baseline_schedule) ==
          solve_exact(scenario.baseline).makespan);
  }
}

TEST_CASE("fast sampling draws one event with roughly uniform categories") {
  SamplingConfig config;
  config.mode = Mode::Fast;
  std::array<int, 5> counts{};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Scenario scenario = sample_scenario(config, seed);
    REQUIRE(scenario.events.size() == 1);
    counts[scenario.events[0].index()] += 1;
    CHECK_NOTHROW(run_processor(scenario.baseline, scenario.events));
  }
  for (const int count : counts) {
    CHECK(count >= 160);  // 20% +/- 4 percentage points over 1000 draws
    CHECK(count <= 240);
  }
}

TEST_CASE("slow sampling follows the category counts and order") {
  SamplingConfig config;
  config.mode = Mode::Slow;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Scenario scenario = sample_scenario(config, seed);
    std::array<int, 5> counts{};
    int previous_category = 0;
    for (const DynamicEvent& event : scenario.events) {
      const int category = static_cast<int>(event.index());
      CHECK(category >= previous_category);  // fixed category order
      previous_category = category;
      counts[static_cast<std::size_t>(category)] += 1;
    }
    CHECK(scenario.events.size() >= 2);
    CHECK(counts[0] <= 1);
    CHECK(counts[1] >= 1);
    CHECK(counts[1] <= 2);
    CHECK(counts[2] >= 1);
    CHECK(counts[2] <= 2);
    CHECK(counts[3] <= 2);
    CHECK(counts[4] <= 2);
    // The whole list must be applicable in order.
    CHECK_NOTHROW(run_processor(scenario.baseline, scenario.events));
  }
}

TEST_CASE("sampled maintenance windows start within the baseline horizon") {
  SamplingConfig config;
  config.mode = Mode::Slow;
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 200 && seen < 40; ++seed) {
    const Scenario scenario = sample_scenario(config, seed);
    const int horizon = makespan(scenario.baseline, scenario.baseline_schedule);
    for (const DynamicEvent& event : scenario.events) {
      if (const auto* mm = std::get_if<MachineMaintenance>(&event)) {
        ++seen;
        CHECK(mm->window.start >= 0);
        CHECK(mm->window.start <= horizon);
        const int length = mm->window.end - mm->window.start;
        CHECK(length >= 1);
        CHECK(length <= 5);
      }
    }
  }
  CHECK(seen >= 40);
}

TEST_CASE("insertions never recycle labels; changes target surviving jobs") {
  SamplingConfig config;
  config.mode = Mode::Slow;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Scenario scenario = sample_scenario(config, seed);
    std::set<int> cancelled;
    std::set<int> baseline_labels;
    for (const auto& [label, ops] : scenario.baseline.jobs) {
      baseline_labels.insert(label);
    }
    for (const DynamicEvent& event : scenario.events) {
      if (const auto* jc = std::get_if<JobCancellation>(&event)) {
        cancelled.insert(jc->job);
      } else if (const auto* tc = std::get_if<ProcessingTimeChange>(&event)) {
        CHECK(baseline_labels.count(tc->job));
        CHECK(!cancelled.count(tc->job));
      } else if (const auto* mc = std::get_if<MachineChange>(&event)) {
        CHECK(baseline_labels.count(mc->job));
        CHECK(!cancelled.count(mc->job));
      } else if (const auto* ji = std::get_if<JobInsertion>(&event)) {
        CHECK(!baseline_labels.count(ji->job_label));
      }
    }
  }
}

TEST_CASE("sample_scenario_for keeps the provided baseline") {
  SamplingConfig config;
  config.mode = Mode::Fast;
  const Scenario scenario = sample_scenario_for(ft06(), config, 5);
  CHECK(scenario.baseline == ft06());
  CHECK(scenario.events.size() == 1);
  CHECK(makespan(scenario.baseline, scenario.baseline_schedule) == 55);
  CHECK(scenario == sample_scenario_for(ft06(), config, 5));
}

TEST_CASE("as_auto_variant only flips the mode") {
  SamplingConfig config;
  config.mode = Mode::Fast;
  const Scenario original = sample_scenario(config, 77);
  const Scenario variant = as_auto_variant(original);
  CHECK(variant.mode == Mode::Auto);
  CHECK(variant.baseline == original.baseline);
  CHECK(variant.events == original.events);
  CHECK(variant.seed == original.seed);
}
