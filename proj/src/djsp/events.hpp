#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "djsp/jsp_core.hpp"

namespace djsp {

/// The five disturbance categories. `old_*` fields carry the value being
/// replaced so that stale events are detected instead of silently applied.

struct JobCancellation {
  int job = 0;

  friend bool operator==(const JobCancellation&, const JobCancellation&) = default;
};

struct ProcessingTimeChange {
  int job = 0;
  int op = 0;  // 0-based
  int old_pt = 0;
  int new_pt = 0;

  friend bool operator==(const ProcessingTimeChange&, const ProcessingTimeChange&) = default;
};

struct MachineChange {
  int job = 0;
  int op = 0;  // 0-based
  int old_machine = 0;
  int new_machine = 0;

  friend bool operator==(const MachineChange&, const MachineChange&) = default;
};

struct JobInsertion {
  int job_label = 0;
  std::vector<Operation> ops;

  friend bool operator==(const JobInsertion&, const JobInsertion&) = default;
};

struct MachineMaintenance {
  int machine = 0;
  Window window;

  friend bool operator==(const MachineMaintenance&, const MachineMaintenance&) = default;
};

using DynamicEvent = std::variant<JobCancellation, ProcessingTimeChange,
                                  MachineChange, JobInsertion, MachineMaintenance>;

// Response regime for a scenario. Auto leaves the choice to the responder;
// classify_mode (judge) never returns it.
enum class Mode { Fast, Slow, Auto };

std::string to_string(Mode mode);

// Inverse of to_string(Mode); throws DomainError on anything else.
Mode mode_from_string(const std::string& text);

// A baseline instance + schedule with an ordered disturbance list.
struct Scenario {
  Instance baseline;
  Schedule baseline_schedule;
  std::vector<DynamicEvent> events;
  Mode mode = Mode::Slow;
  std::uint64_t seed = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Step-by-step rewrite of the instance, one intermediate state per event.
struct ProcessorTrace {
  struct Step {
    DynamicEvent event;
    Instance state_after;

    friend bool operator==(const Step&, const Step&) = default;
  };
  std::vector<Step> steps;
  Instance final;

  friend bool operator==(const ProcessorTrace&, const ProcessorTrace&) = default;
};

// Applies one event to a copy of `state`. Throws DomainError when the event
// references a missing job/op/machine, when an old_* field does not match
// the current state, or when the new value is itself invalid. Everything
// the event does not mention is preserved bit-identically.
Instance apply_event(const Instance& state, const DynamicEvent& event);

// Sequential fold of apply_event, recording every intermediate state.
// Errors are rethrown with the 1-based step index prepended.
ProcessorTrace run_processor(const Instance& baseline,
                             const std::vector<DynamicEvent>& events);

struct SamplingConfig {
  Mode mode = Mode::Slow;  // Fast or Slow; Auto is rejected
  int min_jobs = 2;
  int max_jobs = 6;
  int min_machines = 2;
  int max_machines = 6;
  int min_duration = 1;
  int max_duration = 10;
  int min_maintenance_len = 1;
  int max_maintenance_len = 5;
};

// Draws a full scenario: a fresh baseline (each job visits every machine
// exactly once in random order, durations uniform in the configured range),
// its exact optimal schedule, and a mode-dependent event list.
//   Fast: one event, category uniform over the five types.
//   Slow: per-category counts NJC~U{0,1}, NTC~U{1,2}, NMC~U{1,2},
//         NJI~U{0,2}, NMM~U{0,2}, materialized in the fixed category order
//         cancellation, time change, machine change, insertion, maintenance.
// Every event is drawn against the running post-event state, so the list is
// always applicable in order. Identical (config, seed) gives an identical
// scenario.
Scenario sample_scenario(const SamplingConfig& config, std::uint64_t seed);

// Same event sampling against a caller-supplied baseline (its exact
// schedule is computed here). The baseline is not resampled, so degenerate
// inputs (one machine, one job) can make a category unsatisfiable; that is
// reported as a DomainError.
Scenario sample_scenario_for(Instance baseline, const SamplingConfig& config,
                             std::uint64_t seed);

// The same scenario re-tagged for auto-mode prompting.
Scenario as_auto_variant(Scenario scenario);

}  // namespace djsp
