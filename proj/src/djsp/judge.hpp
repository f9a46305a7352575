#pragma once

#include <vector>

#include "djsp/events.hpp"

namespace djsp {

// Severity breakdown of a scenario, for reporting and analysis. Routing
// itself never looks at it (see classify_mode).
struct DisruptionScore {
  int affected_ops = 0;           // distinct operations touched by any event
  int maintenance_conflicts = 0;  // (window, op) clashes with the baseline plan
  int structural_changes = 0;     // jobs inserted + jobs cancelled
  int total = 0;

  friend bool operator==(const DisruptionScore&, const DisruptionScore&) = default;
};

// Routes a disturbance: one event is handled fast, anything more goes to
// the slow path. Throws DomainError on an empty list. Never returns Auto.
Mode classify_mode(const std::vector<DynamicEvent>& events);

// Counts how much of the baseline plan the scenario's events touch:
//   affected_ops: ops whose duration/machine an event changes, plus every
//     op of an inserted or cancelled job (each op counted once);
//   maintenance_conflicts: (window, op) pairs where an event's window cuts
//     into an op's busy interval in the baseline schedule;
//   structural_changes: number of job insertions plus cancellations.
// Deterministic; appending events never decreases any component.
DisruptionScore disruption_score(const Scenario& scenario);

}  // namespace djsp
