#pragma once

#include <set>
#include <vector>

#include "djsp/events.hpp"
#include "djsp/jsp_core.hpp"

namespace djsp {

// Outcome of a local right-shift adjustment.
struct RepairResult {
  Instance instance;  // the post-event instance being scheduled
  Schedule schedule;
  std::set<OpRef> affected;
  int makespan = 0;

  friend bool operator==(const RepairResult&, const RepairResult&) = default;
};

// The blast radius of an event list: operations an adjustment is allowed
// to move. Seeds are the directly touched ops (duration or machine
// changed, every op of an inserted job, ops whose baseline busy interval
// an event's new maintenance window cuts into); the set then grows along
// job and machine arcs to every op whose start or completion actually
// changes under the repair timing below. Ops of cancelled jobs no longer
// exist and are never listed.
std::set<OpRef> affected_operations(const Instance& baseline,
                                    const Schedule& baseline_schedule,
                                    const std::vector<DynamicEvent>& events);

// Deterministic local adjustment of the baseline schedule:
//   sequences: each machine keeps its baseline operation order restricted
//     to surviving ops; a machine-changed op is pulled out and re-inserted
//     into its new machine's order at the position giving it the earliest
//     feasible start (ties: earliest position); inserted jobs place their
//     ops the same way, op by op in job order;
//   timing: semi-active replay of those sequences where every op outside
//     the affected set is floored at its baseline start — unaffected ops
//     never move earlier, and with no pushing predecessor they keep their
//     baseline start exactly.
// The result always validates against the post-event instance; optimality
// is deliberately not promised (measured against solve_exact instead).
RepairResult local_repair(const Scenario& scenario);

}  // namespace djsp
