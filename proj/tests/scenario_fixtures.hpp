#pragma once

#include "djsp/events.hpp"
#include "djsp/ft06.hpp"

// The golden scenario behind the golden fixture strings: the built-in 6x6
// baseline with two processing-time changes, two machine changes and one
// maintenance window, in that order.
inline djsp::Scenario golden_scenario() {
  djsp::Scenario scenario;
  scenario.baseline = djsp::ft06();
  scenario.baseline_schedule = djsp::ft06_baseline_schedule();
  scenario.events = {
      djsp::ProcessingTimeChange{3, 0, 5, 10},
      djsp::ProcessingTimeChange{4, 2, 5, 9},
      djsp::MachineChange{5, 0, 2, 0},
      djsp::MachineChange{6, 5, 2, 0},
      djsp::MachineMaintenance{1, {8, 11}},
  };
  scenario.mode = djsp::Mode::Slow;
  scenario.seed = 0;
  return scenario;
}
