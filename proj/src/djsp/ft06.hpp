#pragma once

#include "djsp/jsp_core.hpp"

namespace djsp {

// The classic 6-job, 6-machine benchmark instance (optimal makespan 55).
// Ships built in so the bench command and the tests need no data files.
Instance ft06();

// A fixed optimal schedule for ft06(), used as the reference baseline for
// event-injection examples and the bench command.
Schedule ft06_baseline_schedule();

}  // namespace djsp
