#include "djsp/ft06.hpp"

namespace djsp {

Instance ft06() {
  Instance instance;
  instance.machine_count = 6;
  instance.jobs[1] = {{2, 1}, {0, 3}, {1, 6}, {3, 7}, {5, 3}, {4, 6}};
  instance.jobs[2] = {{1, 8}, {2, 5}, {4, 10}, {5, 10}, {0, 10}, {3, 4}};
  instance.jobs[3] = {{2, 5}, {3, 4}, {5, 8}, {0, 9}, {1, 1}, {4, 7}};
  instance.jobs[4] = {{1, 5}, {0, 5}, {2, 5}, {3, 3}, {4, 8}, {5, 9}};
  instance.jobs[5] = {{2, 9}, {1, 3}, {4, 5}, {5, 4}, {0, 3}, {3, 1}};
  instance.jobs[6] = {{1, 3}, {3, 3}, {5, 9}, {0, 10}, {4, 4}, {2, 1}};
  return instance;
}

Schedule ft06_baseline_schedule() {
  Schedule schedule;
  schedule.starts = {
      {{1, 0}, 5},  {{1, 1}, 6},  {{1, 2}, 16}, {{1, 3}, 22}, {{1, 4}, 42}, {{1, 5}, 49},
      {{2, 0}, 0},  {{2, 1}, 8},  {{2, 2}, 13}, {{2, 3}, 28}, {{2, 4}, 38}, {{2, 5}, 48},
      {{3, 0}, 0},  {{3, 1}, 5},  {{3, 2}, 9},  {{3, 3}, 18}, {{3, 4}, 27}, {{3, 5}, 30},
      {{4, 0}, 8},  {{4, 1}, 13}, {{4, 2}, 22}, {{4, 3}, 29}, {{4, 4}, 37}, {{4, 5}, 45},
      {{5, 0}, 13}, {{5, 1}, 22}, {{5, 2}, 25}, {{5, 3}, 38}, {{5, 4}, 48}, {{5, 5}, 52},
      {{6, 0}, 13}, {{6, 1}, 16}, {{6, 2}, 19}, {{6, 3}, 28}, {{6, 4}, 45}, {{6, 5}, 49},
  };
  return schedule;
}

}  // namespace djsp
