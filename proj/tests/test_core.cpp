#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <vector>

#include "djsp/jsp_core.hpp"
#include "djsp/rng.hpp"

using namespace djsp;

namespace {

// Two jobs, two machines, no maintenance. Hand-timed reference schedule:
//   M0: J1.O1 [0,3)  J2.O2 [4,7)
//   M1: J2.O1 [0,4)  J1.O2 [4,6)
Instance two_by_two() {
  Instance instance;
  instance.machine_count = 2;
  instance.jobs[1] = {{0, 3}, {1, 2}};
  instance.jobs[2] = {{1, 4}, {0, 3}};
  return instance;
}

Schedule two_by_two_schedule() {
  Schedule s;
  s.starts = {{{1, 0}, 0}, {{1, 1}, 4}, {{2, 0}, 0}, {{2, 1}, 4}};
  return s;
}

}  // namespace

TEST_CASE("op_name renders 1-based operation indices") {
  CHECK(op_name({3, 0}) == "J3.O1");
  CHECK(op_name({12, 4}) == "J12.O5");
}

TEST_CASE("check_instance accepts a well-formed instance") {
  Instance instance = two_by_two();
  instance.maintenance[0] = {{2, 4}, {4, 6}, {9, 12}};  // touching is fine
  CHECK_NOTHROW(check_instance(instance));
  CHECK(instance.operation_count() == 4);
  CHECK(instance.windows_for(0).size() == 3);
  CHECK(instance.windows_for(1).empty());
}

TEST_CASE("check_instance rejects structural defects") {
  SUBCASE("non-positive job label") {
    Instance bad = two_by_two();
    bad.jobs[0] = {{0, 1}};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("empty job") {
    Instance bad = two_by_two();
    bad.jobs[3] = {};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("non-positive duration") {
    Instance bad = two_by_two();
    bad.jobs[1][0].duration = 0;
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("machine index out of range") {
    Instance bad = two_by_two();
    bad.jobs[1][0].machine = 2;
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("negative machine_count") {
    Instance bad;
    bad.machine_count = -1;
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("maintenance on unknown machine") {
    Instance bad = two_by_two();
    bad.maintenance[5] = {{0, 1}};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("empty window") {
    Instance bad = two_by_two();
    bad.maintenance[0] = {{3, 3}};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("negative window start") {
    Instance bad = two_by_two();
    bad.maintenance[0] = {{-1, 3}};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("overlapping windows") {
    Instance bad = two_by_two();
    bad.maintenance[0] = {{0, 5}, {4, 8}};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
  SUBCASE("unsorted windows") {
    Instance bad = two_by_two();
    bad.maintenance[0] = {{6, 8}, {0, 2}};
    CHECK_THROWS_AS(check_instance(bad), DomainError);
  }
}

TEST_CASE("add_window keeps the list sorted and merges true overlaps") {
  std::vector<Window> windows;
  add_window(windows, {5, 8});
  add_window(windows, {0, 2});
  CHECK(windows == std::vector<Window>{{0, 2}, {5, 8}});
  add_window(windows, {2, 5});  // touches both neighbours, merges neither
  CHECK(windows == std::vector<Window>{{0, 2}, {2, 5}, {5, 8}});
  add_window(windows, {1, 6});  // overlaps the first three
  CHECK(windows == std::vector<Window>{{0, 8}});
  add_window(windows, {8, 9});
  CHECK(windows == std::vector<Window>{{0, 8}, {8, 9}});
}

TEST_CASE("completion_times and makespan") {
  const Instance instance = two_by_two();
  const Schedule schedule = two_by_two_schedule();
  const std::map<OpRef, int> expected = {
      {{1, 0}, 3}, {{1, 1}, 6}, {{2, 0}, 4}, {{2, 1}, 7}};
  CHECK(completion_times(instance, schedule) == expected);
  CHECK(makespan(instance, schedule) == 7);

  SUBCASE("empty instance has makespan zero") {
    CHECK(makespan(Instance{}, Schedule{}) == 0);
  }
  SUBCASE("missing entry throws") {
    Schedule incomplete = schedule;
    incomplete.starts.erase({2, 1});
    CHECK_THROWS_AS(completion_times(instance, incomplete), DomainError);
  }
  SUBCASE("extra entry throws") {
    Schedule extra = schedule;
    extra.starts[{9, 0}] = 0;
    CHECK_THROWS_AS(completion_times(instance, extra), DomainError);
  }
}

TEST_CASE("validate accepts the reference schedule") {
  const ValidationReport report = validate(two_by_two(), two_by_two_schedule());
  CHECK(report.feasible);
  CHECK(report.violations.empty());
  CHECK(report.to_text() == "feasible");
}

TEST_CASE("validate flags precedence breaks") {
  Schedule s = two_by_two_schedule();
  s.starts[{1, 1}] = 2;  // J1.O2 starts before J1.O1 ends at 3
  const ValidationReport report = validate(two_by_two(), s);
  CHECK(!report.feasible);
  CHECK(report.has(ViolationKind::Precedence));
}

TEST_CASE("validate flags machine overlaps") {
  Schedule s = two_by_two_schedule();
  s.starts[{2, 1}] = 2;  // J2.O2 [2,5) collides with J1.O1 [0,3) on M0
  const ValidationReport report = validate(two_by_two(), s);
  CHECK(!report.feasible);
  CHECK(report.has(ViolationKind::Overlap));
  // Starting exactly at the other op's end is legal (half-open intervals).
  s.starts[{2, 1}] = 3;
  CHECK(!validate(two_by_two(), s).has(ViolationKind::Overlap));
}

TEST_CASE("validate flags maintenance clashes with half-open semantics") {
  Instance instance = two_by_two();
  instance.maintenance[0] = {{5, 8}};
  Schedule s = two_by_two_schedule();

  s.starts[{2, 1}] = 4;  // [4,7) cuts into [5,8)
  CHECK(validate(instance, s).has(ViolationKind::Maintenance));

  s.starts[{2, 1}] = 8;  // [8,11) starts exactly at window end
  CHECK(validate(instance, s).feasible);

  instance.maintenance[0] = {{3, 5}};
  s.starts[{2, 1}] = 5;  // J1.O1 [0,3) touches window start; J2.O2 at its end
  CHECK(validate(instance, s).feasible);
}

TEST_CASE("validate flags coverage problems without throwing") {
  const Instance instance = two_by_two();
  Schedule s = two_by_two_schedule();
  s.starts.erase({1, 1});
  s.starts[{7, 0}] = 1;
  const ValidationReport report = validate(instance, s);
  CHECK(!report.feasible);
  CHECK(report.has(ViolationKind::MissingOp));
  CHECK(report.has(ViolationKind::ExtraOp));
}

TEST_CASE("validate flags negative starts") {
  Schedule s = two_by_two_schedule();
  s.starts[{1, 0}] = -2;
  CHECK(validate(two_by_two(), s).has(ViolationKind::NegativeStart));
}

TEST_CASE("validate flags out-of-range machine assignments") {
  Instance instance = two_by_two();
  instance.jobs[1][0].machine = 9;  // structurally broken on purpose
  const ValidationReport report = validate(instance, two_by_two_schedule());
  CHECK(!report.feasible);
  CHECK(report.has(ViolationKind::WrongDomain));
}

TEST_CASE("validate reports every violation deterministically") {
  Instance instance = two_by_two();
  instance.maintenance[0] = {{4, 5}};
  Schedule s = two_by_two_schedule();
  s.starts[{1, 1}] = 1;   // precedence break
  s.starts[{2, 1}] = 1;   // overlap with J1.O1 on M0
  const ValidationReport first = validate(instance, s);
  const ValidationReport second = validate(instance, s);
  CHECK(!first.feasible);
  CHECK(first.violations.size() >= 3);  // precedence + overlap + maintenance
  CHECK(first.violations == second.violations);
}

TEST_CASE("rng produces the published sequence and stays in bounds") {
  Rng rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);

  Rng draw(42);
  bool saw_lo = false;
  bool saw_hi = false;
  for (int i = 0; i < 200; ++i) {
    const int v = draw.uniform(3, 5);
    CHECK(v >= 3);
    CHECK(v <= 5);
    saw_lo = saw_lo || v == 3;
    saw_hi = saw_hi || v == 5;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);

  std::vector<int> a{1, 2, 3, 4, 5, 6, 7};
  std::vector<int> b = a;
  Rng ra(7);
  Rng rb(7);
  ra.shuffle(a);
  rb.shuffle(b);
  CHECK(a == b);
  std::sort(a.begin(), a.end());
  CHECK(a == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}
