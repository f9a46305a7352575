#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace djsp {

/// All times are integral and unit-free. Intervals are half-open: an
/// operation occupying [s, s+p) may end exactly where the next one (or a
/// maintenance window) begins.

// One processing step of a job, bound to a single machine.
struct Operation {
  int machine = 0;   // 0-based machine index
  int duration = 0;  // processing time, >= 1

  friend bool operator==(const Operation&, const Operation&) = default;
};

// Unavailable interval [start, end) of one machine.
struct Window {
  int start = 0;
  int end = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

// Identifies one operation: job label (positive, rendered "J3") and 0-based
// op index (rendered 1-based as "O1").
using OpRef = std::pair<int, int>;

inline std::string op_name(const OpRef& ref) {
  return "J" + std::to_string(ref.first) + ".O" + std::to_string(ref.second + 1);
}

// A job-shop instance: jobs keyed by label, each an ordered operation list,
// plus per-machine maintenance windows. Job labels need not be contiguous
// (cancellation leaves gaps).
struct Instance {
  std::map<int, std::vector<Operation>> jobs;
  int machine_count = 0;
  std::map<int, std::vector<Window>> maintenance;  // sorted, non-overlapping

  int operation_count() const;
  const std::vector<Window>& windows_for(int machine) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Start time per operation of the associated instance.
struct Schedule {
  std::map<OpRef, int> starts;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class ViolationKind {
  Precedence,
  Overlap,
  Maintenance,
  MissingOp,
  ExtraOp,
  NegativeStart,
  WrongDomain,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Full constraint report; `feasible` iff `violations` is empty.
struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;

  bool has(ViolationKind kind) const;
  std::string to_text() const;
};

// Raised when inputs break a documented precondition (bad instance data,
// schedule/instance coverage mismatch, inapplicable event, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throws DomainError describing the first structural defect, if any:
// non-positive label, empty job, duration < 1, machine index out of range,
// malformed maintenance window.
void check_instance(const Instance& instance);

// Inserts a window into a sorted, pairwise-disjoint list, merging true
// overlaps. Touching windows ([3,5) then [5,7)) stay separate.
void add_window(std::vector<Window>& windows, Window window);

// End time (start + duration) of every operation. Throws DomainError when
// the schedule does not cover the instance exactly.
std::map<OpRef, int> completion_times(const Instance& instance, const Schedule& schedule);

// Maximum completion time over all operations; 0 for an empty instance.
int makespan(const Instance& instance, const Schedule& schedule);

// Checks a candidate schedule against the instance. Never throws: coverage
// gaps, precedence breaks, machine overlaps, maintenance clashes and
// negative starts all land in the report. Pure; detail strings are
// deterministic for identical inputs.
ValidationReport validate(const Instance& instance, const Schedule& schedule);

}  // namespace djsp
