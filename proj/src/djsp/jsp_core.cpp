#include "djsp/jsp_core.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace djsp {

namespace {

bool intervals_overlap(int a_start, int a_end, int b_start, int b_end) {
  return a_start < b_end && b_start < a_end;
}

std::string interval_text(int start, int end) {
  return "[" + std::to_string(start) + ", " + std::to_string(end) + ")";
}

}  // namespace

int Instance::operation_count() const {
  int total = 0;
  for (const auto& [label, ops] : jobs) total += static_cast<int>(ops.size());
  return total;
}

const std::vector<Window>& Instance::windows_for(int machine) const {
  static const std::vector<Window> kEmpty;
  auto it = maintenance.find(machine);
  return it == maintenance.end() ? kEmpty : it->second;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Precedence: return "precedence";
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::Maintenance: return "maintenance";
    case ViolationKind::MissingOp: return "missing_op";
    case ViolationKind::ExtraOp: return "extra_op";
    case ViolationKind::NegativeStart: return "negative_start";
    case ViolationKind::WrongDomain: return "wrong_domain";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  if (feasible) {
    out << "feasible";
    return out.str();
  }
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out << '\n';
    out << to_string(violations[i].kind) << ": " << violations[i].detail;
  }
  return out.str();
}

void check_instance(const Instance& instance) {
  if (instance.machine_count < 0) throw DomainError("machine_count must be non-negative");
  for (const auto& [label, ops] : instance.jobs) {
    if (label <= 0) throw DomainError("job label must be positive, got " + std::to_string(label));
    if (ops.empty()) throw DomainError("job J" + std::to_string(label) + " has no operations");
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const Operation& op = ops[k];
      const std::string name = op_name({label, static_cast<int>(k)});
      if (op.duration < 1)
        throw DomainError(name + " has non-positive duration " + std::to_string(op.duration));
      if (op.machine < 0 || op.machine >= instance.machine_count)
        throw DomainError(name + " references machine " + std::to_string(op.machine) +
                          " outside [0, " + std::to_string(instance.machine_count) + ")");
    }
  }
  for (const auto& [machine, windows] : instance.maintenance) {
    if (machine < 0 || machine >= instance.machine_count)
      throw DomainError("maintenance references machine " + std::to_string(machine) +
                        " outside [0, " + std::to_string(instance.machine_count) + ")");
    int previous_end = -1;
    for (const Window& w : windows) {
      if (w.start < 0 || w.start >= w.end)
        throw DomainError("malformed maintenance window " + interval_text(w.start, w.end) +
                          " on machine M" + std::to_string(machine));
      if (w.start < previous_end)
        throw DomainError("maintenance windows on machine M" + std::to_string(machine) +
                          " are not sorted and disjoint");
      previous_end = w.end;
    }
  }
}

void add_window(std::vector<Window>& windows, Window window) {
  windows.push_back(window);
  std::sort(windows.begin(), windows.end(), [](const Window& a, const Window& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });
  std::vector<Window> merged;
  for (const Window& w : windows) {
    if (!merged.empty() && w.start < merged.back().end) {
      merged.back().end = std::max(merged.back().end, w.end);
    } else {
      merged.push_back(w);
    }
  }
  windows = std::move(merged);
}

std::map<OpRef, int> completion_times(const Instance& instance, const Schedule& schedule) {
  std::map<OpRef, int> ends;
  for (const auto& [label, ops] : instance.jobs) {
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const OpRef ref{label, static_cast<int>(k)};
      auto it = schedule.starts.find(ref);
      if (it == schedule.starts.end())
        throw DomainError("schedule has no entry for " + op_name(ref));
      ends[ref] = it->second + ops[k].duration;
    }
  }
  for (const auto& [ref, start] : schedule.starts) {
    if (!ends.count(ref))
      throw DomainError("schedule has an entry for unknown operation " + op_name(ref));
  }
  return ends;
}

int makespan(const Instance& instance, const Schedule& schedule) {
  int best = 0;
  for (const auto& [ref, end] : completion_times(instance, schedule)) best = std::max(best, end);
  return best;
}

ValidationReport validate(const Instance& instance, const Schedule& schedule) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  // Coverage first: later checks only consider entries that belong.
  for (const auto& [label, ops] : instance.jobs) {
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const OpRef ref{label, static_cast<int>(k)};
      if (!schedule.starts.count(ref))
        add(ViolationKind::MissingOp, op_name(ref) + " has no start time");
    }
  }
  for (const auto& [ref, start] : schedule.starts) {
    auto job_it = instance.jobs.find(ref.first);
    const bool known = job_it != instance.jobs.end() && ref.second >= 0 &&
                       ref.second < static_cast<int>(job_it->second.size());
    if (!known)
      add(ViolationKind::ExtraOp, op_name(ref) + " is not an operation of the instance");
  }

  struct Placed {
    OpRef ref;
    int start;
    int end;
  };
  std::map<int, std::vector<Placed>> by_machine;

  for (const auto& [label, ops] : instance.jobs) {
    int previous_end = -1;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const OpRef ref{label, static_cast<int>(k)};
      auto it = schedule.starts.find(ref);
      if (it == schedule.starts.end()) {
        previous_end = -1;  // broken chain; skip dependent precedence checks
        continue;
      }
      const int start = it->second;
      const int end = start + ops[k].duration;
      if (start < 0)
        add(ViolationKind::NegativeStart, op_name(ref) + " starts at " + std::to_string(start));
      if (previous_end >= 0 && start < previous_end)
        add(ViolationKind::Precedence,
            op_name(ref) + " starts at " + std::to_string(start) + " before " +
                op_name({label, static_cast<int>(k) - 1}) + " ends at " +
                std::to_string(previous_end));
      if (ops[k].machine < 0 || ops[k].machine >= instance.machine_count) {
        add(ViolationKind::WrongDomain,
            op_name(ref) + " is assigned to machine " + std::to_string(ops[k].machine) +
                " outside [0, " + std::to_string(instance.machine_count) + ")");
      } else {
        by_machine[ops[k].machine].push_back({ref, start, end});
      }
      previous_end = end;
    }
  }

  for (auto& [machine, placed] : by_machine) {
    std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
      return std::tie(a.start, a.ref) < std::tie(b.start, b.ref);
    });
    for (std::size_t i = 0; i + 1 < placed.size(); ++i) {
      const Placed& a = placed[i];
      const Placed& b = placed[i + 1];
      if (intervals_overlap(a.start, a.end, b.start, b.end))
        add(ViolationKind::Overlap,
            op_name(a.ref) + " " + interval_text(a.start, a.end) + " and " + op_name(b.ref) +
                " " + interval_text(b.start, b.end) + " overlap on machine M" +
                std::to_string(machine));
    }
    for (const Placed& p : placed) {
      for (const Window& w : instance.windows_for(machine)) {
        if (intervals_overlap(p.start, p.end, w.start, w.end))
          add(ViolationKind::Maintenance,
              op_name(p.ref) + " " + interval_text(p.start, p.end) +
                  " overlaps maintenance " + interval_text(w.start, w.end) + " on machine M" +
                  std::to_string(machine));
      }
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

}  // namespace djsp
