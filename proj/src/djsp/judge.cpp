#include "djsp/judge.hpp"

#include <set>

namespace djsp {

Mode classify_mode(const std::vector<DynamicEvent>& events) {
  if (events.empty())
    throw DomainError("mode classification needs at least one event");
  return events.size() == 1 ? Mode::Fast : Mode::Slow;
}

DisruptionScore disruption_score(const Scenario& scenario) {
  DisruptionScore score;
  std::set<OpRef> touched;
  Instance working = scenario.baseline;

  for (const DynamicEvent& event : scenario.events) {
    if (const auto* jc = std::get_if<JobCancellation>(&event)) {
      const auto it = working.jobs.find(jc->job);
      if (it != working.jobs.end()) {
        for (std::size_t k = 0; k < it->second.size(); ++k) {
          touched.insert({jc->job, static_cast<int>(k)});
        }
      }
      ++score.structural_changes;
    } else if (const auto* tc = std::get_if<ProcessingTimeChange>(&event)) {
      touched.insert({tc->job, tc->op});
    } else if (const auto* mc = std::get_if<MachineChange>(&event)) {
      touched.insert({mc->job, mc->op});
    } else if (const auto* ji = std::get_if<JobInsertion>(&event)) {
      for (std::size_t k = 0; k < ji->ops.size(); ++k) {
        touched.insert({ji->job_label, static_cast<int>(k)});
      }
      ++score.structural_changes;
    } else if (const auto* mm = std::get_if<MachineMaintenance>(&event)) {
      // Clashes are judged against the plan being disturbed: the baseline
      // machine assignment and starts, not any post-event state.
      for (const auto& [label, ops] : scenario.baseline.jobs) {
        for (std::size_t k = 0; k < ops.size(); ++k) {
          if (ops[k].machine != mm->machine) continue;
          const auto it =
              scenario.baseline_schedule.starts.find({label, static_cast<int>(k)});
          if (it == scenario.baseline_schedule.starts.end()) continue;
          const int start = it->second;
          const int end = start + ops[k].duration;
          if (start < mm->window.end && mm->window.start < end) {
            ++score.maintenance_conflicts;
          }
        }
      }
    }
    working = apply_event(working, event);
  }

  score.affected_ops = static_cast<int>(touched.size());
  score.total =
      score.affected_ops + score.maintenance_conflicts + score.structural_changes;
  return score;
}

}  // namespace djsp
