#include "djsp/repair.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "djsp/solver.hpp"

namespace djsp {
namespace {

using Sequences = std::vector<std::vector<OpRef>>;

// Semi-active timing of explicit per-machine sequences over `state`.
// Ops listed in `floors` may not start before their floor. Returns false
// when the job/sequence arcs form a cycle (possible for candidate
// insertion positions).
struct SeqTiming {
  bool ok = false;
  std::map<OpRef, int> starts;
  int makespan = 0;
};

SeqTiming time_sequences(const Instance& state, const Sequences& seqs,
                         const std::map<OpRef, int>& floors) {
  SeqTiming out;

  std::map<OpRef, OpRef> machine_pred;
  for (const auto& seq : seqs) {
    for (std::size_t i = 1; i < seq.size(); ++i) machine_pred[seq[i]] = seq[i - 1];
  }

  std::map<OpRef, int> indegree;
  std::map<OpRef, std::vector<OpRef>> successors;
  std::size_t total = 0;
  for (const auto& [label, ops] : state.jobs) {
    for (int k = 0; k < static_cast<int>(ops.size()); ++k) {
      const OpRef ref{label, k};
      ++total;
      indegree[ref];  // ensure present
      if (k > 0) {
        ++indegree[ref];
        successors[{label, k - 1}].push_back(ref);
      }
      if (auto it = machine_pred.find(ref); it != machine_pred.end()) {
        ++indegree[ref];
        successors[it->second].push_back(ref);
      }
    }
  }

  std::vector<OpRef> ready;
  for (const auto& [ref, deg] : indegree) {
    if (deg == 0) ready.push_back(ref);
  }
  std::sort(ready.begin(), ready.end());

  std::map<OpRef, int> ends;
  std::size_t done = 0;
  while (!ready.empty()) {
    const OpRef ref = ready.front();
    ready.erase(ready.begin());
    ++done;

    const Operation& op = state.jobs.at(ref.first)[ref.second];
    int machine_ready = 0;
    if (auto it = machine_pred.find(ref); it != machine_pred.end())
      machine_ready = ends.at(it->second);
    int job_ready = ref.second > 0 ? ends.at({ref.first, ref.second - 1}) : 0;
    if (auto it = floors.find(ref); it != floors.end())
      job_ready = std::max(job_ready, it->second);

    const int start = earliest_feasible_start(machine_ready, job_ready,
                                              op.duration,
                                              state.windows_for(op.machine));
    out.starts[ref] = start;
    ends[ref] = start + op.duration;
    out.makespan = std::max(out.makespan, start + op.duration);

    for (const OpRef& next : successors[ref]) {
      if (--indegree[next] == 0) {
        ready.insert(std::upper_bound(ready.begin(), ready.end(), next), next);
      }
    }
  }

  out.ok = done == total;
  if (!out.ok) {
    out.starts.clear();
    out.makespan = 0;
  }
  return out;
}

// Floors for every surviving op whose baseline position is being kept.
std::map<OpRef, int> floors_excluding(const Schedule& baseline_schedule,
                                      const Instance& state,
                                      const std::set<OpRef>& unfloored) {
  std::map<OpRef, int> floors;
  for (const auto& [ref, start] : baseline_schedule.starts) {
    if (unfloored.count(ref) != 0) continue;
    const auto jit = state.jobs.find(ref.first);
    if (jit == state.jobs.end()) continue;  // job cancelled
    if (ref.second >= static_cast<int>(jit->second.size())) continue;
    floors.emplace(ref, start);
  }
  return floors;
}

// Inserts `ref` (already an op of `state`) into the order of its machine
// at the position giving it the earliest feasible start; ties pick the
// earliest position. `placed` are the ops already released from their
// baseline floors while sequences were being rebuilt.
void insert_at_best_position(const Instance& state, Sequences& seqs,
                             const Schedule& baseline_schedule,
                             const std::set<OpRef>& placed, const OpRef& ref) {
  const int machine = state.jobs.at(ref.first)[ref.second].machine;
  const std::map<OpRef, int> floors =
      floors_excluding(baseline_schedule, state, placed);

  std::vector<OpRef>& seq = seqs[machine];
  std::size_t best_pos = 0;
  int best_start = std::numeric_limits<int>::max();
  for (std::size_t pos = 0; pos <= seq.size(); ++pos) {
    std::vector<OpRef> candidate = seq;
    candidate.insert(candidate.begin() + pos, ref);
    Sequences trial = seqs;
    trial[machine] = std::move(candidate);
    const SeqTiming timing = time_sequences(state, trial, floors);
    if (!timing.ok) continue;
    const int start = timing.starts.at(ref);
    if (start < best_start) {
      best_start = start;
      best_pos = pos;
    }
  }
  if (best_start == std::numeric_limits<int>::max())
    throw DomainError("no feasible insertion position for " + op_name(ref));
  seq.insert(seq.begin() + best_pos, ref);
}

void erase_from_sequences(Sequences& seqs, const OpRef& ref) {
  for (auto& seq : seqs) {
    seq.erase(std::remove(seq.begin(), seq.end(), ref), seq.end());
  }
}

RepairResult repair_impl(const Instance& baseline,
                         const Schedule& baseline_schedule,
                         const std::vector<DynamicEvent>& events) {
  {
    const ValidationReport report = validate(baseline, baseline_schedule);
    if (!report.feasible)
      throw DomainError("baseline schedule does not validate: " +
                        report.violations.front().detail);
  }

  // Baseline order on each machine: by start time (ties by op identity,
  // though a feasible schedule cannot tie on the same machine).
  Sequences seqs(static_cast<std::size_t>(baseline.machine_count));
  {
    std::vector<std::pair<int, OpRef>> by_start;
    for (const auto& [ref, start] : baseline_schedule.starts)
      by_start.emplace_back(start, ref);
    std::sort(by_start.begin(), by_start.end());
    for (const auto& [start, ref] : by_start)
      seqs[baseline.jobs.at(ref.first)[ref.second].machine].push_back(ref);
  }

  // Replay the events, keeping the sequences aligned with the evolving
  // instance: cancellations drop ops, machine changes and insertions
  // re-place them. `loose` collects the directly touched ops, which are
  // exempt from baseline floors from the moment their event lands.
  Instance state = baseline;
  std::set<OpRef> loose;
  for (const DynamicEvent& event : events) {
    state = apply_event(state, event);
    if (const auto* jc = std::get_if<JobCancellation>(&event)) {
      for (auto& seq : seqs) {
        seq.erase(std::remove_if(seq.begin(), seq.end(),
                                 [&](const OpRef& r) { return r.first == jc->job; }),
                  seq.end());
      }
      loose.erase(loose.lower_bound({jc->job, 0}),
                  loose.lower_bound({jc->job + 1, 0}));
    } else if (const auto* tc = std::get_if<ProcessingTimeChange>(&event)) {
      loose.insert({tc->job, tc->op});
    } else if (const auto* mc = std::get_if<MachineChange>(&event)) {
      const OpRef ref{mc->job, mc->op};
      erase_from_sequences(seqs, ref);
      loose.insert(ref);
      insert_at_best_position(state, seqs, baseline_schedule, loose, ref);
    } else if (const auto* ji = std::get_if<JobInsertion>(&event)) {
      for (int k = 0; k < static_cast<int>(ji->ops.size()); ++k) {
        const OpRef ref{ji->job_label, k};
        loose.insert(ref);
        insert_at_best_position(state, seqs, baseline_schedule, loose, ref);
      }
    } else if (const auto* mm = std::get_if<MachineMaintenance>(&event)) {
      // Ops whose baseline busy interval the new window cuts into.
      for (const auto& [ref, start] : baseline_schedule.starts) {
        const auto jit = state.jobs.find(ref.first);
        if (jit == state.jobs.end()) continue;
        if (ref.second >= static_cast<int>(jit->second.size())) continue;
        const Operation& base_op = baseline.jobs.at(ref.first)[ref.second];
        if (base_op.machine != mm->machine) continue;
        const int end = start + base_op.duration;
        if (start < mm->window.end && mm->window.start < end) loose.insert(ref);
      }
    }
  }

  // Final timing: directly touched ops move freely, everything else is
  // floored at its baseline start and can only be pushed right.
  const std::map<OpRef, int> floors =
      floors_excluding(baseline_schedule, state, loose);
  const SeqTiming timing = time_sequences(state, seqs, floors);
  if (!timing.ok) throw DomainError("repair produced a cyclic ordering");

  RepairResult out;
  out.instance = state;
  out.schedule.starts = timing.starts;
  out.makespan = timing.makespan;

  out.affected = loose;
  for (const auto& [ref, start] : timing.starts) {
    const auto bit = baseline_schedule.starts.find(ref);
    if (bit == baseline_schedule.starts.end()) continue;  // inserted
    const Operation& now = state.jobs.at(ref.first)[ref.second];
    const Operation& before = baseline.jobs.at(ref.first)[ref.second];
    if (start != bit->second ||
        start + now.duration != bit->second + before.duration) {
      out.affected.insert(ref);
    }
  }
  return out;
}

}  // namespace

std::set<OpRef> affected_operations(const Instance& baseline,
                                    const Schedule& baseline_schedule,
                                    const std::vector<DynamicEvent>& events) {
  return repair_impl(baseline, baseline_schedule, events).affected;
}

RepairResult local_repair(const Scenario& scenario) {
  return repair_impl(scenario.baseline, scenario.baseline_schedule,
                     scenario.events);
}

}  // namespace djsp
