#include "djsp/events.hpp"

#include <algorithm>
#include <numeric>

#include "djsp/rng.hpp"
#include "djsp/solver.hpp"

namespace djsp {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Fast: return "fast";
    case Mode::Slow: return "slow";
    case Mode::Auto: return "auto";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& text) {
  if (text == "fast") return Mode::Fast;
  if (text == "slow") return Mode::Slow;
  if (text == "auto") return Mode::Auto;
  throw DomainError("unknown mode \"" + text + "\" (expected fast, slow or auto)");
}

namespace {

std::vector<Operation>& find_job(Instance& state, int job) {
  auto it = state.jobs.find(job);
  if (it == state.jobs.end())
    throw DomainError("event references job J" + std::to_string(job) +
                      ", which is not in the instance");
  return it->second;
}

Operation& find_op(Instance& state, int job, int op) {
  auto& ops = find_job(state, job);
  if (op < 0 || op >= static_cast<int>(ops.size()))
    throw DomainError("event references " + op_name({job, op}) + ", but J" +
                      std::to_string(job) + " has " + std::to_string(ops.size()) +
                      " operations");
  return ops[static_cast<std::size_t>(op)];
}

void apply_one(Instance& state, const JobCancellation& e) {
  find_job(state, e.job);
  state.jobs.erase(e.job);
}

void apply_one(Instance& state, const ProcessingTimeChange& e) {
  Operation& op = find_op(state, e.job, e.op);
  if (op.duration != e.old_pt)
    throw DomainError("stale processing-time change for " + op_name({e.job, e.op}) +
                      ": event says " + std::to_string(e.old_pt) + ", state has " +
                      std::to_string(op.duration));
  if (e.new_pt < 1)
    throw DomainError("processing-time change for " + op_name({e.job, e.op}) +
                      " sets non-positive duration " + std::to_string(e.new_pt));
  op.duration = e.new_pt;
}

void apply_one(Instance& state, const MachineChange& e) {
  Operation& op = find_op(state, e.job, e.op);
  if (op.machine != e.old_machine)
    throw DomainError("stale machine change for " + op_name({e.job, e.op}) +
                      ": event says M" + std::to_string(e.old_machine) +
                      ", state has M" + std::to_string(op.machine));
  if (e.new_machine < 0 || e.new_machine >= state.machine_count)
    throw DomainError("machine change for " + op_name({e.job, e.op}) +
                      " targets machine " + std::to_string(e.new_machine) +
                      " outside [0, " + std::to_string(state.machine_count) + ")");
  op.machine = e.new_machine;
}

void apply_one(Instance& state, const JobInsertion& e) {
  if (state.jobs.count(e.job_label))
    throw DomainError("job insertion reuses existing label J" +
                      std::to_string(e.job_label));
  if (e.job_label <= 0)
    throw DomainError("job insertion label must be positive, got " +
                      std::to_string(e.job_label));
  if (e.ops.empty())
    throw DomainError("job insertion for J" + std::to_string(e.job_label) +
                      " carries no operations");
  for (std::size_t k = 0; k < e.ops.size(); ++k) {
    if (e.ops[k].duration < 1)
      throw DomainError("inserted " + op_name({e.job_label, static_cast<int>(k)}) +
                        " has non-positive duration");
    if (e.ops[k].machine < 0 || e.ops[k].machine >= state.machine_count)
      throw DomainError("inserted " + op_name({e.job_label, static_cast<int>(k)}) +
                        " references machine " + std::to_string(e.ops[k].machine) +
                        " outside [0, " + std::to_string(state.machine_count) + ")");
  }
  state.jobs[e.job_label] = e.ops;
}

void apply_one(Instance& state, const MachineMaintenance& e) {
  if (e.machine < 0 || e.machine >= state.machine_count)
    throw DomainError("maintenance targets machine " + std::to_string(e.machine) +
                      " outside [0, " + std::to_string(state.machine_count) + ")");
  if (e.window.start < 0 || e.window.start >= e.window.end)
    throw DomainError("maintenance window [" + std::to_string(e.window.start) +
                      ", " + std::to_string(e.window.end) + ") is malformed");
  add_window(state.maintenance[e.machine], e.window);
}

}  // namespace

Instance apply_event(const Instance& state, const DynamicEvent& event) {
  Instance next = state;
  std::visit([&next](const auto& e) { apply_one(next, e); }, event);
  return next;
}

ProcessorTrace run_processor(const Instance& baseline,
                             const std::vector<DynamicEvent>& events) {
  ProcessorTrace trace;
  trace.final = baseline;
  for (std::size_t i = 0; i < events.size(); ++i) {
    try {
      trace.final = apply_event(trace.final, events[i]);
    } catch (const DomainError& err) {
      throw DomainError("step " + std::to_string(i + 1) + ": " + err.what());
    }
    trace.steps.push_back({events[i], trace.final});
  }
  return trace;
}

namespace {

std::vector<Operation> sample_job_ops(Rng& rng, int machines,
                                      const SamplingConfig& config) {
  std::vector<int> order(static_cast<std::size_t>(machines));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<Operation> ops;
  ops.reserve(order.size());
  for (int machine : order) {
    ops.push_back({machine, rng.uniform(config.min_duration, config.max_duration)});
  }
  return ops;
}

int pick_label(Rng& rng, const Instance& state) {
  std::vector<int> labels;
  labels.reserve(state.jobs.size());
  for (const auto& [label, ops] : state.jobs) labels.push_back(label);
  if (labels.empty())
    throw DomainError("cannot sample an event target: the instance has no jobs");
  return labels[static_cast<std::size_t>(
      rng.uniform(0, static_cast<int>(labels.size()) - 1))];
}

// One event of the given category (0=JC, 1=TC, 2=MC, 3=JI, 4=MM), drawn
// against and applied to the working state. `next_label` tracks labels ever
// used in this scenario so insertions never recycle a cancelled label.
DynamicEvent materialize(int category, Rng& rng, Instance& state,
                         int baseline_makespan, int& next_label,
                         const SamplingConfig& config) {
  DynamicEvent event;
  switch (category) {
    case 0: {
      event = JobCancellation{pick_label(rng, state)};
      break;
    }
    case 1: {
      const int job = pick_label(rng, state);
      const auto& ops = state.jobs.at(job);
      const int op = rng.uniform(0, static_cast<int>(ops.size()) - 1);
      const int old_pt = ops[static_cast<std::size_t>(op)].duration;
      if (config.min_duration >= config.max_duration)
        throw DomainError("cannot sample a processing-time change: the duration "
                          "range has a single value");
      int new_pt = old_pt;
      while (new_pt == old_pt) {
        new_pt = rng.uniform(config.min_duration, config.max_duration);
      }
      event = ProcessingTimeChange{job, op, old_pt, new_pt};
      break;
    }
    case 2: {
      const int job = pick_label(rng, state);
      const auto& ops = state.jobs.at(job);
      const int op = rng.uniform(0, static_cast<int>(ops.size()) - 1);
      const int old_machine = ops[static_cast<std::size_t>(op)].machine;
      if (state.machine_count < 2)
        throw DomainError("cannot sample a machine change: the instance has "
                          "fewer than two machines");
      int new_machine = old_machine;
      while (new_machine == old_machine) {
        new_machine = rng.uniform(0, state.machine_count - 1);
      }
      event = MachineChange{job, op, old_machine, new_machine};
      break;
    }
    case 3: {
      event = JobInsertion{next_label++,
                           sample_job_ops(rng, state.machine_count, config)};
      break;
    }
    case 4: {
      const int machine = rng.uniform(0, state.machine_count - 1);
      const int start = rng.uniform(0, baseline_makespan);
      const int length =
          rng.uniform(config.min_maintenance_len, config.max_maintenance_len);
      event = MachineMaintenance{machine, {start, start + length}};
      break;
    }
  }
  state = apply_event(state, event);
  return event;
}

Scenario finish_scenario(Instance baseline, const SamplingConfig& config,
                         std::uint64_t seed, Rng& rng) {
  if (config.mode == Mode::Auto)
    throw DomainError("sampling draws fast or slow scenarios; tag auto "
                      "variants afterwards");
  check_instance(baseline);

  Scenario scenario;
  scenario.mode = config.mode;
  scenario.seed = seed;
  scenario.baseline = std::move(baseline);
  scenario.baseline_schedule = solve_exact(scenario.baseline).schedule;
  const int baseline_makespan =
      makespan(scenario.baseline, scenario.baseline_schedule);

  int next_label = 1;
  for (const auto& [label, ops] : scenario.baseline.jobs) {
    next_label = std::max(next_label, label + 1);
  }

  Instance working = scenario.baseline;
  if (config.mode == Mode::Fast) {
    const int category = rng.uniform(0, 4);
    scenario.events.push_back(materialize(category, rng, working,
                                          baseline_makespan, next_label, config));
  } else {
    const int counts[5] = {rng.uniform(0, 1), rng.uniform(1, 2), rng.uniform(1, 2),
                           rng.uniform(0, 2), rng.uniform(0, 2)};
    for (int category = 0; category < 5; ++category) {
      for (int i = 0; i < counts[category]; ++i) {
        scenario.events.push_back(materialize(
            category, rng, working, baseline_makespan, next_label, config));
      }
    }
  }
  return scenario;
}

}  // namespace

Scenario sample_scenario(const SamplingConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const int jobs = rng.uniform(config.min_jobs, config.max_jobs);
  const int machines = rng.uniform(config.min_machines, config.max_machines);
  Instance baseline;
  baseline.machine_count = machines;
  for (int j = 1; j <= jobs; ++j) {
    baseline.jobs[j] = sample_job_ops(rng, machines, config);
  }
  return finish_scenario(std::move(baseline), config, seed, rng);
}

Scenario sample_scenario_for(Instance baseline, const SamplingConfig& config,
                             std::uint64_t seed) {
  Rng rng(seed);
  return finish_scenario(std::move(baseline), config, seed, rng);
}

Scenario as_auto_variant(Scenario scenario) {
  scenario.mode = Mode::Auto;
  return scenario;
}

}  // namespace djsp
