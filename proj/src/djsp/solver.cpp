#include "djsp/solver.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace djsp {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

int earliest_feasible_start(int machine_ready, int job_ready, int duration,
                            const std::vector<Window>& windows) {
  int t = std::max({machine_ready, job_ready, 0});
  for (const Window& w : windows) {
    if (t < w.end && w.start < t + duration) t = w.end;
  }
  return t;
}

namespace {

// Flattened view of an instance: operations get dense ids so the search can
// use plain arrays.
struct Flat {
  const Instance* instance = nullptr;
  int op_count = 0;
  std::vector<int> job_label;   // per op id
  std::vector<int> op_index;
  std::vector<int> machine;
  std::vector<int> duration;
  std::vector<int> job_pred;  // op id or -1
  std::vector<int> job_succ;  // op id or -1
  // Per machine, op ids sorted by (job label, op index).
  std::vector<std::vector<int>> machine_ops;

  explicit Flat(const Instance& inst) : instance(&inst) {
    machine_ops.resize(static_cast<std::size_t>(inst.machine_count));
    for (const auto& [label, ops] : inst.jobs) {
      for (std::size_t k = 0; k < ops.size(); ++k) {
        int id = op_count++;
        job_label.push_back(label);
        op_index.push_back(static_cast<int>(k));
        machine.push_back(ops[k].machine);
        duration.push_back(ops[k].duration);
        job_pred.push_back(k == 0 ? -1 : id - 1);
        job_succ.push_back(k + 1 == ops.size() ? -1 : id + 1);
        machine_ops[static_cast<std::size_t>(ops[k].machine)].push_back(id);
      }
    }
  }

  const std::vector<Window>& windows_of(int op) const {
    return instance->windows_for(machine[static_cast<std::size_t>(op)]);
  }

  Schedule to_schedule(const std::vector<int>& starts) const {
    Schedule schedule;
    for (int u = 0; u < op_count; ++u) {
      schedule.starts[{job_label[static_cast<std::size_t>(u)],
                       op_index[static_cast<std::size_t>(u)]}] =
          starts[static_cast<std::size_t>(u)];
    }
    return schedule;
  }
};

// Semi-active timing of a *complete* set of per-machine orders. Returns
// false when the combined precedence/sequencing graph has a cycle.
bool time_orders(const Flat& flat, const std::vector<std::vector<int>>& orders,
                 std::vector<int>& starts, int& makespan) {
  const int n = flat.op_count;
  starts.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> machine_pred(static_cast<std::size_t>(n), -1);
  std::vector<int> machine_succ(static_cast<std::size_t>(n), -1);
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& order : orders) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      machine_pred[static_cast<std::size_t>(order[i])] = order[i - 1];
      machine_succ[static_cast<std::size_t>(order[i - 1])] = order[i];
    }
  }
  for (int u = 0; u < n; ++u) {
    auto su = static_cast<std::size_t>(u);
    indegree[su] = (flat.job_pred[su] >= 0 ? 1 : 0) + (machine_pred[su] >= 0 ? 1 : 0);
  }
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    if (indegree[static_cast<std::size_t>(u)] == 0) queue.push_back(u);
  }
  makespan = 0;
  std::size_t head = 0;
  while (head < queue.size()) {
    int u = queue[head++];
    auto su = static_cast<std::size_t>(u);
    int machine_ready = 0;
    if (machine_pred[su] >= 0) {
      auto sp = static_cast<std::size_t>(machine_pred[su]);
      machine_ready = starts[sp] + flat.duration[sp];
    }
    int job_ready = 0;
    if (flat.job_pred[su] >= 0) {
      auto sp = static_cast<std::size_t>(flat.job_pred[su]);
      job_ready = starts[sp] + flat.duration[sp];
    }
    starts[su] = earliest_feasible_start(machine_ready, job_ready,
                                         flat.duration[su], flat.windows_of(u));
    makespan = std::max(makespan, starts[su] + flat.duration[su]);
    for (int v : {flat.job_succ[su], machine_succ[su]}) {
      if (v >= 0 && --indegree[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
  }
  return head == static_cast<std::size_t>(n);
}

class ExactSearch {
 public:
  ExactSearch(const Flat& flat, std::chrono::duration<double> time_limit)
      : flat_(flat),
        time_limit_(time_limit),
        start_time_(std::chrono::steady_clock::now()) {
    const auto n = static_cast<std::size_t>(flat.op_count);
    sequenced_.assign(n, false);
    machine_pred_.assign(n, -1);
    machine_succ_.assign(n, -1);
    heads_.assign(n, 0);
    tails_.assign(n, 0);
    indegree_.assign(n, 0);
    topo_.reserve(n);
    prefix_.resize(flat.machine_ops.size());
    remaining_.resize(flat.machine_ops.size());
    for (std::size_t m = 0; m < flat.machine_ops.size(); ++m) {
      remaining_[m] = static_cast<int>(flat.machine_ops[m].size());
      prefix_[m].reserve(flat.machine_ops[m].size());
    }
  }

  void seed(int makespan, std::vector<int> starts) {
    best_makespan_ = makespan;
    best_starts_ = std::move(starts);
  }

  void run() { dfs(); }

  bool timed_out() const { return timed_out_; }
  std::int64_t nodes() const { return nodes_; }
  int best_makespan() const { return best_makespan_; }
  const std::vector<int>& best_starts() const { return best_starts_; }

 private:
  bool out_of_time() {
    if (!timed_out_ &&
        std::chrono::steady_clock::now() - start_time_ > time_limit_) {
      timed_out_ = true;
    }
    return timed_out_;
  }

  // Longest paths from the virtual source (heads, window-aware) in the graph
  // induced by job arcs plus the committed machine prefixes; every
  // unsequenced operation additionally follows the last prefix op of its
  // machine. Returns false on a cycle. Fills topo_ with a topological order.
  bool compute_heads() {
    const int n = flat_.op_count;
    topo_.clear();
    for (int u = 0; u < n; ++u) {
      auto su = static_cast<std::size_t>(u);
      int mp = machine_pred_[su];
      if (mp < 0 && !sequenced_[su]) {
        const auto& prefix = prefix_[static_cast<std::size_t>(flat_.machine[su])];
        if (!prefix.empty()) mp = prefix.back();
      }
      indegree_[su] = (flat_.job_pred[su] >= 0 ? 1 : 0) + (mp >= 0 ? 1 : 0);
      if (indegree_[su] == 0) topo_.push_back(u);
    }
    std::size_t head = 0;
    while (head < topo_.size()) {
      int u = topo_[head++];
      auto su = static_cast<std::size_t>(u);
      int mp = machine_pred_[su];
      if (mp < 0 && !sequenced_[su]) {
        const auto& prefix = prefix_[static_cast<std::size_t>(flat_.machine[su])];
        if (!prefix.empty()) mp = prefix.back();
      }
      int machine_ready = 0;
      if (mp >= 0) {
        auto sp = static_cast<std::size_t>(mp);
        machine_ready = heads_[sp] + flat_.duration[sp];
      }
      int job_ready = 0;
      if (flat_.job_pred[su] >= 0) {
        auto sp = static_cast<std::size_t>(flat_.job_pred[su]);
        job_ready = heads_[sp] + flat_.duration[sp];
      }
      heads_[su] = earliest_feasible_start(machine_ready, job_ready,
                                           flat_.duration[su], flat_.windows_of(u));
      if (flat_.job_succ[su] >= 0) {
        auto sv = static_cast<std::size_t>(flat_.job_succ[su]);
        if (--indegree_[sv] == 0) topo_.push_back(flat_.job_succ[su]);
      }
      if (sequenced_[su]) {
        int ms = machine_succ_[su];
        if (ms >= 0) {
          if (--indegree_[static_cast<std::size_t>(ms)] == 0) topo_.push_back(ms);
        } else {
          // Last committed op feeds every unsequenced op of its machine.
          const auto& prefix = prefix_[static_cast<std::size_t>(flat_.machine[su])];
          if (!prefix.empty() && prefix.back() == u) {
            for (int v : flat_.machine_ops[static_cast<std::size_t>(flat_.machine[su])]) {
              auto sv = static_cast<std::size_t>(v);
              if (!sequenced_[sv] && --indegree_[sv] == 0) topo_.push_back(v);
            }
          }
        }
      }
    }
    return topo_.size() == static_cast<std::size_t>(n);
  }

  // Longest remaining-work paths to the sink (tails). Maintenance windows
  // are ignored here on purpose: without them the tail is a valid lower
  // bound on the work that must still follow each op, because every counted
  // arc exists in any completion of this node. Processes ops in reverse
  // topological order of the heads pass.
  void compute_tails() {
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
      int u = *it;
      auto su = static_cast<std::size_t>(u);
      int tail = 0;
      if (flat_.job_succ[su] >= 0) {
        auto sv = static_cast<std::size_t>(flat_.job_succ[su]);
        tail = std::max(tail, flat_.duration[sv] + tails_[sv]);
      }
      if (sequenced_[su]) {
        int ms = machine_succ_[su];
        if (ms >= 0) {
          auto sv = static_cast<std::size_t>(ms);
          tail = std::max(tail, flat_.duration[sv] + tails_[sv]);
        } else {
          const auto& prefix = prefix_[static_cast<std::size_t>(flat_.machine[su])];
          if (!prefix.empty() && prefix.back() == u) {
            for (int v : flat_.machine_ops[static_cast<std::size_t>(flat_.machine[su])]) {
              auto sv = static_cast<std::size_t>(v);
              if (!sequenced_[sv]) tail = std::max(tail, flat_.duration[sv] + tails_[sv]);
            }
          }
        }
      }
      tails_[su] = tail;
    }
  }

  int bound() const {
    int lb = 0;
    for (int u = 0; u < flat_.op_count; ++u) {
      auto su = static_cast<std::size_t>(u);
      lb = std::max(lb, heads_[su] + flat_.duration[su] + tails_[su]);
    }
    // One-machine bound over the still-unsequenced operations of each machine.
    for (std::size_t m = 0; m < flat_.machine_ops.size(); ++m) {
      if (remaining_[m] == 0) continue;
      int min_head = std::numeric_limits<int>::max();
      int min_tail = std::numeric_limits<int>::max();
      int load = 0;
      for (int u : flat_.machine_ops[m]) {
        auto su = static_cast<std::size_t>(u);
        if (sequenced_[su]) continue;
        min_head = std::min(min_head, heads_[su]);
        min_tail = std::min(min_tail, tails_[su]);
        load += flat_.duration[su];
      }
      lb = std::max(lb, min_head + load + min_tail);
    }
    return lb;
  }

  int pick_machine() const {
    int best = -1;
    for (std::size_t m = 0; m < remaining_.size(); ++m) {
      if (remaining_[m] == 0) continue;
      if (best < 0 || remaining_[m] > remaining_[static_cast<std::size_t>(best)]) {
        best = static_cast<int>(m);
      }
    }
    return best;
  }

  void dfs() {
    ++nodes_;
    if (out_of_time()) return;
    if (!compute_heads()) return;  // cycle: no completion exists
    int candidate_makespan = 0;
    for (int u = 0; u < flat_.op_count; ++u) {
      auto su = static_cast<std::size_t>(u);
      candidate_makespan =
          std::max(candidate_makespan, heads_[su] + flat_.duration[su]);
    }
    int machine = pick_machine();
    if (machine < 0) {
      if (candidate_makespan < best_makespan_) {
        best_makespan_ = candidate_makespan;
        best_starts_.assign(heads_.begin(), heads_.end());
      }
      return;
    }
    compute_tails();
    if (bound() >= best_makespan_) return;
    auto sm = static_cast<std::size_t>(machine);
    for (int u : flat_.machine_ops[sm]) {
      auto su = static_cast<std::size_t>(u);
      if (sequenced_[su]) continue;
      int prev = prefix_[sm].empty() ? -1 : prefix_[sm].back();
      prefix_[sm].push_back(u);
      sequenced_[su] = true;
      machine_pred_[su] = prev;
      if (prev >= 0) machine_succ_[static_cast<std::size_t>(prev)] = u;
      --remaining_[sm];
      dfs();
      ++remaining_[sm];
      if (prev >= 0) machine_succ_[static_cast<std::size_t>(prev)] = -1;
      machine_pred_[su] = -1;
      sequenced_[su] = false;
      prefix_[sm].pop_back();
      if (timed_out_) return;
    }
  }

  const Flat& flat_;
  std::chrono::duration<double> time_limit_;
  std::chrono::steady_clock::time_point start_time_;
  bool timed_out_ = false;
  std::int64_t nodes_ = 0;

  std::vector<char> sequenced_;
  std::vector<int> machine_pred_;
  std::vector<int> machine_succ_;
  std::vector<std::vector<int>> prefix_;
  std::vector<int> remaining_;

  std::vector<int> heads_;
  std::vector<int> tails_;
  std::vector<int> indegree_;
  std::vector<int> topo_;

  int best_makespan_ = std::numeric_limits<int>::max();
  std::vector<int> best_starts_;
};

struct DispatchOutcome {
  std::vector<int> starts;
  int makespan = 0;
};

DispatchOutcome run_dispatch(const Flat& flat, DispatchRule rule) {
  const int n = flat.op_count;
  DispatchOutcome out;
  out.starts.assign(static_cast<std::size_t>(n), 0);

  // Remaining processing time of the job from each op (inclusive).
  std::vector<int> rem_work(static_cast<std::size_t>(n), 0);
  for (int u = n - 1; u >= 0; --u) {
    auto su = static_cast<std::size_t>(u);
    rem_work[su] = flat.duration[su] +
                   (flat.job_succ[su] >= 0
                        ? rem_work[static_cast<std::size_t>(flat.job_succ[su])]
                        : 0);
  }

  std::vector<int> machine_ready(flat.machine_ops.size(), 0);
  // Frontier: the next unscheduled op of each job (op id), plus its ready time.
  std::vector<int> frontier;
  std::vector<int> job_ready_of(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    if (flat.job_pred[u] < 0) frontier.push_back(u);
  }
  std::sort(frontier.begin(), frontier.end());

  int scheduled = 0;
  while (scheduled < n) {
    // Earliest completion over all frontier ops; its machine hosts the
    // conflict set.
    int best_phi = std::numeric_limits<int>::max();
    int best_machine = -1;
    int best_label = std::numeric_limits<int>::max();
    std::vector<int> sigma(frontier.size(), 0);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      int u = frontier[i];
      auto su = static_cast<std::size_t>(u);
      sigma[i] = earliest_feasible_start(
          machine_ready[static_cast<std::size_t>(flat.machine[su])],
          job_ready_of[su], flat.duration[su], flat.windows_of(u));
      int phi = sigma[i] + flat.duration[su];
      if (phi < best_phi ||
          (phi == best_phi && (flat.machine[su] < best_machine ||
                               (flat.machine[su] == best_machine &&
                                flat.job_label[su] < best_label)))) {
        best_phi = phi;
        best_machine = flat.machine[su];
        best_label = flat.job_label[su];
      }
    }

    // Conflict set: frontier ops on that machine starting before best_phi.
    int chosen = -1;
    std::size_t chosen_pos = 0;
    int chosen_sigma = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      int u = frontier[i];
      auto su = static_cast<std::size_t>(u);
      if (flat.machine[su] != best_machine || sigma[i] >= best_phi) continue;
      bool better = false;
      if (chosen < 0) {
        better = true;
      } else {
        auto sc = static_cast<std::size_t>(chosen);
        int lu = flat.job_label[su];
        int lc = flat.job_label[sc];
        switch (rule) {
          case DispatchRule::SPT:
            better = flat.duration[su] < flat.duration[sc] ||
                     (flat.duration[su] == flat.duration[sc] && lu < lc);
            break;
          case DispatchRule::FIFO:
            better = job_ready_of[su] < job_ready_of[sc] ||
                     (job_ready_of[su] == job_ready_of[sc] && lu < lc);
            break;
          case DispatchRule::MWR:
            better = rem_work[su] > rem_work[sc] ||
                     (rem_work[su] == rem_work[sc] && lu < lc);
            break;
        }
      }
      if (better) {
        chosen = u;
        chosen_pos = i;
        chosen_sigma = sigma[i];
      }
    }

    auto sc = static_cast<std::size_t>(chosen);
    out.starts[sc] = chosen_sigma;
    int end = chosen_sigma + flat.duration[sc];
    out.makespan = std::max(out.makespan, end);
    machine_ready[static_cast<std::size_t>(best_machine)] = end;
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(chosen_pos));
    if (flat.job_succ[sc] >= 0) {
      int v = flat.job_succ[sc];
      job_ready_of[static_cast<std::size_t>(v)] = end;
      frontier.insert(std::lower_bound(frontier.begin(), frontier.end(), v), v);
    }
    ++scheduled;
  }
  return out;
}

}  // namespace

SolveResult solve_exact(const Instance& instance,
                        std::chrono::duration<double> time_limit) {
  check_instance(instance);
  auto t0 = std::chrono::steady_clock::now();
  SolveResult result;
  Flat flat(instance);
  if (flat.op_count == 0) {
    result.status = SolveStatus::Optimal;
    result.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }

  // Seed the incumbent with the best dispatch schedule so pruning bites
  // immediately and a feasible answer exists even on timeout.
  DispatchOutcome seed = run_dispatch(flat, DispatchRule::SPT);
  for (DispatchRule rule : {DispatchRule::FIFO, DispatchRule::MWR}) {
    DispatchOutcome other = run_dispatch(flat, rule);
    if (other.makespan < seed.makespan) seed = std::move(other);
  }

  ExactSearch search(flat, time_limit);
  search.seed(seed.makespan, std::move(seed.starts));
  search.run();

  result.schedule = flat.to_schedule(search.best_starts());
  result.makespan = search.best_makespan();
  result.status = search.timed_out() ? SolveStatus::Feasible : SolveStatus::Optimal;
  result.nodes_explored = search.nodes();
  result.elapsed = std::chrono::steady_clock::now() - t0;
  return result;
}

SolveResult solve_dispatch(const Instance& instance, DispatchRule rule) {
  check_instance(instance);
  auto t0 = std::chrono::steady_clock::now();
  Flat flat(instance);
  DispatchOutcome out = run_dispatch(flat, rule);
  SolveResult result;
  result.schedule = flat.to_schedule(out.starts);
  result.makespan = out.makespan;
  result.status = SolveStatus::Feasible;
  result.nodes_explored = 0;
  result.elapsed = std::chrono::steady_clock::now() - t0;
  return result;
}

int lower_bound(const Instance& instance) {
  check_instance(instance);
  std::vector<int> machine_load(static_cast<std::size_t>(instance.machine_count), 0);
  int best = 0;
  for (const auto& [label, ops] : instance.jobs) {
    int job_len = 0;
    for (const Operation& op : ops) {
      job_len += op.duration;
      machine_load[static_cast<std::size_t>(op.machine)] += op.duration;
    }
    best = std::max(best, job_len);
  }
  for (int load : machine_load) best = std::max(best, load);
  return best;
}

int brute_force_optimum(const Instance& instance, std::uint64_t cap) {
  check_instance(instance);
  Flat flat(instance);
  if (flat.op_count == 0) return 0;

  std::uint64_t combos = 1;
  for (const auto& ops : flat.machine_ops) {
    for (std::uint64_t k = 2; k <= ops.size(); ++k) {
      if (combos > cap / k) {
        throw DomainError("brute force: combination count exceeds cap of " +
                          std::to_string(cap));
      }
      combos *= k;
    }
  }

  std::vector<std::vector<int>> orders = flat.machine_ops;  // each sorted
  int best = std::numeric_limits<int>::max();
  std::vector<int> starts;

  // Odometer over per-machine permutations, lexicographic per machine.
  std::vector<bool> done(orders.size(), false);
  while (true) {
    int makespan = 0;
    if (time_orders(flat, orders, starts, makespan)) best = std::min(best, makespan);
    // Advance to the next combination.
    std::size_t m = 0;
    for (; m < orders.size(); ++m) {
      if (std::next_permutation(orders[m].begin(), orders[m].end())) break;
      // Wrapped around to the sorted order; carry into the next machine.
    }
    if (m == orders.size()) break;
  }
  return best;
}

}  // namespace djsp
