#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "djsp/jsp_core.hpp"

namespace djsp {

enum class SolveStatus { Optimal, Feasible, Infeasible };

std::string to_string(SolveStatus status);

struct SolveResult {
  Schedule schedule;
  int makespan = 0;
  SolveStatus status = SolveStatus::Optimal;
  std::int64_t nodes_explored = 0;
  std::chrono::duration<double> elapsed{0.0};
};

enum class DispatchRule { SPT, FIFO, MWR };

inline constexpr double kDefaultTimeLimitSecs = 60.0;
inline constexpr std::uint64_t kDefaultBruteForceCap = 1'000'000;

// Smallest t >= max(machine_ready, job_ready, 0) such that [t, t+duration)
// intersects no window. Windows must be sorted by start and pairwise
// disjoint; t is pushed to window.end whenever the candidate interval
// overlaps a window, scanning once in window order.
int earliest_feasible_start(int machine_ready, int job_ready, int duration,
                            const std::vector<Window>& windows);

// Exact makespan minimization by depth-first branch and bound over the
// per-machine sequencing decisions. The incumbent is seeded with the best
// dispatch schedule; nodes are pruned against a head/tail critical-path
// bound plus a one-machine load bound. Branches extend the sequence of the
// machine with the most unresolved disjunctions; sibling order is lowest
// (job label, op index) first, so the search (and the returned schedule)
// is fully deterministic. Timing is semi-active: every operation starts at
// its earliest feasible time given the chosen sequences and the machine's
// maintenance windows.
//
// Returns status Optimal when the search completes, Feasible with the best
// incumbent when the time limit is hit first.
SolveResult solve_exact(const Instance& instance,
                        std::chrono::duration<double> time_limit =
                            std::chrono::duration<double>(kDefaultTimeLimitSecs));

// Giffler-Thompson style active-schedule construction; at each conflict the
// priority rule picks the operation (ties: lowest job label). Status is
// always Feasible.
SolveResult solve_dispatch(const Instance& instance, DispatchRule rule);

// max(max machine load, max job length); never exceeds the optimum.
int lower_bound(const Instance& instance);

// Independent oracle: enumerates every combination of per-machine total
// orders (skipping cyclic ones), times each semi-actively, and returns the
// minimum makespan. Throws DomainError when the number of combinations
// exceeds `cap`.
int brute_force_optimum(const Instance& instance,
                        std::uint64_t cap = kDefaultBruteForceCap);

}  // namespace djsp
