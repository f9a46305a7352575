#include "djsp/evalharness.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "djsp/judge.hpp"
#include "djsp/repair.hpp"

namespace djsp {
namespace {

std::chrono::duration<double> limit_of(const EvalConfig& config) {
  return std::chrono::duration<double>(config.time_limit_secs);
}

// Maintenance map with empty window lists dropped, so instances recovered
// from text (which never mention idle machines) compare equal to originals.
std::map<int, std::vector<Window>> nonempty_windows(const Instance& instance) {
  std::map<int, std::vector<Window>> out;
  for (const auto& [machine, windows] : instance.maintenance) {
    if (!windows.empty()) out.emplace(machine, windows);
  }
  return out;
}

std::string violation_text(const Violation& violation) {
  return to_string(violation.kind) + ": " + violation.detail;
}

int matrix_row(Mode mode) {
  switch (mode) {
    case Mode::Fast:
      return 0;
    case Mode::Slow:
      return 1;
    case Mode::Auto:
      break;
  }
  throw DomainError("mode matrix entries must be fast or slow");
}

std::string render_hundredths(long long hundredths) {
  const bool negative = hundredths < 0;
  if (negative) hundredths = -hundredths;
  std::string out = negative ? "-" : "";
  out += std::to_string(hundredths / 100);
  out += '.';
  const long long fraction = hundredths % 100;
  if (fraction < 10) out += '0';
  out += std::to_string(fraction);
  out += '%';
  return out;
}

// Ops present in both the baseline and the response's instance that lie
// outside the events' blast radius, yet start at a different time than the
// baseline planned. Zero for every local_repair target by construction.
int count_moved_unaffected(const Scenario& scenario, const Instance& instance,
                           const Schedule& schedule) {
  const std::set<OpRef> affected = affected_operations(
      scenario.baseline, scenario.baseline_schedule, scenario.events);
  int moved = 0;
  for (const auto& [label, ops] : instance.jobs) {
    const auto baseline_job = scenario.baseline.jobs.find(label);
    if (baseline_job == scenario.baseline.jobs.end()) continue;
    const int shared =
        std::min(static_cast<int>(ops.size()),
                 static_cast<int>(baseline_job->second.size()));
    for (int op = 0; op < shared; ++op) {
      const OpRef ref{label, op};
      if (affected.count(ref) != 0) continue;
      const auto now = schedule.starts.find(ref);
      const auto then = scenario.baseline_schedule.starts.find(ref);
      if (now != schedule.starts.end() &&
          then != scenario.baseline_schedule.starts.end() &&
          now->second != then->second) {
        ++moved;
      }
    }
  }
  return moved;
}

}  // namespace

int ModeMatrix::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::No:
      return "no";
    case Verdict::Yes:
      return "yes";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

Mode detect_response_mode(const std::string& response_text) {
  return response_text.find("The schedules of machine M") != std::string::npos
             ? Mode::Fast
             : Mode::Slow;
}

bool same_tasks(const Instance& a, const Instance& b) {
  return a.jobs == b.jobs && nonempty_windows(a) == nonempty_windows(b);
}

FeasibilityCheck check_feasibility(const Scenario& scenario,
                                   const ParsedResponse& response,
                                   const EvalConfig& config) {
  FeasibilityCheck out;
  if (!response.parse_ok) {
    out.reason = "response did not parse";
    return out;
  }
  if (response.final_schedule) {
    if (!response.final_tasks) {
      out.reason = "fast response carries no task list";
      return out;
    }
    const ProcessorTrace trace =
        run_processor(scenario.baseline, scenario.events);
    if (config.strict_tasks && !same_tasks(*response.final_tasks, trace.final)) {
      out.reason = "task list does not match the post-event instance";
      return out;
    }
    const Instance& reference =
        config.strict_tasks ? trace.final : *response.final_tasks;
    const ValidationReport report = validate(reference, *response.final_schedule);
    if (!report.feasible) {
      out.reason = "schedule infeasible: " + violation_text(report.violations.front());
      return out;
    }
    out.feasible = true;
    out.instance = reference;
    out.schedule = *response.final_schedule;
    out.makespan = makespan(reference, *response.final_schedule);
    return out;
  }
  if (!response.final_tasks) {
    out.reason = "slow response carries no final task block";
    return out;
  }
  Instance instance = *response.final_tasks;
  try {
    check_instance(instance);
  } catch (const DomainError& error) {
    out.reason = std::string("final task block invalid: ") + error.what();
    return out;
  }
  const SolveResult solved = solve_exact(instance, limit_of(config));
  if (solved.status == SolveStatus::Infeasible) {
    out.reason = "final task block could not be scheduled";
    return out;
  }
  out.feasible = true;
  out.instance = std::move(instance);
  out.schedule = solved.schedule;
  out.makespan = solved.makespan;
  return out;
}

OptimalityCheck check_optimality(const Scenario& scenario,
                                 const ParsedResponse& response,
                                 const EvalConfig& config) {
  const FeasibilityCheck feasibility =
      check_feasibility(scenario, response, config);
  if (!feasibility.feasible) {
    throw DomainError("check_optimality requires a feasible response (" +
                      (feasibility.reason.empty() ? std::string("unspecified")
                                                  : feasibility.reason) +
                      ")");
  }
  OptimalityCheck out;
  bool unknown = false;
  const ProcessorTrace trace = run_processor(scenario.baseline, scenario.events);
  const SolveResult truth = solve_exact(trace.final, limit_of(config));
  if (truth.status == SolveStatus::Optimal) {
    out.optimal_makespan = truth.makespan;
  } else {
    unknown = true;
    out.note = "reference solve hit the time limit";
  }
  if (response.final_schedule) {
    out.response_makespan = feasibility.makespan;
  } else {
    // Slow responses deliver an instance, not a schedule; their makespan is
    // the proven optimum of that instance.
    const SolveResult resolved = solve_exact(*feasibility.instance, limit_of(config));
    if (resolved.status == SolveStatus::Optimal) {
      out.response_makespan = resolved.makespan;
    } else {
      unknown = true;
      if (!out.note.empty()) out.note += "; ";
      out.note += "response task solve hit the time limit";
    }
  }
  if (unknown) {
    out.optimal = Verdict::Unknown;
    return out;
  }
  out.optimal = out.response_makespan == out.optimal_makespan ? Verdict::Yes
                                                              : Verdict::No;
  return out;
}

EvalReport evaluate_responses(const std::vector<Scenario>& scenarios,
                              const std::vector<std::string>& response_texts,
                              const EvalConfig& config) {
  if (scenarios.size() != response_texts.size()) {
    throw DomainError("scenario/response count mismatch: " +
                      std::to_string(scenarios.size()) + " scenarios vs " +
                      std::to_string(response_texts.size()) + " responses");
  }
  EvalReport report;
  report.total = static_cast<int>(scenarios.size());
  std::vector<std::pair<Mode, Mode>> mode_pairs;
  mode_pairs.reserve(scenarios.size());
  double gap_sum = 0.0;
  int gap_count = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& scenario = scenarios[i];
    const std::string& text = response_texts[i];
    ScenarioRow row;
    row.index = static_cast<int>(i);
    row.true_mode = classify_mode(scenario.events);
    row.chosen_mode = detect_response_mode(text);
    const ParsedResponse response = parse_model_output(text, scenario.mode);
    row.parsed = response.parse_ok;
    if (!row.parsed) {
      row.reason = response.diagnostics.empty() ? "response did not parse"
                                                : response.diagnostics.front();
    } else {
      ++report.parsed;
      const FeasibilityCheck feasibility =
          check_feasibility(scenario, response, config);
      row.feasible = feasibility.feasible;
      row.reason = feasibility.reason;
      if (row.feasible) {
        ++report.feasible;
        const OptimalityCheck optimality =
            check_optimality(scenario, response, config);
        row.optimal = optimality.optimal;
        row.response_makespan = optimality.response_makespan;
        row.optimal_makespan = optimality.optimal_makespan;
        switch (row.optimal) {
          case Verdict::Yes:
            ++report.optimal;
            break;
          case Verdict::Unknown:
            ++report.unknown_optimal;
            row.reason = optimality.note;
            report.diagnostics.push_back("scenario " + std::to_string(i) +
                                         ": optimality unknown (" +
                                         optimality.note + ")");
            break;
          case Verdict::No:
            break;
        }
        if (row.response_makespan >= 0 && row.optimal_makespan > 0) {
          row.gap = (static_cast<double>(row.response_makespan) -
                     row.optimal_makespan) /
                    row.optimal_makespan;
          gap_sum += *row.gap;
          ++gap_count;
        }
        if (response.final_schedule) {
          row.moved_unaffected = count_moved_unaffected(
              scenario, *feasibility.instance, *feasibility.schedule);
          report.moved_unaffected_total += row.moved_unaffected;
        }
      }
    }
    mode_pairs.emplace_back(row.true_mode, row.chosen_mode);
    report.per_scenario.push_back(std::move(row));
  }
  if (report.total > 0) {
    report.feasibility_rate =
        static_cast<double>(report.feasible) / report.total;
    report.optimality_rate = static_cast<double>(report.optimal) / report.total;
    report.mode_matrix = mode_selection_matrix(mode_pairs);
  }
  if (gap_count > 0) report.mean_gap = gap_sum / gap_count;
  return report;
}

ModeMatrix mode_selection_matrix(
    const std::vector<std::pair<Mode, Mode>>& records) {
  if (records.empty()) {
    throw DomainError("mode_selection_matrix needs at least one record");
  }
  ModeMatrix matrix;
  for (const auto& [true_mode, chosen_mode] : records) {
    ++matrix.counts[matrix_row(true_mode)][matrix_row(chosen_mode)];
  }
  for (int row = 0; row < 2; ++row) {
    const int row_total = matrix.counts[row][0] + matrix.counts[row][1];
    if (row_total > 0) {
      matrix.row_accuracy[row] =
          static_cast<double>(matrix.counts[row][row]) / row_total;
    }
  }
  return matrix;
}

std::string format_percent(int count, int total) {
  long long hundredths = 0;
  if (total > 0) {
    hundredths = (20000LL * count + total) / (2LL * total);
  }
  return render_hundredths(hundredths);
}

std::string format_percent(double fraction) {
  return render_hundredths(
      static_cast<long long>(std::floor(fraction * 10000.0 + 0.5)));
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  out << "total: " << report.total << "\n";
  out << "parsed: " << report.parsed << "\n";
  out << "feasible: " << report.feasible << "\n";
  out << "optimal: " << report.optimal << "\n";
  out << "unknown_optimal: " << report.unknown_optimal << "\n";
  out << "feasibility_rate: " << format_percent(report.feasible, report.total)
      << "\n";
  out << "optimality_rate: " << format_percent(report.optimal, report.total)
      << "\n";
  out << "mean_gap: "
      << (report.mean_gap ? format_percent(*report.mean_gap)
                          : std::string("n/a"))
      << "\n";
  out << "moved_unaffected: " << report.moved_unaffected_total << "\n";
  static const char* const kRowNames[2] = {"fast", "slow"};
  for (int row = 0; row < 2; ++row) {
    out << "mode_" << kRowNames[row]
        << ": chosen_fast=" << report.mode_matrix.counts[row][0]
        << " chosen_slow=" << report.mode_matrix.counts[row][1] << " accuracy=";
    if (report.mode_matrix.row_accuracy[row]) {
      out << format_percent(*report.mode_matrix.row_accuracy[row]);
    } else {
      out << "n/a";
    }
    out << "\n";
  }
  for (const ScenarioRow& row : report.per_scenario) {
    out << "scenario " << row.index << ": true=" << to_string(row.true_mode)
        << " chosen=" << to_string(row.chosen_mode)
        << " parsed=" << (row.parsed ? "yes" : "no")
        << " feasible=" << (row.feasible ? "yes" : "no")
        << " optimal=" << to_string(row.optimal);
    if (row.response_makespan >= 0) out << " makespan=" << row.response_makespan;
    if (row.optimal_makespan >= 0) out << " optimum=" << row.optimal_makespan;
    if (row.gap) out << " gap=" << format_percent(*row.gap);
    if (row.moved_unaffected >= 0) out << " moved=" << row.moved_unaffected;
    if (!row.reason.empty()) out << " reason=" << row.reason;
    out << "\n";
  }
  for (const std::string& line : report.diagnostics) {
    out << "# " << line << "\n";
  }
  return out.str();
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["total"] = report.total;
  doc["parsed"] = report.parsed;
  doc["feasible"] = report.feasible;
  doc["optimal"] = report.optimal;
  doc["unknown_optimal"] = report.unknown_optimal;
  doc["feasibility_rate"] = report.feasibility_rate;
  doc["optimality_rate"] = report.optimality_rate;
  doc["feasibility_percent"] = format_percent(report.feasible, report.total);
  doc["optimality_percent"] = format_percent(report.optimal, report.total);
  doc["mean_gap"] =
      report.mean_gap ? nlohmann::json(*report.mean_gap) : nlohmann::json();
  doc["moved_unaffected"] = report.moved_unaffected_total;
  nlohmann::json matrix;
  matrix["counts"] = {{report.mode_matrix.counts[0][0],
                       report.mode_matrix.counts[0][1]},
                      {report.mode_matrix.counts[1][0],
                       report.mode_matrix.counts[1][1]}};
  matrix["fast_accuracy"] = report.mode_matrix.row_accuracy[0]
                                ? nlohmann::json(*report.mode_matrix.row_accuracy[0])
                                : nlohmann::json();
  matrix["slow_accuracy"] = report.mode_matrix.row_accuracy[1]
                                ? nlohmann::json(*report.mode_matrix.row_accuracy[1])
                                : nlohmann::json();
  doc["mode_matrix"] = std::move(matrix);
  nlohmann::json rows = nlohmann::json::array();
  for (const ScenarioRow& row : report.per_scenario) {
    nlohmann::json entry;
    entry["index"] = row.index;
    entry["true_mode"] = to_string(row.true_mode);
    entry["chosen_mode"] = to_string(row.chosen_mode);
    entry["parsed"] = row.parsed;
    entry["feasible"] = row.feasible;
    entry["optimal"] = to_string(row.optimal);
    entry["response_makespan"] = row.response_makespan;
    entry["optimal_makespan"] = row.optimal_makespan;
    entry["gap"] = row.gap ? nlohmann::json(*row.gap) : nlohmann::json();
    entry["moved_unaffected"] = row.moved_unaffected;
    entry["reason"] = row.reason;
    rows.push_back(std::move(entry));
  }
  doc["per_scenario"] = std::move(rows);
  doc["diagnostics"] = report.diagnostics;
  return doc.dump();
}

}  // namespace djsp
