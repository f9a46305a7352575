#include "djsp/djsp.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "djsp/datasetgen.hpp"
#include "djsp/evalharness.hpp"
#include "djsp/events.hpp"
#include "djsp/jsp_core.hpp"
#include "djsp/judge.hpp"
#include "djsp/repair.hpp"
#include "djsp/solver.hpp"
#include "djsp/textio.hpp"

struct djsp_instance {
  djsp::Instance value;
};

struct djsp_schedule {
  djsp::Schedule value;
};

struct djsp_scenario {
  djsp::Scenario value;
};

struct djsp_solution {
  djsp::SolveResult result;
  std::string schedule_text;
};

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out != nullptr) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

djsp_status fail(djsp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body` with exceptions mapped onto status codes; clears the error
// slot on success.
template <typename Fn>
djsp_status guarded(Fn&& body) {
  try {
    const djsp_status status = body();
    if (status == DJSP_OK) g_last_error.clear();
    return status;
  } catch (const djsp::ParseError& error) {
    return fail(DJSP_ERR_PARSE, error.what());
  } catch (const djsp::DomainError& error) {
    return fail(DJSP_ERR_DOMAIN, error.what());
  } catch (const std::exception& error) {
    return fail(DJSP_ERR_INTERNAL, error.what());
  } catch (...) {
    return fail(DJSP_ERR_INTERNAL, "unknown failure");
  }
}

djsp_status require(bool ok, const char* what) {
  if (ok) return DJSP_OK;
  return fail(DJSP_ERR_INVALID, std::string("invalid argument: ") + what);
}

double effective_limit(double time_limit_secs) {
  return time_limit_secs > 0.0 ? time_limit_secs : djsp::kDefaultTimeLimitSecs;
}

djsp::FastPolicy policy_from(const char* name) {
  const std::string text = name == nullptr ? "exact" : name;
  if (text == "exact") return djsp::FastPolicy::ExactResolve;
  if (text == "repair") return djsp::FastPolicy::LocalRepair;
  throw djsp::DomainError("fast policy must be \"exact\" or \"repair\", got \"" +
                          text + "\"");
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

extern "C" {

const char* djsp_last_error(void) { return g_last_error.c_str(); }

void djsp_string_free(char* text) { std::free(text); }

const char* djsp_version(void) { return "1.0.0"; }

void djsp_instance_free(djsp_instance* instance) { delete instance; }
void djsp_schedule_free(djsp_schedule* schedule) { delete schedule; }
void djsp_scenario_free(djsp_scenario* scenario) { delete scenario; }
void djsp_solution_free(djsp_solution* solution) { delete solution; }

djsp_status djsp_instance_parse_orlib(const char* text, djsp_instance** out) {
  if (djsp_status s = require(text && out, "text/out"); s != DJSP_OK) return s;
  return guarded([&] {
    *out = new djsp_instance{djsp::parse_orlib(text)};
    return DJSP_OK;
  });
}

djsp_status djsp_instance_parse_tasks(const char* text, djsp_instance** out) {
  if (djsp_status s = require(text && out, "text/out"); s != DJSP_OK) return s;
  return guarded([&] {
    *out = new djsp_instance{djsp::parse_tasks_text(text)};
    return DJSP_OK;
  });
}

djsp_status djsp_instance_format_tasks(const djsp_instance* instance,
                                       const char* heading, char** out) {
  if (djsp_status s = require(instance && heading && out, "instance/heading/out");
      s != DJSP_OK)
    return s;
  return guarded([&] {
    *out = copy_string(djsp::format_tasks_text(instance->value, heading));
    return DJSP_OK;
  });
}

djsp_status djsp_instance_counts(const djsp_instance* instance, int* jobs,
                                 int* machines, int* operations) {
  if (djsp_status s = require(instance != nullptr, "instance"); s != DJSP_OK)
    return s;
  return guarded([&] {
    if (jobs) *jobs = static_cast<int>(instance->value.jobs.size());
    if (machines) *machines = instance->value.machine_count;
    if (operations) *operations = instance->value.operation_count();
    return DJSP_OK;
  });
}

djsp_status djsp_schedule_parse(const char* text, djsp_schedule** out) {
  if (djsp_status s = require(text && out, "text/out"); s != DJSP_OK) return s;
  return guarded([&] {
    *out = new djsp_schedule{djsp::parse_schedule_text(text).schedule};
    return DJSP_OK;
  });
}

djsp_status djsp_validate(const djsp_instance* instance,
                          const djsp_schedule* schedule, int* feasible,
                          char** report_text) {
  if (djsp_status s = require(instance && schedule, "instance/schedule");
      s != DJSP_OK)
    return s;
  return guarded([&] {
    const djsp::ValidationReport report =
        djsp::validate(instance->value, schedule->value);
    if (feasible) *feasible = report.feasible ? 1 : 0;
    if (report_text) *report_text = copy_string(report.to_text());
    return DJSP_OK;
  });
}

djsp_status djsp_solve(const djsp_instance* instance, double time_limit_secs,
                       djsp_solution** out) {
  if (djsp_status s = require(instance && out, "instance/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    auto solution = std::make_unique<djsp_solution>();
    solution->result = djsp::solve_exact(
        instance->value,
        std::chrono::duration<double>(effective_limit(time_limit_secs)));
    if (solution->result.status != djsp::SolveStatus::Infeasible) {
      solution->schedule_text = djsp::format_schedule_text(
          instance->value, solution->result.schedule);
    }
    *out = solution.release();
    return DJSP_OK;
  });
}

djsp_status djsp_solution_info(const djsp_solution* solution, int* makespan,
                               djsp_solve_status* status,
                               int64_t* nodes_explored) {
  if (djsp_status s = require(solution != nullptr, "solution"); s != DJSP_OK)
    return s;
  return guarded([&] {
    if (makespan) *makespan = solution->result.makespan;
    if (status) {
      switch (solution->result.status) {
        case djsp::SolveStatus::Optimal:
          *status = DJSP_SOLVE_OPTIMAL;
          break;
        case djsp::SolveStatus::Feasible:
          *status = DJSP_SOLVE_FEASIBLE;
          break;
        case djsp::SolveStatus::Infeasible:
          *status = DJSP_SOLVE_INFEASIBLE;
          break;
      }
    }
    if (nodes_explored) *nodes_explored = solution->result.nodes_explored;
    return DJSP_OK;
  });
}

djsp_status djsp_solution_schedule_text(const djsp_solution* solution,
                                        char** out) {
  if (djsp_status s = require(solution && out, "solution/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    *out = copy_string(solution->schedule_text);
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_sample_for(const djsp_instance* baseline,
                                     const char* mode, uint64_t seed,
                                     djsp_scenario** out) {
  if (djsp_status s = require(baseline && mode && out, "baseline/mode/out");
      s != DJSP_OK)
    return s;
  return guarded([&] {
    djsp::SamplingConfig config;
    config.mode = djsp::mode_from_string(mode);
    *out = new djsp_scenario{
        djsp::sample_scenario_for(baseline->value, config, seed)};
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_from_json(const char* json_text,
                                    djsp_scenario** out) {
  if (djsp_status s = require(json_text && out, "json/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    *out = new djsp_scenario{djsp::scenario_from_json(json_text)};
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_to_json(const djsp_scenario* scenario, char** out) {
  if (djsp_status s = require(scenario && out, "scenario/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    *out = copy_string(djsp::scenario_to_json(scenario->value));
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_info(const djsp_scenario* scenario, char** mode_out,
                               int* event_count) {
  if (djsp_status s = require(scenario != nullptr, "scenario"); s != DJSP_OK)
    return s;
  return guarded([&] {
    if (mode_out) *mode_out = copy_string(djsp::to_string(scenario->value.mode));
    if (event_count)
      *event_count = static_cast<int>(scenario->value.events.size());
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_event_text(const djsp_scenario* scenario, int index,
                                     char** out) {
  if (djsp_status s = require(scenario && out, "scenario/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    if (index < 0 ||
        index >= static_cast<int>(scenario->value.events.size())) {
      throw djsp::DomainError("event index " + std::to_string(index) +
                              " out of range");
    }
    *out = copy_string(djsp::format_event_text(scenario->value.events[index]));
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_explain(const djsp_scenario* scenario, char** out) {
  if (djsp_status s = require(scenario && out, "scenario/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    const djsp::DisruptionScore score =
        djsp::disruption_score(scenario->value);
    const djsp::Mode route = djsp::classify_mode(scenario->value.events);
    std::ostringstream text;
    text << "route: " << djsp::to_string(route) << "\n"
         << "affected_ops: " << score.affected_ops << "\n"
         << "maintenance_conflicts: " << score.maintenance_conflicts << "\n"
         << "structural_changes: " << score.structural_changes << "\n"
         << "disruption_total: " << score.total << "\n";
    *out = copy_string(text.str());
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_prompt(const djsp_scenario* scenario,
                                 char** instruction_out, char** input_out) {
  if (djsp_status s = require(scenario != nullptr, "scenario"); s != DJSP_OK)
    return s;
  return guarded([&] {
    const djsp::PromptBundle prompt = djsp::build_prompt(scenario->value);
    if (instruction_out) *instruction_out = copy_string(prompt.instruction);
    if (input_out) *input_out = copy_string(prompt.input_with_tag());
    return DJSP_OK;
  });
}

djsp_status djsp_scenario_target(const djsp_scenario* scenario,
                                 const char* fast_policy, char** out) {
  if (djsp_status s = require(scenario && out, "scenario/out"); s != DJSP_OK)
    return s;
  return guarded([&] {
    *out = copy_string(
        djsp::build_target(scenario->value, policy_from(fast_policy)));
    return DJSP_OK;
  });
}

djsp_status djsp_repair(const djsp_scenario* scenario, int* makespan,
                        int* affected, char** schedule_text) {
  if (djsp_status s = require(scenario != nullptr, "scenario"); s != DJSP_OK)
    return s;
  return guarded([&] {
    const djsp::RepairResult result = djsp::local_repair(scenario->value);
    if (makespan) *makespan = result.makespan;
    if (affected) *affected = static_cast<int>(result.affected.size());
    if (schedule_text) {
      *schedule_text = copy_string(
          djsp::format_schedule_text(result.instance, result.schedule));
    }
    return DJSP_OK;
  });
}

djsp_status djsp_generate_dataset(const char* mode, int count, uint64_t seed,
                                  const char* fast_policy,
                                  double time_limit_secs,
                                  const char* out_path, char** summary_out) {
  if (djsp_status s = require(mode && out_path, "mode/out_path"); s != DJSP_OK)
    return s;
  return guarded([&] {
    djsp::GenConfig config;
    config.mode = djsp::mode_from_string(mode);
    config.count = count;
    config.base_seed = seed;
    config.fast_policy = policy_from(fast_policy);
    config.time_limit_secs = effective_limit(time_limit_secs);
    const djsp::GenSummary summary =
        djsp::generate_dataset(config, std::string(out_path));
    if (summary_out) {
      std::ostringstream text;
      text << "written: " << summary.written << "\n"
           << "skipped: " << summary.skipped << "\n";
      for (const std::string& reason : summary.skip_reasons) {
        text << "skip: " << reason << "\n";
      }
      *summary_out = copy_string(text.str());
    }
    return DJSP_OK;
  });
}

djsp_status djsp_bench_ft06(int per_setting, uint64_t seed,
                            const char* out_dir, char** summary_out) {
  if (djsp_status s = require(out_dir != nullptr, "out_dir"); s != DJSP_OK)
    return s;
  return guarded([&] {
    djsp::BenchConfig config;
    config.per_setting = per_setting;
    config.base_seed = seed;
    const djsp::BenchSummary summary = djsp::bench_ft06(config, out_dir);
    if (summary_out) {
      std::ostringstream text;
      for (const auto& [path, lines] : summary.files) {
        text << path << ": " << lines << "\n";
      }
      *summary_out = copy_string(text.str());
    }
    return DJSP_OK;
  });
}

djsp_status djsp_evaluate(const char* scenarios_jsonl,
                          const char* responses_jsonl, double time_limit_secs,
                          char** report_text, char** report_json) {
  if (djsp_status s = require(scenarios_jsonl && responses_jsonl,
                              "scenarios/responses");
      s != DJSP_OK)
    return s;
  return guarded([&] {
    std::vector<djsp::Scenario> scenarios;
    for (const std::string& line : split_lines(scenarios_jsonl)) {
      scenarios.push_back(djsp::scenario_from_json(line));
    }
    std::vector<std::string> responses;
    for (const std::string& line : split_lines(responses_jsonl)) {
      try {
        const nlohmann::json parsed = nlohmann::json::parse(line);
        responses.push_back(parsed.at("output").get<std::string>());
      } catch (const nlohmann::json::exception& error) {
        throw djsp::DomainError(
            std::string("malformed response line (expected {\"output\": "
                        "...}): ") +
            error.what());
      }
    }
    djsp::EvalConfig config;
    config.time_limit_secs = effective_limit(time_limit_secs);
    const djsp::EvalReport report =
        djsp::evaluate_responses(scenarios, responses, config);
    if (report_text) *report_text = copy_string(djsp::format_report(report));
    if (report_json) *report_json = copy_string(djsp::report_to_json(report));
    return DJSP_OK;
  });
}

} /* extern "C" */
