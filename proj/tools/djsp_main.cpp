// Command-line front end for the djsp shared library. Every subcommand
// prints stable `key: value` lines on stdout; diagnostics go to stderr.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "djsp/djsp.h"

namespace {

struct CliError {
  int code;
  std::string message;
};

// Owns a string returned by the library.
struct CStr {
  char* ptr = nullptr;
  ~CStr() { djsp_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

void check(djsp_status status) {
  if (status != DJSP_OK) {
    const char* detail = djsp_last_error();
    throw CliError{1, detail && *detail ? detail : "library call failed"};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw CliError{1, "cannot read file: " + path};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw CliError{1, "cannot write file: " + path};
  out << content;
  if (!out.good()) throw CliError{1, "cannot write file: " + path};
}

std::string trimmed(std::string text) {
  const char* ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

// Flag value if given, else DJSP_TIME_LIMIT_SECS from the environment,
// else 0 (which the library maps to its built-in default).
double resolve_time_limit(double flag_value) {
  if (flag_value > 0.0) return flag_value;
  const char* raw = std::getenv("DJSP_TIME_LIMIT_SECS");
  if (!raw) return 0.0;
  char* end = nullptr;
  const double parsed = std::strtod(raw, &end);
  if (end == raw || parsed <= 0.0) return 0.0;
  return parsed;
}

djsp_instance* parse_instance_file(const std::string& path,
                                   const std::string& format) {
  const std::string text = read_file(path);
  djsp_instance* instance = nullptr;
  if (format == "orlib") {
    check(djsp_instance_parse_orlib(text.c_str(), &instance));
  } else if (format == "tasks") {
    check(djsp_instance_parse_tasks(trimmed(text).c_str(), &instance));
  } else {
    throw CliError{2, "unknown --format value: " + format};
  }
  return instance;
}

struct SolveOptions {
  std::string file;
  std::string format = "orlib";
  double time_limit = 0.0;
};

void run_solve(const SolveOptions& opt) {
  djsp_instance* instance = parse_instance_file(opt.file, opt.format);
  djsp_solution* solution = nullptr;
  const djsp_status solved =
      djsp_solve(instance, resolve_time_limit(opt.time_limit), &solution);
  djsp_instance_free(instance);
  check(solved);

  int makespan = 0;
  djsp_solve_status status = DJSP_SOLVE_INFEASIBLE;
  int64_t nodes = 0;
  check(djsp_solution_info(solution, &makespan, &status, &nodes));
  switch (status) {
    case DJSP_SOLVE_OPTIMAL:
      std::cout << "status: optimal\n";
      break;
    case DJSP_SOLVE_FEASIBLE:
      std::cout << "status: feasible\n";
      break;
    case DJSP_SOLVE_INFEASIBLE:
      std::cout << "status: infeasible\n";
      djsp_solution_free(solution);
      throw CliError{1, "no feasible schedule found"};
  }
  std::cout << "makespan: " << makespan << "\n";
  if (status == DJSP_SOLVE_OPTIMAL) {
    // Node counts are reproducible only when the search ran to completion.
    std::cout << "nodes: " << nodes << "\n";
  }
  CStr schedule;
  check(djsp_solution_schedule_text(solution, &schedule.ptr));
  djsp_solution_free(solution);
  std::cout << "schedule: " << schedule.str() << "\n";
}

struct ValidateOptions {
  std::string instance_file;
  std::string schedule_file;
  std::string format = "orlib";
};

void run_validate(const ValidateOptions& opt) {
  djsp_instance* instance =
      parse_instance_file(opt.instance_file, opt.format);
  djsp_schedule* schedule = nullptr;
  const std::string schedule_text = trimmed(read_file(opt.schedule_file));
  const djsp_status parsed =
      djsp_schedule_parse(schedule_text.c_str(), &schedule);
  if (parsed != DJSP_OK) djsp_instance_free(instance);
  check(parsed);

  int feasible = 0;
  CStr report;
  const djsp_status validated =
      djsp_validate(instance, schedule, &feasible, &report.ptr);
  djsp_instance_free(instance);
  djsp_schedule_free(schedule);
  check(validated);

  if (feasible) {
    std::cout << "feasible: yes\n";
    return;
  }
  std::cout << "feasible: no\n";
  std::cout << report.str() << "\n";
  throw CliError{1, "schedule is infeasible"};
}

struct InjectOptions {
  std::string instance_file;
  std::string format = "orlib";
  std::string mode;
  std::uint64_t seed = 0;
  bool explain = false;
  std::string out;
};

void run_inject(const InjectOptions& opt) {
  djsp_instance* baseline = parse_instance_file(opt.instance_file, opt.format);
  djsp_scenario* scenario = nullptr;
  const djsp_status sampled = djsp_scenario_sample_for(
      baseline, opt.mode.c_str(), opt.seed, &scenario);
  djsp_instance_free(baseline);
  check(sampled);

  CStr mode;
  int event_count = 0;
  check(djsp_scenario_info(scenario, &mode.ptr, &event_count));
  std::cout << "mode: " << mode.str() << "\n";
  std::cout << "seed: " << opt.seed << "\n";
  std::cout << "events: " << event_count << "\n";
  for (int i = 0; i < event_count; ++i) {
    CStr sentence;
    check(djsp_scenario_event_text(scenario, i, &sentence.ptr));
    std::cout << "event " << (i + 1) << ": " << sentence.str() << "\n";
  }
  if (opt.explain) {
    CStr explain;
    check(djsp_scenario_explain(scenario, &explain.ptr));
    std::cout << explain.str();
  }
  CStr json;
  check(djsp_scenario_to_json(scenario, &json.ptr));
  djsp_scenario_free(scenario);
  if (!opt.out.empty()) {
    write_file(opt.out, json.str() + "\n");
    std::cout << "wrote: " << opt.out << "\n";
  } else {
    std::cout << "scenario: " << json.str() << "\n";
  }
}

struct GenOptions {
  std::string mode;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string fast_policy = "exact";
  double time_limit = 0.0;
};

void run_gen_dataset(const GenOptions& opt) {
  CStr summary;
  check(djsp_generate_dataset(opt.mode.c_str(), opt.count, opt.seed,
                              opt.fast_policy.c_str(),
                              resolve_time_limit(opt.time_limit),
                              opt.out.c_str(), &summary.ptr));
  std::cout << summary.str();
}

void run_repair(const std::string& scenario_file) {
  djsp_scenario* scenario = nullptr;
  check(djsp_scenario_from_json(trimmed(read_file(scenario_file)).c_str(),
                                &scenario));
  int makespan = 0;
  int affected = 0;
  CStr schedule;
  const djsp_status repaired =
      djsp_repair(scenario, &makespan, &affected, &schedule.ptr);
  djsp_scenario_free(scenario);
  check(repaired);
  std::cout << "makespan: " << makespan << "\n";
  std::cout << "affected: " << affected << "\n";
  std::cout << "schedule: " << schedule.str() << "\n";
}

struct EvalOptions {
  std::string scenarios;
  std::string responses;
  std::string report;
  double time_limit = 0.0;
};

void run_eval(const EvalOptions& opt) {
  const std::string scenarios = read_file(opt.scenarios);
  const std::string responses = read_file(opt.responses);
  CStr text;
  CStr json;
  check(djsp_evaluate(scenarios.c_str(), responses.c_str(),
                      resolve_time_limit(opt.time_limit), &text.ptr,
                      opt.report.empty() ? nullptr : &json.ptr));
  std::cout << text.str();
  if (!opt.report.empty()) {
    write_file(opt.report, json.str() + "\n");
    std::cout << "report: " << opt.report << "\n";
  }
}

struct BenchOptions {
  int per_setting = 30;
  std::uint64_t seed = 0;
  std::string out = "bench_ft06";
};

void run_bench(const BenchOptions& opt) {
  CStr summary;
  check(djsp_bench_ft06(opt.per_setting, opt.seed, opt.out.c_str(),
                        &summary.ptr));
  std::cout << summary.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic job-shop scheduling toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() {
    return std::string(djsp_version());
  });

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve an instance file and print the schedule");
  solve->add_option("file", solve_opt.file, "Instance file")->required();
  solve->add_option("--format", solve_opt.format, "Input format: orlib|tasks")
      ->check(CLI::IsMember({"orlib", "tasks"}));
  solve->add_option("--time-limit", solve_opt.time_limit,
                    "Solver time limit in seconds");
  solve->callback([&] { run_solve(solve_opt); });

  ValidateOptions validate_opt;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a schedule file against an instance file");
  validate->add_option("instance", validate_opt.instance_file, "Instance file")
      ->required();
  validate->add_option("schedule", validate_opt.schedule_file, "Schedule file")
      ->required();
  validate
      ->add_option("--format", validate_opt.format,
                   "Instance format: orlib|tasks")
      ->check(CLI::IsMember({"orlib", "tasks"}));
  validate->callback([&] { run_validate(validate_opt); });

  InjectOptions inject_opt;
  CLI::App* inject = app.add_subcommand(
      "inject", "Sample a seeded disruption scenario for an instance");
  inject->add_option("instance", inject_opt.instance_file, "Instance file")
      ->required();
  inject
      ->add_option("--mode", inject_opt.mode, "Scenario kind: fast|slow")
      ->required()
      ->check(CLI::IsMember({"fast", "slow"}));
  inject->add_option("--seed", inject_opt.seed, "Random seed")->required();
  inject
      ->add_option("--format", inject_opt.format,
                   "Instance format: orlib|tasks")
      ->check(CLI::IsMember({"orlib", "tasks"}));
  inject->add_flag("--explain", inject_opt.explain,
                   "Print routing diagnostics");
  inject->add_option("--out", inject_opt.out, "Write scenario JSON here");
  inject->callback([&] { run_inject(inject_opt); });

  GenOptions gen_opt;
  CLI::App* gen = app.add_subcommand(
      "gen-dataset", "Generate a seeded instruction-tuning dataset");
  gen->add_option("--mode", gen_opt.mode, "Record kind: fast|slow")
      ->required()
      ->check(CLI::IsMember({"fast", "slow"}));
  gen->add_option("--count", gen_opt.count, "Number of records")->required();
  gen->add_option("--seed", gen_opt.seed, "Base seed")->required();
  gen->add_option("--out", gen_opt.out, "Output JSONL path")->required();
  gen->add_option("--fast-policy", gen_opt.fast_policy,
                  "Fast target policy: exact|repair")
      ->check(CLI::IsMember({"exact", "repair"}));
  gen->add_option("--time-limit", gen_opt.time_limit,
                  "Solver time limit in seconds");
  gen->callback([&] { run_gen_dataset(gen_opt); });

  std::string repair_file;
  CLI::App* repair = app.add_subcommand(
      "repair", "Locally repair the baseline schedule of a scenario");
  repair->add_option("scenario", repair_file, "Scenario JSON file")
      ->required();
  repair->callback([&] { run_repair(repair_file); });

  EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score response texts against scenario files");
  eval->add_option("--scenarios", eval_opt.scenarios, "Scenario JSONL file")
      ->required();
  eval->add_option("--responses", eval_opt.responses,
                   "Response JSONL file ({\"output\": ...} per line)")
      ->required();
  eval->add_option("--report", eval_opt.report, "Write a JSON report here");
  eval->add_option("--time-limit", eval_opt.time_limit,
                   "Solver time limit in seconds");
  eval->callback([&] { run_eval(eval_opt); });

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand(
      "bench-ft06", "Write the 6x6 benchmark scenario and record suites");
  bench->add_option("--per-setting", bench_opt.per_setting,
                    "Scenarios per setting");
  bench->add_option("--seed", bench_opt.seed, "Base seed");
  bench->add_option("--out", bench_opt.out, "Output directory");
  bench->callback([&] { run_bench(bench_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CliError& e) {
    if (!e.message.empty()) std::cerr << "error: " << e.message << "\n";
    return e.code;
  }
  return 0;
}
