#include "djsp/datasetgen.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "djsp/ft06.hpp"
#include "djsp/rng.hpp"

namespace djsp {
namespace {

using nlohmann::json;

void check_config(const GenConfig& config) {
  if (config.mode == Mode::Auto)
    throw DomainError("dataset mode must be fast or slow");
  if (config.count < 1)
    throw DomainError("dataset count must be at least 1");
}

json meta_to_json(const DatasetMeta& meta) {
  return json{{"seed", meta.seed},
              {"mode", to_string(meta.mode)},
              {"n", meta.n},
              {"m", meta.m},
              {"event_summary", meta.event_summary},
              {"baseline_makespan", meta.baseline_makespan},
              {"final_optimal_makespan", meta.final_optimal_makespan}};
}

}  // namespace

std::uint64_t record_seed(std::uint64_t base_seed, int index) {
  return Rng::mix(Rng::mix(base_seed) ^
                  (static_cast<std::uint64_t>(index) + 1));
}

std::string event_category_name(const DynamicEvent& event) {
  struct Namer {
    std::string operator()(const JobCancellation&) const { return "job_cancellation"; }
    std::string operator()(const ProcessingTimeChange&) const { return "processing_time_change"; }
    std::string operator()(const MachineChange&) const { return "machine_change"; }
    std::string operator()(const JobInsertion&) const { return "job_insertion"; }
    std::string operator()(const MachineMaintenance&) const { return "machine_maintenance"; }
  };
  return std::visit(Namer{}, event);
}

std::map<std::string, int> summarize_events(const std::vector<DynamicEvent>& events) {
  std::map<std::string, int> summary = {
      {"job_cancellation", 0},     {"processing_time_change", 0},
      {"machine_change", 0},       {"job_insertion", 0},
      {"machine_maintenance", 0},
  };
  for (const DynamicEvent& event : events) ++summary[event_category_name(event)];
  return summary;
}

DatasetRecord make_record(const GenConfig& config, int index) {
  check_config(config);
  if (index < 0 || index >= config.count)
    throw DomainError("record index " + std::to_string(index) +
                      " out of range for count " +
                      std::to_string(config.count));

  SamplingConfig sampling = config.sampling;
  sampling.mode = config.mode;
  const std::uint64_t seed = record_seed(config.base_seed, index);
  const Scenario scenario = sample_scenario(sampling, seed);

  const ProcessorTrace trace =
      run_processor(scenario.baseline, scenario.events);
  const SolveResult final_solved =
      solve_exact(trace.final, std::chrono::duration<double>(config.time_limit_secs));
  if (final_solved.status != SolveStatus::Optimal)
    throw DomainError("post-event instance was not solved to optimality (" +
                      to_string(final_solved.status) + ")");

  const PromptBundle prompt = build_prompt(scenario);
  DatasetRecord record;
  record.instruction = prompt.instruction;
  record.input = prompt.input_with_tag();
  record.output = build_target(scenario, config.fast_policy);
  record.meta.seed = seed;
  record.meta.mode = scenario.mode;
  record.meta.n = static_cast<int>(scenario.baseline.jobs.size());
  record.meta.m = scenario.baseline.machine_count;
  record.meta.event_summary = summarize_events(scenario.events);
  record.meta.baseline_makespan =
      makespan(scenario.baseline, scenario.baseline_schedule);
  record.meta.final_optimal_makespan = final_solved.makespan;
  return record;
}

std::string record_to_json_line(const DatasetRecord& record) {
  const json j{{"instruction", record.instruction},
               {"input", record.input},
               {"output", record.output},
               {"meta", meta_to_json(record.meta)}};
  return j.dump();
}

DatasetRecord record_from_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    DatasetRecord record;
    record.instruction = j.at("instruction").get<std::string>();
    record.input = j.at("input").get<std::string>();
    record.output = j.at("output").get<std::string>();
    const json& meta = j.at("meta");
    record.meta.seed = meta.at("seed").get<std::uint64_t>();
    record.meta.mode = mode_from_string(meta.at("mode").get<std::string>());
    record.meta.n = meta.at("n").get<int>();
    record.meta.m = meta.at("m").get<int>();
    record.meta.event_summary =
        meta.at("event_summary").get<std::map<std::string, int>>();
    record.meta.baseline_makespan = meta.at("baseline_makespan").get<int>();
    record.meta.final_optimal_makespan =
        meta.at("final_optimal_makespan").get<int>();
    return record;
  } catch (const json::exception& error) {
    throw DomainError(std::string("malformed dataset record line: ") +
                      error.what());
  }
}

GenSummary generate_dataset(const GenConfig& config, std::ostream& out) {
  check_config(config);
  GenSummary summary;
  for (int index = 0; index < config.count; ++index) {
    DatasetRecord record;
    try {
      record = make_record(config, index);
    } catch (const DomainError& error) {
      ++summary.skipped;
      summary.skip_reasons.push_back(
          "record " + std::to_string(index) + " (seed " +
          std::to_string(record_seed(config.base_seed, index)) +
          "): " + error.what());
      continue;
    }
    out << record_to_json_line(record) << '\n';
    if (!out)
      throw DomainError("write failure at record " + std::to_string(index) +
                        "; the dataset file is incomplete");
    ++summary.written;
  }
  out.flush();
  if (!out)
    throw DomainError("write failure while flushing; the dataset file is incomplete");
  return summary;
}

GenSummary generate_dataset(const GenConfig& config, const std::string& out_path) {
  check_config(config);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open dataset file for writing: " + out_path);
  return generate_dataset(config, out);
}

std::string scenario_to_json(const Scenario& scenario) {
  json events = json::array();
  for (const DynamicEvent& event : scenario.events)
    events.push_back(format_event_text(event));
  const json j{{"seed", scenario.seed},
               {"mode", to_string(scenario.mode)},
               {"baseline_tasks",
                format_tasks_text(scenario.baseline, "The current tasks")},
               {"baseline_schedule",
                format_schedule_text(scenario.baseline,
                                     scenario.baseline_schedule)},
               {"events", events}};
  return j.dump();
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& error) {
    throw DomainError(std::string("malformed scenario: ") + error.what());
  }
  try {
    Scenario scenario;
    scenario.seed = j.at("seed").get<std::uint64_t>();
    scenario.mode = mode_from_string(j.at("mode").get<std::string>());
    scenario.baseline =
        parse_tasks_text(j.at("baseline_tasks").get<std::string>());
    const ParsedSchedule parsed =
        parse_schedule_text(j.at("baseline_schedule").get<std::string>());
    if (parsed.skeleton.jobs != scenario.baseline.jobs)
      throw DomainError(
          "scenario schedule text disagrees with its task list");
    scenario.baseline.machine_count = std::max(
        scenario.baseline.machine_count, parsed.skeleton.machine_count);
    scenario.baseline_schedule = parsed.schedule;
    for (const json& sentence : j.at("events"))
      scenario.events.push_back(parse_event_text(sentence.get<std::string>()));
    return scenario;
  } catch (const json::exception& error) {
    throw DomainError(std::string("malformed scenario: ") + error.what());
  }
}

namespace {

DatasetRecord render_bench_record(const Scenario& scenario, FastPolicy policy,
                                  int final_optimal_makespan) {
  const PromptBundle prompt = build_prompt(scenario);
  DatasetRecord record;
  record.instruction = prompt.instruction;
  record.input = prompt.input_with_tag();
  record.output = build_target(scenario, policy);
  record.meta.seed = scenario.seed;
  record.meta.mode = scenario.mode;
  record.meta.n = static_cast<int>(scenario.baseline.jobs.size());
  record.meta.m = scenario.baseline.machine_count;
  record.meta.event_summary = summarize_events(scenario.events);
  record.meta.baseline_makespan =
      makespan(scenario.baseline, scenario.baseline_schedule);
  record.meta.final_optimal_makespan = final_optimal_makespan;
  return record;
}

void write_jsonl(BenchSummary& summary, const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw DomainError("cannot open benchmark file for writing: " + path.string());
  for (const std::string& line : lines) out << line << '\n';
  out.flush();
  if (!out)
    throw DomainError("write failure on benchmark file: " + path.string());
  summary.files.emplace_back(path.string(), static_cast<int>(lines.size()));
}

}  // namespace

BenchSummary bench_ft06(const BenchConfig& config, const std::string& out_dir) {
  if (config.per_setting < 1)
    throw DomainError("bench_ft06 needs per_setting >= 1, got " +
                      std::to_string(config.per_setting));
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw DomainError("cannot create benchmark directory " + out_dir + ": " +
                      ec.message());

  struct Setting {
    const char* name;
    Mode mode;
    std::uint64_t stream;  // distinct seed stream per setting
  };
  const Setting settings[2] = {{"fast", Mode::Fast, config.base_seed ^ 0x1},
                               {"slow", Mode::Slow, config.base_seed ^ 0x2}};
  const std::filesystem::path dir(out_dir);
  BenchSummary summary;
  for (const Setting& setting : settings) {
    SamplingConfig sampling;
    sampling.mode = setting.mode;
    std::vector<std::string> scenario_lines;
    std::vector<std::string> record_lines;
    std::vector<std::string> auto_scenario_lines;
    std::vector<std::string> auto_record_lines;
    for (int index = 0; index < config.per_setting; ++index) {
      const std::uint64_t seed = record_seed(setting.stream, index);
      const Scenario scenario = sample_scenario_for(ft06(), sampling, seed);
      int final_optimum = -1;
      if (setting.mode == Mode::Fast) {
        const ProcessorTrace trace =
            run_processor(scenario.baseline, scenario.events);
        const SolveResult solved = solve_exact(trace.final);
        if (solved.status != SolveStatus::Optimal)
          throw DomainError("benchmark fast row " + std::to_string(index) +
                            " missed the optimality proof");
        final_optimum = solved.makespan;
      }
      const DatasetRecord record =
          render_bench_record(scenario, config.fast_policy, final_optimum);
      scenario_lines.push_back(scenario_to_json(scenario));
      record_lines.push_back(record_to_json_line(record));

      const Scenario auto_scenario = as_auto_variant(scenario);
      DatasetRecord auto_record = record;
      auto_record.input = build_prompt(auto_scenario).input_with_tag();
      auto_record.meta.mode = Mode::Auto;
      // The target is unchanged: the auto route resolves to the same mode
      // this scenario was sampled for.
      auto_scenario_lines.push_back(scenario_to_json(auto_scenario));
      auto_record_lines.push_back(record_to_json_line(auto_record));
    }
    const std::string base = std::string("ft06_") + setting.name;
    write_jsonl(summary, dir / (base + ".scenarios.jsonl"), scenario_lines);
    write_jsonl(summary, dir / (base + ".records.jsonl"), record_lines);
    const std::string auto_base = std::string("ft06_auto_") + setting.name;
    write_jsonl(summary, dir / (auto_base + ".scenarios.jsonl"),
                auto_scenario_lines);
    write_jsonl(summary, dir / (auto_base + ".records.jsonl"),
                auto_record_lines);
  }
  return summary;
}

}  // namespace djsp
