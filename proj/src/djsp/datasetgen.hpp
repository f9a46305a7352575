#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "djsp/events.hpp"
#include "djsp/solver.hpp"
#include "djsp/textio.hpp"

namespace djsp {

// Pipeline provenance stored with every record.
struct DatasetMeta {
  std::uint64_t seed = 0;  // per-record sampling seed
  Mode mode = Mode::Fast;
  int n = 0;  // baseline job count
  int m = 0;  // baseline machine count
  std::map<std::string, int> event_summary;  // count per category name
  int baseline_makespan = 0;
  int final_optimal_makespan = 0;  // -1 when not proven (benchmark slow rows)

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

// One fine-tuning example: the standing instruction, the tagged prompt
// input and the ground-truth response.
struct DatasetRecord {
  std::string instruction;
  std::string input;
  std::string output;
  DatasetMeta meta;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct GenConfig {
  Mode mode = Mode::Fast;  // Fast or Slow; Auto is rejected
  int count = 1000;
  std::uint64_t base_seed = 0;
  FastPolicy fast_policy = FastPolicy::ExactResolve;
  SamplingConfig sampling;  // its `mode` field is overridden by `mode`
  double time_limit_secs = kDefaultTimeLimitSecs;  // per-record exact solve
};

// Stable per-record seed: records are independent of each other and of
// count, so any index can be (re)generated in isolation.
std::uint64_t record_seed(std::uint64_t base_seed, int index);

// Builds record `index`: samples the scenario, proves the post-event
// optimum (meta.final_optimal_makespan), renders prompt and target.
// Throws DomainError when the exact solve misses the time limit or the
// config is unusable; generate_dataset turns that into a logged skip.
DatasetRecord make_record(const GenConfig& config, int index);

// One JSON object per line with keys instruction/input/output/meta.
std::string record_to_json_line(const DatasetRecord& record);
DatasetRecord record_from_json_line(const std::string& line);

struct GenSummary {
  int written = 0;
  int skipped = 0;
  std::vector<std::string> skip_reasons;  // one entry per skipped record
};

// Streams records in index order. Identical config -> byte-identical
// output. Throws DomainError on config errors or write failure (the file
// is then explicitly incomplete).
GenSummary generate_dataset(const GenConfig& config, std::ostream& out);
GenSummary generate_dataset(const GenConfig& config, const std::string& out_path);

// Self-contained scenario serialization: the baseline as task + schedule
// wire text, events as their sentences. The schedule text doubles as an
// integrity check (it must agree with the task list on re-parse).
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

// Category key used in DatasetMeta::event_summary.
std::string event_category_name(const DynamicEvent& event);
std::map<std::string, int> summarize_events(const std::vector<DynamicEvent>& events);

struct BenchConfig {
  int per_setting = 30;
  std::uint64_t base_seed = 0;
  FastPolicy fast_policy = FastPolicy::ExactResolve;
};

struct BenchSummary {
  std::vector<std::pair<std::string, int>> files;  // (path, line count)
};

// Benchmark suites on the built-in 6x6 baseline: per_setting single-event
// (fast) and multi-event (slow) scenarios, each also re-tagged as an auto
// variant. Eight JSONL files land in out_dir (created if missing):
//   ft06_{fast,slow}.scenarios.jsonl        scenario_to_json lines
//   ft06_{fast,slow}.records.jsonl          prompt/target record lines
//   ft06_auto_{fast,slow}.{scenarios,records}.jsonl
// An auto record keeps its base target (the auto route resolves to the
// same mode) and differs only in prompt tag and meta. Slow rows leave
// final_optimal_makespan at -1 instead of re-proving large instances.
// Identical config -> byte-identical files. No model is invoked.
BenchSummary bench_ft06(const BenchConfig& config, const std::string& out_dir);

}  // namespace djsp
