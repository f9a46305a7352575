#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "djsp/events.hpp"
#include "djsp/jsp_core.hpp"

namespace djsp {

/// The single-line wire formats used for prompts, targets and responses.
/// Formatting is byte-deterministic; each parser is the exact inverse on
/// the formatter's output and additionally tolerates surrounding
/// whitespace between structural elements.

// Standing prompt text: the task statement and the locally-adjusted-
// schedule constraint list, shipped verbatim as string constants.
extern const char* const kInstructionText;
extern const char* const kConstraintText;

// Mode identifiers appended to prompts and the reasoning-span delimiters
// used in slow-thinking targets. They are plain substrings here, not
// tokenizer entities. Parsers also accept the "**no_think**"/
// "**auto_think**" spellings.
inline constexpr const char* kFastModeTag = "/no_think";
inline constexpr const char* kAutoModeTag = "/auto_think";
inline constexpr const char* kReasoningOpen = "[unused16]";
inline constexpr const char* kReasoningClose = "[unused17]";

// Parse failure with the byte offset (into the given text) where the
// parser gave up.
struct ParseError : std::runtime_error {
  std::size_t position;

  ParseError(const std::string& message, std::size_t position_)
      : std::runtime_error(message + " (at byte " + std::to_string(position_) + ")"),
        position(position_) {}
};

// One machine-order segment per machine in index order, tuples
// (J{job}, O{op}, {pt}, {start}-{end}) joined by "," and listed per job
// label; ends with MakeSpan={c}. The schedule must validate.
std::string format_schedule_text(const Instance& instance, const Schedule& schedule);

struct ParsedSchedule {
  // Jobs/machines/durations as recoverable from the tuples; maintenance is
  // not representable in this format, so the map is empty. machine_count
  // comes from the number of segments.
  Instance skeleton;
  Schedule schedule;
  int makespan = 0;
};

// Inverse of format_schedule_text. Checks end = start + pt per tuple and
// the MakeSpan field against the maximum end. Text after the MakeSpan
// value (e.g. an appended event section) is ignored.
ParsedSchedule parse_schedule_text(const std::string& text);

// heading must be "The current tasks" or "The new tasks". Emits
// `{heading}: J{j}: {(O{k}, M{m}, PT{p}), …} …`, jobs in label order, and
// appends `The unavailable intervals of machines: M{m}: [({s}, {e})…]` when
// any maintenance windows exist.
std::string format_tasks_text(const Instance& instance, const std::string& heading);

// Inverse of format_tasks_text; the heading is optional on input. Rejects
// duplicate job labels and non-contiguous operation numbering.
Instance parse_tasks_text(const std::string& text);

// The five event sentence templates, e.g. `Processing time change event:
// the processing time of operation O1 belonging to job J3 is updated from
// 5 to 10.`; parse_event_text accepts exactly one sentence.
std::string format_event_text(const DynamicEvent& event);
DynamicEvent parse_event_text(const std::string& text);

// Benchmark instance files: header `n m`, then one line per job with m
// `machine duration` pairs, machines 0-based. Job labels become 1..n.
// Maintenance windows cannot be represented; formatting an instance with
// windows or with op counts != m is refused.
Instance parse_orlib(const std::string& text);
std::string format_orlib(const Instance& instance);

struct PromptBundle {
  std::string instruction;
  std::string input;
  std::string mode_tag;  // empty, kFastModeTag or kAutoModeTag

  // The input with the mode tag appended (space-separated), as written to
  // datasets and consumed by a model.
  std::string input_with_tag() const {
    return mode_tag.empty() ? input : input + " " + mode_tag;
  }
};

// instruction = kInstructionText + " " + kConstraintText; input = "The
// current schedules: " + schedule text + " The dynamic event: " + the
// event sentences joined by single spaces. Fast scenarios tag /no_think,
// Auto scenarios /auto_think, Slow scenarios stay untagged.
PromptBundle build_prompt(const Scenario& scenario);

// How fast-thinking targets obtain their revised schedule.
enum class FastPolicy { ExactResolve, LocalRepair };

// Ground-truth response text.
//   Fast: final task list ("The new tasks") followed by the revised
//         schedule text (policy-selected).
//   Slow: kReasoningOpen + per event its sentence and the intermediate
//         task list ("The current tasks"), then kReasoningClose and the
//         final task list with unavailability intervals.
// All blocks are directly concatenated, without separators.
std::string build_target(const Scenario& scenario, FastPolicy fast_policy);

struct ParsedResponse {
  std::optional<std::string> reasoning;
  std::optional<Instance> final_tasks;
  std::optional<Schedule> final_schedule;
  bool parse_ok = false;
  std::vector<std::string> diagnostics;
};

// Best-effort parse of arbitrary response text; never throws.
//   Slow: takes the reasoning span between the unused-token markers (when
//         present) and parses the final "The new tasks" block.
//   Fast: splits at the first schedule segment and parses the task list
//         and the schedule.
ParsedResponse parse_model_output(const std::string& text, Mode expected_mode);

struct ParsedPrompt {
  ParsedSchedule baseline;
  std::vector<DynamicEvent> events;
  std::string mode_tag;  // empty when untagged
};

// Inverse of build_prompt's input side (including an optional trailing
// mode tag). Round-trips every generated prompt.
ParsedPrompt parse_prompt_input(const std::string& text);

}  // namespace djsp
