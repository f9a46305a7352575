#include "djsp/textio.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <string_view>
#include <utility>

#include "djsp/judge.hpp"
#include "djsp/repair.hpp"
#include "djsp/solver.hpp"

namespace djsp {

const char* const kInstructionText =
    "You are given a current schedule for a Job Shop Scheduling Problem (JSSP), "
    "as well as one or more dynamic events. Based on the impact of the dynamic "
    "event, you are required to: 1. Generate updated scheduling tasks. "
    "2. Generate machine unavailability intervals. 3. If the dynamic event has "
    "a minor impact on the current schedules, producing locally adjusted "
    "schedules that adapts the original schedule to these changes while "
    "minimizing disruption to unaffected operations.";

const char* const kConstraintText =
    "The locally adjusted schedules must strictly satisfy the following "
    "constraints: 1. Each operation must be processed exactly once. "
    "2. All operations of each job must be processed in the given order. "
    "3. Each operation must be processed on its designated machine. "
    "4. Each machine can process at most one operation at any given time. "
    "5. Preemption is not allowed: once an operation starts, it must be "
    "processed continuously until completion. 6. No operation may be scheduled "
    "during machine unavailability intervals. 7. The adjustment should be "
    "local, meaning that only operations affected by the dynamic events should "
    "be rescheduled whenever possible, while preserving the original schedule "
    "for unaffected operations.";

namespace {

std::string itos(int value) { return std::to_string(value); }

// Sequential scanner. Parsers accept arbitrary whitespace between
// structural elements (expect/parse_int skip it) but are otherwise exact.
struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  explicit Cursor(const std::string& text_) : text(text_) {}

  bool at_end() const { return pos >= text.size(); }

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool peek(std::string_view lit) const {
    return text.compare(pos, lit.size(), lit) == 0;
  }

  bool eat(std::string_view lit) {
    if (!peek(lit)) return false;
    pos += lit.size();
    return true;
  }

  void expect(std::string_view lit, const std::string& context) {
    skip_ws();
    if (!eat(lit))
      throw ParseError("expected \"" + std::string(lit) + "\" in " + context,
                       pos);
  }

  int parse_int(const std::string& context) {
    skip_ws();
    std::size_t end = pos;
    int value = 0;
    while (end < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[end]))) {
      const int digit = text[end] - '0';
      if (value > (std::numeric_limits<int>::max() - digit) / 10)
        throw ParseError("integer too large in " + context, pos);
      value = value * 10 + digit;
      ++end;
    }
    if (end == pos) throw ParseError("expected integer in " + context, pos);
    pos = end;
    return value;
  }
};

std::string op_tuple(int op_index, const Operation& op) {
  return "(O" + itos(op_index + 1) + ", M" + itos(op.machine) + ", PT" +
         itos(op.duration) + ")";
}

// Parses `{(O1, M2, PT5), …}` including the braces; operation numbering
// must be contiguous from O1.
std::vector<Operation> parse_op_block(Cursor& c, const std::string& owner) {
  c.expect("{", owner);
  std::map<int, Operation> by_index;
  c.skip_ws();
  if (!c.eat("}")) {
    while (true) {
      c.skip_ws();
      const std::size_t tuple_pos = c.pos;
      c.expect("(O", owner);
      const int k = c.parse_int("operation index");
      c.expect(",", owner);
      c.expect("M", owner);
      const int machine = c.parse_int("machine index");
      c.expect(",", owner);
      c.expect("PT", owner);
      const int duration = c.parse_int("processing time");
      c.expect(")", owner);
      if (k < 1)
        throw ParseError("operation indices are 1-based in " + owner,
                         tuple_pos);
      if (!by_index.emplace(k - 1, Operation{machine, duration}).second)
        throw ParseError("duplicate operation O" + itos(k) + " in " + owner,
                         tuple_pos);
      c.skip_ws();
      if (c.eat(",")) continue;
      c.expect("}", owner);
      break;
    }
  }
  std::vector<Operation> ops;
  ops.reserve(by_index.size());
  for (const auto& [index, op] : by_index) {
    if (index != static_cast<int>(ops.size()))
      throw ParseError("operations in " + owner + " are not contiguous from O1",
                       c.pos);
    ops.push_back(op);
  }
  return ops;
}

ParsedSchedule parse_schedule_at(Cursor& c) {
  ParsedSchedule out;
  std::map<int, std::map<int, Operation>> ops_by_job;
  int segments = 0;
  int max_end = 0;
  while (true) {
    c.skip_ws();
    if (!c.eat("The schedules of machine M")) break;
    const std::size_t segment_pos = c.pos;
    const int machine = c.parse_int("machine index");
    if (machine != segments)
      throw ParseError("machine segments must run M0, M1, … in order",
                       segment_pos);
    c.expect("are:", "schedule segment");
    c.expect("{", "schedule segment");
    c.skip_ws();
    if (!c.eat("}")) {
      while (true) {
        c.skip_ws();
        const std::size_t tuple_pos = c.pos;
        c.expect("(J", "schedule tuple");
        const int job = c.parse_int("job label");
        c.expect(",", "schedule tuple");
        c.expect("O", "schedule tuple");
        const int k = c.parse_int("operation index");
        c.expect(",", "schedule tuple");
        const int duration = c.parse_int("processing time");
        c.expect(",", "schedule tuple");
        const int start = c.parse_int("start time");
        c.expect("-", "schedule tuple");
        const int end = c.parse_int("end time");
        c.expect(")", "schedule tuple");
        if (k < 1)
          throw ParseError("operation indices are 1-based", tuple_pos);
        if (end != start + duration)
          throw ParseError("end time " + itos(end) + " is not start " +
                               itos(start) + " plus processing time " +
                               itos(duration),
                           tuple_pos);
        const OpRef ref{job, k - 1};
        if (!out.schedule.starts.emplace(ref, start).second)
          throw ParseError("duplicate tuple for " + op_name(ref), tuple_pos);
        ops_by_job[job][k - 1] = Operation{machine, duration};
        max_end = std::max(max_end, end);
        c.skip_ws();
        if (c.eat(",")) continue;
        c.expect("}", "schedule segment");
        break;
      }
    }
    ++segments;
  }
  c.expect("MakeSpan=", "schedule text");
  const std::size_t makespan_pos = c.pos;
  out.makespan = c.parse_int("makespan");
  if (out.makespan != max_end)
    throw ParseError("MakeSpan=" + itos(out.makespan) +
                         " does not match the maximum end time " +
                         itos(max_end),
                     makespan_pos);
  for (const auto& [label, by_index] : ops_by_job) {
    std::vector<Operation> ops;
    ops.reserve(by_index.size());
    for (const auto& [index, op] : by_index) {
      if (index != static_cast<int>(ops.size()))
        throw ParseError("operations of job J" + itos(label) +
                             " are not contiguous from O1",
                         c.pos);
      ops.push_back(op);
    }
    out.skeleton.jobs[label] = std::move(ops);
  }
  out.skeleton.machine_count = segments;
  return out;
}

DynamicEvent parse_event_at(Cursor& c) {
  c.skip_ws();
  const std::size_t sentence_pos = c.pos;
  if (c.eat("Processing time change event:")) {
    c.expect("the processing time of operation O", "time change event");
    const int k = c.parse_int("operation index");
    c.expect("belonging to job J", "time change event");
    const int job = c.parse_int("job label");
    c.expect("is updated from", "time change event");
    const int old_pt = c.parse_int("old processing time");
    c.expect("to", "time change event");
    const int new_pt = c.parse_int("new processing time");
    c.expect(".", "time change event");
    if (k < 1) throw ParseError("operation indices are 1-based", sentence_pos);
    return ProcessingTimeChange{job, k - 1, old_pt, new_pt};
  }
  if (c.eat("Processing machine change event:")) {
    c.expect("the processing machine of operation O", "machine change event");
    const int k = c.parse_int("operation index");
    c.expect("belonging to job J", "machine change event");
    const int job = c.parse_int("job label");
    c.expect("is updated from", "machine change event");
    const int old_machine = c.parse_int("old machine index");
    c.expect("to", "machine change event");
    const int new_machine = c.parse_int("new machine index");
    c.expect(".", "machine change event");
    if (k < 1) throw ParseError("operation indices are 1-based", sentence_pos);
    return MachineChange{job, k - 1, old_machine, new_machine};
  }
  if (c.eat("Machine maintenance event:")) {
    c.expect("the unavailable duration of machine M", "maintenance event");
    const int machine = c.parse_int("machine index");
    c.expect("is:", "maintenance event");
    c.expect("[", "maintenance event");
    const std::size_t window_pos = c.pos;
    const int start = c.parse_int("window start");
    c.expect(",", "maintenance event");
    const int end = c.parse_int("window end");
    c.expect("]", "maintenance event");
    c.expect(".", "maintenance event");
    if (end <= start)
      throw ParseError("maintenance window end must exceed its start",
                       window_pos);
    return MachineMaintenance{machine, Window{start, end}};
  }
  if (c.eat("Job cancellation event:")) {
    c.expect("job J", "cancellation event");
    const int job = c.parse_int("job label");
    c.expect("is cancelled", "cancellation event");
    c.expect(".", "cancellation event");
    return JobCancellation{job};
  }
  if (c.eat("Job insertion event:")) {
    c.expect("a new job J", "insertion event");
    const int job = c.parse_int("job label");
    c.expect("is inserted with operations:", "insertion event");
    c.skip_ws();
    std::vector<Operation> ops = parse_op_block(c, "insertion event");
    c.expect(".", "insertion event");
    return JobInsertion{job, std::move(ops)};
  }
  throw ParseError("unrecognized event sentence", sentence_pos);
}

}  // namespace

std::string format_schedule_text(const Instance& instance,
                                 const Schedule& schedule) {
  const ValidationReport report = validate(instance, schedule);
  if (!report.feasible)
    throw DomainError("cannot format an infeasible schedule: " +
                      report.violations.front().detail);

  std::vector<std::vector<OpRef>> per_machine(
      static_cast<std::size_t>(instance.machine_count));
  for (const auto& [label, ops] : instance.jobs) {
    for (int k = 0; k < static_cast<int>(ops.size()); ++k)
      per_machine[ops[k].machine].push_back({label, k});
  }

  std::string out;
  for (int m = 0; m < instance.machine_count; ++m) {
    out += "The schedules of machine M" + itos(m) + " are: {";
    bool first = true;
    for (const OpRef& ref : per_machine[m]) {
      const Operation& op = instance.jobs.at(ref.first)[ref.second];
      const int start = schedule.starts.at(ref);
      if (!first) out += ",";
      first = false;
      out += "(J" + itos(ref.first) + ", O" + itos(ref.second + 1) + ", " +
             itos(op.duration) + ", " + itos(start) + "-" +
             itos(start + op.duration) + ")";
    }
    out += "}";
  }
  out += "MakeSpan=" + itos(makespan(instance, schedule));
  return out;
}

ParsedSchedule parse_schedule_text(const std::string& text) {
  Cursor c(text);
  c.skip_ws();
  c.eat("The current schedules:");  // optional prefix
  return parse_schedule_at(c);      // trailing text is the caller's business
}

std::string format_tasks_text(const Instance& instance,
                              const std::string& heading) {
  if (heading != "The current tasks" && heading != "The new tasks")
    throw DomainError("unsupported task heading: " + heading);
  std::string out = heading + ":";
  for (const auto& [label, ops] : instance.jobs) {
    out += " J" + itos(label) + ": {";
    for (int k = 0; k < static_cast<int>(ops.size()); ++k) {
      if (k > 0) out += ", ";
      out += op_tuple(k, ops[k]);
    }
    out += "}";
  }
  bool any_window = false;
  for (const auto& [machine, windows] : instance.maintenance)
    any_window = any_window || !windows.empty();
  if (any_window) {
    out += "The unavailable intervals of machines:";
    for (const auto& [machine, windows] : instance.maintenance) {
      if (windows.empty()) continue;
      out += " M" + itos(machine) + ": [";
      for (std::size_t i = 0; i < windows.size(); ++i) {
        if (i > 0) out += ", ";
        out += "(" + itos(windows[i].start) + ", " + itos(windows[i].end) + ")";
      }
      out += "]";
    }
  }
  return out;
}

Instance parse_tasks_text(const std::string& text) {
  Cursor c(text);
  c.skip_ws();
  if (!c.eat("The current tasks:")) c.eat("The new tasks:");  // both optional
  Instance out;
  int max_machine = -1;
  while (true) {
    c.skip_ws();
    if (c.at_end() || c.peek("The unavailable intervals of machines:")) break;
    const std::size_t job_pos = c.pos;
    c.expect("J", "task list");
    const int label = c.parse_int("job label");
    if (out.jobs.count(label) != 0)
      throw ParseError("duplicate job label J" + itos(label), job_pos);
    c.expect(":", "job block");
    c.skip_ws();
    std::vector<Operation> ops = parse_op_block(c, "job J" + itos(label));
    for (const Operation& op : ops) max_machine = std::max(max_machine, op.machine);
    out.jobs[label] = std::move(ops);
  }
  c.skip_ws();
  if (c.eat("The unavailable intervals of machines:")) {
    while (true) {
      c.skip_ws();
      if (c.at_end()) break;
      c.expect("M", "interval list");
      const int machine = c.parse_int("machine index");
      max_machine = std::max(max_machine, machine);
      c.expect(":", "interval list");
      c.expect("[", "interval list");
      c.skip_ws();
      if (c.eat("]")) continue;
      while (true) {
        c.expect("(", "interval");
        const std::size_t window_pos = c.pos;
        const int start = c.parse_int("interval start");
        c.expect(",", "interval");
        const int end = c.parse_int("interval end");
        c.expect(")", "interval");
        if (end <= start)
          throw ParseError("interval end must exceed its start", window_pos);
        add_window(out.maintenance[machine], Window{start, end});
        c.skip_ws();
        if (c.eat(",")) continue;
        c.expect("]", "interval list");
        break;
      }
    }
  }
  c.skip_ws();
  if (!c.at_end())
    throw ParseError("unexpected trailing text after task list", c.pos);
  out.machine_count = max_machine + 1;
  return out;
}

std::string format_event_text(const DynamicEvent& event) {
  struct Formatter {
    std::string operator()(const JobCancellation& e) const {
      return "Job cancellation event: job J" + itos(e.job) + " is cancelled.";
    }
    std::string operator()(const ProcessingTimeChange& e) const {
      return "Processing time change event: the processing time of operation O" +
             itos(e.op + 1) + " belonging to job J" + itos(e.job) +
             " is updated from " + itos(e.old_pt) + " to " + itos(e.new_pt) +
             ".";
    }
    std::string operator()(const MachineChange& e) const {
      return "Processing machine change event: the processing machine of "
             "operation O" +
             itos(e.op + 1) + " belonging to job J" + itos(e.job) +
             " is updated from " + itos(e.old_machine) + " to " +
             itos(e.new_machine) + ".";
    }
    std::string operator()(const JobInsertion& e) const {
      std::string out = "Job insertion event: a new job J" + itos(e.job_label) +
                        " is inserted with operations: {";
      for (int k = 0; k < static_cast<int>(e.ops.size()); ++k) {
        if (k > 0) out += ", ";
        out += op_tuple(k, e.ops[k]);
      }
      return out + "}.";
    }
    std::string operator()(const MachineMaintenance& e) const {
      return "Machine maintenance event: the unavailable duration of machine M" +
             itos(e.machine) + " is: [" + itos(e.window.start) + ", " +
             itos(e.window.end) + "].";
    }
  };
  return std::visit(Formatter{}, event);
}

DynamicEvent parse_event_text(const std::string& text) {
  Cursor c(text);
  DynamicEvent event = parse_event_at(c);
  c.skip_ws();
  if (!c.at_end())
    throw ParseError("unexpected trailing text after event sentence", c.pos);
  return event;
}

Instance parse_orlib(const std::string& text) {
  Cursor c(text);
  const int jobs = c.parse_int("job count");
  const int machines = c.parse_int("machine count");
  Instance out;
  out.machine_count = machines;
  for (int label = 1; label <= jobs; ++label) {
    std::vector<Operation> ops;
    ops.reserve(static_cast<std::size_t>(machines));
    for (int k = 0; k < machines; ++k) {
      const std::size_t pair_pos = c.pos;
      const int machine = c.parse_int("machine index");
      if (machine >= machines)
        throw ParseError("machine index " + itos(machine) +
                             " out of range for " + itos(machines) +
                             " machines",
                         pair_pos);
      const int duration = c.parse_int("processing time");
      ops.push_back({machine, duration});
    }
    out.jobs[label] = std::move(ops);
  }
  c.skip_ws();
  if (!c.at_end()) throw ParseError("unexpected trailing text", c.pos);
  return out;
}

std::string format_orlib(const Instance& instance) {
  if (!instance.maintenance.empty())
    throw DomainError(
        "maintenance windows cannot be represented in the benchmark format");
  std::string out = itos(static_cast<int>(instance.jobs.size())) + " " +
                    itos(instance.machine_count) + "\n";
  int expected_label = 1;
  for (const auto& [label, ops] : instance.jobs) {
    if (label != expected_label++)
      throw DomainError(
          "job labels must be contiguous from J1 for the benchmark format");
    if (static_cast<int>(ops.size()) != instance.machine_count)
      throw DomainError(
          "the benchmark format requires one operation per machine; job J" +
          itos(label) + " has " + itos(static_cast<int>(ops.size())));
    for (std::size_t k = 0; k < ops.size(); ++k) {
      out += (k == 0 ? "" : " ");
      out += itos(ops[k].machine) + " " + itos(ops[k].duration);
    }
    out += "\n";
  }
  return out;
}

PromptBundle build_prompt(const Scenario& scenario) {
  PromptBundle out;
  out.instruction = std::string(kInstructionText) + " " + kConstraintText;
  out.input = "The current schedules: " +
              format_schedule_text(scenario.baseline,
                                   scenario.baseline_schedule) +
              " The dynamic event:";
  for (const DynamicEvent& event : scenario.events)
    out.input += " " + format_event_text(event);
  switch (scenario.mode) {
    case Mode::Fast: out.mode_tag = kFastModeTag; break;
    case Mode::Auto: out.mode_tag = kAutoModeTag; break;
    case Mode::Slow: break;
  }
  return out;
}

std::string build_target(const Scenario& scenario, FastPolicy fast_policy) {
  const Mode mode =
      scenario.mode == Mode::Auto ? classify_mode(scenario.events) : scenario.mode;
  const ProcessorTrace trace = run_processor(scenario.baseline, scenario.events);

  if (mode == Mode::Slow) {
    std::string out = kReasoningOpen;
    for (const ProcessorTrace::Step& step : trace.steps) {
      out += format_event_text(step.event);
      out += format_tasks_text(step.state_after, "The current tasks");
    }
    out += kReasoningClose;
    out += format_tasks_text(trace.final, "The new tasks");
    return out;
  }

  Schedule revised;
  if (fast_policy == FastPolicy::ExactResolve) {
    const SolveResult solved = solve_exact(trace.final);
    if (solved.status != SolveStatus::Optimal)
      throw DomainError("fast target needs an optimal revised schedule, got " +
                        to_string(solved.status));
    revised = solved.schedule;
  } else {
    revised = local_repair(scenario).schedule;
  }
  return format_tasks_text(trace.final, "The new tasks") +
         format_schedule_text(trace.final, revised);
}

ParsedResponse parse_model_output(const std::string& text, Mode expected_mode) {
  ParsedResponse out;
  Mode mode = expected_mode;
  if (mode == Mode::Auto) {
    // Auto responses commit to one of the two shapes; the schedule section
    // is the discriminator.
    mode = text.find("The schedules of machine M") != std::string::npos
               ? Mode::Fast
               : Mode::Slow;
  }

  if (mode == Mode::Slow) {
    const std::string_view open_marker{kReasoningOpen};
    const std::string_view close_marker{kReasoningClose};
    const std::size_t open = text.find(open_marker.data());
    std::size_t close = std::string::npos;
    if (open == std::string::npos) {
      out.diagnostics.push_back("missing [unused16] reasoning marker");
    } else {
      close = text.find(close_marker.data(), open + open_marker.size());
      if (close == std::string::npos)
        out.diagnostics.push_back("missing [unused17] reasoning marker");
    }

    std::size_t final_pos = std::string::npos;
    if (close != std::string::npos) {
      final_pos = text.find("The new tasks:", close + close_marker.size());
      if (final_pos == std::string::npos)
        out.diagnostics.push_back("no final task block after [unused17]");
    } else {
      final_pos = text.rfind("The new tasks:");
      if (final_pos == std::string::npos)
        out.diagnostics.push_back("no final task block found");
    }

    if (open != std::string::npos) {
      const std::size_t begin = open + open_marker.size();
      const std::size_t end = close != std::string::npos ? close
                              : final_pos != std::string::npos ? final_pos
                                                               : text.size();
      if (end >= begin) out.reasoning = text.substr(begin, end - begin);
    }

    if (final_pos != std::string::npos) {
      try {
        out.final_tasks = parse_tasks_text(text.substr(final_pos));
      } catch (const ParseError& error) {
        out.diagnostics.push_back(std::string("final task block: ") +
                                  error.what());
      }
    }
    out.parse_ok = out.final_tasks.has_value();
    return out;
  }

  const std::size_t schedule_pos = text.find("The schedules of machine M");
  if (schedule_pos == std::string::npos) {
    out.diagnostics.push_back("no schedule section found");
    try {
      out.final_tasks = parse_tasks_text(text);
    } catch (const ParseError& error) {
      out.diagnostics.push_back(std::string("task section: ") + error.what());
    }
  } else {
    try {
      out.final_tasks = parse_tasks_text(text.substr(0, schedule_pos));
    } catch (const ParseError& error) {
      out.diagnostics.push_back(std::string("task section: ") + error.what());
    }
    try {
      out.final_schedule = parse_schedule_text(text.substr(schedule_pos)).schedule;
    } catch (const ParseError& error) {
      out.diagnostics.push_back(std::string("schedule section: ") +
                                error.what());
    }
  }
  out.parse_ok = out.final_tasks.has_value() && out.final_schedule.has_value();
  return out;
}

ParsedPrompt parse_prompt_input(const std::string& text) {
  std::string body = text;
  std::string tag;
  const auto strip_tag = [&body, &tag](std::string_view spelled,
                                       const char* canonical) {
    if (body.size() < spelled.size()) return false;
    if (body.compare(body.size() - spelled.size(), spelled.size(),
                     spelled.data()) != 0)
      return false;
    body.erase(body.size() - spelled.size());
    while (!body.empty() &&
           std::isspace(static_cast<unsigned char>(body.back())))
      body.pop_back();
    tag = canonical;
    return true;
  };
  strip_tag("/no_think", kFastModeTag) ||
      strip_tag("**no_think**", kFastModeTag) ||
      strip_tag("/auto_think", kAutoModeTag) ||
      strip_tag("**auto_think**", kAutoModeTag);

  Cursor c(body);
  c.skip_ws();
  c.eat("The current schedules:");  // optional prefix

  ParsedPrompt out;
  out.mode_tag = tag;
  out.baseline = parse_schedule_at(c);
  c.expect("The dynamic event:", "prompt input");
  while (true) {
    c.skip_ws();
    if (c.at_end()) break;
    out.events.push_back(parse_event_at(c));
  }
  return out;
}

}  // namespace djsp
