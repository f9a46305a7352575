#ifndef DJSP_DJSP_H
#define DJSP_DJSP_H

/* Public C surface of the dynamic job-shop scheduling toolkit.
 *
 * All objects are opaque handles created and destroyed here; every
 * function returns a djsp_status and reports details for the last
 * failure on the calling thread via djsp_last_error(). Strings handed
 * out through char** parameters are heap-allocated and must be released
 * with djsp_string_free(). Inputs use the toolkit's text wire formats:
 * task lists ("The current tasks: J1: {(O1, M0, PT3), ...} ..."),
 * machine schedules ("The schedules of machine M0 are: {...}MakeSpan=N"),
 * OR-library instance files, event sentences, and JSON for scenarios,
 * datasets and evaluation reports.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum djsp_status {
  DJSP_OK = 0,
  DJSP_ERR_INVALID = 1,  /* null handle or out-parameter */
  DJSP_ERR_DOMAIN = 2,   /* input breaks a documented precondition */
  DJSP_ERR_PARSE = 3,    /* text does not match a wire format */
  DJSP_ERR_INTERNAL = 4, /* unexpected failure */
} djsp_status;

/* Message for the most recent failing call on this thread; empty string
 * when that call succeeded. The pointer stays valid until the next
 * library call on the same thread. */
const char* djsp_last_error(void);

void djsp_string_free(char* text);

const char* djsp_version(void);

typedef struct djsp_instance djsp_instance;
typedef struct djsp_schedule djsp_schedule;
typedef struct djsp_scenario djsp_scenario;
typedef struct djsp_solution djsp_solution;

void djsp_instance_free(djsp_instance* instance);
void djsp_schedule_free(djsp_schedule* schedule);
void djsp_scenario_free(djsp_scenario* scenario);
void djsp_solution_free(djsp_solution* solution);

/* --- instances ------------------------------------------------------- */

/* OR-library format: "n m" header, one line per job of
 * "machine duration" pairs. */
djsp_status djsp_instance_parse_orlib(const char* text, djsp_instance** out);

/* Task-list wire format, optionally with maintenance intervals. */
djsp_status djsp_instance_parse_tasks(const char* text, djsp_instance** out);

/* heading is "The current tasks" or "The new tasks". */
djsp_status djsp_instance_format_tasks(const djsp_instance* instance,
                                       const char* heading, char** out);

djsp_status djsp_instance_counts(const djsp_instance* instance, int* jobs,
                                 int* machines, int* operations);

/* --- schedules and validation ---------------------------------------- */

/* Machine-schedule wire format; retains only the start times. */
djsp_status djsp_schedule_parse(const char* text, djsp_schedule** out);

/* feasible gets 1 or 0; report_text the full violation listing (empty
 * for a feasible schedule). Either out-parameter may be NULL. */
djsp_status djsp_validate(const djsp_instance* instance,
                          const djsp_schedule* schedule, int* feasible,
                          char** report_text);

/* --- exact solving ---------------------------------------------------- */

typedef enum djsp_solve_status {
  DJSP_SOLVE_OPTIMAL = 0,
  DJSP_SOLVE_FEASIBLE = 1, /* time limit hit; best incumbent returned */
  DJSP_SOLVE_INFEASIBLE = 2,
} djsp_solve_status;

/* Branch-and-bound makespan minimization. time_limit_secs <= 0 selects
 * the built-in default (60 s). */
djsp_status djsp_solve(const djsp_instance* instance, double time_limit_secs,
                       djsp_solution** out);

djsp_status djsp_solution_info(const djsp_solution* solution, int* makespan,
                               djsp_solve_status* status,
                               int64_t* nodes_explored);

/* The solved schedule in machine-schedule wire format. */
djsp_status djsp_solution_schedule_text(const djsp_solution* solution,
                                        char** out);

/* --- scenarios -------------------------------------------------------- */

/* Samples a disturbance list for the given baseline (the baseline's
 * exact schedule is computed internally). mode is "fast" or "slow". */
djsp_status djsp_scenario_sample_for(const djsp_instance* baseline,
                                     const char* mode, uint64_t seed,
                                     djsp_scenario** out);

djsp_status djsp_scenario_from_json(const char* json_text,
                                    djsp_scenario** out);
djsp_status djsp_scenario_to_json(const djsp_scenario* scenario, char** out);

/* mode_out receives "fast", "slow" or "auto". Either out may be NULL. */
djsp_status djsp_scenario_info(const djsp_scenario* scenario, char** mode_out,
                               int* event_count);

djsp_status djsp_scenario_event_text(const djsp_scenario* scenario, int index,
                                     char** out);

/* Disruption severity breakdown as key: value lines. */
djsp_status djsp_scenario_explain(const djsp_scenario* scenario, char** out);

/* Prompt side of a training record; input_out carries the mode tag. */
djsp_status djsp_scenario_prompt(const djsp_scenario* scenario,
                                 char** instruction_out, char** input_out);

/* Ground-truth response text. fast_policy is "exact" or "repair" and
 * only affects single-event (fast) targets. */
djsp_status djsp_scenario_target(const djsp_scenario* scenario,
                                 const char* fast_policy, char** out);

/* --- local repair ----------------------------------------------------- */

/* Right-shift repair of the scenario's baseline schedule. makespan,
 * affected (count of operations allowed to move) and schedule_text may
 * each be NULL. */
djsp_status djsp_repair(const djsp_scenario* scenario, int* makespan,
                        int* affected, char** schedule_text);

/* --- dataset generation and benchmarks -------------------------------- */

/* Writes `count` JSONL records for mode "fast" or "slow" to out_path.
 * fast_policy: "exact" or "repair". time_limit_secs <= 0 selects the
 * default. summary_out receives key: value lines (written/skipped plus
 * one line per skip reason). */
djsp_status djsp_generate_dataset(const char* mode, int count, uint64_t seed,
                                  const char* fast_policy,
                                  double time_limit_secs,
                                  const char* out_path, char** summary_out);

/* FT06 benchmark suites (fast, slow, and auto-tagged variants of both)
 * written into out_dir; summary_out lists `file: line-count` lines. */
djsp_status djsp_bench_ft06(int per_setting, uint64_t seed,
                            const char* out_dir, char** summary_out);

/* --- evaluation ------------------------------------------------------- */

/* scenarios_jsonl: one scenario JSON object per line. responses_jsonl:
 * one {"output": "..."} object per line, aligned by index. Produces the
 * human-readable report and/or the JSON report. */
djsp_status djsp_evaluate(const char* scenarios_jsonl,
                          const char* responses_jsonl, double time_limit_secs,
                          char** report_text, char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DJSP_DJSP_H */
