/* gpplan: continuous-time Gaussian-process motion planning for planar robots.
 *
 * C interface to the planning core. All functions return a gpplan_status;
 * on failure, gpplan_last_error() describes the problem for the calling
 * thread. Handles are opaque and freed with their matching _free function.
 * Strings returned through out-parameters are heap-allocated and released
 * with gpplan_string_free.
 */
#ifndef GPPLAN_H
#define GPPLAN_H

#include <stddef.h>

#if defined(_WIN32)
#define GPPLAN_API __declspec(dllexport)
#else
#define GPPLAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpplan_status {
  GPPLAN_OK = 0,
  GPPLAN_ERROR_INVALID_ARGUMENT = 1,
  GPPLAN_ERROR_IO = 2,
  GPPLAN_ERROR_NUMERICAL = 3,
} gpplan_status;

typedef struct gpplan_problem_s gpplan_problem;
typedef struct gpplan_result_s gpplan_result;

/* Thread-local message for the most recent failure. Never NULL. */
GPPLAN_API const char* gpplan_last_error(void);

/* ---------------------------------------------------------------- problems */

/* Loads a problem JSON file; relative scene/robot paths resolve against the
 * file's directory. */
GPPLAN_API gpplan_status gpplan_problem_load(const char* path, gpplan_problem** out_problem);

/* Parses problem JSON from memory; base_dir resolves relative paths. */
GPPLAN_API gpplan_status gpplan_problem_parse(const char* json_text, const char* base_dir,
                                              gpplan_problem** out_problem);

/* Overrides applied after parsing (CLI flags take precedence over JSON).
 * Integer keys: "N", "n_ip", "max_iterations", "seed".
 * Real keys: "total_time", "q_c", "eps", "sigma_obs", "lambda", "eta". */
GPPLAN_API gpplan_status gpplan_problem_set_algorithm(gpplan_problem* problem, const char* name);
GPPLAN_API gpplan_status gpplan_problem_set_int(gpplan_problem* problem, const char* key,
                                                long long value);
GPPLAN_API gpplan_status gpplan_problem_set_real(gpplan_problem* problem, const char* key,
                                                 double value);

GPPLAN_API int gpplan_problem_dof(const gpplan_problem* problem);
GPPLAN_API void gpplan_problem_free(gpplan_problem* problem);

/* ---------------------------------------------------------------- planning */

GPPLAN_API gpplan_status gpplan_plan(const gpplan_problem* problem, gpplan_result** out_result);

/* Replanning: new_goal_q (length dof) and/or a fixed configuration at a
 * support-state index; pass NULL / -1 to skip either change. Produces the
 * incrementally replanned result; the batch comparison is carried in the
 * result stats. out_original may be NULL. */
GPPLAN_API gpplan_status gpplan_replan(const gpplan_problem* problem, const double* new_goal_q,
                                       int fixed_state_index, const double* fixed_state_q,
                                       int iterate_to_convergence, gpplan_result** out_original,
                                       gpplan_result** out_replanned);

/* ----------------------------------------------------------------- results */

GPPLAN_API int gpplan_result_feasible(const gpplan_result* result);
GPPLAN_API int gpplan_result_converged(const gpplan_result* result);
GPPLAN_API int gpplan_result_iterations(const gpplan_result* result);
GPPLAN_API double gpplan_result_final_error(const gpplan_result* result);
GPPLAN_API double gpplan_result_wall_time_seconds(const gpplan_result* result);
GPPLAN_API int gpplan_result_touched_cliques(const gpplan_result* result);
GPPLAN_API double gpplan_result_batch_wall_time_seconds(const gpplan_result* result);

/* Trajectory JSON (times, states, upsampled states with clearance, stats). */
GPPLAN_API gpplan_status gpplan_result_to_json(const gpplan_result* result, char** out_json);

/* SVG rendering of the scene, poses, and end-effector path. */
GPPLAN_API gpplan_status gpplan_result_write_svg(const gpplan_problem* problem,
                                                 const gpplan_result* result, const char* path);

GPPLAN_API void gpplan_result_free(gpplan_result* result);

/* --------------------------------------------------------------- workspace */

/* Builds the signed distance field for a scene file and returns its CSV
 * debug dump. */
GPPLAN_API gpplan_status gpplan_scene_sdf_csv(const char* scene_path, char** out_csv);

GPPLAN_API void gpplan_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* GPPLAN_H */
