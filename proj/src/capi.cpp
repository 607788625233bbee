#include "gpplan.h"

#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "gpplan/problem.hpp"
#include "gpplan/svg.hpp"
#include "gpplan/trajectory_io.hpp"

struct gpplan_problem_s {
  gpplan::ProblemSpec spec;
};

struct gpplan_result_s {
  gpplan::PlanResult result;
};

namespace {

thread_local std::string g_last_error = "ok";

gpplan_status fail(gpplan_status status, const char* what) {
  g_last_error = what;
  return status;
}

char* copyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating C++ exceptions into status codes.
template <typename Fn>
gpplan_status guarded(Fn&& fn) {
  try {
    fn();
    return GPPLAN_OK;
  } catch (const std::invalid_argument& e) {
    return fail(GPPLAN_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(GPPLAN_ERROR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GPPLAN_ERROR_NUMERICAL, "out of memory");
  } catch (...) {
    return fail(GPPLAN_ERROR_NUMERICAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* gpplan_last_error(void) { return g_last_error.c_str(); }

gpplan_status gpplan_problem_load(const char* path, gpplan_problem** out_problem) {
  if (!path || !out_problem)
    return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out_problem = new gpplan_problem_s{gpplan::loadProblem(path)}; });
}

gpplan_status gpplan_problem_parse(const char* json_text, const char* base_dir,
                                   gpplan_problem** out_problem) {
  if (!json_text || !out_problem)
    return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out_problem =
        new gpplan_problem_s{gpplan::parseProblem(json_text, base_dir ? base_dir : ".")};
  });
}

gpplan_status gpplan_problem_set_algorithm(gpplan_problem* problem, const char* name) {
  if (!problem || !name) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { problem->spec.algorithm = gpplan::algorithmFromName(name); });
}

gpplan_status gpplan_problem_set_int(gpplan_problem* problem, const char* key, long long value) {
  if (!problem || !key) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string k = key;
    auto& spec = problem->spec;
    if (k == "N") {
      if (value < 1) throw std::invalid_argument("N must be >= 1");
      spec.num_segments = static_cast<int>(value);
    } else if (k == "n_ip") {
      if (value < 0) throw std::invalid_argument("n_ip must be >= 0");
      spec.n_ip = static_cast<int>(value);
    } else if (k == "max_iterations") {
      spec.params.max_iterations = static_cast<int>(value);
      spec.params.gpmp_max_iterations = static_cast<int>(value);
    } else if (k == "seed") {
      spec.params.seed = static_cast<unsigned>(value);
    } else {
      throw std::invalid_argument("unknown integer key '" + k + "'");
    }
  });
}

gpplan_status gpplan_problem_set_real(gpplan_problem* problem, const char* key, double value) {
  if (!problem || !key) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string k = key;
    auto& spec = problem->spec;
    if (k == "total_time") {
      if (value <= 0.0) throw std::invalid_argument("total_time must be > 0");
      spec.total_time = value;
    } else if (k == "q_c") {
      spec.params.q_c = value;
    } else if (k == "eps") {
      spec.params.eps = value;
    } else if (k == "sigma_obs") {
      spec.params.sigma_obs = value;
    } else if (k == "lambda") {
      spec.params.lambda = value;
    } else if (k == "eta") {
      spec.params.eta = value;
    } else {
      throw std::invalid_argument("unknown real key '" + k + "'");
    }
  });
}

int gpplan_problem_dof(const gpplan_problem* problem) {
  return problem && problem->spec.robot ? problem->spec.robot->dof() : 0;
}

void gpplan_problem_free(gpplan_problem* problem) { delete problem; }

gpplan_status gpplan_plan(const gpplan_problem* problem, gpplan_result** out_result) {
  if (!problem || !out_result) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded(
      [&] { *out_result = new gpplan_result_s{gpplan::planProblem(problem->spec)}; });
}

gpplan_status gpplan_replan(const gpplan_problem* problem, const double* new_goal_q,
                            int fixed_state_index, const double* fixed_state_q,
                            int iterate_to_convergence, gpplan_result** out_original,
                            gpplan_result** out_replanned) {
  if (!problem || !out_replanned) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  if (!new_goal_q && fixed_state_index < 0)
    return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "replan requires a goal or fixed-state change");
  return guarded([&] {
    const int d = problem->spec.robot->dof();
    gpplan::ReplanChange change;
    change.iterate_to_convergence = iterate_to_convergence != 0;
    if (new_goal_q) change.new_goal_q = Eigen::Map<const Eigen::VectorXd>(new_goal_q, d);
    if (fixed_state_index >= 0) {
      if (!fixed_state_q) throw std::invalid_argument("fixed_state_q is required with an index");
      const int order = problem->spec.algorithm == gpplan::Algorithm::Gpmp ? 3 : 2;
      Eigen::VectorXd state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * order);
      state.head(d) = Eigen::Map<const Eigen::VectorXd>(fixed_state_q, d);
      change.fixed_state = {fixed_state_index, state};
    }
    gpplan::ReplanOutcome outcome = gpplan::replanProblem(problem->spec, change);
    if (out_original) *out_original = new gpplan_result_s{std::move(outcome.original)};
    *out_replanned = new gpplan_result_s{std::move(outcome.replanned)};
  });
}

int gpplan_result_feasible(const gpplan_result* result) {
  return result && result->result.feasible ? 1 : 0;
}

int gpplan_result_converged(const gpplan_result* result) {
  return result && result->result.converged ? 1 : 0;
}

int gpplan_result_iterations(const gpplan_result* result) {
  return result ? result->result.iterations : 0;
}

double gpplan_result_final_error(const gpplan_result* result) {
  return result ? result->result.final_error : 0.0;
}

double gpplan_result_wall_time_seconds(const gpplan_result* result) {
  return result ? result->result.wall_time_seconds : 0.0;
}

int gpplan_result_touched_cliques(const gpplan_result* result) {
  return result ? result->result.touched_cliques : 0;
}

double gpplan_result_batch_wall_time_seconds(const gpplan_result* result) {
  return result ? result->result.batch_wall_time_seconds : 0.0;
}

gpplan_status gpplan_result_to_json(const gpplan_result* result, char** out_json) {
  if (!result || !out_json) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out_json = copyString(gpplan::planResultToJson(result->result)); });
}

gpplan_status gpplan_result_write_svg(const gpplan_problem* problem, const gpplan_result* result,
                                      const char* path) {
  if (!problem || !result || !path) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gpplan::writeTextFile(
        path, gpplan::renderSvg(problem->spec.scene, *problem->spec.robot, result->result));
  });
}

void gpplan_result_free(gpplan_result* result) { delete result; }

gpplan_status gpplan_scene_sdf_csv(const char* scene_path, char** out_csv) {
  if (!scene_path || !out_csv) return fail(GPPLAN_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const gpplan::Scene2D scene = gpplan::loadScene(scene_path);
    *out_csv = copyString(gpplan::sceneSdf(scene).toCsv());
  });
}

void gpplan_string_free(char* text) { delete[] text; }

}  // extern "C"
