// Exercises the shared-library C interface the way an external consumer
// (or the CLI) does.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "gpplan.h"

namespace {

const std::string kScenarioDir = GPPLAN_SCENARIO_DIR;

}  // namespace

TEST_CASE("problem lifecycle and error reporting") {
  gpplan_problem* problem = nullptr;
  CHECK(gpplan_problem_load("/nonexistent/problem.json", &problem) ==
        GPPLAN_ERROR_INVALID_ARGUMENT);
  CHECK(std::strlen(gpplan_last_error()) > 0);

  REQUIRE(gpplan_problem_load((kScenarioDir + "/arm2_disk.json").c_str(), &problem) == GPPLAN_OK);
  CHECK(gpplan_problem_dof(problem) == 2);

  CHECK(gpplan_problem_set_algorithm(problem, "launchpad") == GPPLAN_ERROR_INVALID_ARGUMENT);
  CHECK(gpplan_problem_set_algorithm(problem, "gpmp2") == GPPLAN_OK);
  CHECK(gpplan_problem_set_int(problem, "N", 0) == GPPLAN_ERROR_INVALID_ARGUMENT);
  CHECK(gpplan_problem_set_int(problem, "N", 12) == GPPLAN_OK);
  CHECK(gpplan_problem_set_real(problem, "bogus_key", 1.0) == GPPLAN_ERROR_INVALID_ARGUMENT);
  CHECK(gpplan_problem_set_real(problem, "sigma_obs", 0.02) == GPPLAN_OK);

  gpplan_problem_free(problem);
}

TEST_CASE("plan, inspect, serialize") {
  gpplan_problem* problem = nullptr;
  REQUIRE(gpplan_problem_load((kScenarioDir + "/point_slalom.json").c_str(), &problem) ==
          GPPLAN_OK);

  gpplan_result* result = nullptr;
  REQUIRE(gpplan_plan(problem, &result) == GPPLAN_OK);
  CHECK(gpplan_result_feasible(result) == 1);
  CHECK(gpplan_result_iterations(result) > 0);
  CHECK(gpplan_result_final_error(result) >= 0.0);

  char* json_text = nullptr;
  REQUIRE(gpplan_result_to_json(result, &json_text) == GPPLAN_OK);
  const std::string text(json_text);
  gpplan_string_free(json_text);
  CHECK(text.find("\"times\"") != std::string::npos);
  CHECK(text.find("\"upsampled\"") != std::string::npos);
  CHECK(text.find("\"clearance\"") != std::string::npos);

  const std::string svg_path = "/tmp/gpplan_capi_test.svg";
  CHECK(gpplan_result_write_svg(problem, result, svg_path.c_str()) == GPPLAN_OK);

  gpplan_result_free(result);
  gpplan_problem_free(problem);
}

TEST_CASE("replanning through the C interface") {
  gpplan_problem* problem = nullptr;
  REQUIRE(gpplan_problem_load((kScenarioDir + "/point_corridor.json").c_str(), &problem) ==
          GPPLAN_OK);

  // A goal or a fixed state is required.
  gpplan_result* replanned = nullptr;
  CHECK(gpplan_replan(problem, nullptr, -1, nullptr, 1, nullptr, &replanned) ==
        GPPLAN_ERROR_INVALID_ARGUMENT);

  const double new_goal[2] = {1.7, 1.1};
  gpplan_result* original = nullptr;
  REQUIRE(gpplan_replan(problem, new_goal, -1, nullptr, 1, &original, &replanned) == GPPLAN_OK);
  CHECK(gpplan_result_feasible(original) == 1);
  CHECK(gpplan_result_feasible(replanned) == 1);
  CHECK(gpplan_result_touched_cliques(replanned) == 1);
  CHECK(gpplan_result_batch_wall_time_seconds(replanned) > 0.0);

  gpplan_result_free(original);
  gpplan_result_free(replanned);
  gpplan_problem_free(problem);
}

TEST_CASE("sdf csv export") {
  char* csv = nullptr;
  REQUIRE(gpplan_scene_sdf_csv((kScenarioDir + "/scenes/disk_mid.json").c_str(), &csv) ==
          GPPLAN_OK);
  const std::string text(csv);
  gpplan_string_free(csv);
  CHECK(text.rfind("width,height,cell_size,origin_x,origin_y\n", 0) == 0);

  CHECK(gpplan_scene_sdf_csv("/nope.json", &csv) == GPPLAN_ERROR_INVALID_ARGUMENT);
}
