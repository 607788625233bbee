#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "gpplan/problem.hpp"
#include "gpplan/svg.hpp"
#include "gpplan/trajectory_io.hpp"
#include "test_helpers.hpp"

using namespace gpplan;

namespace {

const std::string kScenarioDir = GPPLAN_SCENARIO_DIR;

}  // namespace

TEST_CASE("problem loading applies defaults and validates") {
  const ProblemSpec spec = loadProblem(kScenarioDir + "/arm2_disk.json");
  CHECK(spec.robot->dof() == 2);
  CHECK(spec.num_segments == 10);
  CHECK(spec.n_ip == 5);
  CHECK(spec.algorithm == Algorithm::Gpmp2);
  CHECK(spec.params.q_c == 1.0);
  CHECK(spec.params.sigma_obs == doctest::Approx(0.02));
  CHECK(spec.start_qdot.norm() == 0.0);  // defaulted

  CHECK_THROWS_AS(parseProblem("{}", "."), std::invalid_argument);
  CHECK_THROWS_AS(parseProblem(R"({"scene": "missing.json", "robot": "missing.json",
    "start_q": [0], "goal_q": [0]})",
                               "."),
                  std::invalid_argument);
}

TEST_CASE("plan result JSON round-trips bit-exact") {
  ProblemSpec spec = loadProblem(kScenarioDir + "/point_slalom.json");
  const PlanResult result = planProblem(spec);
  REQUIRE(result.feasible);

  const std::string text = planResultToJson(result);
  const PlanResult round = planResultFromJson(text);

  REQUIRE(round.trajectory.numStates() == result.trajectory.numStates());
  for (int k = 0; k < result.trajectory.numStates(); ++k) {
    CHECK(round.trajectory.times[k] == result.trajectory.times[k]);
    CHECK((round.trajectory.states[k].array() == result.trajectory.states[k].array()).all());
  }
  REQUIRE(round.upsampled.numStates() == result.upsampled.numStates());
  for (int k = 0; k < result.upsampled.numStates(); ++k)
    CHECK((round.upsampled.states[k].array() == result.upsampled.states[k].array()).all());
  REQUIRE(round.clearance.size() == result.clearance.size());
  for (std::size_t k = 0; k < result.clearance.size(); ++k)
    CHECK(round.clearance[k] == result.clearance[k]);
  CHECK(round.algorithm == result.algorithm);
  CHECK(round.iterations == result.iterations);
  CHECK(round.final_error == result.final_error);

  // Serializing the round-tripped result reproduces the same text.
  CHECK(planResultToJson(round) == text);
}

TEST_CASE("clearance profile matches the feasibility flag") {
  ProblemSpec spec = loadProblem(kScenarioDir + "/arm2_disk.json");
  const PlanResult result = planProblem(spec);
  double min_clearance = 1e300;
  for (double c : result.clearance) min_clearance = std::min(min_clearance, c);
  CHECK(result.feasible == (min_clearance > 0.0));
  CHECK(static_cast<int>(result.clearance.size()) == result.upsampled.numStates());
}

TEST_CASE("svg rendering is pure post-processing") {
  ProblemSpec spec = loadProblem(kScenarioDir + "/arm2_disk.json");
  const PlanResult result = planProblem(spec);
  const std::string svg = renderSvg(spec.scene, *spec.robot, result);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("green") != std::string::npos);
  CHECK(svg.find("red") != std::string::npos);

  // Rendering does not alter the result: a second plan produces identical
  // output (up to wall-clock timing).
  PlanResult again = planProblem(spec);
  again.wall_time_seconds = result.wall_time_seconds;
  CHECK(planResultToJson(again) == planResultToJson(result));
}

TEST_CASE("igpmp2 problem dispatch plans the batch problem") {
  ProblemSpec spec = loadProblem(kScenarioDir + "/point_corridor.json");
  spec.algorithm = Algorithm::Igpmp2;
  const PlanResult result = planProblem(spec);
  CHECK(result.feasible);
}

TEST_CASE("gpmp planner dispatch produces an order-3 trajectory") {
  ProblemSpec spec = loadProblem(kScenarioDir + "/point_corridor.json");
  spec.algorithm = Algorithm::Gpmp;
  const PlanResult result = planProblem(spec);
  CHECK(result.trajectory.order == 3);
  CHECK(result.algorithm == "gpmp");
  CHECK(result.feasible);
}

TEST_CASE("replan outcome carries the timing comparison") {
  ProblemSpec spec = loadProblem(kScenarioDir + "/point_corridor.json");
  ReplanChange change;
  change.new_goal_q = spec.goal_q + Eigen::Vector2d(-0.1, 0.1);
  const ReplanOutcome outcome = replanProblem(spec, change);
  CHECK(outcome.replanned.touched_cliques == 1);
  CHECK(outcome.replanned.batch_wall_time_seconds > 0.0);
  CHECK(outcome.replanned.feasible);
  const std::string text = planResultToJson(outcome.replanned);
  CHECK(text.find("touched_cliques") != std::string::npos);
}
