#pragma once

#include <memory>
#include <optional>
#include <string>

#include "gpplan/factor_graph.hpp"
#include "gpplan/gpmp.hpp"
#include "gpplan/optimizer.hpp"
#include "gpplan/robot.hpp"
#include "gpplan/scene.hpp"
#include "gpplan/sdf.hpp"

namespace gpplan {

enum class Algorithm { Gpmp, Gpmp2, Igpmp2 };

Algorithm algorithmFromName(const std::string& name);
std::string algorithmName(Algorithm algorithm);

/// Planner parameters with the toolkit defaults.
struct PlannerParams {
  double q_c = 1.0;
  double eps = 0.2;
  double sigma_obs = 0.005;
  double lambda = 0.005;
  double eta = 1.0;
  double endpoint_sigma = 1e-2;  // start/goal prior covariance = sigma^2 I
  int max_iterations = 100;
  int gpmp_max_iterations = 200;
  unsigned seed = 0;

  bool joint_limit_factors = false;
  bool velocity_limit_factors = false;
  double sigma_limit = 0.1;
  double eps_limit = 0.0;
};

/// A full planning problem: scene + robot + boundary states + discretization.
struct ProblemSpec {
  std::string scene_path;
  std::string robot_path;
  Scene2D scene;
  std::shared_ptr<const Robot> robot;
  Eigen::VectorXd start_q, start_qdot, goal_q, goal_qdot;
  int num_segments = 10;
  double total_time = 5.0;
  int n_ip = 5;
  Algorithm algorithm = Algorithm::Gpmp2;
  PlannerParams params;

  std::optional<std::pair<int, Eigen::Vector2d>> equality;  // end-effector target
};

/// Parses the problem JSON; `base_dir` resolves relative scene/robot paths.
ProblemSpec parseProblem(const std::string& json_text, const std::string& base_dir);
ProblemSpec loadProblem(const std::string& path);

struct PlanResult {
  std::string algorithm;
  Trajectory trajectory;
  Trajectory upsampled;
  std::vector<double> clearance;  // min circle clearance per up-sampled state
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  double initial_error = 0.0;
  double final_error = 0.0;
  std::vector<double> error_trace;
  double wall_time_seconds = 0.0;

  // Replanning extras (zero when not a replan).
  int touched_cliques = 0;
  int update_iterations = 0;
  double batch_wall_time_seconds = 0.0;
  double batch_final_error = 0.0;
};

/// Shared immutable context derived from a problem.
struct PlannerContext {
  std::shared_ptr<const Robot> robot;
  std::shared_ptr<const SignedDistanceField2D> sdf;
  std::shared_ptr<const TrajectoryPrior> prior;
  StateVector start;
  StateVector goal;
};
PlannerContext makeContext(const ProblemSpec& spec);

/// Dispatches on spec.algorithm; igpmp2 plans the batch problem (replanning
/// needs a previous solution, see replanProblem).
PlanResult planProblem(const ProblemSpec& spec);

struct ReplanChange {
  std::optional<Eigen::VectorXd> new_goal_q;
  std::optional<Eigen::VectorXd> new_goal_qdot;
  std::optional<std::pair<int, Eigen::VectorXd>> fixed_state;  // index, full state
  bool iterate_to_convergence = true;
  int max_update_iterations = 10;
};

/// Solves the batch problem with GPMP2, then applies the change through the
/// chain Bayes tree. Also re-solves the modified graph in batch mode for the
/// timing/objective comparison carried in the result.
struct ReplanOutcome {
  PlanResult original;
  PlanResult replanned;
};
ReplanOutcome replanProblem(const ProblemSpec& spec, const ReplanChange& change);

/// Straight-line initialization (the prior mean).
Trajectory initialTrajectory(const PlannerContext& context);

/// Per-up-sampled-state minimum circle clearance.
std::vector<double> clearanceProfile(const Trajectory& upsampled, const Robot& robot,
                                     const SignedDistanceField2D& sdf);

}  // namespace gpplan
