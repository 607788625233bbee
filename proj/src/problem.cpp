#include "gpplan/problem.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gpplan/bayes_tree.hpp"
#include "gpplan/interp.hpp"

namespace gpplan {

using nlohmann::json;

Algorithm algorithmFromName(const std::string& name) {
  if (name == "gpmp") return Algorithm::Gpmp;
  if (name == "gpmp2") return Algorithm::Gpmp2;
  if (name == "igpmp2") return Algorithm::Igpmp2;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string algorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Gpmp: return "gpmp";
    case Algorithm::Gpmp2: return "gpmp2";
    case Algorithm::Igpmp2: return "igpmp2";
  }
  return "gpmp2";
}

namespace {

Eigen::VectorXd parseVector(const json& j, int expected, const char* what) {
  if (!j.is_array() || (expected >= 0 && static_cast<int>(j.size()) != expected))
    throw std::invalid_argument(std::string("problem: bad vector for ") + what);
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  return v;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

namespace {

ProblemSpec parseProblemImpl(const std::string& json_text, const std::string& base_dir);

}  // namespace

ProblemSpec parseProblem(const std::string& json_text, const std::string& base_dir) {
  try {
    return parseProblemImpl(json_text, base_dir);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("problem: ") + e.what());
  }
}

namespace {

ProblemSpec parseProblemImpl(const std::string& json_text, const std::string& base_dir) {
  json j = json::parse(json_text);

  ProblemSpec spec;
  const std::filesystem::path base(base_dir);
  spec.scene_path = (base / j.at("scene").get<std::string>()).string();
  spec.robot_path = (base / j.at("robot").get<std::string>()).string();
  spec.scene = loadScene(spec.scene_path);
  spec.robot = std::make_shared<Robot>(loadRobot(spec.robot_path));

  const int d = spec.robot->dof();
  spec.start_q = parseVector(j.at("start_q"), d, "start_q");
  spec.goal_q = parseVector(j.at("goal_q"), d, "goal_q");
  spec.start_qdot = j.contains("start_qdot") ? parseVector(j["start_qdot"], d, "start_qdot")
                                             : Eigen::VectorXd::Zero(d);
  spec.goal_qdot = j.contains("goal_qdot") ? parseVector(j["goal_qdot"], d, "goal_qdot")
                                           : Eigen::VectorXd::Zero(d);

  spec.num_segments = j.value("N", 10);
  spec.total_time = j.value("total_time", 5.0);
  spec.n_ip = j.value("n_ip", 5);
  if (spec.num_segments < 1) throw std::invalid_argument("problem: N must be >= 1");
  if (spec.total_time <= 0.0) throw std::invalid_argument("problem: total_time must be > 0");
  if (spec.n_ip < 0) throw std::invalid_argument("problem: n_ip must be >= 0");
  spec.algorithm = algorithmFromName(j.value("algorithm", std::string("gpmp2")));

  if (j.contains("params")) {
    const auto& p = j["params"];
    spec.params.q_c = p.value("q_c", spec.params.q_c);
    spec.params.eps = p.value("eps", spec.params.eps);
    spec.params.sigma_obs = p.value("sigma_obs", spec.params.sigma_obs);
    spec.params.lambda = p.value("lambda", spec.params.lambda);
    spec.params.eta = p.value("eta", spec.params.eta);
    spec.params.endpoint_sigma = p.value("endpoint_sigma", spec.params.endpoint_sigma);
    spec.params.max_iterations = p.value("max_iterations", spec.params.max_iterations);
    spec.params.gpmp_max_iterations =
        p.value("gpmp_max_iterations", spec.params.gpmp_max_iterations);
    spec.params.seed = p.value("seed", spec.params.seed);
    spec.params.joint_limit_factors =
        p.value("joint_limit_factors", spec.params.joint_limit_factors);
    spec.params.velocity_limit_factors =
        p.value("velocity_limit_factors", spec.params.velocity_limit_factors);
    spec.params.sigma_limit = p.value("sigma_limit", spec.params.sigma_limit);
    spec.params.eps_limit = p.value("eps_limit", spec.params.eps_limit);
  }

  if (j.contains("equality")) {
    const auto& e = j["equality"];
    const Eigen::VectorXd target = parseVector(e.at("target"), 2, "equality.target");
    spec.equality = {e.at("index").get<int>(), Eigen::Vector2d(target[0], target[1])};
  }
  return spec;
}

}  // namespace

ProblemSpec loadProblem(const std::string& path) {
  const std::filesystem::path p(path);
  return parseProblem(readFile(path), p.parent_path().string());
}

namespace {

StateVector assembleState(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot, int order) {
  const int d = static_cast<int>(q.size());
  StateVector x = StateVector::Zero(static_cast<Eigen::Index>(d) * order);
  x.head(d) = q;
  x.segment(d, d) = qdot;
  return x;
}

GraphProblem graphProblem(const ProblemSpec& spec, const PlannerContext& context) {
  GraphProblem gp;
  gp.prior = context.prior;
  gp.robot = context.robot;
  gp.sdf = context.sdf;
  gp.start = context.start;
  gp.goal = context.goal;
  gp.n_ip = spec.n_ip;
  gp.obstacle_params = {spec.params.eps, spec.params.sigma_obs};
  gp.joint_limit_factors = spec.params.joint_limit_factors;
  gp.velocity_limit_factors = spec.params.velocity_limit_factors;
  gp.sigma_limit = spec.params.sigma_limit;
  gp.eps_limit = spec.params.eps_limit;
  if (spec.equality) {
    gp.equality_factor = true;
    gp.equality_index = spec.equality->first;
    gp.equality_target = spec.equality->second;
  }
  return gp;
}

// Clamps support-state positions (and velocities) to the robot limits.
void clampToLimits(Trajectory& traj, const Robot& robot) {
  const auto limits = robot.positionLimits();
  const auto vel_limits = robot.velocityLimits();
  const int d = robot.dof();
  for (auto& state : traj.states) {
    for (int k = 0; k < d; ++k) {
      state[k] = std::min(std::max(state[k], limits[k].first), limits[k].second);
      state[d + k] = std::min(std::max(state[d + k], -vel_limits[k]), vel_limits[k]);
    }
  }
}

PlanResult finishResult(PlanResult result, const ProblemSpec& spec,
                        const PlannerContext& context) {
  const UpsampleOperator op = buildUpsample(*context.prior, spec.n_ip);
  result.upsampled = upsample(op, result.trajectory, *context.prior);
  result.clearance = clearanceProfile(result.upsampled, *context.robot, *context.sdf);
  bool clear = true;
  for (double c : result.clearance)
    if (c <= 0.0) clear = false;
  result.feasible = clear;
  return result;
}

PlanResult runGpmp2(const ProblemSpec& spec, const PlannerContext& context) {
  const FactorGraph graph = buildGraph(graphProblem(spec, context));
  OptimizerSettings settings;
  settings.max_iterations = spec.params.max_iterations;

  PlanResult result;
  result.algorithm = algorithmName(spec.algorithm);
  auto [traj, stats] = optimize(graph, initialTrajectory(context), settings);
  if (context.robot->hasFiniteLimits()) clampToLimits(traj, *context.robot);
  result.trajectory = std::move(traj);
  result.iterations = stats.iterations;
  result.converged = stats.converged;
  result.initial_error = stats.initial_error;
  result.final_error = stats.final_error;
  result.error_trace = stats.error_trace;
  result.wall_time_seconds = stats.wall_time_seconds;
  return finishResult(std::move(result), spec, context);
}

PlanResult runGpmp(const ProblemSpec& spec, const PlannerContext& context) {
  GpmpConfig config;
  config.lambda = spec.params.lambda;
  config.eta = spec.params.eta;
  config.max_iterations = spec.params.gpmp_max_iterations;
  config.n_ip = spec.n_ip;
  config.obstacle_params = {spec.params.eps, spec.params.sigma_obs};

  PlanResult result;
  result.algorithm = algorithmName(spec.algorithm);
  const GpmpResult gp = gpmpPlan(*context.prior, *context.robot, *context.sdf, config,
                                 initialTrajectory(context));
  result.trajectory = gp.trajectory;
  result.iterations = gp.iterations;
  result.converged = gp.converged;
  result.final_error = gp.final_objective;
  result.wall_time_seconds = gp.wall_time_seconds;
  return finishResult(std::move(result), spec, context);
}

}  // namespace

PlannerContext makeContext(const ProblemSpec& spec) {
  PlannerContext context;
  context.robot = spec.robot;
  context.sdf = std::make_shared<SignedDistanceField2D>(sceneSdf(spec.scene));

  GaussMarkovModel model;
  model.kind = spec.algorithm == Algorithm::Gpmp ? ModelKind::ConstantAcceleration
                                                 : ModelKind::ConstantVelocity;
  model.dof = spec.robot->dof();
  model.qc = spec.params.q_c;

  context.start = assembleState(spec.start_q, spec.start_qdot, model.order());
  context.goal = assembleState(spec.goal_q, spec.goal_qdot, model.order());
  context.prior = std::make_shared<TrajectoryPrior>(
      buildPrior(model, context.start, context.goal, spec.num_segments, spec.total_time,
                 spec.params.endpoint_sigma));
  return context;
}

Trajectory initialTrajectory(const PlannerContext& context) { return context.prior->mean; }

std::vector<double> clearanceProfile(const Trajectory& upsampled, const Robot& robot,
                                     const SignedDistanceField2D& sdf) {
  std::vector<double> out;
  out.reserve(upsampled.numStates());
  const int d = robot.dof();
  for (const auto& state : upsampled.states) {
    if (!state.allFinite()) {
      out.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    const auto centers = robot.fkCircles(state.head(d));
    double min_clear = std::numeric_limits<double>::infinity();
    for (int j = 0; j < robot.numCircles(); ++j)
      min_clear = std::min(min_clear, sdf.query(centers[j]) - robot.circleRadius(j));
    out.push_back(min_clear);
  }
  return out;
}

PlanResult planProblem(const ProblemSpec& spec) {
  const PlannerContext context = makeContext(spec);
  switch (spec.algorithm) {
    case Algorithm::Gpmp: return runGpmp(spec, context);
    case Algorithm::Gpmp2:
    case Algorithm::Igpmp2: return runGpmp2(spec, context);
  }
  throw std::invalid_argument("planProblem: unknown algorithm");
}

ReplanOutcome replanProblem(const ProblemSpec& spec, const ReplanChange& change) {
  if (!change.new_goal_q && !change.fixed_state)
    throw std::invalid_argument("replanProblem: nothing to change");

  ProblemSpec batch_spec = spec;
  batch_spec.algorithm = Algorithm::Gpmp2;
  const PlannerContext context = makeContext(batch_spec);
  const FactorGraph graph = buildGraph(graphProblem(batch_spec, context));

  ReplanOutcome outcome;
  outcome.original = runGpmp2(batch_spec, context);

  // Assemble the factor changes.
  const int n = batch_spec.num_segments;
  const int s = context.prior->stateDim();
  std::vector<Factor> new_factors, replaced_factors;
  if (change.new_goal_q) {
    Factor goal{.kind = FactorKind::GoalPrior, .i = n};
    const Eigen::VectorXd qdot =
        change.new_goal_qdot ? *change.new_goal_qdot : Eigen::VectorXd::Zero(spec.robot->dof());
    goal.target = assembleState(*change.new_goal_q, qdot, context.prior->model.order());
    goal.cov = context.prior->kn;
    replaced_factors.push_back(std::move(goal));
  }
  if (change.fixed_state) {
    Factor fixed{.kind = FactorKind::FixedState, .i = change.fixed_state->first};
    if (fixed.i < 0 || fixed.i > n)
      throw std::invalid_argument("replanProblem: fixed state index out of range");
    fixed.target = change.fixed_state->second;
    if (fixed.target.size() != s)
      throw std::invalid_argument("replanProblem: fixed state dimension mismatch");
    fixed.cov = 1e-6 * Eigen::MatrixXd::Identity(s, s);
    new_factors.push_back(std::move(fixed));
  }

  // Incremental solve through the Bayes tree. The tree itself is built once
  // per planning session; only the updates count as replanning work.
  ChainBayesTree tree(graph, outcome.original.trajectory);
  UpdateStats first = tree.update(new_factors, replaced_factors);
  double incremental_seconds = first.wall_time_seconds;
  int updates = 1;
  if (change.iterate_to_convergence) {
    double err = first.error_after;
    while (updates < change.max_update_iterations) {
      const UpdateStats stats = tree.refine();
      ++updates;
      incremental_seconds += stats.wall_time_seconds;
      const double decrease = std::abs(err - stats.error_after) / std::max(err, 1e-12);
      err = stats.error_after;
      if (decrease < 1e-4) break;
    }
  }

  // Batch re-solve of the modified graph for comparison, started from the
  // previous solution like the incremental path.
  FactorGraph modified = graph;
  for (const auto& factor : replaced_factors)
    for (auto& existing : modified.factors)
      if (existing.kind == factor.kind && existing.i == factor.i && existing.j == factor.j) {
        existing = factor;
        modified.prepare(existing);
        break;
      }
  for (const auto& factor : new_factors) modified.add(factor);
  OptimizerSettings settings;
  settings.max_iterations = batch_spec.params.max_iterations;
  auto [batch_traj, batch_stats] = optimize(modified, outcome.original.trajectory, settings);

  PlanResult replanned;
  replanned.algorithm = "igpmp2";
  replanned.trajectory = tree.estimate();
  if (context.robot->hasFiniteLimits()) clampToLimits(replanned.trajectory, *context.robot);
  replanned.iterations = updates;
  replanned.update_iterations = updates;
  replanned.converged = true;
  replanned.final_error = totalError(tree.graph(), tree.estimate());
  replanned.wall_time_seconds = incremental_seconds;
  replanned.touched_cliques = first.touched_cliques;
  replanned.batch_wall_time_seconds = batch_stats.wall_time_seconds;
  replanned.batch_final_error = batch_stats.final_error;
  outcome.replanned = finishResult(std::move(replanned), batch_spec, context);
  return outcome;
}

}  // namespace gpplan
