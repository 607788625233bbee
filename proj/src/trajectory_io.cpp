#include "gpplan/trajectory_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gpplan {

using nlohmann::ordered_json;

namespace {

ordered_json trajToJson(const Trajectory& traj) {
  ordered_json j;
  j["times"] = traj.times;
  auto states = ordered_json::array();
  for (const auto& x : traj.states) {
    std::vector<double> row(x.data(), x.data() + x.size());
    states.push_back(row);
  }
  j["states"] = std::move(states);
  return j;
}

Trajectory trajFromJson(const ordered_json& j, int dof, int order) {
  Trajectory traj;
  traj.dof = dof;
  traj.order = order;
  traj.times = j.at("times").get<std::vector<double>>();
  for (const auto& row : j.at("states")) {
    const auto values = row.get<std::vector<double>>();
    traj.states.push_back(Eigen::Map<const Eigen::VectorXd>(values.data(), values.size()));
  }
  return traj;
}

}  // namespace

std::string planResultToJson(const PlanResult& result) {
  ordered_json j = trajToJson(result.trajectory);
  j["dof"] = result.trajectory.dof;
  j["order"] = result.trajectory.order;

  ordered_json up = trajToJson(result.upsampled);
  up["clearance"] = result.clearance;
  j["upsampled"] = std::move(up);

  ordered_json stats;
  stats["algorithm"] = result.algorithm;
  stats["iterations"] = result.iterations;
  stats["converged"] = result.converged;
  stats["feasible"] = result.feasible;
  stats["initial_error"] = result.initial_error;
  stats["final_error"] = result.final_error;
  stats["error_trace"] = result.error_trace;
  stats["wall_time_seconds"] = result.wall_time_seconds;
  if (result.touched_cliques > 0) {
    stats["touched_cliques"] = result.touched_cliques;
    stats["update_iterations"] = result.update_iterations;
    stats["batch_wall_time_seconds"] = result.batch_wall_time_seconds;
    stats["batch_final_error"] = result.batch_final_error;
  }
  j["stats"] = std::move(stats);
  return j.dump(2);
}

PlanResult planResultFromJson(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("trajectory: invalid JSON: ") + e.what());
  }
  PlanResult result;
  const int dof = j.at("dof").get<int>();
  const int order = j.at("order").get<int>();
  result.trajectory = trajFromJson(j, dof, order);
  if (j.contains("upsampled")) {
    result.upsampled = trajFromJson(j["upsampled"], dof, order);
    result.clearance = j["upsampled"].value("clearance", std::vector<double>{});
  }
  if (j.contains("stats")) {
    const auto& stats = j["stats"];
    result.algorithm = stats.value("algorithm", std::string{});
    result.iterations = stats.value("iterations", 0);
    result.converged = stats.value("converged", false);
    result.feasible = stats.value("feasible", false);
    result.initial_error = stats.value("initial_error", 0.0);
    result.final_error = stats.value("final_error", 0.0);
    result.error_trace = stats.value("error_trace", std::vector<double>{});
    result.wall_time_seconds = stats.value("wall_time_seconds", 0.0);
    result.touched_cliques = stats.value("touched_cliques", 0);
    result.update_iterations = stats.value("update_iterations", 0);
    result.batch_wall_time_seconds = stats.value("batch_wall_time_seconds", 0.0);
    result.batch_final_error = stats.value("batch_final_error", 0.0);
  }
  return result;
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << content;
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gpplan
