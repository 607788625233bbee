#pragma once

#include <vector>

#include "gpplan/factor_graph.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

struct OptimizerSettings {
  double init_damping = 0.01;
  double damping_increase = 10.0;
  double damping_decrease = 10.0;
  double max_damping = 1e6;
  int max_iterations = 100;
  int max_retries_per_iteration = 10;
  double relative_error_decrease = 1e-4;
};

struct SolveStats {
  int iterations = 0;
  double initial_error = 0.0;
  double final_error = 0.0;
  bool converged = false;
  std::vector<double> error_trace;  // error after each accepted step
  double wall_time_seconds = 0.0;
};

/// Damped iterative linearization (Levenberg-Marquardt): solves
/// (A + damping * diag(A)) delta = b on each iteration, accepts steps that
/// decrease the total error, and stops on a small relative decrease or the
/// iteration cap. Damping overflow reports non-convergence and returns the
/// best iterate found.
std::pair<Trajectory, SolveStats> optimize(const FactorGraph& graph, const Trajectory& init,
                                           const OptimizerSettings& settings = {});

}  // namespace gpplan
