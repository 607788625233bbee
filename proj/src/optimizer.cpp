#include "gpplan/optimizer.hpp"

#include <chrono>

namespace gpplan {

namespace {

// Marquardt scaling: multiply the diagonal entries of the diagonal blocks.
BlockTridiagonal damped(const BlockTridiagonal& a, double damping) {
  BlockTridiagonal out = a;
  for (auto& block : out.diag)
    block.diagonal() *= (1.0 + damping);
  return out;
}

}  // namespace

std::pair<Trajectory, SolveStats> optimize(const FactorGraph& graph, const Trajectory& init,
                                           const OptimizerSettings& settings) {
  const auto t_start = std::chrono::steady_clock::now();
  const int s = graph.stateDim();

  Trajectory traj = init;
  SolveStats stats;
  double err = totalError(graph, traj);
  stats.initial_error = err;

  double damping = settings.init_damping;
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    const LinearSystem sys = linearize(graph, traj);

    bool accepted = false;
    Trajectory candidate = traj;
    double new_err = err;
    for (int retry = 0; retry <= settings.max_retries_per_iteration; ++retry) {
      const auto delta = solveBlockTridiagonal(damped(sys.a, damping), sys.b);
      if (delta) {
        candidate = traj;
        for (int k = 0; k < traj.numStates(); ++k) candidate.states[k] += delta->segment(k * s, s);
        new_err = totalError(graph, candidate);
        if (new_err <= err) {
          accepted = true;
          break;
        }
      }
      damping *= settings.damping_increase;
      if (damping > settings.max_damping) break;
    }
    if (!accepted) {
      stats.converged = false;
      break;
    }

    traj = std::move(candidate);
    ++stats.iterations;
    stats.error_trace.push_back(new_err);
    damping /= settings.damping_decrease;

    const double decrease = (err - new_err) / std::max(err, 1e-12);
    err = new_err;
    if (decrease < settings.relative_error_decrease) {
      stats.converged = true;
      break;
    }
  }

  stats.final_error = err;
  stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {std::move(traj), stats};
}

}  // namespace gpplan
