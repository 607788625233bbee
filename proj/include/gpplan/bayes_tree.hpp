#pragma once

#include <Eigen/Core>
#include <vector>

#include "gpplan/factor_graph.hpp"
#include "gpplan/trajectory.hpp"

namespace gpplan {

/// One clique of the chain Bayes tree: frontal variable theta_k conditioned
/// on its separator theta_{k+1} (absent at the root). Stores the whitened
/// conditional R delta_k + S delta_{k+1} = d together with the message the
/// elimination received from the child clique, so a later update can
/// re-eliminate any suffix of the chain in place.
struct Clique {
  int index = 0;
  Eigen::MatrixXd r;  // upper-triangular, invertible
  Eigen::MatrixXd s;  // empty at the root
  Eigen::VectorXd d;
  StateVector lin_point;      // linearization point of theta_k
  StateVector lin_separator;  // linearization point of theta_{k+1} at elimination time
  Eigen::MatrixXd msg_info;   // incoming message on theta_k (information form)
  Eigen::VectorXd msg_vec;
  bool dirty = false;  // touched by the most recent update
};

struct UpdateStats {
  int touched_cliques = 0;
  int lowest_affected = 0;
  double wall_time_seconds = 0.0;
  double error_after = 0.0;
};

/// Chain-structured Bayes tree produced by eliminating theta_0 .. theta_N in
/// order. Owns its copy of the factor graph and the current estimate; each
/// factor is anchored at the clique of its lowest connected variable.
class ChainBayesTree {
 public:
  /// Eliminates the full graph at the given linearization trajectory.
  ChainBayesTree(FactorGraph graph, const Trajectory& traj);

  /// Incremental update: appends `new_factors`, swaps each factor in
  /// `replaced_factors` for the existing factor of the same kind and
  /// variables, re-eliminates cliques from the lowest affected variable to
  /// the root (relinearizing their anchored factors at the current
  /// estimate), and back-substitutes the whole chain.
  UpdateStats update(const std::vector<Factor>& new_factors,
                     const std::vector<Factor>& replaced_factors);

  /// Re-eliminates the full chain at the current estimate and
  /// back-substitutes: one undamped Gauss-Newton iteration through the tree.
  UpdateStats refine();

  const Trajectory& estimate() const { return estimate_; }
  const FactorGraph& graph() const { return graph_; }
  const std::vector<Clique>& cliques() const { return cliques_; }
  double currentError() const;

  /// Back-substitution solution on the current linearization without moving
  /// the estimate (exposed for batch-equivalence checks).
  Eigen::VectorXd solveDelta() const;

 private:
  void eliminateFrom(int first);
  void backSubstitute();

  FactorGraph graph_;
  Trajectory estimate_;
  std::vector<Clique> cliques_;
  std::vector<std::vector<int>> anchored_;  // factor ids per clique
};

}  // namespace gpplan
