#include "gpplan/bayes_tree.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <stdexcept>

namespace gpplan {

ChainBayesTree::ChainBayesTree(FactorGraph graph, const Trajectory& traj)
    : graph_(std::move(graph)), estimate_(traj) {
  const int n = graph_.num_states;
  if (traj.numStates() != n) throw std::invalid_argument("ChainBayesTree: trajectory mismatch");
  cliques_.resize(n);
  anchored_.assign(n, {});
  for (std::size_t f = 0; f < graph_.factors.size(); ++f)
    anchored_[graph_.factors[f].lowestIndex()].push_back(static_cast<int>(f));
  eliminateFrom(0);
  backSubstitute();
}

void ChainBayesTree::eliminateFrom(int first) {
  const int n = graph_.num_states;
  const int s = graph_.stateDim();
  for (auto& clique : cliques_) clique.dirty = false;

  // Incoming message for the first re-eliminated clique. The message an
  // untouched prefix sends upward is unchanged; it was cached on the
  // receiving clique during the previous elimination.
  Eigen::MatrixXd msg_info = Eigen::MatrixXd::Zero(s, s);
  Eigen::VectorXd msg_vec = Eigen::VectorXd::Zero(s);
  if (first > 0) {
    msg_info = cliques_[first].msg_info;
    msg_vec = cliques_[first].msg_vec;
  }

  for (int j = first; j < n; ++j) {
    Eigen::MatrixXd info_jj = msg_info;
    Eigen::MatrixXd info_cross = Eigen::MatrixXd::Zero(s, s);   // (theta_j, theta_{j+1})
    Eigen::MatrixXd info_next = Eigen::MatrixXd::Zero(s, s);    // theta_{j+1} from anchored
    Eigen::VectorXd vec_j = msg_vec;
    Eigen::VectorXd vec_next = Eigen::VectorXd::Zero(s);

    for (int fid : anchored_[j]) {
      const FactorEval eval = evaluateFactor(graph_, graph_.factors[fid], estimate_);
      info_jj += eval.jac_i.transpose() * eval.jac_i;
      vec_j -= eval.jac_i.transpose() * eval.r;
      if (!graph_.factors[fid].unary()) {
        info_cross += eval.jac_i.transpose() * eval.jac_j;
        info_next += eval.jac_j.transpose() * eval.jac_j;
        vec_next -= eval.jac_j.transpose() * eval.r;
      }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(info_jj);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("ChainBayesTree: singular local block during elimination");
    const auto lower = llt.matrixL();

    Clique& clique = cliques_[j];
    clique.index = j;
    clique.r = Eigen::MatrixXd(lower).transpose();
    clique.d = lower.solve(vec_j);
    clique.lin_point = estimate_.states[j];
    clique.msg_info = msg_info;
    clique.msg_vec = msg_vec;
    clique.dirty = true;
    if (j + 1 < n) {
      const Eigen::MatrixXd s_wh = lower.solve(info_cross);  // L^-1 A_{j,j+1}
      clique.s = s_wh;
      clique.lin_separator = estimate_.states[j + 1];
      msg_info = info_next - s_wh.transpose() * s_wh;
      msg_vec = vec_next - s_wh.transpose() * clique.d;
    } else {
      clique.s.resize(0, 0);
      clique.lin_separator.resize(0);
    }
  }
}

void ChainBayesTree::backSubstitute() {
  const int n = graph_.num_states;
  const Clique& root = cliques_[n - 1];
  Eigen::VectorXd delta =
      root.r.triangularView<Eigen::Upper>().solve(root.d);
  estimate_.states[n - 1] = root.lin_point + delta;
  for (int k = n - 2; k >= 0; --k) {
    const Clique& clique = cliques_[k];
    const Eigen::VectorXd sep_delta = estimate_.states[k + 1] - clique.lin_separator;
    delta = clique.r.triangularView<Eigen::Upper>().solve(clique.d - clique.s * sep_delta);
    estimate_.states[k] = clique.lin_point + delta;
  }
}

Eigen::VectorXd ChainBayesTree::solveDelta() const {
  const int n = graph_.num_states;
  const int s = graph_.stateDim();
  Eigen::VectorXd delta(static_cast<Eigen::Index>(n) * s);
  const Clique& root = cliques_[n - 1];
  delta.segment((n - 1) * s, s) = root.r.triangularView<Eigen::Upper>().solve(root.d);
  for (int k = n - 2; k >= 0; --k) {
    const Clique& clique = cliques_[k];
    delta.segment(k * s, s) = clique.r.triangularView<Eigen::Upper>().solve(
        clique.d - clique.s * delta.segment((k + 1) * s, s));
  }
  return delta;
}

UpdateStats ChainBayesTree::update(const std::vector<Factor>& new_factors,
                                   const std::vector<Factor>& replaced_factors) {
  const auto t_start = std::chrono::steady_clock::now();
  int lowest = graph_.num_states - 1;

  for (const auto& factor : replaced_factors) {
    bool found = false;
    for (auto& existing : graph_.factors) {
      if (existing.kind == factor.kind && existing.i == factor.i && existing.j == factor.j) {
        existing = factor;
        graph_.prepare(existing);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument("ChainBayesTree::update: no factor to replace");
    lowest = std::min(lowest, factor.lowestIndex());
  }
  for (const auto& factor : new_factors) {
    if (factor.i < 0 || factor.i >= graph_.num_states ||
        (!factor.unary() && factor.j != factor.i + 1))
      throw std::invalid_argument("ChainBayesTree::update: factor indices invalid");
    graph_.factors.push_back(factor);
    graph_.prepare(graph_.factors.back());
    anchored_[factor.lowestIndex()].push_back(static_cast<int>(graph_.factors.size()) - 1);
    lowest = std::min(lowest, factor.lowestIndex());
  }

  eliminateFrom(lowest);
  backSubstitute();

  UpdateStats stats;
  stats.lowest_affected = lowest;
  stats.touched_cliques = graph_.num_states - lowest;
  stats.error_after = totalError(graph_, estimate_);
  stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return stats;
}

UpdateStats ChainBayesTree::refine() {
  const auto t_start = std::chrono::steady_clock::now();
  eliminateFrom(0);
  backSubstitute();
  UpdateStats stats;
  stats.lowest_affected = 0;
  stats.touched_cliques = graph_.num_states;
  stats.error_after = totalError(graph_, estimate_);
  stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return stats;
}

double ChainBayesTree::currentError() const { return totalError(graph_, estimate_); }

}  // namespace gpplan
