#include "gpplan/gauss_markov.hpp"

#include <stdexcept>

namespace gpplan {

namespace {

// Fills result so block (r, c) = coeff * I_dof.
void setBlock(Eigen::MatrixXd& m, int dof, int r, int c, double coeff) {
  m.block(r * dof, c * dof, dof, dof) = coeff * Eigen::MatrixXd::Identity(dof, dof);
}

}  // namespace

Eigen::MatrixXd transitionMatrix(const GaussMarkovModel& model, double dt) {
  if (dt < 0.0) throw std::invalid_argument("transitionMatrix: dt must be >= 0");
  const int d = model.dof;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(model.stateDim(), model.stateDim());
  if (model.kind == ModelKind::ConstantVelocity) {
    setBlock(phi, d, 0, 1, dt);
  } else {
    setBlock(phi, d, 0, 1, dt);
    setBlock(phi, d, 0, 2, 0.5 * dt * dt);
    setBlock(phi, d, 1, 2, dt);
  }
  return phi;
}

Eigen::MatrixXd processNoise(const GaussMarkovModel& model, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("processNoise: dt must be > 0");
  if (model.qc <= 0.0) throw std::invalid_argument("processNoise: qc must be > 0");
  const int d = model.dof;
  const double qc = model.qc;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(model.stateDim(), model.stateDim());
  const double dt2 = dt * dt, dt3 = dt2 * dt;
  if (model.kind == ModelKind::ConstantVelocity) {
    setBlock(q, d, 0, 0, qc * dt3 / 3.0);
    setBlock(q, d, 0, 1, qc * dt2 / 2.0);
    setBlock(q, d, 1, 0, qc * dt2 / 2.0);
    setBlock(q, d, 1, 1, qc * dt);
  } else {
    const double dt4 = dt3 * dt, dt5 = dt4 * dt;
    setBlock(q, d, 0, 0, qc * dt5 / 2.0);
    setBlock(q, d, 0, 1, qc * dt4 / 8.0);
    setBlock(q, d, 0, 2, qc * dt3 / 6.0);
    setBlock(q, d, 1, 1, qc * dt3 / 3.0);
    setBlock(q, d, 1, 2, qc * dt2 / 2.0);
    setBlock(q, d, 2, 2, qc * dt);
    q.triangularView<Eigen::StrictlyLower>() = q.transpose();
  }
  return q;
}

}  // namespace gpplan
