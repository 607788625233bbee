#pragma once

#include <Eigen/Core>

namespace gpplan {

/// Gauss-Markov trajectory models generated by a linear time-varying SDE
/// driven by white noise with isotropic power-spectral density qc * I.
enum class ModelKind {
  ConstantVelocity,      // state [q; qdot], white noise on acceleration
  ConstantAcceleration,  // state [q; qdot; qddot], white noise on jerk
};

struct GaussMarkovModel {
  ModelKind kind = ModelKind::ConstantVelocity;
  int dof = 1;      // configuration dimension D
  double qc = 1.0;  // scalar power-spectral density, > 0

  int order() const { return kind == ModelKind::ConstantVelocity ? 2 : 3; }
  int stateDim() const { return dof * order(); }
};

/// State transition matrix Phi(t + dt, t), closed form. Requires dt >= 0.
Eigen::MatrixXd transitionMatrix(const GaussMarkovModel& model, double dt);

/// Process-noise covariance accumulated over a step of length dt, closed
/// form per model. Symmetric positive-definite; requires dt > 0.
Eigen::MatrixXd processNoise(const GaussMarkovModel& model, double dt);

}  // namespace gpplan
