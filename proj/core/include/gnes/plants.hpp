#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gnes/types.hpp"

namespace gnes {

/// Control-affine agent dynamics
///   xdot_i = drift(x_i) + G_i u_i,   y_i = output(x_i),
/// where output(x) = G_i^T grad V_i(x) for a storage function V_i. The
/// regulator maps a prescribed output ybar to the unique zero-drift state
/// with output(x) = ybar and zero steady input; every catalog model has one.
/// storage / storage_gradient are optional (null when no closed-form storage
/// ships with the model); diagnostics that need them raise
/// UnsupportedDiagnostic.
struct PlantModel {
  std::string tag;
  int state_dim = 0;
  int action_dim = 0;
  std::function<Vector(const Vector&)> drift;
  Matrix input_matrix;
  std::function<Vector(const Vector&)> output;
  std::function<Vector(const Vector&)> regulator;
  std::function<double(const Vector&)> storage;
  std::function<Vector(const Vector&)> storage_gradient;

  void validate() const;
};

/// Single integrator xdot = u, y = x.
PlantModel make_integrator(int dim);

/// PI-style cascade
///   xdot^1 = -v x^1 + k x^2 + u,  xdot^2 = u,  y = x^1,
/// with 0 < k < v. Regulator: ybar -> (ybar, (v/k) ybar). No closed-form
/// storage ships with this model.
PlantModel make_pi_cascade(int dim, double v, double k);

/// Single-link flexible-joint robot (scalar output = link velocity):
/// state (position error, link velocity, motor velocity),
///   xdot = (x2 - x3, (-psi(x1) - damping*(x2 - x3) + u)/mass_link,
///           (psi(x1) + damping*(x2 - x3))/mass_motor),
/// spring force psi(s) = s + atan(s) (strictly increasing, psi(0) = 0),
/// y = x2. Regulator: ybar -> (0, ybar, ybar). Ships with storage
/// V = integral of psi + kinetic terms, so the passivity probe applies.
PlantModel make_flexible_robot(double mass_link, double mass_motor,
                               double damping);

/// Block-diagonal composition of per-agent plants into one joint system.
class StackedPlant {
 public:
  explicit StackedPlant(std::vector<PlantModel> agents);

  int n_agents() const { return static_cast<int>(agents_.size()); }
  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  int state_offset(int i) const { return state_offsets_[i]; }
  int action_offset(int i) const { return action_offsets_[i]; }
  const PlantModel& agent(int i) const { return agents_[i]; }

  Vector drift(const Vector& x) const;
  Vector output(const Vector& x) const;
  Vector regulator(const Vector& ybar) const;

  /// dx += scale * G u with the block-diagonal input matrix.
  void add_input(const Vector& u, double scale, Eigen::Ref<Vector> dx) const;

 private:
  std::vector<PlantModel> agents_;
  std::vector<int> state_offsets_;
  std::vector<int> action_offsets_;
  int state_dim_ = 0;
  int action_dim_ = 0;
};

StackedPlant stack_plants(std::vector<PlantModel> agents);

struct EipReport {
  double max_violation = 0.0;  // positive value means the inequality failed
  Vector violations;           // one entry per probed sample
};

/// Equilibrium-independent passivity probe around the equilibrium state xbar
/// (with its zero steady input): for each sample (x, u) evaluates
///   (grad V(x) - grad V(xbar))^T (drift(x) + G u) - (y - ybar)^T u,
/// the shifted-storage derivative minus the supply rate, which the passivity
/// inequality requires to be <= 0. ybar = output(xbar). Requires a stored
/// storage gradient; raises UnsupportedDiagnostic otherwise.
EipReport eip_probe(const PlantModel& plant, const Vector& xbar,
                    const std::vector<std::pair<Vector, Vector>>& samples);

}  // namespace gnes
