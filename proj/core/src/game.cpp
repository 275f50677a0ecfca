#include "gnes/game.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "gnes/barrier.hpp"

namespace gnes {

void GameSpec::validate() const {
  if (n_players <= 0)
    throw ContractViolation("GameSpec: n_players must be positive");
  if (static_cast<int>(action_dims.size()) != n_players)
    throw ContractViolation("GameSpec: action_dims size != n_players");
  for (int d : action_dims)
    if (d <= 0)
      throw ContractViolation("GameSpec: action dimensions must be positive");
  if (!cost || !partial_gradient)
    throw ContractViolation("GameSpec: cost and partial_gradient are required");
  const int m = total_dim();
  const Vector probe = Vector::Zero(m);
  for (int i = 0; i < n_players; ++i) {
    const Vector gi = partial_gradient(i, probe);
    if (gi.size() != action_dims[i]) {
      std::ostringstream msg;
      msg << "GameSpec: partial_gradient(" << i << ") returned size "
          << gi.size() << ", expected " << action_dims[i];
      throw ContractViolation(msg.str());
    }
  }
}

ConstraintSet ConstraintSet::none(int dim) {
  ConstraintSet cs;
  cs.dim = dim;
  cs.n_constraints = 0;
  cs.value = [](const Vector&) { return Vector::Zero(0); };
  cs.gradient = [dim](int, const Vector&) { return Vector::Zero(dim); };
  cs.slater_point = Vector::Zero(dim);
  return cs;
}

void ConstraintSet::validate() const {
  if (dim <= 0) throw ContractViolation("ConstraintSet: dim must be positive");
  if (n_constraints < 0)
    throw ContractViolation("ConstraintSet: negative constraint count");
  if (n_constraints == 0) return;
  if (!value || !gradient)
    throw ContractViolation("ConstraintSet: value and gradient are required");
  if (static_cast<int>(kinds.size()) != n_constraints)
    throw ContractViolation("ConstraintSet: kinds size != n_constraints");
  if (slater_point.size() != dim)
    throw ContractViolation("ConstraintSet: Slater point has wrong dimension");
  const Vector g = value(slater_point);
  if (g.size() != n_constraints)
    throw ContractViolation("ConstraintSet: value() returns wrong size");
  for (int l = 0; l < n_constraints; ++l) {
    if (g[l] >= 0.0) {
      std::ostringstream msg;
      msg << "ConstraintSet: Slater point is not strictly feasible for"
             " constraint "
          << l << " (g = " << g[l] << ")";
      throw ContractViolation(msg.str());
    }
    if (gradient(l, slater_point).size() != dim)
      throw ContractViolation("ConstraintSet: gradient() returns wrong size");
  }
}

void BarrierPenalty::validate() const {
  if (!(rho > 0.0))
    throw ContractViolation("BarrierPenalty: rho must be positive");
  if (!constraints) throw ContractViolation("BarrierPenalty: missing set");
  constraints->validate();
}

EquilibriumReport kkt_residuals(const GameSpec& game, const ConstraintSet& cs,
                                const Vector& y, const Vector& multipliers) {
  if (y.size() != game.total_dim())
    throw ContractViolation("kkt_residuals: y has wrong dimension");
  if (multipliers.size() != cs.n_constraints)
    throw ContractViolation("kkt_residuals: multiplier count != p");

  EquilibriumReport rep;
  rep.y = y;
  rep.multipliers = multipliers;

  Vector stationarity = pseudo_gradient(game, y);
  rep.margins = cs.margins(y);
  rep.complementarity = Vector::Zero(cs.n_constraints);
  for (int l = 0; l < cs.n_constraints; ++l) {
    stationarity += multipliers[l] * cs.gradient(l, y);
    rep.complementarity[l] = multipliers[l] * -rep.margins[l];
  }
  rep.stationarity_residual = stationarity.norm();
  rep.min_margin = cs.n_constraints == 0
                       ? std::numeric_limits<double>::infinity()
                       : rep.margins.minCoeff();
  rep.min_multiplier = cs.n_constraints == 0
                           ? 0.0
                           : multipliers.minCoeff();
  return rep;
}

GameConstants estimate_game_constants(const GameSpec& game,
                                      const ConstraintSet& cs,
                                      int sample_count, std::uint64_t seed,
                                      double box_halfwidth) {
  if (sample_count <= 0)
    throw ContractViolation("estimate_game_constants: sample_count <= 0");
  if (game.monotonicity_constant && game.lipschitz_constant)
    return {*game.monotonicity_constant, *game.lipschitz_constant,
            *game.monotonicity_constant > 0.0};

  const int m = game.total_dim();
  const Vector center =
      cs.n_constraints > 0 ? cs.slater_point : Vector::Zero(m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-box_halfwidth, box_halfwidth);

  auto draw_interior = [&]() {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Vector y(m);
      for (int j = 0; j < m; ++j) y[j] = center[j] + unit(rng);
      if (cs.strictly_feasible(y)) return y;
    }
    throw NoConvergence(
        "estimate_game_constants: could not draw interior samples around the"
        " Slater point",
        0.0);
  };

  double mu = std::numeric_limits<double>::infinity();
  double theta1 = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const Vector a = draw_interior();
    const Vector b = draw_interior();
    const Vector dy = a - b;
    const double nrm2 = dy.squaredNorm();
    if (nrm2 < 1e-16) continue;
    const Vector dF = pseudo_gradient(game, a) - pseudo_gradient(game, b);
    mu = std::min(mu, 2.0 * dy.dot(dF) / nrm2);
    theta1 = std::max(theta1, dF.norm() / std::sqrt(nrm2));
  }
  if (!std::isfinite(mu))
    throw NoConvergence("estimate_game_constants: no usable sample pairs", 0.0);

  GameConstants out;
  out.mu = game.monotonicity_constant.value_or(mu);
  out.theta1 = game.lipschitz_constant.value_or(theta1);
  out.mu_positive = out.mu > 0.0;
  return out;
}

}  // namespace gnes
