#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "gnes/types.hpp"

namespace gnes {

/// N-player game over a stacked decision vector y = col(y_1, ..., y_N).
/// Costs and partial gradients always receive the full stack; player i's
/// partial gradient returns a vector of size action_dims[i].
struct GameSpec {
  int n_players = 0;
  std::vector<int> action_dims;
  std::function<double(int, const Vector&)> cost;
  std::function<Vector(int, const Vector&)> partial_gradient;

  /// Known strong-monotonicity constant of the pseudo-gradient, in the
  /// convention (y - y')^T (F(y) - F(y')) >= (mu/2) |y - y'|^2.
  std::optional<double> monotonicity_constant;
  /// Known Lipschitz constant of the pseudo-gradient.
  std::optional<double> lipschitz_constant;

  int total_dim() const {
    return std::accumulate(action_dims.begin(), action_dims.end(), 0);
  }

  int block_offset(int i) const {
    return std::accumulate(action_dims.begin(), action_dims.begin() + i, 0);
  }

  /// Throws ContractViolation on inconsistent dimensions or missing callables.
  void validate() const;
};

enum class ConstraintKind { affine, convex_smooth };

/// Shared constraint set Omega = { y : g_l(y) <= 0, l = 1..p }, assumed convex
/// in y with a known strictly feasible Slater point. p = 0 is the explicit
/// unconstrained marker (barrier identically zero).
struct ConstraintSet {
  int dim = 0;
  int n_constraints = 0;
  std::function<Vector(const Vector&)> value;
  std::function<Vector(int, const Vector&)> gradient;
  std::vector<ConstraintKind> kinds;
  Vector slater_point;

  static ConstraintSet none(int dim);

  /// Margins -g(y); all strictly positive on the interior.
  Vector margins(const Vector& y) const {
    if (n_constraints == 0) return Vector::Zero(0);
    return -value(y);
  }

  bool strictly_feasible(const Vector& y, double margin = 0.0) const {
    if (n_constraints == 0) return true;
    return (margins(y).array() > margin).all();
  }

  void validate() const;
};

/// Result of a KKT evaluation or a penalized-equilibrium solve.
struct EquilibriumReport {
  Vector y;
  Vector multipliers;
  double stationarity_residual = 0.0;
  Vector margins;
  Vector complementarity;
  double min_margin = 0.0;
  double min_multiplier = 0.0;
  std::optional<double> epsilon_bound;
  std::optional<int> iterations;
};

/// Pseudo-gradient F(y) = col_i(grad_{y_i} J_i(y)).
inline Vector pseudo_gradient(const GameSpec& game, const Vector& y) {
  if (y.size() != game.total_dim())
    throw ContractViolation("pseudo_gradient: y has dimension " +
                            std::to_string(y.size()) + ", game expects " +
                            std::to_string(game.total_dim()));
  Vector out(y.size());
  int off = 0;
  for (int i = 0; i < game.n_players; ++i) {
    const int mi = game.action_dims[i];
    out.segment(off, mi) = game.partial_gradient(i, y);
    off += mi;
  }
  return out;
}

/// Evaluates the KKT system of the constrained game at (y, lambda): the
/// stationarity residual |F(y) + sum_l lambda_l grad g_l(y)|, primal margins,
/// dual feasibility and the complementarity vector lambda_l * g_l(y). Purely
/// diagnostic: an infeasible y or negative multiplier shows up in the report
/// rather than raising.
EquilibriumReport kkt_residuals(const GameSpec& game, const ConstraintSet& cs,
                                const Vector& y, const Vector& multipliers);

struct GameConstants {
  double mu = 0.0;          // sampled strong-monotonicity lower estimate
  double theta1 = 0.0;      // sampled Lipschitz upper estimate
  bool mu_positive = true;  // false warns that strong monotonicity looks violated
};

/// Estimates (mu, theta1) by sampling pseudo-gradient differences over a box
/// centered on the Slater point (half-width `box_halfwidth` per coordinate),
/// rejecting draws outside the strict interior. Deterministic in `seed`.
/// Known constants on the GameSpec take precedence over sampling.
GameConstants estimate_game_constants(const GameSpec& game,
                                      const ConstraintSet& cs,
                                      int sample_count, std::uint64_t seed,
                                      double box_halfwidth = 0.5);

}  // namespace gnes
