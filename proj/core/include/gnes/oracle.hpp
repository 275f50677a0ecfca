#pragma once

#include <functional>
#include <vector>

#include "gnes/barrier.hpp"
#include "gnes/game.hpp"
#include "gnes/types.hpp"

namespace gnes {

struct OracleConfig {
  double newton_tol = 1e-10;
  int max_iters = 200;
  double fd_step = 1e-6;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<Vector> iterates;  // accepted points, all strictly interior
};

/// Damped Newton on the penalized equilibrium residual F(y) + grad phi(y)
/// with a finite-difference Jacobian. Every trial point is kept strictly
/// interior by backtracking, so the barrier is always defined along the
/// solve. Returns the root to newton_tol; raises NoConvergence (carrying the
/// best residual) when max_iters runs out.
Vector solve_penalized_ne(const GameSpec& game, const BarrierPenalty& pen,
                          const Vector& y0, const OracleConfig& cfg = {},
                          SolveStats* stats = nullptr);

/// Per-player epsilon certificate: gap_i = J_i(y*) - min over the feasible
/// slice {s : g(s, y*_{-i}) <= 0} of J_i(s, y*_{-i}), found by bracketed
/// golden-section search per scalar coordinate (coordinate sweeps for vector
/// actions). Derivative-free on purpose: it audits the gradient-based code
/// paths without sharing them.
Vector best_response_gap(const GameSpec& game, const ConstraintSet& cs,
                         const Vector& ystar, double resolution = 1e-6);

/// Central finite differences of a scalar field, per coordinate.
Vector finite_diff_gradient(const std::function<double(const Vector&)>& f,
                            const Vector& y, double step);

struct PathPoint {
  double rho = 0.0;
  Vector y;
  Vector multipliers;
};

/// Warm-started continuation over a strictly descending rho schedule: each
/// solve seeds the next. Raises NoConvergence naming the offending rho.
std::vector<PathPoint> barrier_path(const GameSpec& game,
                                    const ConstraintSet& cs,
                                    const std::vector<double>& rhos,
                                    const Vector& y0,
                                    const OracleConfig& cfg = {});

}  // namespace gnes
