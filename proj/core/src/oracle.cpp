#include "gnes/oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnes {

void OracleConfig::validate() const {
  if (!(newton_tol > 0.0) || !(fd_step > 0.0))
    throw ContractViolation("OracleConfig: tolerances must be positive");
  if (max_iters <= 0 || max_backtracks <= 0)
    throw ContractViolation("OracleConfig: iteration caps must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw ContractViolation("OracleConfig: backtrack factor must be in (0,1)");
}

namespace {

Vector penalized_residual(const GameSpec& game, const BarrierPenalty& pen,
                          const Vector& y) {
  return pseudo_gradient(game, y) + barrier_gradient(pen, y);
}

// Central-difference Jacobian column by column; shrinks a column's step when
// the probe point falls outside the strict interior.
Matrix fd_jacobian(const GameSpec& game, const BarrierPenalty& pen,
                   const Vector& y, double base_step) {
  const int m = static_cast<int>(y.size());
  Matrix J(m, m);
  for (int j = 0; j < m; ++j) {
    double h = base_step * std::max(1.0, std::abs(y[j]));
    for (int attempt = 0;; ++attempt) {
      Vector yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      try {
        J.col(j) = (penalized_residual(game, pen, yp) -
                    penalized_residual(game, pen, ym)) /
                   (2.0 * h);
        break;
      } catch (const InteriorViolation&) {
        if (attempt >= 12)
          throw NoConvergence(
              "solve_penalized_ne: cannot difference the residual inside the"
              " interior",
              std::numeric_limits<double>::quiet_NaN());
        h *= 0.1;
      }
    }
  }
  return J;
}

}  // namespace

Vector solve_penalized_ne(const GameSpec& game, const BarrierPenalty& pen,
                          const Vector& y0, const OracleConfig& cfg,
                          SolveStats* stats) {
  cfg.validate();
  game.validate();
  pen.validate();
  const ConstraintSet& cs = *pen.constraints;
  if (y0.size() != game.total_dim())
    throw ContractViolation("solve_penalized_ne: y0 has wrong dimension");
  if (!cs.strictly_feasible(y0)) {
    const Vector g = cs.value(y0);
    int idx = -1;
    for (int l = 0; l < cs.n_constraints; ++l)
      if (g[l] >= 0.0) { idx = l; break; }
    std::ostringstream msg;
    msg << "solve_penalized_ne: y0 is not strictly interior (constraint "
        << idx + 1 << ")";
    throw InfeasibleStart(msg.str(), idx);
  }

  Vector y = y0;
  Vector r = penalized_residual(game, pen, y);
  double rnorm = r.norm();
  if (stats) {
    stats->iterates.clear();
    stats->iterates.push_back(y);
  }

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (rnorm <= cfg.newton_tol) {
      if (stats) {
        stats->iterations = it;
        stats->final_residual = rnorm;
      }
      return y;
    }
    const Matrix J = fd_jacobian(game, pen, y, cfg.fd_step);
    const Vector dy = J.partialPivLu().solve(-r);
    if (!dy.allFinite())
      throw NoConvergence("solve_penalized_ne: singular Jacobian", rnorm);

    double alpha = 1.0;
    bool stepped = false;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      const Vector y_trial = y + alpha * dy;
      if (cs.strictly_feasible(y_trial)) {
        const Vector r_trial = penalized_residual(game, pen, y_trial);
        const double rt = r_trial.norm();
        if (rt <= (1.0 - 1e-4 * alpha) * rnorm) {
          y = y_trial;
          r = r_trial;
          rnorm = rt;
          stepped = true;
          break;
        }
      }
      alpha *= cfg.backtrack_factor;
    }
    if (!stepped)
      throw NoConvergence(
          "solve_penalized_ne: line search stalled at residual " +
              std::to_string(rnorm),
          rnorm);
    if (stats) stats->iterates.push_back(y);
  }
  if (rnorm <= cfg.newton_tol) {
    if (stats) {
      stats->iterations = cfg.max_iters;
      stats->final_residual = rnorm;
    }
    return y;
  }
  throw NoConvergence("solve_penalized_ne: max_iters exceeded with residual " +
                          std::to_string(rnorm),
                      rnorm);
}

namespace {

constexpr double kGolden = 0.6180339887498949;

struct SliceProblem {
  const GameSpec* game;
  const ConstraintSet* cs;
  Vector point;  // joint vector, mutated in the probed coordinate
  int player;
  int coord;  // global coordinate index

  double cost(double s) {
    point[coord] = s;
    return game->cost(player, point);
  }
  bool feasible(double s) {
    point[coord] = s;
    if (cs->n_constraints == 0) return true;
    return (cs->value(point).array() <= 0.0).all();
  }
};

// Expands from s0 in direction sign until the (convex) cost turns upward or
// the slice boundary blocks; returns the bracket end on the feasible side.
double expand_bracket(SliceProblem& sp, double s0, double f0, double sign,
                      double resolution) {
  double best = s0;
  double fbest = f0;
  double step = std::max(resolution, 1e-3 * (1.0 + std::abs(s0)));
  for (int iter = 0; iter < 80; ++iter) {
    const double cand = best + sign * step;
    if (!sp.feasible(cand)) {
      // bisect the boundary, keep the feasible side
      double lo = best, hi = cand;
      for (int b = 0; b < 200 && std::abs(hi - lo) > resolution * 1e-6; ++b) {
        const double mid = 0.5 * (lo + hi);
        (sp.feasible(mid) ? lo : hi) = mid;
      }
      return lo;
    }
    const double fc = sp.cost(cand);
    if (fc >= fbest) return cand;
    best = cand;
    fbest = fc;
    step *= 2.0;
  }
  return best;
}

struct MinResult {
  double arg = 0.0;
  double value = 0.0;
};

MinResult golden_min(SliceProblem& sp, double lo, double hi,
                     double resolution) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = sp.cost(x1), f2 = sp.cost(x2);
  while (std::abs(b - a) > resolution) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = sp.cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = sp.cost(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  MinResult res{mid, sp.cost(mid)};
  if (f1 < res.value) res = {x1, f1};
  if (f2 < res.value) res = {x2, f2};
  return res;
}

}  // namespace

Vector best_response_gap(const GameSpec& game, const ConstraintSet& cs,
                         const Vector& ystar, double resolution) {
  game.validate();
  if (ystar.size() != game.total_dim())
    throw ContractViolation("best_response_gap: ystar has wrong dimension");
  if (!(resolution > 0.0))
    throw ContractViolation("best_response_gap: resolution must be positive");
  if (cs.n_constraints > 0 && (cs.value(ystar).array() > 1e-9).any())
    throw ContractViolation("best_response_gap: ystar is not feasible");

  Vector gaps(game.n_players);
  for (int i = 0; i < game.n_players; ++i) {
    const int off = game.block_offset(i);
    const int mi = game.action_dims[i];
    const double j_star = game.cost(i, ystar);
    SliceProblem sp{&game, &cs, ystar, i, off};
    double best = j_star;
    // coordinate descent over the player's block; one pass is exact for the
    // scalar-action catalog
    const int sweeps = mi == 1 ? 1 : 3;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (int c = 0; c < mi; ++c) {
        sp.coord = off + c;
        const double s0 = sp.point[sp.coord];
        const double f0 = sp.cost(s0);
        const double lo = expand_bracket(sp, s0, f0, -1.0, resolution);
        const double hi = expand_bracket(sp, s0, f0, +1.0, resolution);
        MinResult found{s0, f0};
        if (hi > lo) {
          const MinResult g = golden_min(sp, lo, hi, resolution);
          if (g.value < found.value) found = g;
        }
        sp.point[sp.coord] = found.arg;
        best = std::min(best, found.value);
      }
    }
    gaps[i] = j_star - best;
  }
  return gaps;
}

Vector finite_diff_gradient(const std::function<double(const Vector&)>& f,
                            const Vector& y, double step) {
  if (!(step > 0.0))
    throw ContractViolation("finite_diff_gradient: step must be positive");
  Vector grad(y.size());
  Vector yp = y, ym = y;
  for (int j = 0; j < y.size(); ++j) {
    yp[j] = y[j] + step;
    ym[j] = y[j] - step;
    grad[j] = (f(yp) - f(ym)) / (2.0 * step);
    yp[j] = y[j];
    ym[j] = y[j];
  }
  return grad;
}

std::vector<PathPoint> barrier_path(const GameSpec& game,
                                    const ConstraintSet& cs,
                                    const std::vector<double>& rhos,
                                    const Vector& y0,
                                    const OracleConfig& cfg) {
  if (rhos.empty())
    throw ContractViolation("barrier_path: empty rho schedule");
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (!(rhos[k] > 0.0))
      throw ContractViolation("barrier_path: rho values must be positive");
    if (k > 0 && !(rhos[k] < rhos[k - 1]))
      throw ContractViolation(
          "barrier_path: rho schedule must be strictly descending");
  }

  std::vector<PathPoint> path;
  path.reserve(rhos.size());
  Vector y = y0;
  for (double rho : rhos) {
    const BarrierPenalty pen = make_barrier(rho, cs);
    try {
      y = solve_penalized_ne(game, pen, y, cfg);
    } catch (const NoConvergence& nc) {
      std::ostringstream msg;
      msg << "barrier_path: solve failed at rho = " << rho << ": "
          << nc.what();
      throw NoConvergence(msg.str(), nc.residual());
    }
    path.push_back({rho, y, implied_multipliers(pen, y)});
  }
  return path;
}

}  // namespace gnes
