#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "gnes/game.hpp"
#include "gnes/types.hpp"

namespace gnes {

/// Log-barrier penalty phi(y) = -rho * sum_l log(-g_l(y)) on the strict
/// interior of the constraint set, +infinity outside.
struct BarrierPenalty {
  double rho = 0.0;
  std::shared_ptr<const ConstraintSet> constraints;

  void validate() const;
};

inline BarrierPenalty make_barrier(double rho, ConstraintSet cs) {
  BarrierPenalty pen{rho, std::make_shared<const ConstraintSet>(std::move(cs))};
  pen.validate();
  return pen;
}

/// Worst-case equilibrium quality of the penalized game: the penalized
/// equilibrium is an epsilon-Nash point with epsilon <= p * rho.
inline double epsilon_bound(const ConstraintSet& cs, const BarrierPenalty& pen) {
  return cs.n_constraints * pen.rho;
}

/// Penalty value. Returns +infinity (the IEEE marker, branch with
/// std::isinf) at any point on or outside the boundary instead of raising,
/// so line searches and integrator guards can test and back off.
inline double barrier_value(const BarrierPenalty& pen, const Vector& y) {
  const ConstraintSet& cs = *pen.constraints;
  if (cs.n_constraints == 0) return 0.0;
  const Vector g = cs.value(y);
  double sum = 0.0;
  for (int l = 0; l < cs.n_constraints; ++l) {
    if (g[l] >= 0.0) return std::numeric_limits<double>::infinity();
    sum += std::log(-g[l]);
  }
  return -pen.rho * sum;
}

namespace detail {

[[noreturn]] inline void throw_interior_violation(const Vector& g) {
  std::vector<int> violated;
  for (int l = 0; l < g.size(); ++l)
    if (g[l] >= 0.0) violated.push_back(l);
  std::ostringstream msg;
  msg << "barrier gradient requested outside the strict interior; violated"
         " constraint indices:";
  for (int l : violated) msg << ' ' << l;
  throw InteriorViolation(msg.str(), std::move(violated));
}

}  // namespace detail

/// Gradient of the penalty, sum_l (rho / -g_l(y)) * grad g_l(y). Unlike
/// barrier_value this raises InteriorViolation outside the strict interior:
/// there is no meaningful gradient there and callers must not integrate
/// through the boundary.
inline Vector barrier_gradient(const BarrierPenalty& pen, const Vector& y) {
  const ConstraintSet& cs = *pen.constraints;
  Vector out = Vector::Zero(y.size());
  if (cs.n_constraints == 0) return out;
  const Vector g = cs.value(y);
  if ((g.array() >= 0.0).any()) detail::throw_interior_violation(g);
  for (int l = 0; l < cs.n_constraints; ++l) {
    const double coef = pen.rho / -g[l];
    out += coef * cs.gradient(l, y);
  }
  return out;
}

/// Block of the penalty gradient belonging to player i (offset/size taken
/// from the game's action layout). Shares the arithmetic path of
/// barrier_gradient exactly: the same scale factors rho / -g_l(y) multiply
/// the same gradient components in the same order, so stacking the N partial
/// blocks reproduces barrier_gradient bitwise.
inline Vector partial_barrier_gradient(const BarrierPenalty& pen,
                                       const GameSpec& game, int i,
                                       const Vector& y) {
  const ConstraintSet& cs = *pen.constraints;
  const int off = game.block_offset(i);
  const int mi = game.action_dims[i];
  Vector out = Vector::Zero(mi);
  if (cs.n_constraints == 0) return out;
  const Vector g = cs.value(y);
  if ((g.array() >= 0.0).any()) detail::throw_interior_violation(g);
  for (int l = 0; l < cs.n_constraints; ++l) {
    const double coef = pen.rho / -g[l];
    out += coef * cs.gradient(l, y).segment(off, mi);
  }
  return out;
}

/// Multipliers lambda_l = rho / -g_l(y) implied by the barrier at an interior
/// point. They satisfy lambda_l * (-g_l(y)) = rho exactly (in floating point:
/// the product reproduces rho up to one rounding), which is the perturbed
/// complementarity identity behind the epsilon bound.
inline Vector implied_multipliers(const BarrierPenalty& pen, const Vector& y) {
  const ConstraintSet& cs = *pen.constraints;
  if (cs.n_constraints == 0) return Vector::Zero(0);
  const Vector g = cs.value(y);
  if ((g.array() >= 0.0).any()) detail::throw_interior_violation(g);
  Vector lam(cs.n_constraints);
  for (int l = 0; l < cs.n_constraints; ++l) lam[l] = pen.rho / -g[l];
  return lam;
}

}  // namespace gnes
