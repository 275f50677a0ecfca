#include <cmath>

#include "doctest.h"
#include "gnes/barrier.hpp"
#include "gnes/game.hpp"
#include "gnes/oracle.hpp"
#include "gnes/scenario.hpp"

using namespace gnes;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// g(y) = y_1 + y_2 - 1 on R^2.
ConstraintSet budget_line() {
  ConstraintSet cs;
  cs.dim = 2;
  cs.n_constraints = 1;
  cs.value = [](const Vector& y) {
    Vector g(1);
    g[0] = y[0] + y[1] - 1.0;
    return g;
  };
  cs.gradient = [](int, const Vector&) { return Vector(Vector::Ones(2)); };
  cs.kinds = {ConstraintKind::affine};
  cs.slater_point = Vector::Zero(2);
  return cs;
}

// g(y) = (-y_1, -y_2): the positive orthant.
ConstraintSet orthant2() {
  ConstraintSet cs;
  cs.dim = 2;
  cs.n_constraints = 2;
  cs.value = [](const Vector& y) { return Vector(-y); };
  cs.gradient = [](int l, const Vector&) {
    Vector g = Vector::Zero(2);
    g[l] = -1.0;
    return g;
  };
  cs.kinds = {ConstraintKind::affine, ConstraintKind::affine};
  cs.slater_point = Vector::Constant(2, 1.0);
  return cs;
}

BuiltGame two_player_quadratic() {
  QuadraticGameParams p;
  p.targets = Vector::Constant(2, 1.0);
  p.self_weight = 1.0;
  p.coupling = 1.0;
  p.budget = 1.0;
  return make_quadratic_game(p);
}

}  // namespace

TEST_CASE("pseudo-gradient of the two-player quadratic game") {
  const BuiltGame bg = two_player_quadratic();
  const Vector at_origin = pseudo_gradient(bg.game, vec2(0.0, 0.0));
  CHECK(at_origin[0] == -2.0);
  CHECK(at_origin[1] == -2.0);
  const Vector at_ones = pseudo_gradient(bg.game, vec2(1.0, 1.0));
  CHECK(at_ones[0] == 1.0);
  CHECK(at_ones[1] == 1.0);
}

TEST_CASE("pseudo-gradient rejects a wrong-sized stack") {
  const BuiltGame bg = two_player_quadratic();
  CHECK_THROWS_AS(pseudo_gradient(bg.game, Vector::Zero(3)),
                  ContractViolation);
}

TEST_CASE("power-control gradients match finite differences") {
  const BuiltGame bg = make_osnr_game(OsnrGameParams{});
  const Vector y = Vector::Constant(10, 0.6);
  for (int i = 0; i < bg.game.n_players; ++i) {
    const auto cost_i = [&](const Vector& z) { return bg.game.cost(i, z); };
    const Vector fd = finite_diff_gradient(cost_i, y, 1e-6);
    const double an = bg.game.partial_gradient(i, y)[0];
    CHECK(std::abs(fd[i] - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("barrier value on the budget line") {
  const BarrierPenalty pen = make_barrier(0.1, budget_line());
  CHECK(barrier_value(pen, vec2(0.0, 0.0)) == 0.0);
  CHECK(std::isinf(barrier_value(pen, vec2(0.5, 0.5))));
}

TEST_CASE("barrier value with margins 1/e on both constraints") {
  const double a = std::exp(-1.0);
  ConstraintSet cs;
  cs.dim = 2;
  cs.n_constraints = 2;
  cs.value = [a](const Vector& y) {
    return Vector(y - Vector::Constant(2, a));
  };
  cs.gradient = [](int l, const Vector&) {
    Vector g = Vector::Zero(2);
    g[l] = 1.0;
    return g;
  };
  cs.kinds = {ConstraintKind::affine, ConstraintKind::affine};
  cs.slater_point = Vector::Constant(2, -1.0);
  const BarrierPenalty pen = make_barrier(0.1, std::move(cs));
  CHECK(barrier_value(pen, vec2(0.0, 0.0)) ==
        doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("barrier gradient closed forms") {
  const BarrierPenalty budget = make_barrier(0.1, budget_line());
  const Vector g1 = barrier_gradient(budget, vec2(0.0, 0.0));
  CHECK(g1[0] == 0.1);
  CHECK(g1[1] == 0.1);

  const BarrierPenalty orthant = make_barrier(0.1, orthant2());
  const Vector g2 = barrier_gradient(orthant, vec2(0.5, 0.5));
  CHECK(g2[0] == -0.2);
  CHECK(g2[1] == -0.2);
}

TEST_CASE("barrier gradient matches finite differences of the value") {
  const BarrierPenalty pen = make_barrier(0.1, orthant2());
  const Vector y = vec2(0.2, 0.3);
  const auto phi = [&](const Vector& z) { return barrier_value(pen, z); };
  const Vector fd = finite_diff_gradient(phi, y, 1e-7);
  const Vector an = barrier_gradient(pen, y);
  CHECK((fd - an).norm() <= 1e-6 * an.norm());
}

TEST_CASE("barrier gradient outside the interior raises with indices") {
  const BarrierPenalty pen = make_barrier(0.1, budget_line());
  try {
    barrier_gradient(pen, vec2(0.6, 0.6));
    FAIL("expected InteriorViolation");
  } catch (const InteriorViolation& e) {
    REQUIRE(e.violated_constraints().size() == 1);
    CHECK(e.violated_constraints()[0] == 0);
  }
}

TEST_CASE("partial barrier gradient blocks stack to the full gradient") {
  const BuiltGame bg = two_player_quadratic();
  const BarrierPenalty pen = make_barrier(0.1, budget_line());
  const Vector y = vec2(0.0, 0.0);

  const Vector first = partial_barrier_gradient(pen, bg.game, 0, y);
  REQUIRE(first.size() == 1);
  CHECK(first[0] == 0.1);

  const Vector full = barrier_gradient(pen, y);
  Vector stacked(2);
  stacked << partial_barrier_gradient(pen, bg.game, 0, y),
      partial_barrier_gradient(pen, bg.game, 1, y);
  CHECK(stacked[0] == full[0]);
  CHECK(stacked[1] == full[1]);
}

TEST_CASE("leader-follower barrier blocks touch only adjacent constraints") {
  LeaderFollowerParams p;
  p.robots = 4;
  const BuiltGame bg = make_leader_follower_game(p);
  const BarrierPenalty pen = make_barrier(0.1, bg.constraints);
  Vector y(4);
  y << 2.0, 1.5, 2.5, 1.0;

  // Player i's block of the barrier only moves when constraints i or i+1
  // do: perturbing y_i must not change margins of constraints outside
  // {i, i+1}, hence the partial gradient means finite differences of the
  // barrier restricted to those two constraints already explain it.
  for (int i = 0; i < 4; ++i) {
    const auto phi = [&](const Vector& z) { return barrier_value(pen, z); };
    const Vector fd = finite_diff_gradient(phi, y, 1e-7);
    const Vector block = partial_barrier_gradient(pen, bg.game, i, y);
    CHECK(std::abs(fd[i] - block[0]) <= 1e-6 * std::max(1.0, block.norm()));
    for (int l = 0; l < bg.constraints.n_constraints; ++l) {
      const Vector grad_l = bg.constraints.gradient(l, y);
      if (l != i && l != i + 1) CHECK(grad_l[i] == 0.0);
    }
  }
}

TEST_CASE("implied multipliers are margins divided into rho") {
  ConstraintSet cs = orthant2();
  const BarrierPenalty pen = make_barrier(0.1, std::move(cs));
  const Vector lam1 = implied_multipliers(pen, vec2(0.5, 0.5));
  CHECK(lam1[0] == 0.2);
  CHECK(lam1[1] == 0.2);
  const Vector lam2 = implied_multipliers(pen, vec2(1.0, 0.1));
  CHECK(lam2[0] == 0.1);
  CHECK(lam2[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kkt residuals on a hand-solved scalar program") {
  GameSpec game;
  game.n_players = 1;
  game.action_dims = {1};
  game.cost = [](int, const Vector& y) {
    return (y[0] - 2.0) * (y[0] - 2.0);
  };
  game.partial_gradient = [](int, const Vector& y) {
    Vector g(1);
    g[0] = 2.0 * (y[0] - 2.0);
    return g;
  };
  ConstraintSet cs;
  cs.dim = 1;
  cs.n_constraints = 1;
  cs.value = [](const Vector& y) {
    Vector g(1);
    g[0] = y[0] - 1.0;
    return g;
  };
  cs.gradient = [](int, const Vector&) {
    return Vector(Vector::Ones(1));
  };
  cs.kinds = {ConstraintKind::affine};
  cs.slater_point = Vector::Zero(1);

  Vector y(1), lam(1);
  y << 1.0;
  lam << 2.0;
  const EquilibriumReport rep = kkt_residuals(game, cs, y, lam);
  CHECK(rep.stationarity_residual == 0.0);
  CHECK(rep.complementarity[0] == 0.0);

  SUBCASE("zero multipliers leave the pseudo-gradient as the residual") {
    Vector inside(1), zero(1);
    inside << 0.5;
    zero << 0.0;
    const EquilibriumReport r2 = kkt_residuals(game, cs, inside, zero);
    CHECK(r2.stationarity_residual ==
          pseudo_gradient(game, inside).norm());
  }
}

TEST_CASE("kkt complementarity at a penalized equilibrium equals rho") {
  const Scenario sc = builtin_scenario("quad3");
  const BuiltGame bg = build_game(sc.game);
  const BarrierPenalty pen = make_barrier(sc.rho, bg.constraints);
  const Vector y_star =
      solve_penalized_ne(bg.game, pen, bg.constraints.slater_point);
  const Vector lam = implied_multipliers(pen, y_star);
  const EquilibriumReport rep =
      kkt_residuals(bg.game, bg.constraints, y_star, lam);
  for (int l = 0; l < bg.constraints.n_constraints; ++l)
    CHECK(std::abs(-rep.complementarity[l] - sc.rho) <= 1e-12);
  CHECK(rep.min_multiplier > 0.0);
  CHECK(rep.min_margin > 0.0);
}

TEST_CASE("epsilon bound is the constraint count times rho") {
  CHECK(epsilon_bound(orthant2(), make_barrier(0.1, orthant2())) == 0.2);

  const BuiltGame osnr = make_osnr_game(OsnrGameParams{});
  REQUIRE(osnr.constraints.n_constraints == 11);
  CHECK(epsilon_bound(osnr.constraints,
                      make_barrier(0.1, osnr.constraints)) ==
        doctest::Approx(1.1).epsilon(1e-15));
  CHECK(epsilon_bound(osnr.constraints,
                      make_barrier(1e-9, osnr.constraints)) ==
        doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("constant estimation recovers linear-map constants") {
  GameSpec game;
  game.n_players = 2;
  game.action_dims = {1, 1};
  game.cost = [](int i, const Vector& y) { return y[i] * y[i]; };
  game.partial_gradient = [](int i, const Vector& y) {
    Vector g(1);
    g[0] = 2.0 * y[i];
    return g;
  };
  const GameConstants gc =
      estimate_game_constants(game, ConstraintSet::none(2), 200, 11);
  CHECK(gc.mu == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(gc.theta1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(gc.mu_positive);
}

TEST_CASE("constant estimation prefers known catalog constants") {
  const BuiltGame bg = two_player_quadratic();
  const GameConstants gc =
      estimate_game_constants(bg.game, bg.constraints, 50, 3);
  CHECK(gc.mu == 2.0);     // eigenvalue bound of the [[2,1],[1,2]] Jacobian
  CHECK(gc.theta1 == 3.0);
}

TEST_CASE("power-control game is monotone on its feasible box") {
  const BuiltGame bg = make_osnr_game(OsnrGameParams{});
  const GameConstants gc =
      estimate_game_constants(bg.game, bg.constraints, 400, 19);
  CHECK(gc.mu_positive);
  CHECK(gc.mu > 0.0);
}
