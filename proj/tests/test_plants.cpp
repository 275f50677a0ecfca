#include <cmath>
#include <random>

#include "doctest.h"
#include "gnes/plants.hpp"

using namespace gnes;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("integrator is the identity plant") {
  const PlantModel p = make_integrator(1);
  CHECK(p.regulator(vec({3.0}))[0] == 3.0);
  const Vector x = vec({-1.7});
  CHECK(p.drift(x)[0] == 0.0);
  CHECK(p.output(x)[0] == -1.7);
  CHECK((p.input_matrix - Matrix::Identity(1, 1)).norm() == 0.0);
}

TEST_CASE("pi cascade regulator and drift") {
  const PlantModel p = make_pi_cascade(1, 1.0, 0.5);
  const Vector xbar = p.regulator(vec({2.0}));
  CHECK(xbar[0] == 2.0);
  CHECK(xbar[1] == 4.0);
  CHECK(p.drift(xbar).norm() == 0.0);

  SUBCASE("drift is linear") {
    const Vector x = vec({0.7, -1.3});
    const Vector twice = p.drift(2.0 * x);
    const Vector once = p.drift(x);
    CHECK(twice[0] == 2.0 * once[0]);
    CHECK(twice[1] == 2.0 * once[1]);
  }
}

TEST_CASE("pi cascade rejects gains outside 0 < k < v") {
  CHECK_THROWS_AS(make_pi_cascade(1, 1.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(make_pi_cascade(1, 0.5, 0.7), ContractViolation);
  CHECK_THROWS_AS(make_pi_cascade(1, 1.0, 0.0), ContractViolation);
}

TEST_CASE("flexible robot structure") {
  const PlantModel p = make_flexible_robot(1.0, 1.0, 1.0);
  const Vector xbar = p.regulator(vec({3.0}));
  CHECK((xbar - vec({0.0, 3.0, 3.0})).norm() == 0.0);
  CHECK(p.drift(xbar).norm() == 0.0);

  const Vector d = p.drift(vec({0.0, 1.0, 0.0}));
  CHECK(d[0] == 1.0);
  CHECK(d[1] == -1.0);
  CHECK(d[2] == 1.0);

  CHECK(p.output(vec({5.0, 2.0, 7.0}))[0] == 2.0);
}

TEST_CASE("flexible robot rejects nonpositive parameters") {
  CHECK_THROWS_AS(make_flexible_robot(0.0, 1.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(make_flexible_robot(1.0, -1.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(make_flexible_robot(1.0, 1.0, 0.0), ContractViolation);
}

TEST_CASE("stacking concatenates blocks") {
  SUBCASE("two scalar integrators") {
    const StackedPlant s =
        stack_plants({make_integrator(1), make_integrator(1)});
    CHECK(s.state_dim() == 2);
    CHECK(s.action_dim() == 2);
    Vector dx = Vector::Zero(2);
    s.add_input(vec({1.0, -2.0}), 1.0, dx);
    CHECK((dx - vec({1.0, -2.0})).norm() == 0.0);  // G is the identity
  }

  SUBCASE("integrator plus pi cascade") {
    const StackedPlant s =
        stack_plants({make_integrator(1), make_pi_cascade(1, 1.0, 0.5)});
    CHECK(s.state_dim() == 3);
    CHECK(s.action_dim() == 2);
    Vector dx = Vector::Zero(3);
    s.add_input(vec({1.0, 1.0}), 1.0, dx);
    CHECK((dx - vec({1.0, 1.0, 1.0})).norm() == 0.0);  // blkdiag([1], [1; 1])

    const Vector xbar = s.regulator(vec({5.0, 2.0}));
    CHECK((xbar - vec({5.0, 2.0, 4.0})).norm() == 0.0);
  }
}

TEST_CASE("passivity probe on the integrator is an exact equality") {
  const PlantModel p = make_integrator(2);
  const Vector xbar = p.regulator(vec({1.0, -1.0}));
  std::vector<std::pair<Vector, Vector>> samples;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int s = 0; s < 100; ++s) {
    Vector x(2), in(2);
    for (int j = 0; j < 2; ++j) {
      x[j] = u(rng);
      in[j] = u(rng);
    }
    samples.emplace_back(x, in);
  }
  const EipReport rep = eip_probe(p, xbar, samples);
  CHECK(rep.max_violation == 0.0);
  for (int s = 0; s < rep.violations.size(); ++s)
    CHECK(rep.violations[s] == 0.0);
}

TEST_CASE("passivity probe on the robot holds over random samples") {
  const PlantModel p = make_flexible_robot(1.0, 1.0, 1.0);
  const Vector xbar = p.regulator(vec({3.0}));
  std::vector<std::pair<Vector, Vector>> samples;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int s = 0; s < 1000; ++s) {
    Vector x(3), in(1);
    for (int j = 0; j < 3; ++j) x[j] = u(rng);
    in[0] = u(rng);
    samples.emplace_back(x, in);
  }
  const EipReport rep = eip_probe(p, xbar, samples);
  CHECK(rep.max_violation <= 1e-9);

  SUBCASE("equilibrium sample contributes exactly zero") {
    const EipReport at_eq = eip_probe(p, xbar, {{xbar, Vector::Zero(1)}});
    CHECK(at_eq.violations[0] == 0.0);
  }
}

TEST_CASE("passivity probe needs a storage gradient") {
  const PlantModel p = make_pi_cascade(1, 1.0, 0.5);
  CHECK_THROWS_AS(eip_probe(p, p.regulator(vec({1.0})), {}),
                  UnsupportedDiagnostic);
}
