#include "qp_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace gnes::testing {

ExactVgne active_set_vgne(const QuadraticGameParams& p) {
  const int n = static_cast<int>(p.targets.size());
  const double w = p.self_weight;
  const double c = p.coupling;

  // F(y) = A y + b
  Matrix A = Matrix::Constant(n, n, c);
  A.diagonal().setConstant(2.0 * w);
  const Vector b = -2.0 * w * p.targets;

  // constraint rows a_l^T y <= h_l: budget first, then optional lower bounds
  const int n_cons = 1 + (p.lower_bound ? n : 0);
  Matrix rows(n_cons, n);
  Vector rhs(n_cons);
  rows.row(0).setOnes();
  rhs[0] = p.budget;
  if (p.lower_bound)
    for (int i = 0; i < n; ++i) {
      rows.row(1 + i) = -Vector::Unit(n, i).transpose();
      rhs[1 + i] = -*p.lower_bound;
    }

  for (unsigned mask = 0; mask < (1u << n_cons); ++mask) {
    std::vector<int> active;
    for (int l = 0; l < n_cons; ++l)
      if (mask & (1u << l)) active.push_back(l);
    const int na = static_cast<int>(active.size());

    Matrix kkt = Matrix::Zero(n + na, n + na);
    Vector kkt_rhs(n + na);
    kkt.topLeftCorner(n, n) = A;
    kkt_rhs.head(n) = -b;
    for (int j = 0; j < na; ++j) {
      kkt.block(0, n + j, n, 1) = rows.row(active[j]).transpose();
      kkt.block(n + j, 0, 1, n) = rows.row(active[j]);
      kkt_rhs[n + j] = rhs[active[j]];
    }
    const Eigen::FullPivLU<Matrix> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Vector sol = lu.solve(kkt_rhs);
    const Vector y = sol.head(n);

    Vector lambda = Vector::Zero(n_cons);
    for (int j = 0; j < na; ++j) lambda[active[j]] = sol[n + j];

    const Vector slack = rhs - rows * y;
    if (slack.minCoeff() < -1e-10) continue;
    if (na > 0 && lambda.minCoeff() < -1e-10) continue;
    return {y, lambda.cwiseMax(0.0)};
  }
  throw std::runtime_error("active_set_vgne: no active set satisfied the KKT"
                           " conditions");
}

double qp2_barrier_component(double rho) {
  return (7.0 - std::sqrt(1.0 + 24.0 * rho)) / 12.0;
}

double scalar_barrier_root(double rho) {
  return (1.0 - std::sqrt(1.0 + 2.0 * rho)) / 2.0;
}

}  // namespace gnes::testing
