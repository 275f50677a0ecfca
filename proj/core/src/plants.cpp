#include "gnes/plants.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace gnes {

void PlantModel::validate() const {
  if (state_dim <= 0 || action_dim <= 0)
    throw ContractViolation("PlantModel: dimensions must be positive");
  if (!drift || !output || !regulator)
    throw ContractViolation(
        "PlantModel: drift, output and regulator are required");
  if (input_matrix.rows() != state_dim || input_matrix.cols() != action_dim)
    throw ContractViolation("PlantModel: input matrix has wrong shape");
  if (Eigen::ColPivHouseholderQR<Matrix>(input_matrix).rank() != action_dim)
    throw ContractViolation(
        "PlantModel: input matrix must have full column rank");
  const Vector ybar = Vector::Zero(action_dim);
  const Vector xbar = regulator(ybar);
  if (xbar.size() != state_dim)
    throw ContractViolation("PlantModel: regulator returns wrong state size");
  if (drift(xbar).norm() > 1e-12)
    throw ContractViolation("PlantModel: regulator state is not zero-drift");
  if ((output(xbar) - ybar).norm() > 1e-12)
    throw ContractViolation(
        "PlantModel: regulator state does not reproduce the output");
}

PlantModel make_integrator(int dim) {
  if (dim <= 0) throw ContractViolation("make_integrator: dim must be > 0");
  PlantModel p;
  p.tag = "integrator";
  p.state_dim = dim;
  p.action_dim = dim;
  p.drift = [dim](const Vector&) { return Vector::Zero(dim); };
  p.input_matrix = Matrix::Identity(dim, dim);
  p.output = [](const Vector& x) { return x; };
  p.regulator = [](const Vector& ybar) { return ybar; };
  p.storage = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.storage_gradient = [](const Vector& x) { return x; };
  return p;
}

PlantModel make_pi_cascade(int dim, double v, double k) {
  if (dim <= 0) throw ContractViolation("make_pi_cascade: dim must be > 0");
  if (!(0.0 < k && k < v)) {
    std::ostringstream msg;
    msg << "make_pi_cascade: need 0 < k < v, got k = " << k << ", v = " << v;
    throw ContractViolation(msg.str());
  }
  PlantModel p;
  p.tag = "pi_cascade";
  p.state_dim = 2 * dim;
  p.action_dim = dim;
  p.drift = [dim, v, k](const Vector& x) {
    Vector dx = Vector::Zero(2 * dim);
    dx.head(dim) = -v * x.head(dim) + k * x.tail(dim);
    return dx;
  };
  p.input_matrix = Matrix::Zero(2 * dim, dim);
  p.input_matrix.topRows(dim) = Matrix::Identity(dim, dim);
  p.input_matrix.bottomRows(dim) = Matrix::Identity(dim, dim);
  p.output = [dim](const Vector& x) { return x.head(dim).eval(); };
  p.regulator = [dim, v, k](const Vector& ybar) {
    Vector x(2 * dim);
    x.head(dim) = ybar;
    x.tail(dim) = (v / k) * ybar;
    return x;
  };
  return p;
}

namespace {

double spring(double s) { return s + std::atan(s); }

// integral of the spring force from 0 to s
double spring_potential(double s) {
  return 0.5 * s * s + s * std::atan(s) - 0.5 * std::log1p(s * s);
}

}  // namespace

PlantModel make_flexible_robot(double mass_link, double mass_motor,
                               double damping) {
  if (!(mass_link > 0.0) || !(mass_motor > 0.0) || !(damping > 0.0))
    throw ContractViolation(
        "make_flexible_robot: masses and damping must be positive");
  PlantModel p;
  p.tag = "flexible_robot";
  p.state_dim = 3;
  p.action_dim = 1;
  const double M = mass_link;
  const double m = mass_motor;
  const double g = damping;
  p.drift = [M, m, g](const Vector& x) {
    const double force = spring(x[0]) + g * (x[1] - x[2]);
    Vector dx(3);
    dx[0] = x[1] - x[2];
    dx[1] = -force / M;
    dx[2] = force / m;
    return dx;
  };
  p.input_matrix = Matrix::Zero(3, 1);
  p.input_matrix(1, 0) = 1.0 / M;
  p.output = [](const Vector& x) { return Vector::Constant(1, x[1]); };
  p.regulator = [](const Vector& ybar) {
    Vector x(3);
    x << 0.0, ybar[0], ybar[0];
    return x;
  };
  p.storage = [M, m](const Vector& x) {
    return spring_potential(x[0]) + 0.5 * M * x[1] * x[1] +
           0.5 * m * x[2] * x[2];
  };
  p.storage_gradient = [M, m](const Vector& x) {
    Vector grad(3);
    grad << spring(x[0]), M * x[1], m * x[2];
    return grad;
  };
  return p;
}

StackedPlant::StackedPlant(std::vector<PlantModel> agents)
    : agents_(std::move(agents)) {
  if (agents_.empty())
    throw ContractViolation("StackedPlant: need at least one agent");
  state_offsets_.reserve(agents_.size());
  action_offsets_.reserve(agents_.size());
  for (const PlantModel& p : agents_) {
    p.validate();
    state_offsets_.push_back(state_dim_);
    action_offsets_.push_back(action_dim_);
    state_dim_ += p.state_dim;
    action_dim_ += p.action_dim;
  }
}

Vector StackedPlant::drift(const Vector& x) const {
  Vector dx(state_dim_);
  for (int i = 0; i < n_agents(); ++i)
    dx.segment(state_offsets_[i], agents_[i].state_dim) =
        agents_[i].drift(x.segment(state_offsets_[i], agents_[i].state_dim));
  return dx;
}

Vector StackedPlant::output(const Vector& x) const {
  Vector y(action_dim_);
  for (int i = 0; i < n_agents(); ++i)
    y.segment(action_offsets_[i], agents_[i].action_dim) =
        agents_[i].output(x.segment(state_offsets_[i], agents_[i].state_dim));
  return y;
}

Vector StackedPlant::regulator(const Vector& ybar) const {
  Vector x(state_dim_);
  for (int i = 0; i < n_agents(); ++i)
    x.segment(state_offsets_[i], agents_[i].state_dim) = agents_[i].regulator(
        ybar.segment(action_offsets_[i], agents_[i].action_dim));
  return x;
}

void StackedPlant::add_input(const Vector& u, double scale,
                             Eigen::Ref<Vector> dx) const {
  for (int i = 0; i < n_agents(); ++i)
    dx.segment(state_offsets_[i], agents_[i].state_dim).noalias() +=
        scale * (agents_[i].input_matrix *
                 u.segment(action_offsets_[i], agents_[i].action_dim));
}

StackedPlant stack_plants(std::vector<PlantModel> agents) {
  return StackedPlant(std::move(agents));
}

EipReport eip_probe(const PlantModel& plant, const Vector& xbar,
                    const std::vector<std::pair<Vector, Vector>>& samples) {
  if (!plant.storage_gradient)
    throw UnsupportedDiagnostic("eip_probe: plant '" + plant.tag +
                                "' has no stored storage gradient");
  if (xbar.size() != plant.state_dim)
    throw ContractViolation("eip_probe: xbar has wrong dimension");
  const Vector ybar = plant.output(xbar);
  const Vector grad_bar = plant.storage_gradient(xbar);

  EipReport rep;
  rep.violations = Vector::Zero(static_cast<int>(samples.size()));
  rep.max_violation = -std::numeric_limits<double>::infinity();
  int idx = 0;
  for (const auto& [x, u] : samples) {
    if (x.size() != plant.state_dim || u.size() != plant.action_dim)
      throw ContractViolation("eip_probe: sample has wrong dimensions");
    const Vector xdot = plant.drift(x) + plant.input_matrix * u;
    const double supply = (plant.output(x) - ybar).dot(u);
    const double lhs = (plant.storage_gradient(x) - grad_bar).dot(xdot);
    rep.violations[idx] = lhs - supply;
    rep.max_violation = std::max(rep.max_violation, rep.violations[idx]);
    ++idx;
  }
  if (samples.empty()) rep.max_violation = 0.0;
  return rep;
}

}  // namespace gnes
