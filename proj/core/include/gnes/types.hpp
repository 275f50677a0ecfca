#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Malformed input: dimension mismatches, invalid parameters, unparseable
/// fixtures. Thrown by constructors and loaders, never from hot loops.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A barrier gradient (or any strict-interior computation) was requested at a
/// point on or outside the constraint boundary. Carries the indices of the
/// violated constraints so integrator guards and line searches can react.
class InteriorViolation : public std::runtime_error {
 public:
  InteriorViolation(const std::string& what, std::vector<int> violated)
      : std::runtime_error(what), violated_(std::move(violated)) {}

  const std::vector<int>& violated_constraints() const { return violated_; }

 private:
  std::vector<int> violated_;
};

/// An initial condition fails the strict feasibility prechecks of the chosen
/// feedback mode.
class InfeasibleStart : public std::runtime_error {
 public:
  InfeasibleStart(const std::string& what, int constraint_index)
      : std::runtime_error(what), constraint_index_(constraint_index) {}

  int constraint_index() const { return constraint_index_; }

 private:
  int constraint_index_ = -1;
};

/// The guarded integrator shrank its step below dt_min without finding an
/// acceptable interior step.
class GuardExhausted : public std::runtime_error {
 public:
  GuardExhausted(const std::string& what, double time, int constraint_index)
      : std::runtime_error(what),
        time_(time),
        constraint_index_(constraint_index) {}

  double time() const { return time_; }
  int constraint_index() const { return constraint_index_; }

 private:
  double time_ = 0.0;
  int constraint_index_ = -1;
};

/// An iterative solver stopped without meeting its tolerance. Carries the
/// best residual reached.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

/// A diagnostic was requested that the object cannot provide (for example a
/// consensus error on a full-information trajectory, or an energy-function
/// probe on a plant without a stored gradient).
class UnsupportedDiagnostic : public std::logic_error {
 public:
  explicit UnsupportedDiagnostic(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace gnes
