#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gnes/feedback.hpp"
#include "gnes/types.hpp"

namespace gnes {

struct SimConfig {
  double dt = 1e-3;
  double dt_min = 1e-9;
  double t_final = 1.0;
  int record_stride = 1;
  double interior_margin = 1e-12;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Time-stamped record of a guarded integration. margins holds -g(y(t)) per
/// sample; every recorded margin being positive is the run's constraint
/// certificate. consensus_errors / z_errors are filled only for the modes
/// that carry estimates / trackers.
struct Trajectory {
  FeedbackMode mode = FeedbackMode::full_info;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> outputs;
  std::vector<Vector> margins;
  std::vector<double> barrier_values;
  std::vector<double> consensus_errors;
  std::vector<double> z_errors;

  int n_samples() const { return static_cast<int>(times.size()); }
};

struct RunReport {
  Vector final_output;
  std::optional<double> distance_to_reference;
  double min_margin = 0.0;  // over every accepted step, not only recorded ones
  std::optional<double> settling_time;
  long steps_accepted = 0;
  long steps_rejected = 0;
  double smallest_dt_used = 0.0;
};

/// Classical RK4 with a strict-interior guard: a proposed step is rejected
/// and the step halved whenever any of the four stage states or the end
/// state leaves the strict interior (any feasibility-point margin <=
/// interior_margin), triggers InteriorViolation, or goes non-finite. After
/// an accepted step the size doubles back toward cfg.dt. Raises
/// InfeasibleStart if x0 fails the interior precheck and GuardExhausted if
/// halving reaches dt_min.
std::pair<Trajectory, RunReport> integrate(
    const ClosedLoopSystem& system, const Vector& x0, const SimConfig& cfg,
    const std::optional<Vector>& reference = std::nullopt,
    double settle_tol = 1e-3);

struct DescentReport {
  double max_increase = 0.0;  // largest V(t_{k+1}) - V(t_k); <= 0 means descent
  std::vector<double> values;
};

/// V(t) = 0.5 |y(t) - ref|^2 along the recorded outputs. Monotone descent is
/// the integrator-plant convergence signature; the report flags the largest
/// increase between consecutive samples.
DescentReport lyapunov_monitor(const Trajectory& traj, const Vector& reference);

/// |bold y(t) - 1_N (x) y(t)| per sample. UnsupportedDiagnostic on mode-1
/// trajectories, which carry no estimates.
std::vector<double> consensus_error(const Trajectory& traj);

/// First time after which |y(t) - ref| <= tol for every remaining sample;
/// nullopt if the trajectory never settles.
std::optional<double> settling_time(const Trajectory& traj,
                                    const Vector& reference, double tol);

}  // namespace gnes
