#include "gnes/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gnes/barrier.hpp"

namespace gnes {

void SimConfig::validate() const {
  if (!(dt_min > 0.0) || !(dt >= dt_min))
    throw ContractViolation("SimConfig: need 0 < dt_min <= dt");
  if (!(t_final >= 0.0))
    throw ContractViolation("SimConfig: t_final must be non-negative");
  if (record_stride < 1)
    throw ContractViolation("SimConfig: record_stride must be >= 1");
  if (!(interior_margin >= 0.0))
    throw ContractViolation("SimConfig: interior_margin must be >= 0");
}

namespace {

struct GuardCheck {
  bool ok = true;
  int violated_constraint = -1;  // 0-based, -1 when ok
  double output_min_margin = std::numeric_limits<double>::infinity();
};

// Inspects every feasibility point of the state. The first point is always
// the joint output y, whose smallest margin feeds the run report.
GuardCheck check_state(const ClosedLoopSystem& system, const Vector& state,
                       double interior_margin) {
  GuardCheck res;
  if (!state.allFinite()) {
    res.ok = false;
    return res;
  }
  const ConstraintSet& cs = *system.constraints;
  if (cs.n_constraints == 0) return res;
  const auto points = system.feasibility_points(state);
  bool first = true;
  for (const Vector& pt : points) {
    const Vector margin = cs.margins(pt);
    if (first) {
      res.output_min_margin = margin.minCoeff();
      first = false;
    }
    for (int l = 0; l < cs.n_constraints; ++l) {
      if (!(margin[l] > interior_margin)) {
        res.ok = false;
        res.violated_constraint = l;
        return res;
      }
    }
  }
  return res;
}

}  // namespace

std::pair<Trajectory, RunReport> integrate(
    const ClosedLoopSystem& system, const Vector& x0, const SimConfig& cfg,
    const std::optional<Vector>& reference, double settle_tol) {
  cfg.validate();
  if (x0.size() != system.layout.total_dim) {
    std::ostringstream msg;
    msg << "integrate: initial state has size " << x0.size()
        << ", system expects " << system.layout.total_dim;
    throw ContractViolation(msg.str());
  }
  if (reference && reference->size() != system.layout.action_dim)
    throw ContractViolation("integrate: reference has wrong dimension");

  const ConstraintSet& cs = *system.constraints;
  {
    const GuardCheck initial = check_state(system, x0, cfg.interior_margin);
    if (!initial.ok) {
      std::ostringstream msg;
      msg << "integrate: initial state is not strictly interior";
      if (initial.violated_constraint >= 0)
        msg << " (constraint " << initial.violated_constraint + 1 << ")";
      throw InfeasibleStart(msg.str(), initial.violated_constraint);
    }
  }

  Trajectory traj;
  traj.mode = system.mode;
  RunReport report;
  report.smallest_dt_used = cfg.dt;
  report.min_margin = std::numeric_limits<double>::infinity();

  const bool has_estimates = static_cast<bool>(system.estimate_stack);
  const bool has_trackers = system.layout.z_size > 0;
  const int m = system.layout.action_dim;
  const int N = system.layout.n_players;

  auto record = [&](double t, const Vector& s) {
    const Vector y = system.output(s);
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.outputs.push_back(y);
    traj.margins.push_back(cs.margins(y));
    double phi = 0.0;
    if (cs.n_constraints > 0)
      phi = -system.barrier_rho *
            traj.margins.back().array().log().sum();
    traj.barrier_values.push_back(phi);
    if (has_estimates) {
      const Vector stack = system.estimate_stack(s);
      double err2 = 0.0;
      for (int i = 0; i < N; ++i)
        err2 += (stack.segment(static_cast<Eigen::Index>(i) * m, m) - y)
                    .squaredNorm();
      traj.consensus_errors.push_back(std::sqrt(err2));
    }
    if (has_trackers)
      traj.z_errors.push_back((s.head(m) - y).norm());
  };

  double t = 0.0;
  Vector s = x0;
  double h = std::min(cfg.dt, cfg.t_final > 0.0 ? cfg.t_final : cfg.dt);
  record(0.0, s);
  {
    const Vector y0 = system.output(s);
    report.min_margin = cs.n_constraints > 0
                            ? cs.margins(y0).minCoeff()
                            : std::numeric_limits<double>::infinity();
  }

  int last_violated = -1;
  const double t_end = cfg.t_final;
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  long since_record = 0;

  while (t < t_end - t_eps) {
    h = std::min(h, t_end - t);
    bool accepted = false;
    Vector s_next;
    GuardCheck end_check;

    try {
      const Vector k1 = system.vector_field(s);
      Vector stage = s + (h / 2.0) * k1;
      GuardCheck c = check_state(system, stage, cfg.interior_margin);
      if (c.ok) {
        const Vector k2 = system.vector_field(stage);
        stage = s + (h / 2.0) * k2;
        c = check_state(system, stage, cfg.interior_margin);
        if (c.ok) {
          const Vector k3 = system.vector_field(stage);
          stage = s + h * k3;
          c = check_state(system, stage, cfg.interior_margin);
          if (c.ok) {
            const Vector k4 = system.vector_field(stage);
            s_next = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            end_check = check_state(system, s_next, cfg.interior_margin);
            if (end_check.ok) accepted = true;
            else c = end_check;
          }
        }
      }
      if (!accepted && c.violated_constraint >= 0)
        last_violated = c.violated_constraint;
    } catch (const InteriorViolation& iv) {
      if (!iv.violated_constraints().empty())
        last_violated = iv.violated_constraints().front();
      accepted = false;
    }

    if (!accepted) {
      ++report.steps_rejected;
      h /= 2.0;
      if (h < cfg.dt_min) {
        std::ostringstream msg;
        msg << "integrate: step underflow at t = " << t
            << " (dt < " << cfg.dt_min << ")";
        if (last_violated >= 0)
          msg << " while constraint " << last_violated + 1
              << " blocked progress";
        throw GuardExhausted(msg.str(), t, last_violated);
      }
      report.smallest_dt_used = std::min(report.smallest_dt_used, h);
      continue;
    }

    t += h;
    s = std::move(s_next);
    ++report.steps_accepted;
    report.smallest_dt_used = std::min(report.smallest_dt_used, h);
    report.min_margin = std::min(report.min_margin,
                                 end_check.output_min_margin);
    ++since_record;
    const bool final_step = !(t < t_end - t_eps);
    if (final_step) t = t_end;  // clear the accumulated roundoff
    if (since_record >= cfg.record_stride || final_step) {
      record(t, s);
      since_record = 0;
    }
    h = std::min(cfg.dt, 2.0 * h);
  }

  report.final_output = system.output(s);
  if (reference) {
    report.distance_to_reference = (report.final_output - *reference).norm();
    report.settling_time = settling_time(traj, *reference, settle_tol);
  }
  return {std::move(traj), std::move(report)};
}

DescentReport lyapunov_monitor(const Trajectory& traj,
                               const Vector& reference) {
  DescentReport rep;
  rep.values.reserve(traj.outputs.size());
  for (const Vector& y : traj.outputs)
    rep.values.push_back(0.5 * (y - reference).squaredNorm());
  rep.max_increase = 0.0;
  for (std::size_t k = 1; k < rep.values.size(); ++k)
    rep.max_increase =
        std::max(rep.max_increase, rep.values[k] - rep.values[k - 1]);
  return rep;
}

std::vector<double> consensus_error(const Trajectory& traj) {
  if (traj.mode == FeedbackMode::full_info)
    throw UnsupportedDiagnostic(
        "consensus_error: full-information trajectories carry no estimates");
  return traj.consensus_errors;
}

std::optional<double> settling_time(const Trajectory& traj,
                                    const Vector& reference, double tol) {
  if (traj.times.empty()) return std::nullopt;
  int last_bad = -1;
  for (int k = 0; k < traj.n_samples(); ++k)
    if ((traj.outputs[k] - reference).norm() > tol) last_bad = k;
  if (last_bad == traj.n_samples() - 1) return std::nullopt;
  return traj.times[last_bad + 1];
}

}  // namespace gnes
