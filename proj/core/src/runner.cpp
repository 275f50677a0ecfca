#include "gnes/runner.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gnes/barrier.hpp"
#include "gnes/svg.hpp"

namespace gnes {

namespace {

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

std::string fmt(const Vector& v) {
  std::ostringstream out;
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << fmt(v[i]);
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractViolation("cannot write output file '" + path + "'");
  out << content;
  written.push_back(path);
}

std::vector<SvgSeries> output_series(const Trajectory& traj) {
  std::vector<SvgSeries> series;
  if (traj.n_samples() == 0) return series;
  const int m = static_cast<int>(traj.outputs.front().size());
  series.resize(m);
  for (int j = 0; j < m; ++j) {
    series[j].label = "y_" + std::to_string(j + 1);
    series[j].x = traj.times;
    series[j].y.reserve(traj.times.size());
  }
  for (const auto& y : traj.outputs)
    for (int j = 0; j < m; ++j) series[j].y.push_back(y[j]);
  return series;
}

std::vector<SvgSeries> margin_series(const Trajectory& traj) {
  std::vector<SvgSeries> series;
  if (traj.n_samples() == 0 || traj.margins.front().size() == 0) return series;
  const int p = static_cast<int>(traj.margins.front().size());
  series.resize(p);
  for (int l = 0; l < p; ++l) {
    series[l].label = "margin_" + std::to_string(l + 1);
    series[l].x = traj.times;
    series[l].y.reserve(traj.times.size());
  }
  for (const auto& g : traj.margins)
    for (int l = 0; l < p; ++l) series[l].y.push_back(g[l]);
  return series;
}

std::vector<SvgSeries> estimate_series(const Trajectory& traj) {
  std::vector<SvgSeries> series;
  if (traj.consensus_errors.empty()) return series;
  series.push_back({"consensus_err", traj.times, traj.consensus_errors});
  if (!traj.z_errors.empty())
    series.push_back({"z_err", traj.times, traj.z_errors});
  return series;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  const int m =
      traj.n_samples() > 0 ? static_cast<int>(traj.outputs.front().size()) : 0;
  const int p =
      traj.n_samples() > 0 ? static_cast<int>(traj.margins.front().size()) : 0;
  const bool has_consensus = !traj.consensus_errors.empty();
  const bool has_z = !traj.z_errors.empty();

  out << 't';
  for (int j = 0; j < m; ++j) out << ", y_" << j + 1;
  for (int l = 0; l < p; ++l) out << ", margin_" << l + 1;
  out << ", phi";
  if (has_consensus) out << ", consensus_err";
  if (has_z) out << ", z_err";
  out << '\n';

  for (int s = 0; s < traj.n_samples(); ++s) {
    out << fmt(traj.times[s]);
    for (int j = 0; j < m; ++j) out << ", " << fmt(traj.outputs[s][j]);
    for (int l = 0; l < p; ++l) out << ", " << fmt(traj.margins[s][l]);
    out << ", " << fmt(traj.barrier_values[s]);
    if (has_consensus) out << ", " << fmt(traj.consensus_errors[s]);
    if (has_z) out << ", " << fmt(traj.z_errors[s]);
    out << '\n';
  }
  return out.str();
}

std::string summary_text(const Scenario& sc, const RunOutcome& outcome) {
  std::ostringstream out;
  out << "scenario = " << sc.name << '\n';
  out << "mode = " << to_string(sc.mode.kind) << '\n';
  out << "rho = " << fmt(sc.rho) << '\n';
  if (sc.mode.kind == FeedbackMode::distributed) {
    out << "epsilon = " << fmt(sc.mode.epsilon) << '\n';
    out << "k = " << fmt(outcome.resolved_k) << '\n';
  }
  out << "t_final = " << fmt(sc.sim.t_final) << '\n';
  out << "status = " << outcome.status << '\n';
  out << "exit = " << outcome.exit_code << '\n';
  if (!outcome.message.empty()) out << "detail = " << outcome.message << '\n';
  out << "samples = " << outcome.trajectory.n_samples() << '\n';
  out << "steps_accepted = " << outcome.report.steps_accepted << '\n';
  out << "steps_rejected = " << outcome.report.steps_rejected << '\n';
  out << "smallest_dt = " << fmt(outcome.report.smallest_dt_used) << '\n';
  out << "min_margin = " << fmt(outcome.report.min_margin) << '\n';
  if (outcome.report.final_output.size() > 0)
    out << "final_output = " << fmt(outcome.report.final_output) << '\n';
  if (!outcome.trajectory.consensus_errors.empty())
    out << "final_consensus_err = "
        << fmt(outcome.trajectory.consensus_errors.back()) << '\n';
  if (!outcome.trajectory.z_errors.empty())
    out << "final_z_err = " << fmt(outcome.trajectory.z_errors.back()) << '\n';
  return out.str();
}

RunOutcome run_scenario(const Scenario& sc, const std::string& out_dir,
                        const RunOptions& opts) {
  RealizedScenario rs = realize(sc);

  RunOutcome outcome;
  outcome.resolved_k = rs.resolved_k;
  try {
    auto [traj, report] = integrate(rs.system, rs.x0, sc.sim);
    outcome.trajectory = std::move(traj);
    outcome.report = std::move(report);
    outcome.status = "certified";
    std::ostringstream msg;
    msg << "all " << rs.constraints.n_constraints
        << " margins positive over " << outcome.report.steps_accepted
        << " accepted steps";
    outcome.message = msg.str();
  } catch (const GuardExhausted& e) {
    outcome.exit_code = kExitGuardExhausted;
    outcome.status = "guard_exhausted";
    outcome.message = e.what();
  }

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  if (opts.write_csv && outcome.exit_code == kExitCertified)
    write_file((dir / "trajectory.csv").string(),
               trajectory_csv(outcome.trajectory), outcome.files_written);
  if (opts.write_summary)
    write_file((dir / "summary.txt").string(), summary_text(sc, outcome),
               outcome.files_written);
  if (opts.write_svg && outcome.exit_code == kExitCertified &&
      outcome.trajectory.n_samples() > 0) {
    write_file((dir / "outputs.svg").string(),
               render_line_chart(sc.name + ": agent outputs", "t", "y",
                                 output_series(outcome.trajectory)),
               outcome.files_written);
    const auto margins = margin_series(outcome.trajectory);
    if (!margins.empty())
      write_file((dir / "margins.svg").string(),
                 render_line_chart(sc.name + ": constraint margins -g(y)",
                                   "t", "margin", margins),
                 outcome.files_written);
    const auto estimates = estimate_series(outcome.trajectory);
    if (!estimates.empty())
      write_file((dir / "consensus.svg").string(),
                 render_line_chart(sc.name + ": estimate errors", "t",
                                   "error", estimates),
                 outcome.files_written);
  }
  return outcome;
}

OracleComparison compare_to_oracle(const Scenario& sc) {
  RealizedScenario rs = realize(sc);

  const Vector y0 = rs.system.output(rs.x0);
  OracleComparison cmp;
  cmp.y_star = solve_penalized_ne(rs.game, rs.penalty, y0);
  cmp.multipliers = implied_multipliers(rs.penalty, cmp.y_star);
  cmp.epsilon_bound = epsilon_bound(rs.constraints, rs.penalty);
  cmp.gaps = best_response_gap(rs.game, rs.constraints, cmp.y_star);
  cmp.gaps_within_bound =
      cmp.gaps.size() == 0 ||
      cmp.gaps.maxCoeff() <= cmp.epsilon_bound + 1e-4;

  cmp.run.resolved_k = rs.resolved_k;
  try {
    auto [traj, report] = integrate(rs.system, rs.x0, sc.sim, cmp.y_star);
    cmp.run.trajectory = std::move(traj);
    cmp.run.report = std::move(report);
    cmp.run.status = "certified";
  } catch (const GuardExhausted& e) {
    cmp.run.exit_code = kExitGuardExhausted;
    cmp.run.status = "guard_exhausted";
    cmp.run.message = e.what();
    return cmp;
  }
  cmp.final_distance = cmp.run.report.distance_to_reference.value_or(0.0);
  cmp.settling_time = cmp.run.report.settling_time;
  return cmp;
}

std::string comparison_text(const Scenario& sc, const OracleComparison& cmp) {
  std::ostringstream out;
  out << "scenario = " << sc.name << '\n';
  out << "mode = " << to_string(sc.mode.kind) << '\n';
  out << "rho = " << fmt(sc.rho) << '\n';
  out << "y_star = " << fmt(cmp.y_star) << '\n';
  out << "multipliers = " << fmt(cmp.multipliers) << '\n';
  out << "status = " << cmp.run.status << '\n';
  if (cmp.run.exit_code == kExitCertified) {
    out << "final_distance = " << fmt(cmp.final_distance) << '\n';
    out << "settling_time = "
        << (cmp.settling_time ? fmt(*cmp.settling_time) : "never") << '\n';
  } else {
    out << "detail = " << cmp.run.message << '\n';
  }
  out << "best_response_gaps = " << fmt(cmp.gaps) << '\n';
  out << "epsilon_bound = " << fmt(cmp.epsilon_bound) << '\n';
  out << "gaps_within_bound = " << (cmp.gaps_within_bound ? "yes" : "no")
      << '\n';
  return out.str();
}

}  // namespace gnes
