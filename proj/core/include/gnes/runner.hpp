#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gnes/oracle.hpp"
#include "gnes/scenario.hpp"
#include "gnes/sim.hpp"

namespace gnes {

inline constexpr int kExitCertified = 0;
inline constexpr int kExitGuardExhausted = 2;
inline constexpr int kExitNoConvergence = 3;

struct RunOptions {
  bool write_csv = true;
  bool write_summary = true;
  bool write_svg = true;
};

struct RunOutcome {
  int exit_code = kExitCertified;
  std::string status;  // "certified" | "guard_exhausted"
  std::string message;
  Trajectory trajectory;
  RunReport report;
  double resolved_k = 1.0;
  std::vector<std::string> files_written;
};

/// Integrates the scenario and writes trajectory.csv, summary.txt and the
/// SVG charts into out_dir (created if missing). GuardExhausted becomes
/// exit code 2 with an explanatory message instead of an exception;
/// structural errors still throw.
RunOutcome run_scenario(const Scenario& sc, const std::string& out_dir,
                        const RunOptions& opts = {});

/// CSV with header "t, y_1..y_m, margin_1..margin_p, phi" plus
/// consensus_err (modes with estimates) and z_err (tracker mode) columns.
std::string trajectory_csv(const Trajectory& traj);

std::string summary_text(const Scenario& sc, const RunOutcome& outcome);

struct OracleComparison {
  Vector y_star;            // solve_penalized_ne at the scenario's rho
  Vector multipliers;       // implied barrier multipliers at y_star
  double final_distance = 0.0;
  std::optional<double> settling_time;
  Vector gaps;              // best-response gap per player at y_star
  double epsilon_bound = 0.0;  // p * rho
  bool gaps_within_bound = false;
  RunOutcome run;
};

/// Solves the penalized equilibrium, integrates the scenario against it,
/// and reports distances, settling time and the best-response gap check.
/// NoConvergence from the solver propagates (CLI maps it to exit 3).
OracleComparison compare_to_oracle(const Scenario& sc);

std::string comparison_text(const Scenario& sc, const OracleComparison& cmp);

}  // namespace gnes
