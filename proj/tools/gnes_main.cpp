#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gnes/graph.hpp"
#include "gnes/runner.hpp"
#include "gnes/scenario.hpp"

namespace {

struct Overrides {
  std::optional<double> rho;
  std::optional<std::string> mode;
  std::optional<double> epsilon;
  std::optional<std::string> k;  // number or "auto"
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--rho", ov.rho, "barrier weight override (> 0)");
  cmd->add_option("--mode", ov.mode,
                  "feedback mode override: full_info|partial_info|distributed"
                  " (or 1|2|3)");
  cmd->add_option("--epsilon", ov.epsilon,
                  "tracker time constant override (distributed mode)");
  cmd->add_option("--k", ov.k, "gain override, a number or 'auto'");
  cmd->add_option("--t-final", ov.t_final, "integration horizon override");
  cmd->add_option("--dt", ov.dt, "nominal step size override");
  cmd->add_option("--seed", ov.seed, "seed override for sampled estimates");
}

gnes::FeedbackMode parse_mode(const std::string& raw) {
  if (raw == "full_info" || raw == "1") return gnes::FeedbackMode::full_info;
  if (raw == "partial_info" || raw == "2")
    return gnes::FeedbackMode::partial_info;
  if (raw == "distributed" || raw == "3")
    return gnes::FeedbackMode::distributed;
  throw CLI::ValidationError("--mode",
                             "expected full_info|partial_info|distributed");
}

gnes::Scenario apply_overrides(gnes::Scenario sc, const Overrides& ov) {
  if (ov.rho) {
    if (!(*ov.rho > 0))
      throw CLI::ValidationError("--rho", "must be positive");
    sc.rho = *ov.rho;
  }
  if (ov.mode) sc.mode.kind = parse_mode(*ov.mode);
  if (ov.epsilon) {
    if (!(*ov.epsilon > 0))
      throw CLI::ValidationError("--epsilon", "must be positive");
    sc.mode.epsilon = *ov.epsilon;
  }
  if (ov.k) {
    if (*ov.k == "auto") {
      sc.mode.k.reset();
    } else {
      try {
        sc.mode.k = std::stod(*ov.k);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--k", "expected a number or 'auto'");
      }
    }
  }
  if (ov.t_final) {
    if (*ov.t_final < 0)
      throw CLI::ValidationError("--t-final", "must be nonnegative");
    sc.sim.t_final = *ov.t_final;
  }
  if (ov.dt) {
    if (!(*ov.dt > 0)) throw CLI::ValidationError("--dt", "must be positive");
    sc.sim.dt = *ov.dt;
  }
  if (ov.seed) sc.sim.seed = *ov.seed;
  return sc;
}

int run_batch(const std::vector<std::string>& scenario_args,
              const std::string& out_root, const Overrides& ov, int jobs) {
  std::vector<gnes::Scenario> scenarios;
  scenarios.reserve(scenario_args.size());
  for (const auto& arg : scenario_args)
    scenarios.push_back(apply_overrides(gnes::load_scenario(arg), ov));

  std::mutex io;
  std::atomic<int> next{0};
  std::atomic<int> worst{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= static_cast<int>(scenarios.size())) return;
      const auto& sc = scenarios[i];
      const std::string dir =
          (std::filesystem::path(out_root) / sc.name).string();
      int code = 0;
      std::string line;
      try {
        const auto outcome = gnes::run_scenario(sc, dir);
        code = outcome.exit_code;
        std::ostringstream msg;
        msg << sc.name << ": " << outcome.status << " (exit " << code
            << "), min margin " << outcome.report.min_margin << ", results in "
            << dir;
        line = msg.str();
      } catch (const std::exception& e) {
        code = 1;
        line = sc.name + ": error: " + e.what();
      }
      {
        std::lock_guard<std::mutex> lock(io);
        std::cout << line << '\n';
      }
      int prev = worst.load();
      while (prev < code && !worst.compare_exchange_weak(prev, code)) {
      }
    }
  };

  const int n_workers = std::max(
      1, std::min(jobs, static_cast<int>(scenarios.size())));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return worst.load();
}

int run_validate(const std::vector<std::string>& scenario_args) {
  int status = 0;
  for (const auto& arg : scenario_args) {
    try {
      const gnes::Scenario sc = gnes::load_scenario(arg);
      const gnes::RealizedScenario rs = gnes::realize(sc);
      std::cout << sc.name << ": ok (" << rs.game.n_players << " players, "
                << rs.constraints.n_constraints << " constraints, mode "
                << gnes::to_string(sc.mode.kind);
      if (rs.graph)
        std::cout << ", lambda_2 = " << gnes::algebraic_connectivity(*rs.graph);
      if (sc.mode.kind == gnes::FeedbackMode::distributed)
        std::cout << ", k = " << rs.resolved_k;
      std::cout << ")\n";
    } catch (const std::exception& e) {
      std::cout << arg << ": invalid: " << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

int run_compare(const std::vector<std::string>& scenario_args,
                const Overrides& ov) {
  int status = 0;
  for (const auto& arg : scenario_args) {
    gnes::Scenario sc = apply_overrides(gnes::load_scenario(arg), ov);
    try {
      const auto cmp = gnes::compare_to_oracle(sc);
      std::cout << gnes::comparison_text(sc, cmp);
      status = std::max(status, cmp.run.exit_code);
    } catch (const gnes::NoConvergence& e) {
      std::cout << sc.name << ": oracle failed to converge: " << e.what()
                << '\n';
      status = std::max(status, gnes::kExitNoConvergence);
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium-seeking simulator for constrained agent networks"};
  app.require_subcommand(1);

  std::vector<std::string> scenario_args;
  std::string out_root = "out";
  int jobs = 1;
  Overrides ov;

  auto* run = app.add_subcommand(
      "run", "integrate scenarios and write CSV/summary/SVG results");
  run->add_option("--scenario", scenario_args,
                  "scenario file or builtin name (repeatable)")
      ->required();
  run->add_option("--out", out_root,
                  "output root; each scenario writes to <out>/<name>/");
  run->add_option("--jobs", jobs, "run scenarios in parallel")
      ->check(CLI::PositiveNumber);
  add_override_flags(run, ov);

  auto* compare = app.add_subcommand(
      "compare", "solve the penalized equilibrium and compare the run to it");
  compare->add_option("--scenario", scenario_args,
                      "scenario file or builtin name (repeatable)")
      ->required();
  add_override_flags(compare, ov);

  auto* validate = app.add_subcommand(
      "validate", "load scenarios and report their realized structure");
  validate
      ->add_option("--scenario", scenario_args,
                   "scenario file or builtin name (repeatable)")
      ->required();

  auto* list = app.add_subcommand("list", "list builtin scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : gnes::builtin_scenario_names())
        std::cout << name << ": " << gnes::builtin_scenario_description(name)
                  << '\n';
      return 0;
    }
    if (validate->parsed()) return run_validate(scenario_args);
    if (compare->parsed()) return run_compare(scenario_args, ov);
    return run_batch(scenario_args, out_root, ov, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
