#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gnes/feedback.hpp"
#include "gnes/game.hpp"
#include "gnes/graph.hpp"
#include "gnes/plants.hpp"
#include "gnes/sim.hpp"
#include "gnes/types.hpp"

namespace gnes {

/// J_i = self_weight (y_i - t_i)^2 + coupling * y_i * sum_{j != i} y_j with a
/// shared budget sum y <= budget and optional per-player bounds y_i >= lower.
struct QuadraticGameParams {
  Vector targets;
  double self_weight = 0.25;
  double coupling = 0.1;
  double budget = 4.0;
  std::optional<double> lower_bound;
};

/// Power-control game over interfering channels: player i maximizes utility
/// b ln(1 + gain y_i / interference_i) minus price a_i y_i (costs are the
/// negated utilities), subject to y >= 0 and a shared power budget.
struct OsnrGameParams {
  int channels = 10;
  double price_min = 0.8;
  double price_max = 1.2;
  double gain = 3.0;
  double noise = 0.05;
  double crosstalk = 0.05;
  double power_budget = 10.0;
};

/// Chain of followers behind a virtual leader moving at leader_velocity;
/// J_i = (y_i - y_{i-1})^2 with gap constraints (y_i - y_{i-1})^2 <= max_gap^2.
struct LeaderFollowerParams {
  int robots = 5;
  double leader_velocity = 3.0;
  double max_gap = 3.0;
};

using GameParams =
    std::variant<QuadraticGameParams, OsnrGameParams, LeaderFollowerParams>;

struct BuiltGame {
  GameSpec game;
  ConstraintSet constraints;
};

BuiltGame make_quadratic_game(const QuadraticGameParams& p);
BuiltGame make_osnr_game(const OsnrGameParams& p);
BuiltGame make_leader_follower_game(const LeaderFollowerParams& p);
BuiltGame build_game(const GameParams& params);

struct PlantChoice {
  std::string kind;  // integrator | pi_cascade | flexible_robot
  std::vector<double> params;
};

struct ModeSpec {
  FeedbackMode kind = FeedbackMode::full_info;
  double epsilon = 1e-3;         // distributed only
  std::optional<double> k;       // distributed only; nullopt = default_k
};

enum class EstimatePolicy { slater, outputs };

struct Scenario {
  std::string name;
  GameParams game;
  std::optional<PlantChoice> plant_default;       // game-kind default if unset
  std::vector<std::pair<int, PlantChoice>> plant_overrides;  // 0-based agent
  std::optional<CommGraph> graph;
  ModeSpec mode;
  double rho = 0.1;
  Vector init_outputs;
  EstimatePolicy estimates = EstimatePolicy::slater;
  SimConfig sim;
};

/// Everything needed to integrate a scenario: built game, plant stack,
/// assembled closed loop, resolved gain, and the feasible initial state.
struct RealizedScenario {
  Scenario scenario;
  GameSpec game;
  ConstraintSet constraints;
  BarrierPenalty penalty;
  StackedPlant plants;
  std::optional<CommGraph> graph;
  ClosedLoopSystem system;
  Vector x0;
  double resolved_k = 1.0;  // meaningful in distributed mode
};

/// Builds and validates the runnable system. Raises ContractViolation on
/// structural problems and InfeasibleStart (with a 1-based constraint index
/// in the message) when the initial outputs or estimate points are not
/// strictly interior.
RealizedScenario realize(const Scenario& sc);

/// Estimate segment col_i(source with block i dropped) used to initialize
/// mode-2/3 states from a single broadcast vector.
Vector broadcast_estimates(const GameSpec& game, const Vector& source);

Scenario parse_scenario_text(const std::string& text,
                             const std::string& base_dir = "");
Scenario load_scenario(const std::string& path_or_builtin);
std::string serialize_scenario(const Scenario& sc);

std::vector<std::string> builtin_scenario_names();
std::string builtin_scenario_description(const std::string& name);
bool is_builtin_scenario(const std::string& name);
Scenario builtin_scenario(const std::string& name);

}  // namespace gnes
