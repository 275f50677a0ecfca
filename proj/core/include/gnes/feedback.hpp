#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "gnes/barrier.hpp"
#include "gnes/game.hpp"
#include "gnes/graph.hpp"
#include "gnes/plants.hpp"
#include "gnes/types.hpp"

namespace gnes {

enum class FeedbackMode { full_info, partial_info, distributed };

std::string to_string(FeedbackMode mode);

/// Per-player action/estimate selectors over an estimate stack y^i in R^m:
/// R picks the player's own block, S picks everything else, so
/// R y^i = y_i, S y^i = y^i_{-i}, and R^T y_i + S^T y^i_{-i} rebuilds y^i.
struct SelectionMatrices {
  Matrix R;  // m_i x m
  Matrix S;  // (m - m_i) x m
};

SelectionMatrices selection_matrices(const std::vector<int>& action_dims,
                                     int i);

/// col over i of grad_i J_i evaluated at player i's own estimate stack:
/// block i of the result reads slice i*m..(i+1)*m of the N*m input.
/// At a consensus stack 1_N (x) y this reproduces pseudo_gradient(y) exactly
/// (identical per-player calls on identical inputs).
Vector extended_pseudo_gradient(const GameSpec& game, const Vector& stack);

/// Named segments of the closed-loop state vector. Offsets are -1 / sizes 0
/// for segments a mode does not carry.
struct StateLayout {
  FeedbackMode mode = FeedbackMode::full_info;
  int total_dim = 0;
  int n_players = 0;
  int action_dim = 0;       // m
  int plant_dim = 0;        // n
  int z_offset = -1;        // mode 3: own-action trackers z, size action_dim
  int z_size = 0;
  int estimate_offset = -1; // modes 2-3: stacked y^i_{-i}, size N*m - m
  int estimate_size = 0;
  int plant_offset = 0;
};

/// Autonomous closed loop: one of the three feedback modes wired around a
/// stacked plant, a game and a barrier. All evaluators are pure; the system
/// is safe to share across threads.
struct ClosedLoopSystem {
  FeedbackMode mode = FeedbackMode::full_info;
  StateLayout layout;
  std::shared_ptr<const ConstraintSet> constraints;
  double barrier_rho = 0.0;

  std::function<Vector(const Vector&)> vector_field;
  std::function<Vector(const Vector&)> output;

  /// Joint-space points that must stay strictly interior for the field to be
  /// defined and the run certificate to hold: {y} for modes 1-2,
  /// {y, (z_i, y^i_{-i}) per player} for mode 3.
  std::function<std::vector<Vector>(const Vector&)> feasibility_points;

  /// State with all segments pinned to a prescribed joint output: pi(ystar)
  /// for the plant, consensus estimates, z = ystar. The field vanishes there
  /// when ystar solves the penalized equilibrium condition.
  std::function<Vector(const Vector&)> equilibrium_state;

  /// Full estimate stack col_i(y^i) in R^{N*m} (modes 2-3 only, else null).
  std::function<Vector(const Vector&)> estimate_stack;
};

ClosedLoopSystem assemble_full_info(const StackedPlant& plants,
                                    const GameSpec& game,
                                    const BarrierPenalty& pen);

ClosedLoopSystem assemble_partial_info(const StackedPlant& plants,
                                       const GameSpec& game,
                                       const BarrierPenalty& pen,
                                       const CommGraph& graph);

ClosedLoopSystem assemble_distributed(const StackedPlant& plants,
                                      const GameSpec& game,
                                      const BarrierPenalty& pen,
                                      const CommGraph& graph, double epsilon,
                                      double k);

/// Plant gain for the two-time-scale mode: safety * beta_est / mu_est, the
/// sufficient threshold scaled by a safety factor >= 1. The integrator and
/// PI catalogs admit any beta > 0, so beta_est defaults to 1e-3 when nothing
/// better is known.
double default_k(double beta_est, double mu_est, double safety);

inline constexpr double kDefaultBetaEstimate = 1e-3;
inline constexpr double kDefaultGainSafety = 2.0;

/// Samples the Lipschitz constant of the extended pseudo-gradient over
/// estimate stacks drawn from a box around the consensus Slater stack.
/// Deterministic in the seed.
double estimate_theta2(const GameSpec& game, const ConstraintSet& cs,
                       int sample_count, std::uint64_t seed,
                       double box_halfwidth = 0.5);

}  // namespace gnes
