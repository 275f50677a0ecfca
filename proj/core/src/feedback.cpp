#include "gnes/feedback.hpp"

#include <random>
#include <sstream>
#include <utility>

namespace gnes {

std::string to_string(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::full_info: return "full_info";
    case FeedbackMode::partial_info: return "partial_info";
    case FeedbackMode::distributed: return "distributed";
  }
  return "unknown";
}

SelectionMatrices selection_matrices(const std::vector<int>& action_dims,
                                     int i) {
  const int n = static_cast<int>(action_dims.size());
  if (i < 0 || i >= n)
    throw ContractViolation("selection_matrices: player index out of range");
  int m = 0, off = 0;
  for (int j = 0; j < n; ++j) {
    if (j < i) off += action_dims[j];
    m += action_dims[j];
  }
  const int mi = action_dims[i];
  SelectionMatrices sel;
  sel.R = Matrix::Zero(mi, m);
  sel.R.block(0, off, mi, mi) = Matrix::Identity(mi, mi);
  sel.S = Matrix::Zero(m - mi, m);
  sel.S.block(0, 0, off, off) = Matrix::Identity(off, off);
  sel.S.block(off, off + mi, m - off - mi, m - off - mi) =
      Matrix::Identity(m - off - mi, m - off - mi);
  return sel;
}

Vector extended_pseudo_gradient(const GameSpec& game, const Vector& stack) {
  const int m = game.total_dim();
  if (stack.size() != static_cast<Eigen::Index>(game.n_players) * m)
    throw ContractViolation(
        "extended_pseudo_gradient: stack size must be n_players * m");
  Vector out(m);
  int off = 0;
  for (int i = 0; i < game.n_players; ++i) {
    const int mi = game.action_dims[i];
    out.segment(off, mi) =
        game.partial_gradient(i, stack.segment(i * m, m));
    off += mi;
  }
  return out;
}

namespace {

// Block layout shared by the estimate-carrying modes: the estimate vector
// stores col_i(y^i_{-i}), player i's view of everyone else, in global slot
// order with the own block skipped.
struct EstimateLayout {
  int n_players = 0;
  int m = 0;
  std::vector<int> own_off;  // player block offset inside an m-vector
  std::vector<int> own_dim;
  std::vector<int> est_off;  // player block offset inside the estimate vector
  int est_dim = 0;

  explicit EstimateLayout(const GameSpec& game)
      : n_players(game.n_players), m(game.total_dim()) {
    for (int i = 0; i < n_players; ++i) {
      own_off.push_back(game.block_offset(i));
      own_dim.push_back(game.action_dims[i]);
      est_off.push_back(est_dim);
      est_dim += m - game.action_dims[i];
    }
  }

  // col_i(y^i) from the true output and the estimate vector
  void build_stack(const Vector& y, const Vector& est, Vector& stack) const {
    for (int i = 0; i < n_players; ++i) {
      const int lo = own_off[i], di = own_dim[i], hi = m - lo - di;
      auto block = stack.segment(static_cast<Eigen::Index>(i) * m, m);
      block.head(lo) = est.segment(est_off[i], lo);
      block.segment(lo, di) = y.segment(lo, di);
      block.tail(hi) = est.segment(est_off[i] + lo, hi);
    }
  }

  // estimate-shaped selection col_i(S_i v_i) of a stacked N*m vector
  void select_others(const Vector& stacked, Eigen::Ref<Vector> out) const {
    for (int i = 0; i < n_players; ++i) {
      const int lo = own_off[i], di = own_dim[i], hi = m - lo - di;
      const auto block = stacked.segment(static_cast<Eigen::Index>(i) * m, m);
      out.segment(est_off[i], lo) = block.head(lo);
      out.segment(est_off[i] + lo, hi) = block.tail(hi);
    }
  }

  // action-shaped selection col_i(R_i v_i)
  void select_own(const Vector& stacked, Eigen::Ref<Vector> out) const {
    for (int i = 0; i < n_players; ++i)
      out.segment(own_off[i], own_dim[i]) =
          stacked.segment(static_cast<Eigen::Index>(i) * m + own_off[i],
                          own_dim[i]);
  }

  Vector consensus_estimates(const Vector& y) const {
    Vector est(est_dim);
    for (int i = 0; i < n_players; ++i) {
      const int lo = own_off[i], di = own_dim[i], hi = m - lo - di;
      est.segment(est_off[i], lo) = y.head(lo);
      est.segment(est_off[i] + lo, hi) = y.tail(hi);
    }
    return est;
  }
};

// w = (L (x) I_m) stack, applied edge-wise so consensus stacks map to an
// exact zero (no dense row sums that could leave rounding residue).
void apply_stacked_laplacian(const std::vector<std::pair<int, int>>& edges,
                             int m, const Vector& stack, Vector& w) {
  w.setZero();
  for (const auto& [a, b] : edges) {
    const auto sa = stack.segment(static_cast<Eigen::Index>(a) * m, m);
    const auto sb = stack.segment(static_cast<Eigen::Index>(b) * m, m);
    w.segment(static_cast<Eigen::Index>(a) * m, m) += sa - sb;
    w.segment(static_cast<Eigen::Index>(b) * m, m) += sb - sa;
  }
}

void check_dimensions(const StackedPlant& plants, const GameSpec& game,
                      const BarrierPenalty& pen, const char* who) {
  game.validate();
  pen.validate();
  std::ostringstream msg;
  if (plants.n_agents() != game.n_players) {
    msg << who << ": " << plants.n_agents() << " plants for "
        << game.n_players << " players";
    throw ContractViolation(msg.str());
  }
  for (int i = 0; i < game.n_players; ++i) {
    if (plants.agent(i).action_dim != game.action_dims[i]) {
      msg << who << ": agent " << i + 1 << " action dim "
          << plants.agent(i).action_dim << " != game block "
          << game.action_dims[i];
      throw ContractViolation(msg.str());
    }
  }
  if (pen.constraints->n_constraints > 0 &&
      pen.constraints->dim != game.total_dim()) {
    msg << who << ": constraint set dimension " << pen.constraints->dim
        << " != joint action dimension " << game.total_dim();
    throw ContractViolation(msg.str());
  }
}

void check_graph(const CommGraph& graph, const GameSpec& game,
                 const char* who) {
  std::ostringstream msg;
  if (graph.n_nodes() != game.n_players) {
    msg << who << ": graph has " << graph.n_nodes() << " nodes for "
        << game.n_players << " players";
    throw ContractViolation(msg.str());
  }
  if (!is_connected(graph)) {
    msg << who << ": communication graph must be connected";
    throw ContractViolation(msg.str());
  }
}

}  // namespace

ClosedLoopSystem assemble_full_info(const StackedPlant& plants,
                                    const GameSpec& game,
                                    const BarrierPenalty& pen) {
  check_dimensions(plants, game, pen, "assemble_full_info");

  ClosedLoopSystem sys;
  sys.mode = FeedbackMode::full_info;
  sys.constraints = pen.constraints;
  sys.barrier_rho = pen.rho;
  sys.layout.mode = sys.mode;
  sys.layout.n_players = game.n_players;
  sys.layout.action_dim = plants.action_dim();
  sys.layout.plant_dim = plants.state_dim();
  sys.layout.plant_offset = 0;
  sys.layout.total_dim = plants.state_dim();

  sys.vector_field = [plants, game, pen](const Vector& x) {
    const Vector y = plants.output(x);
    const Vector u = pseudo_gradient(game, y) + barrier_gradient(pen, y);
    Vector dx = plants.drift(x);
    plants.add_input(u, -1.0, dx);
    return dx;
  };
  sys.output = [plants](const Vector& x) { return plants.output(x); };
  sys.feasibility_points = [plants](const Vector& x) {
    return std::vector<Vector>{plants.output(x)};
  };
  sys.equilibrium_state = [plants](const Vector& ystar) {
    return plants.regulator(ystar);
  };
  return sys;
}

ClosedLoopSystem assemble_partial_info(const StackedPlant& plants,
                                       const GameSpec& game,
                                       const BarrierPenalty& pen,
                                       const CommGraph& graph) {
  check_dimensions(plants, game, pen, "assemble_partial_info");
  check_graph(graph, game, "assemble_partial_info");

  const EstimateLayout lay(game);
  const auto edges = graph.edges();
  const int n = plants.state_dim();
  const int m = plants.action_dim();
  const int est_dim = lay.est_dim;

  ClosedLoopSystem sys;
  sys.mode = FeedbackMode::partial_info;
  sys.constraints = pen.constraints;
  sys.barrier_rho = pen.rho;
  sys.layout.mode = sys.mode;
  sys.layout.n_players = game.n_players;
  sys.layout.action_dim = m;
  sys.layout.plant_dim = n;
  sys.layout.estimate_offset = 0;
  sys.layout.estimate_size = est_dim;
  sys.layout.plant_offset = est_dim;
  sys.layout.total_dim = est_dim + n;

  sys.vector_field = [plants, game, pen, lay, edges, n, m,
                      est_dim](const Vector& s) {
    const Vector est = s.head(est_dim);
    const Vector x = s.tail(n);
    const Vector y = plants.output(x);
    Vector stack(static_cast<Eigen::Index>(lay.n_players) * m);
    lay.build_stack(y, est, stack);
    Vector w(stack.size());
    apply_stacked_laplacian(edges, m, stack, w);

    Vector u = extended_pseudo_gradient(game, stack);
    u += barrier_gradient(pen, y);
    Vector own_flow(m);
    lay.select_own(w, own_flow);
    u += own_flow;

    Vector ds(s.size());
    lay.select_others(w, ds.head(est_dim));
    ds.head(est_dim) *= -1.0;
    ds.tail(n) = plants.drift(x);
    plants.add_input(u, -1.0, ds.tail(n));
    return ds;
  };
  sys.output = [plants, n](const Vector& s) {
    return plants.output(s.tail(n));
  };
  sys.feasibility_points = [plants, n](const Vector& s) {
    return std::vector<Vector>{plants.output(s.tail(n))};
  };
  sys.equilibrium_state = [plants, lay, n, est_dim](const Vector& ystar) {
    Vector s(est_dim + n);
    s.head(est_dim) = lay.consensus_estimates(ystar);
    s.tail(n) = plants.regulator(ystar);
    return s;
  };
  sys.estimate_stack = [plants, lay, n, m, est_dim](const Vector& s) {
    Vector stack(static_cast<Eigen::Index>(lay.n_players) * m);
    lay.build_stack(plants.output(s.tail(n)), s.head(est_dim), stack);
    return stack;
  };
  return sys;
}

ClosedLoopSystem assemble_distributed(const StackedPlant& plants,
                                      const GameSpec& game,
                                      const BarrierPenalty& pen,
                                      const CommGraph& graph, double epsilon,
                                      double k) {
  check_dimensions(plants, game, pen, "assemble_distributed");
  check_graph(graph, game, "assemble_distributed");
  if (!(epsilon > 0.0) || !(k > 0.0))
    throw ContractViolation(
        "assemble_distributed: epsilon and k must be positive");

  const EstimateLayout lay(game);
  const auto edges = graph.edges();
  const int n = plants.state_dim();
  const int m = plants.action_dim();
  const int est_dim = lay.est_dim;

  ClosedLoopSystem sys;
  sys.mode = FeedbackMode::distributed;
  sys.constraints = pen.constraints;
  sys.barrier_rho = pen.rho;
  sys.layout.mode = sys.mode;
  sys.layout.n_players = game.n_players;
  sys.layout.action_dim = m;
  sys.layout.plant_dim = n;
  sys.layout.z_offset = 0;
  sys.layout.z_size = m;
  sys.layout.estimate_offset = m;
  sys.layout.estimate_size = est_dim;
  sys.layout.plant_offset = m + est_dim;
  sys.layout.total_dim = m + est_dim + n;

  // player i's barrier argument (z_i, y^i_{-i}): the estimate stack slice
  // with the own block replaced by the tracker z_i
  auto barrier_point = [lay, m](const Vector& stack, const Vector& z, int i) {
    Vector w = stack.segment(static_cast<Eigen::Index>(i) * m, m);
    w.segment(lay.own_off[i], lay.own_dim[i]) =
        z.segment(lay.own_off[i], lay.own_dim[i]);
    return w;
  };

  sys.vector_field = [plants, game, pen, lay, edges, n, m, est_dim, epsilon,
                      k, barrier_point](const Vector& s) {
    const Vector z = s.head(m);
    const Vector est = s.segment(m, est_dim);
    const Vector x = s.tail(n);
    const Vector y = plants.output(x);
    Vector stack(static_cast<Eigen::Index>(lay.n_players) * m);
    lay.build_stack(y, est, stack);
    Vector w(stack.size());
    apply_stacked_laplacian(edges, m, stack, w);

    Vector u = extended_pseudo_gradient(game, stack);
    for (int i = 0; i < lay.n_players; ++i)
      u.segment(lay.own_off[i], lay.own_dim[i]) +=
          partial_barrier_gradient(pen, game, i, barrier_point(stack, z, i));

    Vector ds(s.size());
    ds.head(m) = (y - z) / epsilon;
    lay.select_others(w, ds.segment(m, est_dim));
    ds.segment(m, est_dim) /= -epsilon;
    ds.tail(n) = plants.drift(x);
    plants.add_input(u, -k, ds.tail(n));
    return ds;
  };
  sys.output = [plants, n](const Vector& s) {
    return plants.output(s.tail(n));
  };
  sys.feasibility_points = [plants, lay, n, m, est_dim,
                            barrier_point](const Vector& s) {
    const Vector z = s.head(m);
    const Vector est = s.segment(m, est_dim);
    const Vector y = plants.output(s.tail(n));
    Vector stack(static_cast<Eigen::Index>(lay.n_players) * m);
    lay.build_stack(y, est, stack);
    std::vector<Vector> points;
    points.reserve(1 + lay.n_players);
    points.push_back(y);
    for (int i = 0; i < lay.n_players; ++i)
      points.push_back(barrier_point(stack, z, i));
    return points;
  };
  sys.equilibrium_state = [plants, lay, n, m, est_dim](const Vector& ystar) {
    Vector s(m + est_dim + n);
    s.head(m) = ystar;
    s.segment(m, est_dim) = lay.consensus_estimates(ystar);
    s.tail(n) = plants.regulator(ystar);
    return s;
  };
  sys.estimate_stack = [plants, lay, n, m, est_dim](const Vector& s) {
    Vector stack(static_cast<Eigen::Index>(lay.n_players) * m);
    lay.build_stack(plants.output(s.tail(n)), s.segment(m, est_dim), stack);
    return stack;
  };
  return sys;
}

double default_k(double beta_est, double mu_est, double safety) {
  if (!(beta_est > 0.0) || !(mu_est > 0.0))
    throw ContractViolation("default_k: beta_est and mu_est must be positive");
  if (!(safety >= 1.0))
    throw ContractViolation("default_k: safety factor must be >= 1");
  return safety * beta_est / mu_est;
}

double estimate_theta2(const GameSpec& game, const ConstraintSet& cs,
                       int sample_count, std::uint64_t seed,
                       double box_halfwidth) {
  if (sample_count <= 0)
    throw ContractViolation("estimate_theta2: sample_count <= 0");
  const int m = game.total_dim();
  const Eigen::Index nm = static_cast<Eigen::Index>(game.n_players) * m;
  const Vector center =
      cs.n_constraints > 0 ? cs.slater_point : Vector::Zero(m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-box_halfwidth, box_halfwidth);

  auto draw_stack = [&]() {
    Vector stack(nm);
    for (Eigen::Index j = 0; j < nm; ++j)
      stack[j] = center[j % m] + unit(rng);
    return stack;
  };

  double theta2 = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const Vector a = draw_stack();
    const Vector b = draw_stack();
    const double dist = (a - b).norm();
    if (dist < 1e-12) continue;
    theta2 = std::max(theta2, (extended_pseudo_gradient(game, a) -
                               extended_pseudo_gradient(game, b))
                                      .norm() /
                                  dist);
  }
  return theta2;
}

}  // namespace gnes
