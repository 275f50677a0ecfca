#include "gnes/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace gnes {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

std::string format_vector(const Vector& v) {
  std::ostringstream out;
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_double(v[i]);
  }
  return out.str();
}

}  // namespace

BuiltGame make_quadratic_game(const QuadraticGameParams& p) {
  const int n = static_cast<int>(p.targets.size());
  if (n < 1)
    throw ContractViolation("quadratic game: targets must not be empty");
  if (!(p.self_weight > 0.0))
    throw ContractViolation("quadratic game: self_weight must be positive");
  if (p.coupling < 0.0)
    throw ContractViolation("quadratic game: coupling must be nonnegative");
  if (p.lower_bound && n * *p.lower_bound >= p.budget)
    throw ContractViolation(
        "quadratic game: lower bounds leave no feasible interior");

  const Vector targets = p.targets;
  const double w = p.self_weight;
  const double c = p.coupling;
  const double budget = p.budget;

  GameSpec game;
  game.n_players = n;
  game.action_dims.assign(n, 1);
  game.cost = [targets, w, c](int i, const Vector& y) {
    const double d = y[i] - targets[i];
    return w * d * d + c * y[i] * (y.sum() - y[i]);
  };
  game.partial_gradient = [targets, w, c](int i, const Vector& y) {
    Vector g(1);
    g[0] = 2.0 * w * (y[i] - targets[i]) + c * (y.sum() - y[i]);
    return g;
  };
  game.monotonicity_constant = 2.0 * (2.0 * w - c);
  game.lipschitz_constant = 2.0 * w - c + c * n;

  const int p_count = 1 + (p.lower_bound ? n : 0);
  ConstraintSet cs;
  cs.dim = n;
  cs.n_constraints = p_count;
  const std::optional<double> lb = p.lower_bound;
  cs.value = [n, budget, lb](const Vector& y) {
    Vector g(lb ? n + 1 : 1);
    g[0] = y.sum() - budget;
    if (lb)
      for (int i = 0; i < n; ++i) g[1 + i] = *lb - y[i];
    return g;
  };
  cs.gradient = [n, lb](int l, const Vector&) {
    if (l == 0) return Vector(Vector::Ones(n));
    Vector g = Vector::Zero(n);
    g[l - 1] = -1.0;
    return g;
  };
  cs.kinds.assign(p_count, ConstraintKind::affine);
  cs.slater_point =
      Vector::Constant(n, std::min(0.0, (budget - 1.0) / n));
  return {std::move(game), std::move(cs)};
}

BuiltGame make_osnr_game(const OsnrGameParams& p) {
  const int n = p.channels;
  if (n < 1) throw ContractViolation("osnr game: channels must be positive");
  if (!(p.gain > 0.0) || !(p.noise > 0.0) || p.crosstalk < 0.0 ||
      !(p.power_budget > 0.0))
    throw ContractViolation("osnr game: gain, noise and power budget must be"
                            " positive, crosstalk nonnegative");

  Vector prices(n);
  for (int i = 0; i < n; ++i)
    prices[i] = n == 1 ? p.price_min
                       : p.price_min +
                             (p.price_max - p.price_min) * i / (n - 1.0);
  const double c = p.gain;
  const double n0 = p.noise;
  const double gamma = p.crosstalk;
  const double budget = p.power_budget;

  auto interference = [n0, gamma](int i, const Vector& y) {
    return n0 + gamma * (y.sum() - y[i]);
  };

  GameSpec game;
  game.n_players = n;
  game.action_dims.assign(n, 1);
  game.cost = [prices, c, interference](int i, const Vector& y) {
    return prices[i] * y[i] -
           std::log(1.0 + c * y[i] / interference(i, y));
  };
  game.partial_gradient = [prices, c, interference](int i, const Vector& y) {
    Vector g(1);
    g[0] = prices[i] - c / (interference(i, y) + c * y[i]);
    return g;
  };

  ConstraintSet cs;
  cs.dim = n;
  cs.n_constraints = n + 1;
  cs.value = [n, budget](const Vector& y) {
    Vector g(n + 1);
    g.head(n) = -y;
    g[n] = y.sum() - budget;
    return g;
  };
  cs.gradient = [n](int l, const Vector&) {
    if (l == n) return Vector(Vector::Ones(n));
    Vector g = Vector::Zero(n);
    g[l] = -1.0;
    return g;
  };
  cs.kinds.assign(n + 1, ConstraintKind::affine);
  cs.slater_point = Vector::Constant(n, budget / (2.0 * n));
  return {std::move(game), std::move(cs)};
}

BuiltGame make_leader_follower_game(const LeaderFollowerParams& p) {
  const int n = p.robots;
  if (n < 1)
    throw ContractViolation("leader-follower game: robots must be positive");
  if (!(p.max_gap > 0.0))
    throw ContractViolation("leader-follower game: max_gap must be positive");

  const double v0 = p.leader_velocity;
  const double d2 = p.max_gap * p.max_gap;
  auto ahead = [v0](int i, const Vector& y) { return i == 0 ? v0 : y[i - 1]; };

  GameSpec game;
  game.n_players = n;
  game.action_dims.assign(n, 1);
  game.cost = [ahead](int i, const Vector& y) {
    const double d = y[i] - ahead(i, y);
    return d * d;
  };
  game.partial_gradient = [ahead](int i, const Vector& y) {
    Vector g(1);
    g[0] = 2.0 * (y[i] - ahead(i, y));
    return g;
  };
  game.monotonicity_constant =
      2.0 * (2.0 - 2.0 * std::cos(M_PI / (n + 1.0)));

  ConstraintSet cs;
  cs.dim = n;
  cs.n_constraints = n;
  cs.value = [n, d2, ahead](const Vector& y) {
    Vector g(n);
    for (int l = 0; l < n; ++l) {
      const double d = y[l] - ahead(l, y);
      g[l] = d * d - d2;
    }
    return g;
  };
  cs.gradient = [n, ahead](int l, const Vector& y) {
    Vector g = Vector::Zero(n);
    const double d = y[l] - ahead(l, y);
    g[l] = 2.0 * d;
    if (l > 0) g[l - 1] = -2.0 * d;
    return g;
  };
  cs.kinds.assign(n, ConstraintKind::convex_smooth);
  cs.slater_point = Vector::Constant(n, v0);
  return {std::move(game), std::move(cs)};
}

BuiltGame build_game(const GameParams& params) {
  return std::visit(
      [](const auto& p) -> BuiltGame {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticGameParams>)
          return make_quadratic_game(p);
        else if constexpr (std::is_same_v<T, OsnrGameParams>)
          return make_osnr_game(p);
        else
          return make_leader_follower_game(p);
      },
      params);
}

Vector broadcast_estimates(const GameSpec& game, const Vector& source) {
  const int m = game.total_dim();
  if (source.size() != m)
    throw ContractViolation("broadcast_estimates: source has wrong dimension");
  const int n = game.n_players;
  Vector est(n * m - m);
  int at = 0;
  for (int i = 0; i < n; ++i) {
    const int off = game.block_offset(i);
    const int di = game.action_dims[i];
    est.segment(at, off) = source.head(off);
    est.segment(at + off, m - off - di) = source.tail(m - off - di);
    at += m - di;
  }
  return est;
}

namespace {

std::string default_plant_kind(const GameParams& params) {
  if (std::holds_alternative<OsnrGameParams>(params)) return "pi_cascade";
  if (std::holds_alternative<LeaderFollowerParams>(params))
    return "flexible_robot";
  return "integrator";
}

PlantModel instantiate_plant(const PlantChoice& choice, int action_dim,
                             int agent) {
  auto fail = [&](const std::string& why) -> PlantModel {
    std::ostringstream msg;
    msg << "plant for agent " << agent + 1 << ": " << why;
    throw ContractViolation(msg.str());
  };
  const auto& ps = choice.params;
  if (choice.kind == "integrator") {
    if (!ps.empty()) return fail("integrator takes no parameters");
    return make_integrator(action_dim);
  }
  if (choice.kind == "pi_cascade") {
    if (ps.empty()) return make_pi_cascade(action_dim, 1.0, 0.5);
    if (ps.size() != 2)
      return fail("pi_cascade takes two parameters (damping, gain)");
    return make_pi_cascade(action_dim, ps[0], ps[1]);
  }
  if (choice.kind == "flexible_robot") {
    if (action_dim != 1)
      return fail("flexible_robot drives a scalar action");
    if (ps.empty()) return make_flexible_robot(1.0, 1.0, 1.0);
    if (ps.size() != 3)
      return fail(
          "flexible_robot takes three parameters (link mass, motor mass,"
          " damping)");
    return make_flexible_robot(ps[0], ps[1], ps[2]);
  }
  return fail("unknown plant kind '" + choice.kind + "'");
}

void check_interior_point(const ConstraintSet& cs, const Vector& pt,
                          double margin, const std::string& label) {
  if (cs.n_constraints == 0) return;
  const Vector g = cs.value(pt);
  for (int l = 0; l < cs.n_constraints; ++l) {
    if (!(g[l] < -margin)) {
      std::ostringstream msg;
      msg << label << " violates constraint " << l + 1 << " (g = " << g[l]
          << ")";
      throw InfeasibleStart(msg.str(), l);
    }
  }
}

}  // namespace

RealizedScenario realize(const Scenario& sc) {
  BuiltGame bg = build_game(sc.game);
  bg.game.validate();
  bg.constraints.validate();
  const int m = bg.game.total_dim();
  const int n = bg.game.n_players;

  Vector y0 = sc.init_outputs.size() == 0 ? Vector(bg.constraints.slater_point)
                                          : sc.init_outputs;
  if (y0.size() != m) {
    std::ostringstream msg;
    msg << "scenario '" << sc.name << "': init outputs have dimension "
        << y0.size() << ", game expects " << m;
    throw ContractViolation(msg.str());
  }

  std::map<int, PlantChoice> overrides;
  for (const auto& [agent, choice] : sc.plant_overrides) {
    if (agent < 0 || agent >= n) {
      std::ostringstream msg;
      msg << "scenario '" << sc.name << "': plant override for agent "
          << agent + 1 << " out of range (game has " << n << " players)";
      throw ContractViolation(msg.str());
    }
    if (!overrides.emplace(agent, choice).second) {
      std::ostringstream msg;
      msg << "scenario '" << sc.name << "': duplicate plant override for"
             " agent "
          << agent + 1;
      throw ContractViolation(msg.str());
    }
  }
  const PlantChoice fallback =
      sc.plant_default.value_or(PlantChoice{default_plant_kind(sc.game), {}});
  std::vector<PlantModel> models;
  models.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto it = overrides.find(i);
    const PlantChoice& choice = it == overrides.end() ? fallback : it->second;
    models.push_back(instantiate_plant(choice, bg.game.action_dims[i], i));
  }
  StackedPlant stack = stack_plants(std::move(models));

  BarrierPenalty pen = make_barrier(sc.rho, bg.constraints);

  const bool needs_graph = sc.mode.kind != FeedbackMode::full_info;
  if (needs_graph && !sc.graph) {
    std::ostringstream msg;
    msg << "scenario '" << sc.name << "': " << to_string(sc.mode.kind)
        << " mode requires a communication graph";
    throw ContractViolation(msg.str());
  }

  double resolved_k = 1.0;
  ClosedLoopSystem system;
  switch (sc.mode.kind) {
    case FeedbackMode::full_info:
      system = assemble_full_info(stack, bg.game, pen);
      break;
    case FeedbackMode::partial_info:
      system = assemble_partial_info(stack, bg.game, pen, *sc.graph);
      break;
    case FeedbackMode::distributed: {
      if (sc.mode.k) {
        resolved_k = *sc.mode.k;
      } else {
        const GameConstants gc = estimate_game_constants(
            bg.game, bg.constraints, 200, sc.sim.seed);
        resolved_k =
            default_k(kDefaultBetaEstimate, gc.mu, kDefaultGainSafety);
      }
      system = assemble_distributed(stack, bg.game, pen, *sc.graph,
                                    sc.mode.epsilon, resolved_k);
      break;
    }
  }

  const Vector source = sc.estimates == EstimatePolicy::outputs
                            ? y0
                            : Vector(bg.constraints.slater_point);
  Vector x0(system.layout.total_dim);
  const Vector xp = stack.regulator(y0);
  switch (sc.mode.kind) {
    case FeedbackMode::full_info:
      x0 = xp;
      break;
    case FeedbackMode::partial_info:
      x0 << broadcast_estimates(bg.game, source), xp;
      break;
    case FeedbackMode::distributed:
      x0 << y0, broadcast_estimates(bg.game, source), xp;
      break;
  }

  const auto points = system.feasibility_points(x0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::ostringstream label;
    if (j == 0)
      label << "scenario '" << sc.name << "': initial outputs";
    else
      label << "scenario '" << sc.name << "': initial barrier point of"
            << " player " << j;
    check_interior_point(bg.constraints, points[j], sc.sim.interior_margin,
                         label.str());
  }

  RealizedScenario rs{sc,
                      std::move(bg.game),
                      std::move(bg.constraints),
                      std::move(pen),
                      std::move(stack),
                      sc.graph,
                      std::move(system),
                      std::move(x0),
                      resolved_k};
  return rs;
}

// ---------------------------------------------------------------------------
// Sectioned text format
// ---------------------------------------------------------------------------

namespace {

struct ParseCursor {
  int line = 0;

  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream msg;
    msg << "scenario line " << line << ": " << why;
    throw ContractViolation(msg.str());
  }

  double number(const std::string& raw) const {
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(raw, &used);
    } catch (const std::invalid_argument&) {
      fail("expected a number, got '" + raw + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range: '" + raw + "'");
    }
    if (used != raw.size())
      fail("trailing characters after number '" + raw + "'");
    return v;
  }

  int integer(const std::string& raw) const {
    const double v = number(raw);
    const int i = static_cast<int>(std::llround(v));
    if (v != static_cast<double>(i)) fail("expected an integer, got '" + raw + "'");
    return i;
  }

  Vector vector(const std::string& raw) const {
    std::istringstream in(raw);
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) vals.push_back(number(tok));
    if (vals.empty()) fail("expected a list of numbers");
    return Eigen::Map<const Vector>(vals.data(),
                                    static_cast<int>(vals.size()));
  }

  PlantChoice plant(const std::string& raw) const {
    std::istringstream in(raw);
    PlantChoice choice;
    if (!(in >> choice.kind)) fail("expected a plant kind");
    std::string tok;
    while (in >> tok) choice.params.push_back(number(tok));
    return choice;
  }
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Scenario parse_scenario_text(const std::string& text,
                             const std::string& base_dir) {
  Scenario sc;
  bool have_name = false;
  bool have_game = false;
  bool have_graph = false;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  ParseCursor at;
  while (std::getline(in, raw)) {
    ++at.line;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') at.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"scenario", "game", "plants", "graph",
                                    "mode",     "penalty", "init", "sim"};
      if (std::find_if(std::begin(known), std::end(known),
                       [&](const char* k) { return section == k; }) ==
          std::end(known))
        at.fail("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) at.fail("empty key");
    if (value.empty()) at.fail("empty value for '" + key + "'");
    if (section.empty()) at.fail("key '" + key + "' outside any section");

    if (section == "scenario") {
      if (key == "name") {
        sc.name = value;
        have_name = true;
      } else {
        at.fail("unknown key '" + key + "' in [scenario]");
      }
    } else if (section == "game") {
      if (key == "kind") {
        if (have_game) at.fail("duplicate game kind");
        if (value == "quadratic")
          sc.game = QuadraticGameParams{};
        else if (value == "osnr")
          sc.game = OsnrGameParams{};
        else if (value == "leader_follower")
          sc.game = LeaderFollowerParams{};
        else
          at.fail("unknown game kind '" + value + "'");
        have_game = true;
      } else if (!have_game) {
        at.fail("kind must be the first key in [game]");
      } else if (auto* q = std::get_if<QuadraticGameParams>(&sc.game)) {
        if (key == "targets")
          q->targets = at.vector(value);
        else if (key == "self_weight")
          q->self_weight = at.number(value);
        else if (key == "coupling")
          q->coupling = at.number(value);
        else if (key == "budget")
          q->budget = at.number(value);
        else if (key == "lower_bound")
          q->lower_bound = value == "none"
                               ? std::nullopt
                               : std::optional<double>(at.number(value));
        else
          at.fail("unknown key '" + key + "' for the quadratic game");
      } else if (auto* o = std::get_if<OsnrGameParams>(&sc.game)) {
        if (key == "channels")
          o->channels = at.integer(value);
        else if (key == "price_min")
          o->price_min = at.number(value);
        else if (key == "price_max")
          o->price_max = at.number(value);
        else if (key == "gain")
          o->gain = at.number(value);
        else if (key == "noise")
          o->noise = at.number(value);
        else if (key == "crosstalk")
          o->crosstalk = at.number(value);
        else if (key == "power_budget")
          o->power_budget = at.number(value);
        else
          at.fail("unknown key '" + key + "' for the osnr game");
      } else {
        auto* lf = std::get_if<LeaderFollowerParams>(&sc.game);
        if (key == "robots")
          lf->robots = at.integer(value);
        else if (key == "leader_velocity")
          lf->leader_velocity = at.number(value);
        else if (key == "max_gap")
          lf->max_gap = at.number(value);
        else
          at.fail("unknown key '" + key + "' for the leader_follower game");
      }
    } else if (section == "plants") {
      if (key == "kind") {
        sc.plant_default = at.plant(value);
      } else if (key.rfind("agent_", 0) == 0) {
        const int agent = at.integer(key.substr(6));
        if (agent < 1) at.fail("agent indices are 1-based");
        sc.plant_overrides.emplace_back(agent - 1, at.plant(value));
      } else {
        at.fail("unknown key '" + key + "' in [plants]");
      }
    } else if (section == "graph") {
      if (have_graph) at.fail("graph specified more than once");
      if (key == "edges") {
        std::string edge_lines = value;
        std::replace(edge_lines.begin(), edge_lines.end(), ',', '\n');
        try {
          sc.graph = parse_graph_text(edge_lines);
        } catch (const ContractViolation& e) {
          at.fail(std::string("bad edge list: ") + e.what());
        }
      } else if (key == "file") {
        namespace fs = std::filesystem;
        fs::path p(value);
        if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
        try {
          sc.graph = load_graph_file(p.string());
        } catch (const ContractViolation& e) {
          at.fail(std::string("bad graph file: ") + e.what());
        }
      } else if (key == "builtin") {
        if (value != "benchmark10")
          at.fail("unknown builtin graph '" + value + "'");
        sc.graph = benchmark_graph_10();
      } else {
        at.fail("unknown key '" + key + "' in [graph]");
      }
      have_graph = true;
    } else if (section == "mode") {
      if (key == "kind") {
        if (value == "full_info")
          sc.mode.kind = FeedbackMode::full_info;
        else if (value == "partial_info")
          sc.mode.kind = FeedbackMode::partial_info;
        else if (value == "distributed")
          sc.mode.kind = FeedbackMode::distributed;
        else
          at.fail("unknown mode '" + value + "'");
      } else if (key == "epsilon") {
        sc.mode.epsilon = at.number(value);
        if (!(sc.mode.epsilon > 0)) at.fail("epsilon must be positive");
      } else if (key == "k") {
        sc.mode.k = value == "auto" ? std::nullopt
                                    : std::optional<double>(at.number(value));
      } else {
        at.fail("unknown key '" + key + "' in [mode]");
      }
    } else if (section == "penalty") {
      if (key == "rho") {
        sc.rho = at.number(value);
        if (!(sc.rho > 0)) at.fail("rho must be positive");
      } else {
        at.fail("unknown key '" + key + "' in [penalty]");
      }
    } else if (section == "init") {
      if (key == "outputs") {
        sc.init_outputs = at.vector(value);
      } else if (key == "estimates") {
        if (value == "slater")
          sc.estimates = EstimatePolicy::slater;
        else if (value == "outputs")
          sc.estimates = EstimatePolicy::outputs;
        else
          at.fail("estimates must be 'slater' or 'outputs'");
      } else {
        at.fail("unknown key '" + key + "' in [init]");
      }
    } else {  // sim
      if (key == "t_final")
        sc.sim.t_final = at.number(value);
      else if (key == "dt")
        sc.sim.dt = at.number(value);
      else if (key == "dt_min")
        sc.sim.dt_min = at.number(value);
      else if (key == "record_stride")
        sc.sim.record_stride = at.integer(value);
      else if (key == "interior_margin")
        sc.sim.interior_margin = at.number(value);
      else if (key == "seed")
        sc.sim.seed = static_cast<std::uint64_t>(at.integer(value));
      else
        at.fail("unknown key '" + key + "' in [sim]");
    }
  }

  if (!have_name)
    throw ContractViolation("scenario: missing 'name' in [scenario]");
  if (!have_game)
    throw ContractViolation("scenario: missing 'kind' in [game]");
  sc.sim.validate();
  return sc;
}

Scenario load_scenario(const std::string& path_or_builtin) {
  if (is_builtin_scenario(path_or_builtin))
    return builtin_scenario(path_or_builtin);
  std::ifstream in(path_or_builtin);
  if (!in)
    throw ContractViolation("cannot open scenario file '" + path_or_builtin +
                            "' (and it is not a builtin scenario name)");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string base =
      std::filesystem::path(path_or_builtin).parent_path().string();
  return parse_scenario_text(buf.str(), base);
}

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "[scenario]\nname = " << sc.name << "\n\n[game]\n";
  if (const auto* q = std::get_if<QuadraticGameParams>(&sc.game)) {
    out << "kind = quadratic\n";
    out << "targets = " << format_vector(q->targets) << "\n";
    out << "self_weight = " << format_double(q->self_weight) << "\n";
    out << "coupling = " << format_double(q->coupling) << "\n";
    out << "budget = " << format_double(q->budget) << "\n";
    out << "lower_bound = "
        << (q->lower_bound ? format_double(*q->lower_bound) : "none") << "\n";
  } else if (const auto* o = std::get_if<OsnrGameParams>(&sc.game)) {
    out << "kind = osnr\n";
    out << "channels = " << o->channels << "\n";
    out << "price_min = " << format_double(o->price_min) << "\n";
    out << "price_max = " << format_double(o->price_max) << "\n";
    out << "gain = " << format_double(o->gain) << "\n";
    out << "noise = " << format_double(o->noise) << "\n";
    out << "crosstalk = " << format_double(o->crosstalk) << "\n";
    out << "power_budget = " << format_double(o->power_budget) << "\n";
  } else {
    const auto& lf = std::get<LeaderFollowerParams>(sc.game);
    out << "kind = leader_follower\n";
    out << "robots = " << lf.robots << "\n";
    out << "leader_velocity = " << format_double(lf.leader_velocity) << "\n";
    out << "max_gap = " << format_double(lf.max_gap) << "\n";
  }

  if (sc.plant_default || !sc.plant_overrides.empty()) {
    out << "\n[plants]\n";
    auto plant_line = [&](const PlantChoice& c) {
      out << c.kind;
      for (double v : c.params) out << ' ' << format_double(v);
      out << "\n";
    };
    if (sc.plant_default) {
      out << "kind = ";
      plant_line(*sc.plant_default);
    }
    for (const auto& [agent, choice] : sc.plant_overrides) {
      out << "agent_" << agent + 1 << " = ";
      plant_line(choice);
    }
  }

  if (sc.graph) {
    out << "\n[graph]\nedges = ";
    const auto& edges = sc.graph->edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (e > 0) out << ", ";
      out << edges[e].first + 1 << ' ' << edges[e].second + 1;
    }
    out << "\n";
  }

  out << "\n[mode]\nkind = " << to_string(sc.mode.kind) << "\n";
  if (sc.mode.kind == FeedbackMode::distributed) {
    out << "epsilon = " << format_double(sc.mode.epsilon) << "\n";
    out << "k = " << (sc.mode.k ? format_double(*sc.mode.k) : "auto") << "\n";
  }

  out << "\n[penalty]\nrho = " << format_double(sc.rho) << "\n";

  out << "\n[init]\n";
  if (sc.init_outputs.size() > 0)
    out << "outputs = " << format_vector(sc.init_outputs) << "\n";
  out << "estimates = "
      << (sc.estimates == EstimatePolicy::slater ? "slater" : "outputs")
      << "\n";

  out << "\n[sim]\n";
  out << "t_final = " << format_double(sc.sim.t_final) << "\n";
  out << "dt = " << format_double(sc.sim.dt) << "\n";
  out << "dt_min = " << format_double(sc.sim.dt_min) << "\n";
  out << "record_stride = " << sc.sim.record_stride << "\n";
  out << "interior_margin = " << format_double(sc.sim.interior_margin) << "\n";
  out << "seed = " << sc.sim.seed << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Builtin scenarios
// ---------------------------------------------------------------------------

namespace {

Scenario builtin_qp2() {
  Scenario sc;
  sc.name = "qp2";
  QuadraticGameParams g;
  g.targets = Vector::Constant(2, 1.0);
  g.self_weight = 1.0;
  g.coupling = 1.0;
  g.budget = 1.0;
  sc.game = g;
  sc.plant_default = PlantChoice{"integrator", {}};
  sc.mode.kind = FeedbackMode::full_info;
  sc.rho = 0.1;
  sc.init_outputs = Vector::Zero(2);
  sc.sim.t_final = 20.0;
  sc.sim.dt = 1e-3;
  sc.sim.record_stride = 10;
  sc.sim.seed = 7;
  return sc;
}

Scenario builtin_quad3() {
  Scenario sc;
  sc.name = "quad3";
  QuadraticGameParams g;
  g.targets = Vector(3);
  g.targets << 1.0, 2.0, 3.0;
  g.self_weight = 0.25;
  g.coupling = 0.1;
  g.budget = 4.0;
  g.lower_bound = -5.0;
  sc.game = g;
  sc.plant_default = PlantChoice{"integrator", {}};
  sc.graph = CommGraph(3, {{0, 1}, {0, 2}, {1, 2}});
  sc.mode.kind = FeedbackMode::full_info;
  sc.rho = 0.1;
  sc.init_outputs = Vector(3);
  sc.init_outputs << 0.3, 1.2, 2.3;
  sc.estimates = EstimatePolicy::outputs;
  sc.sim.t_final = 40.0;
  sc.sim.dt = 1e-3;
  sc.sim.record_stride = 20;
  sc.sim.seed = 7;
  return sc;
}

Scenario builtin_osnr10() {
  Scenario sc;
  sc.name = "osnr10";
  sc.game = OsnrGameParams{};
  sc.plant_default = PlantChoice{"pi_cascade", {1.0, 0.5}};
  sc.graph = benchmark_graph_10();
  sc.mode.kind = FeedbackMode::distributed;
  sc.mode.epsilon = 0.01;
  sc.mode.k = 1.0;
  sc.rho = 0.1;
  sc.init_outputs = Vector::Constant(10, 0.5);
  sc.estimates = EstimatePolicy::outputs;
  sc.sim.t_final = 60.0;
  sc.sim.dt = 1e-3;
  sc.sim.record_stride = 10;
  sc.sim.seed = 7;
  return sc;
}

Scenario builtin_robots5() {
  Scenario sc;
  sc.name = "robots5";
  sc.game = LeaderFollowerParams{5, 3.0, 3.0};
  sc.plant_default = PlantChoice{"flexible_robot", {1.0, 1.0, 1.0}};
  sc.mode.kind = FeedbackMode::full_info;
  sc.rho = 0.1;
  sc.init_outputs = Vector(5);
  sc.init_outputs << 2.0, 1.5, 2.5, 1.0, 1.5;
  sc.sim.t_final = 40.0;
  sc.sim.dt = 1e-3;
  sc.sim.record_stride = 20;
  sc.sim.seed = 7;
  return sc;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"qp2", "quad3", "osnr10", "robots5"};
}

std::string builtin_scenario_description(const std::string& name) {
  if (name == "qp2")
    return "two quadratic players sharing a unit budget, integrator agents,"
           " full information";
  if (name == "quad3")
    return "three-player quadratic tracking with budget and lower bounds,"
           " integrator agents, full information";
  if (name == "osnr10")
    return "ten-channel power control with a shared power budget, PI-cascade"
           " agents, distributed feedback over the 10-node benchmark graph";
  if (name == "robots5")
    return "five velocity-coordinating robots behind a virtual leader,"
           " flexible-joint agents, full information";
  throw ContractViolation("unknown builtin scenario '" + name + "'");
}

bool is_builtin_scenario(const std::string& name) {
  const auto names = builtin_scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "qp2") return builtin_qp2();
  if (name == "quad3") return builtin_quad3();
  if (name == "osnr10") return builtin_osnr10();
  if (name == "robots5") return builtin_robots5();
  throw ContractViolation("unknown builtin scenario '" + name + "'");
}

}  // namespace gnes
