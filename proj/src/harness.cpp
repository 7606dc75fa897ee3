// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "mnns/error.hpp"
#include "suites.hpp"

namespace mnns {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::verify_young, "verify-young"},       {Command::verify_decay, "verify-decay"},
    {Command::verify_riesz, "verify-riesz"},       {Command::verify_bilinear, "verify-bilinear"},
    {Command::scaling_check, "scaling-check"},     {Command::solve, "solve"},
    {Command::local_solve, "local-solve"},         {Command::aniso_demo, "aniso-demo"},
};

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::config, what); }

// --- TOML reading ---------------------------------------------------------

void reject_unknown(const toml::table& t, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [k, v] : t) {
    bool ok = false;
    for (auto name : known) ok = ok || k.str() == name;
    if (!ok) config_error("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

double number(const toml::node& n, const std::string& where) {
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_integer()) return static_cast<double>(v->get());
  if (auto v = n.as_string()) {
    if (v->get() == "inf") return kInf;
    if (v->get() == "pi") return std::numbers::pi;
  }
  config_error(where + ": expected a number");
}

std::vector<double> numbers(const toml::node& n, const std::string& where) {
  std::vector<double> out;
  if (auto arr = n.as_array()) {
    for (std::size_t i = 0; i < arr->size(); ++i)
      out.push_back(number(*arr->get(i), where + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(number(n, where));
  }
  return out;
}

std::size_t count(const toml::node& n, const std::string& where) {
  auto v = n.as_integer();
  if (!v || v->get() < 0) config_error(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(v->get());
}

bool boolean(const toml::node& n, const std::string& where) {
  auto v = n.as_boolean();
  if (!v) config_error(where + ": expected true or false");
  return v->get();
}

std::string string(const toml::node& n, const std::string& where) {
  auto v = n.as_string();
  if (!v) config_error(where + ": expected a string");
  return v->get();
}

const toml::table* section(const toml::table& root, std::string_view name) {
  const auto* node = root.get(name);
  if (!node) return nullptr;
  const auto* t = node->as_table();
  if (!t) config_error("'" + std::string(name) + "' must be a table");
  return t;
}

// Applies `fn(key, node)` to every present key.
template <class Fn>
void each(const toml::table& t, Fn&& fn) {
  for (const auto& [k, v] : t) fn(std::string(k.str()), v);
}

void read_grid(const toml::table& t, GridSpec& g) {
  reject_unknown(t, {"dims", "points", "half_width", "boundary"}, "[grid]");
  std::optional<std::size_t> dims;
  std::vector<double> pts{32}, hw{std::numbers::pi};
  if (auto n = t.get("dims")) dims = count(*n, "grid.dims");
  if (auto n = t.get("points")) pts = numbers(*n, "grid.points");
  if (auto n = t.get("half_width")) hw = numbers(*n, "grid.half_width");
  std::size_t d = dims.value_or(std::max(pts.size(), hw.size()));
  if (d == 0) config_error("grid.dims must be positive");
  auto expand = [d](std::vector<double> v, const char* what) {
    if (v.size() == 1) v.assign(d, v[0]);
    if (v.size() != d)
      config_error(std::string("grid.") + what + " has " + std::to_string(v.size()) +
                   " entries for " + std::to_string(d) + " dims");
    return v;
  };
  pts = expand(pts, "points");
  g.half_widths = expand(hw, "half_width");
  g.points.clear();
  for (double p : pts) {
    if (!(p >= 1) || p != std::floor(p)) config_error("grid.points must be positive integers");
    g.points.push_back(static_cast<std::size_t>(p));
  }
  if (auto n = t.get("boundary")) {
    auto b = string(*n, "grid.boundary");
    if (b == "periodic") g.boundary = Boundary::periodic;
    else if (b == "truncated") g.boundary = Boundary::truncated;
    else config_error("grid.boundary must be 'periodic' or 'truncated'");
  }
}

void read_solver(const toml::table& t, SolverSettings& s) {
  reject_unknown(t,
                 {"T", "nodes", "grading", "quadrature", "picard_tol", "max_iter", "smallness_guard",
                  "amplitude", "target_product", "scale", "oracle_steps", "oracle_tolerance",
                  "save_trajectory"},
                 "[solver]");
  each(t, [&](const std::string& k, const toml::node& v) {
    const std::string w = "solver." + k;
    if (k == "T") s.T = number(v, w);
    else if (k == "nodes") s.nodes = count(v, w);
    else if (k == "grading") s.grading = number(v, w);
    else if (k == "quadrature") s.quadrature = count(v, w);
    else if (k == "picard_tol") s.picard_tol = number(v, w);
    else if (k == "max_iter") s.max_iter = count(v, w);
    else if (k == "smallness_guard") s.smallness_guard = boolean(v, w);
    else if (k == "amplitude") {
      if (v.as_string() && v.as_string()->get() == "auto") s.amplitude.reset();
      else s.amplitude = number(v, w);
    } else if (k == "target_product") s.target_product = number(v, w);
    else if (k == "scale") s.scale = number(v, w);
    else if (k == "oracle_steps") s.oracle_steps = count(v, w);
    else if (k == "oracle_tolerance") s.oracle_tolerance = number(v, w);
    else if (k == "save_trajectory") s.save_trajectory = boolean(v, w);
  });
}

// --- TOML writing ---------------------------------------------------------

toml::array array_of(const std::vector<double>& v) {
  toml::array a;
  for (double x : v) {
    if (std::isinf(x)) a.push_back("inf");
    else a.push_back(x);
  }
  return a;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands)
    if (n == name) return cmd;
  config_error("unknown command '" + std::string(name) + "'");
}

TensorGrid GridSpec::make() const { return TensorGrid(half_widths, points, boundary); }

double ExperimentConfig::effective_tolerance() const {
  if (tolerance) return *tolerance;
  switch (command) {
    case Command::verify_young: return 5e-3;
    case Command::verify_decay: return 0.05;
    case Command::verify_riesz: return 1e-10;
    case Command::verify_bilinear: return 0.0;
    case Command::scaling_check: return 1e-3;
    case Command::solve:
    case Command::local_solve: return 1e-6;
    case Command::aniso_demo: return 0.02;
  }
  return 0.0;
}

double ExperimentConfig::effective_budget() const {
  if (budget) return *budget;
  return command == Command::verify_riesz ? 10.0 : 5.0;
}

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig s;
  if (!p.empty()) s.p = MixedExponents::from_values(p);
  if (!q.empty()) s.q = MixedExponents::from_values(q);
  s.T = solver.T;
  s.M = solver.nodes;
  s.grading = solver.grading;
  s.K = solver.quadrature;
  s.picard_tol = solver.picard_tol;
  s.max_iter = solver.max_iter;
  s.smallness_guard = solver.smallness_guard;
  s.probe_seed = seed;
  return s;
}

ExperimentConfig parse_config(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    config_error(os.str());
  }
  reject_unknown(root,
                 {"command", "seed", "cases", "tolerance", "budget", "output", "grid", "exponents",
                  "decay", "bilinear", "scaling", "solver", "aniso"},
                 "the top level");
  ExperimentConfig cfg;
  const auto* cmd = root.get("command");
  if (!cmd) config_error("missing 'command'");
  cfg.command = parse_command(string(*cmd, "command"));
  if (auto n = root.get("seed")) {
    auto v = n->as_integer();
    if (!v || v->get() < 0) config_error("seed: expected a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(v->get());
  }
  if (auto n = root.get("cases")) cfg.cases = count(*n, "cases");
  if (auto n = root.get("tolerance")) cfg.tolerance = number(*n, "tolerance");
  if (auto n = root.get("budget")) cfg.budget = number(*n, "budget");
  if (auto n = root.get("output")) cfg.output_dir = string(*n, "output");

  cfg.grid.points = {32};
  cfg.grid.half_widths = {std::numbers::pi};
  if (auto t = section(root, "grid")) read_grid(*t, cfg.grid);
  else config_error("missing [grid]");

  if (auto t = section(root, "exponents")) {
    reject_unknown(*t, {"p", "q"}, "[exponents]");
    if (auto n = t->get("p")) cfg.p = numbers(*n, "exponents.p");
    if (auto n = t->get("q")) cfg.q = numbers(*n, "exponents.q");
  }
  if (auto t = section(root, "decay")) {
    reject_unknown(*t, {"gradient", "continuity_points", "continuity_half_width"}, "[decay]");
    if (auto n = t->get("gradient")) cfg.gradient = boolean(*n, "decay.gradient");
    if (auto n = t->get("continuity_points")) cfg.continuity_points = count(*n, "decay.continuity_points");
    if (auto n = t->get("continuity_half_width"))
      cfg.continuity_half_width = number(*n, "decay.continuity_half_width");
  }
  if (auto t = section(root, "bilinear")) {
    reject_unknown(*t, {"splits"}, "[bilinear]");
    if (auto n = t->get("splits")) {
      auto arr = n->as_array();
      if (!arr) config_error("bilinear.splits must be an array of tables");
      for (std::size_t i = 0; i < arr->size(); ++i) {
        auto st = arr->get(i)->as_table();
        const std::string w = "bilinear.splits[" + std::to_string(i) + "]";
        if (!st) config_error(w + " must be a table");
        reject_unknown(*st, {"alpha", "beta", "gamma"}, w);
        BilinearSplit s;
        for (auto [key, dst] : {std::pair{"alpha", &s.alpha}, {"beta", &s.beta}, {"gamma", &s.gamma}}) {
          auto v = st->get(key);
          if (!v) config_error(w + " is missing " + key);
          *dst = numbers(*v, w + "." + key);
        }
        cfg.splits.push_back(std::move(s));
      }
    }
  }
  if (auto t = section(root, "scaling")) {
    reject_unknown(*t, {"lambdas"}, "[scaling]");
    if (auto n = t->get("lambdas")) cfg.lambdas = numbers(*n, "scaling.lambdas");
  }
  if (auto t = section(root, "solver")) read_solver(*t, cfg.solver);
  if (auto t = section(root, "aniso")) {
    reject_unknown(*t, {"a", "b", "half_widths", "spacing", "plain_p"}, "[aniso]");
    if (auto n = t->get("a")) cfg.aniso_a = number(*n, "aniso.a");
    if (auto n = t->get("b")) cfg.aniso_b = number(*n, "aniso.b");
    if (auto n = t->get("half_widths")) cfg.domain_half_widths = numbers(*n, "aniso.half_widths");
    if (auto n = t->get("spacing")) cfg.domain_spacing = number(*n, "aniso.spacing");
    if (auto n = t->get("plain_p")) cfg.plain_p = number(*n, "aniso.plain_p");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_toml(const ExperimentConfig& cfg) {
  toml::table root;
  root.insert("command", std::string(command_name(cfg.command)));
  root.insert("seed", static_cast<std::int64_t>(cfg.seed));
  root.insert("cases", static_cast<std::int64_t>(cfg.cases));
  if (cfg.tolerance) root.insert("tolerance", *cfg.tolerance);
  if (cfg.budget) root.insert("budget", *cfg.budget);
  root.insert("output", cfg.output_dir.string());

  toml::table grid;
  toml::array pts;
  for (auto m : cfg.grid.points) pts.push_back(static_cast<std::int64_t>(m));
  grid.insert("dims", static_cast<std::int64_t>(cfg.grid.dims()));
  grid.insert("points", pts);
  grid.insert("half_width", array_of(cfg.grid.half_widths));
  grid.insert("boundary", cfg.grid.boundary == Boundary::periodic ? "periodic" : "truncated");
  root.insert("grid", grid);

  toml::table ex;
  if (!cfg.p.empty()) ex.insert("p", array_of(cfg.p));
  if (!cfg.q.empty()) ex.insert("q", array_of(cfg.q));
  if (!ex.empty()) root.insert("exponents", ex);

  switch (cfg.command) {
    case Command::verify_decay: {
      toml::table d;
      d.insert("gradient", cfg.gradient);
      d.insert("continuity_points", static_cast<std::int64_t>(cfg.continuity_points));
      d.insert("continuity_half_width", cfg.continuity_half_width);
      root.insert("decay", d);
      break;
    }
    case Command::verify_bilinear: {
      toml::array splits;
      for (const auto& s : cfg.splits) {
        toml::table st;
        st.insert("alpha", array_of(s.alpha));
        st.insert("beta", array_of(s.beta));
        st.insert("gamma", array_of(s.gamma));
        splits.push_back(st);
      }
      toml::table b;
      b.insert("splits", splits);
      root.insert("bilinear", b);
      [[fallthrough]];
    }
    case Command::solve:
    case Command::local_solve: {
      const auto& s = cfg.solver;
      toml::table t;
      t.insert("T", s.T);
      t.insert("nodes", static_cast<std::int64_t>(s.nodes));
      t.insert("grading", s.grading);
      t.insert("quadrature", static_cast<std::int64_t>(s.quadrature));
      if (cfg.command != Command::verify_bilinear) {
        t.insert("picard_tol", s.picard_tol);
        t.insert("max_iter", static_cast<std::int64_t>(s.max_iter));
        t.insert("smallness_guard", s.smallness_guard);
        if (s.amplitude) t.insert("amplitude", *s.amplitude);
        else t.insert("amplitude", "auto");
        t.insert("target_product", s.target_product);
        t.insert("scale", s.scale);
        t.insert("oracle_steps", static_cast<std::int64_t>(s.oracle_steps));
        t.insert("oracle_tolerance", s.oracle_tolerance);
        t.insert("save_trajectory", s.save_trajectory);
      }
      root.insert("solver", t);
      break;
    }
    case Command::scaling_check: {
      toml::table t;
      t.insert("lambdas", array_of(cfg.lambdas));
      root.insert("scaling", t);
      break;
    }
    case Command::aniso_demo: {
      toml::table t;
      t.insert("a", cfg.aniso_a);
      t.insert("b", cfg.aniso_b);
      t.insert("half_widths", array_of(cfg.domain_half_widths));
      t.insert("spacing", cfg.domain_spacing);
      t.insert("plain_p", cfg.plain_p);
      root.insert("aniso", t);
      break;
    }
    default:
      break;
  }
  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

// --- presets --------------------------------------------------------------

std::vector<std::string> preset_names() {
  return {"tg2d-small", "tg2d-large-local", "aniso-demo",  "decay-matrix",
          "young-suite", "riesz-suite",     "bilinear-suite", "scaling-suite"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  const double pi = std::numbers::pi;
  auto periodic = [&](std::size_t n, std::size_t m) {
    c.grid = GridSpec{std::vector<std::size_t>(n, m), std::vector<double>(n, pi), Boundary::periodic};
  };
  auto truncated = [&](std::size_t n, double L, std::size_t m) {
    c.grid = GridSpec{std::vector<std::size_t>(n, m), std::vector<double>(n, L), Boundary::truncated};
  };
  c.output_dir = std::string(name) + "-out";
  if (name == "tg2d-small" || name == "tg2d-large-local") {
    // Solver presets are 3-D: no pair p_1, p_2 > 2 has 1/p_1 + 1/p_2 = 1.
    c.command = name == "tg2d-small" ? Command::solve : Command::local_solve;
    periodic(3, 32);
    c.p = {3, 3, 3};
    c.q = {6, 6, 6};
    if (c.command == Command::local_solve) c.solver.scale = 50;
  } else if (name == "aniso-demo") {
    c.command = Command::aniso_demo;
    truncated(3, 8, 32);
    c.p = {8, 16.0 / 7, 16.0 / 7};
  } else if (name == "decay-matrix") {
    c.command = Command::verify_decay;
    truncated(2, 128, 256);
    c.cases = 24;
    c.p = {2, 4};
    c.continuity_points = 1024;
    c.continuity_half_width = 16;
  } else if (name == "young-suite") {
    c.command = Command::verify_young;
    truncated(3, 4, 16);
  } else if (name == "riesz-suite") {
    c.command = Command::verify_riesz;
    periodic(2, 64);
    c.p = {3, 3};
  } else if (name == "bilinear-suite") {
    c.command = Command::verify_bilinear;
    periodic(3, 32);
    c.cases = 2;
    c.p = {3, 3, 3};
    c.q = {6, 6, 6};
    c.splits = {BilinearSplit{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}},
                BilinearSplit{{0.5, 0.5, 0.5}, {1, 1, 1}, {0.5, 0.5, 0.5}},
                BilinearSplit{{0.5, 0.5, 0.5}, {1, 1, 1}, {1, 1, 1}}};
  } else if (name == "scaling-suite") {
    c.command = Command::scaling_check;
    // lambda = 1/2 doubles the support; L = 10 keeps the tails off the edge.
    truncated(3, 10, 160);
    c.cases = 20;
    c.p = {3, 3, 3};
  } else {
    config_error("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

// --- validation -----------------------------------------------------------

void validate(const ExperimentConfig& cfg) {
  const auto& g = cfg.grid;
  const std::size_t n = g.dims();
  require(n >= 1 && n <= 3, ErrorCode::config, "grid: dims must be 1, 2 or 3");
  require(g.half_widths.size() == n, ErrorCode::config, "grid: half_width needs one entry per axis");
  for (std::size_t k = 0; k < n; ++k) {
    require(g.points[k] >= 2, ErrorCode::config, "grid: axis " + std::to_string(k + 1) + " needs >= 2 points");
    require(std::isfinite(g.half_widths[k]) && g.half_widths[k] > 0, ErrorCode::config,
            "grid: axis " + std::to_string(k + 1) + " half width must be positive");
  }
  const double tol = cfg.effective_tolerance();
  require(std::isfinite(tol) && tol >= 0, ErrorCode::config, "tolerance must be finite and >= 0");
  auto need = [](bool ok, const std::string& what) { require(ok, ErrorCode::config, what); };
  auto need_periodic = [&] { need(g.boundary == Boundary::periodic, std::string(command_name(cfg.command)) + " needs a periodic grid"); };
  auto need_truncated = [&] { need(g.boundary == Boundary::truncated, std::string(command_name(cfg.command)) + " needs a truncated grid"); };
  auto exponents = [&](const std::vector<double>& v, const char* name) {
    need(!v.empty(), std::string(command_name(cfg.command)) + " needs exponents." + name);
    require(v.size() == n, ErrorCode::dimension_mismatch,
            std::string("exponents.") + name + " has " + std::to_string(v.size()) + " entries for a " +
                std::to_string(n) + "-D grid");
    for (std::size_t k = 0; k < n; ++k)
      require(v[k] >= 1, ErrorCode::hypothesis,
              "axis " + std::to_string(k + 1) + ": " + name + " = " + std::to_string(v[k]) + " is below 1");
  };

  switch (cfg.command) {
    case Command::verify_young:
      need_truncated();
      need(cfg.cases >= 1, "cases must be positive");
      break;
    case Command::verify_decay:
      need_truncated();
      need(cfg.cases >= 1, "cases must be positive");
      if (cfg.continuity_points > 0) {
        need(cfg.continuity_half_width > 0, "decay.continuity_half_width must be positive");
        const double hc = 2 * cfg.continuity_half_width / static_cast<double>(cfg.continuity_points);
        need(hc * hc <= std::ldexp(1.0, -10),
             "decay: the continuity grid must resolve t = 2^-10 (spacing <= 2^-5)");
        if (!cfg.p.empty()) {
          exponents(cfg.p, "p");
          for (std::size_t k = 0; k < n; ++k)
            require(std::isfinite(cfg.p[k]), ErrorCode::hypothesis,
                    "axis " + std::to_string(k + 1) + ": continuity needs finite p");
        }
      }
      break;
    case Command::verify_riesz:
      need_periodic();
      need(cfg.cases >= 1, "cases must be positive");
      exponents(cfg.p, "p");
      for (std::size_t k = 0; k < n; ++k)
        require(std::isfinite(cfg.p[k]) && cfg.p[k] > 1, ErrorCode::hypothesis,
                "axis " + std::to_string(k + 1) + ": p must lie in (1, inf)");
      need(cfg.effective_budget() > 0, "budget must be positive");
      break;
    case Command::verify_bilinear: {
      need_periodic();
      need(n >= 2, "verify-bilinear needs n >= 2");
      exponents(cfg.p, "p");
      if (!cfg.q.empty()) exponents(cfg.q, "q");
      need(!cfg.splits.empty(), "verify-bilinear needs at least one entry in bilinear.splits");
      auto sc = cfg.solver_config();
      if (cfg.q.empty()) {
        std::vector<double> q2;
        for (double x : cfg.p) q2.push_back(2 * x);
        sc.q = MixedExponents::from_values(q2);
      }
      for (std::size_t k = 0; k < n; ++k)
        require(sc.q[k].value() >= sc.p[k].value() && !sc.q[k].is_infinite(), ErrorCode::hypothesis,
                "axis " + std::to_string(k + 1) + ": need p <= q < inf");
      const double d = sc.delta();
      require(d > 0 && d < 1, ErrorCode::hypothesis, "sum of 1/q_k must lie in (0, 1)");
      for (const auto& s : cfg.splits) validate_bilinear_split(sc.p, s);
      need(cfg.solver.nodes >= 4 && cfg.solver.quadrature >= 1 && cfg.solver.grading > 0 &&
               cfg.solver.grading < 1 && cfg.solver.T > 0,
           "solver: need nodes >= 4, quadrature >= 1, 0 < grading < 1, T > 0");
      need(cfg.effective_budget() > 0, "budget must be positive");
      break;
    }
    case Command::scaling_check:
      need_truncated();
      need(!cfg.lambdas.empty(), "scaling.lambdas is empty");
      for (double l : cfg.lambdas) need(std::isfinite(l) && l > 0, "scaling.lambdas must be positive");
      if (!cfg.p.empty()) exponents(cfg.p, "p");
      break;
    case Command::solve:
    case Command::local_solve: {
      need_periodic();
      require(n >= 3, ErrorCode::hypothesis,
              "solve needs n >= 3: p_k > 2 for every k and sum 1/p_k = 1 has no solution for n = " +
                  std::to_string(n));
      for (std::size_t k = 1; k < n; ++k)
        need(g.half_widths[k] == g.half_widths[0] && g.points[k] == g.points[0],
             "solve needs a cube grid: the Taylor-Green data is only divergence free there");
      exponents(cfg.p, "p");
      exponents(cfg.q, "q");
      cfg.solver_config().validate(n);
      const auto& s = cfg.solver;
      need(!s.amplitude || std::isfinite(*s.amplitude), "solver.amplitude must be finite");
      need(s.target_product > 0 && s.target_product < 1, "solver.target_product must lie in (0, 1)");
      need(std::isfinite(s.scale) && s.scale > 0, "solver.scale must be positive");
      need(s.oracle_tolerance > 0, "solver.oracle_tolerance must be positive");
      break;
    }
    case Command::aniso_demo:
      require(n == 3, ErrorCode::dimension_mismatch, "aniso-demo is three-dimensional");
      exponents(cfg.p, "p");
      for (std::size_t k = 0; k < n; ++k)
        require(std::isfinite(cfg.p[k]), ErrorCode::hypothesis,
                "axis " + std::to_string(k + 1) + ": aniso-demo needs finite p");
      require(cfg.p[1] == cfg.p[2], ErrorCode::hypothesis,
              "aniso-demo treats x' = (x_2, x_3) radially and needs p_2 = p_3");
      need(cfg.aniso_a > 0 && cfg.aniso_b > 0, "aniso.a and aniso.b must be positive");
      need(cfg.domain_half_widths.size() >= 2, "aniso.half_widths needs at least two boxes");
      for (std::size_t i = 0; i < cfg.domain_half_widths.size(); ++i)
        need(cfg.domain_half_widths[i] > 0 && (i == 0 || cfg.domain_half_widths[i] > cfg.domain_half_widths[i - 1]),
             "aniso.half_widths must be positive and increasing");
      need(cfg.domain_spacing > 0, "aniso.spacing must be positive");
      need(cfg.plain_p >= 1 && std::isfinite(cfg.plain_p), "aniso.plain_p must be finite and >= 1");
      break;
  }
}

// --- reports --------------------------------------------------------------

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool Report::passed() const {
  if (cases.empty()) return false;
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

namespace {
nlohmann::json quantities_json(const Quantities& q) {
  auto j = nlohmann::json::object();
  for (const auto& [k, v] : q) j[k] = v;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config_json.empty() ? nlohmann::json(nullptr) : nlohmann::json::parse(config_json);
  j["passed"] = passed();
  auto arr = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json r;
    r["index"] = c.index;
    r["label"] = c.label;
    r["inputs"] = nlohmann::json::parse(c.inputs);
    r["inputs_digest"] = c.inputs_digest;
    r["measured"] = quantities_json(c.measured);
    r["predicted"] = quantities_json(c.predicted);
    r["check"] = c.check;
    r["pass"] = c.pass;
    arr.push_back(std::move(r));
  }
  j["cases"] = std::move(arr);
  j["summary"] = quantities_json(summary);
  j["certificate"] = certificate_json.empty() ? nlohmann::json(nullptr) : nlohmann::json::parse(certificate_json);
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
  std::string out = "index,label,inputs_digest,kind,quantity,value,pass\n";
  for (const auto& c : cases) {
    auto rows = [&](const Quantities& q, const char* kind) {
      for (const auto& [k, v] : q)
        out += std::to_string(c.index) + "," + csv_field(c.label) + "," + c.inputs_digest + "," + kind +
               "," + csv_field(k) + "," + fmt(v) + "," + (c.pass ? "1" : "0") + "\n";
    };
    rows(c.measured, "measured");
    rows(c.predicted, "predicted");
  }
  return out;
}

namespace {
// The config echo: TOML round-tripped into JSON through toml++.
std::string config_echo(const ExperimentConfig& cfg) {
  auto tbl = toml::parse(to_toml(cfg));
  std::ostringstream os;
  os << toml::json_formatter{tbl};
  return os.str();
}
}  // namespace

Report run_suite(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.command = std::string(command_name(cfg.command));
  r.config_json = config_echo(cfg);
  auto out = detail::run_command(cfg);
  r.cases = std::move(out.cases);
  r.summary = std::move(out.summary);
  r.certificate_json = std::move(out.certificate_json);
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int run_experiment(const ExperimentConfig& in, const std::filesystem::path& out, std::string* log) {
  auto say = [&](const std::string& s) {
    if (log) *log += s + "\n";
  };
  ExperimentConfig cfg = in;
  cfg.output_dir = out;
  try {
    validate(cfg);
  } catch (const Error& e) {
    say(std::string("config error: ") + e.what());
    return 2;
  }
  Report r;
  try {
    r = run_suite(cfg);
  } catch (const Error& e) {
    // Raised by the numerics after validation passed.
    say(std::string("numerical failure: ") + e.what());
    r.command = std::string(command_name(cfg.command));
    r.config_json = config_echo(cfg);
    CaseRecord c;
    c.label = "error";
    c.inputs = "{}";
    c.inputs_digest = fnv1a64_hex(c.inputs);
    c.check = std::string("raised: ") + e.what();
    r.cases.push_back(std::move(c));
  }
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    say("cannot create " + out.string() + ": " + ec.message());
    return 2;
  }
  std::ofstream(out / "report.json") << r.to_json();
  std::ofstream(out / "report.csv") << r.to_csv();
  std::size_t failed = 0;
  for (const auto& c : r.cases) failed += c.pass ? 0 : 1;
  say(r.command + ": " + std::to_string(r.cases.size() - failed) + "/" + std::to_string(r.cases.size()) +
      " checks passed; report in " + out.string());
  for (const auto& c : r.cases)
    if (!c.pass) say("  FAIL " + c.label + ": " + c.check);
  return r.passed() ? 0 : 1;
}

}  // namespace mnns
