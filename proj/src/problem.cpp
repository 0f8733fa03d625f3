#include "tqb/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tqb/error.hpp"
#include "tqb/expr.hpp"

namespace tqb {

namespace {

const std::vector<std::string>& constant_names(Model model) {
  static const std::vector<std::string> linear{"a", "b", "d"};
  static const std::vector<std::string> brusselator{"eps1", "eps2", "A", "B"};
  static const std::vector<std::string> schnakenberg{"gamma", "a", "b", "d"};
  static const std::vector<std::string> gray_scott{"eps1", "eps2", "f", "k"};
  switch (model) {
    case Model::Linear: return linear;
    case Model::Brusselator: return brusselator;
    case Model::Schnakenberg: return schnakenberg;
    default: return gray_scott;
  }
}

NamedParams default_constants(Model model) {
  switch (model) {
    case Model::Linear: return {{"a", 0.1}, {"b", 0.01}, {"d", 1.0}};
    case Model::Brusselator: return {{"eps1", 1e-4}, {"eps2", 1e-4}, {"A", 1.0}, {"B", 3.4}};
    case Model::Schnakenberg:
      return {{"gamma", 1e4}, {"a", 0.126779}, {"b", 0.792366}, {"d", 10.0}};
    default: return {{"eps1", 1.0}, {"eps2", 0.01}, {"f", 9.0}, {"k", -8.6}};
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

InitialCondition from_expressions(const std::string& u_src, const std::string& v_src) {
  Expression u = parse(u_src);
  Expression v = parse(v_src);
  return {u, v, u_src, v_src};
}

const std::vector<std::string>& model_constant_names(Model model) { return constant_names(model); }

Model model_from_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  key.erase(std::remove_if(key.begin(), key.end(),
                           [](char ch) { return ch == '-' || ch == '_'; }),
            key.end());
  if (key == "linear") return Model::Linear;
  if (key == "brusselator") return Model::Brusselator;
  if (key == "schnakenberg") return Model::Schnakenberg;
  if (key == "grayscott") return Model::GrayScott;
  throw Error(Errc::unknown_model, "unknown model '" + std::string(name) + "'");
}

std::string_view model_name(Model model) {
  switch (model) {
    case Model::Linear: return "linear";
    case Model::Brusselator: return "brusselator";
    case Model::Schnakenberg: return "schnakenberg";
    default: return "gray-scott";
  }
}

RDCoefficients coefficients_from_table(Model model, const NamedParams& params) {
  const auto& names = constant_names(model);
  for (const auto& [key, value] : params)
    if (std::find(names.begin(), names.end(), key) == names.end())
      throw Error(Errc::unknown_parameter, "parameter '" + key + "' is not a constant of model " +
                                               std::string(model_name(model)));
  auto get = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
      throw Error(Errc::missing_parameter, "model " + std::string(model_name(model)) +
                                               " needs parameter '" + key + "'");
    return it->second;
  };

  RDCoefficients c;
  switch (model) {
    case Model::Linear: {
      const double a = get("a"), b = get("b"), d = get("d");
      c.a1 = d;
      c.a2 = d;
      c.b1 = -a;
      c.c1 = 1.0;
      c.c2 = -b;
      break;
    }
    case Model::Brusselator: {
      const double A = get("A"), B = get("B");
      c.a1 = get("eps1");
      c.a2 = get("eps2");
      c.b1 = -(B + 1.0);
      c.b2 = B;
      c.d1 = 1.0;
      c.d2 = -1.0;
      c.n1 = A;
      break;
    }
    case Model::Schnakenberg: {
      const double gamma = get("gamma");
      c.a1 = 1.0;
      c.a2 = get("d");
      c.b1 = -gamma;
      c.d1 = gamma;
      c.d2 = -gamma;
      c.n1 = gamma * get("a");
      c.n2 = gamma * get("b");
      break;
    }
    case Model::GrayScott: {
      const double f = get("f"), k = get("k");
      c.a1 = get("eps1");
      c.a2 = get("eps2");
      c.b1 = -f;
      c.c2 = -(f + k);
      c.m1 = -1.0;
      c.m2 = 1.0;
      c.n1 = f;
      break;
    }
  }
  if (c.a1 < 0.0 || c.a2 < 0.0)
    throw Error(Errc::invalid_argument, "diffusion coefficients must be non-negative");
  return c;
}

Reaction reaction_eval(const RDCoefficients& c, double u, double v) {
  const double u2v = u * u * v;
  const double uv = u * v;
  const double uv2 = u * v * v;
  return {c.b1 * u + c.c1 * v + c.d1 * u2v + c.e1 * uv + c.m1 * uv2 + c.n1,
          c.b2 * u + c.c2 * v + c.d2 * u2v + c.e2 * uv + c.m2 * uv2 + c.n2};
}

void BoundaryPlan::validate() const {
  if (conditions.size() != 8)
    throw Error(Errc::invalid_boundary_plan,
                "boundary plan needs 8 conditions, got " + std::to_string(conditions.size()));
  for (const auto& bc : conditions)
    if (bc.order < 0 || bc.order > 3)
      throw Error(Errc::invalid_boundary_plan, "boundary order must be in 0..3");
  for (Species s : {Species::U, Species::V})
    for (Side side : {Side::Left, Side::Right}) {
      std::vector<int> orders;
      for (const auto& bc : conditions)
        if (bc.species == s && bc.side == side) orders.push_back(bc.order);
      if (orders.size() != 2 || orders[0] == orders[1])
        throw Error(Errc::invalid_boundary_plan,
                    "each species and side needs two conditions of distinct order");
    }
}

std::array<BoundaryCondition, 2> BoundaryPlan::corner(Species s, Side side) const {
  std::vector<BoundaryCondition> found;
  for (const auto& bc : conditions)
    if (bc.species == s && bc.side == side) found.push_back(bc);
  if (found.size() != 2)
    throw Error(Errc::invalid_boundary_plan, "corner does not hold exactly two conditions");
  return {found[0], found[1]};
}

BoundaryPlan symmetric_plan(std::array<std::pair<int, double>, 2> left_u,
                            std::array<std::pair<int, double>, 2> left_v,
                            std::array<std::pair<int, double>, 2> right_u,
                            std::array<std::pair<int, double>, 2> right_v) {
  BoundaryPlan plan;
  auto add = [&](Species s, Side side, const std::array<std::pair<int, double>, 2>& pair) {
    for (const auto& [order, target] : pair) plan.conditions.push_back({s, side, order, target});
  };
  add(Species::U, Side::Left, left_u);
  add(Species::V, Side::Left, left_v);
  add(Species::U, Side::Right, right_u);
  add(Species::V, Side::Right, right_v);
  plan.validate();
  return plan;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !(dt <= t_end))
    throw Error(Errc::invalid_argument, "solver config needs 0 < dt <= t_end");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end)
      throw Error(Errc::invalid_argument, "snapshot time outside [0, t_end]");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw Error(Errc::invalid_argument, "snapshot times must be sorted");
}

LinearSolution analytic_linear(double x, double t, double a, double b, double d) {
  const double eu = std::exp(-(a + d) * t);
  const double ev = std::exp(-(b + d) * t);
  return {(eu + ev) * std::cos(x), (a - b) * ev * std::cos(x)};
}

Preset preset(Model model, const NamedParams& overrides) {
  Preset p;
  p.model = model;
  p.constants = default_constants(model);

  NamedParams run;
  const auto& names = constant_names(model);
  for (const auto& [key, value] : overrides) {
    if (std::find(names.begin(), names.end(), key) != names.end())
      p.constants[key] = value;
    else if (key == "n" || key == "dt" || key == "t_end" ||
             (key == "L" && model == Model::GrayScott))
      run[key] = value;
    else
      throw Error(Errc::unknown_parameter, "unknown override '" + key + "' for model " +
                                               std::string(model_name(model)));
  }
  auto pick = [&](const char* key, double fallback) {
    auto it = run.find(key);
    return it == run.end() ? fallback : it->second;
  };

  ProblemSetup& s = p.setup;
  s.coefficients = coefficients_from_table(model, p.constants);
  s.label = std::string(model_name(model));
  SolverConfig& cfg = p.config;

  switch (model) {
    case Model::Linear: {
      const double a = p.constants.at("a"), b = p.constants.at("b"), d = p.constants.at("d");
      s.mesh = make_mesh(0.0, std::numbers::pi / 2, static_cast<int>(pick("n", 512)));
      // U' = U''' = 0 at x = 0 and U = U'' = 0 at x = pi/2 hold for the
      // analytic solution at all times.
      s.boundary = symmetric_plan({{{1, 0.0}, {3, 0.0}}}, {{{1, 0.0}, {3, 0.0}}},
                                  {{{0, 0.0}, {2, 0.0}}}, {{{0, 0.0}, {2, 0.0}}});
      s.initial.u = [=](double x) { return analytic_linear(x, 0.0, a, b, d).u; };
      s.initial.v = [=](double x) { return analytic_linear(x, 0.0, a, b, d).v; };
      s.initial.u_source = "(exp(-(a+d)t)+exp(-(b+d)t))cos(x) at t=0";
      s.initial.v_source = "(a-b)exp(-(b+d)t)cos(x) at t=0";
      cfg.dt = pick("dt", 0.01);
      cfg.t_end = pick("t_end", 1.0);
      cfg.snapshot_times = {0.0, cfg.t_end};
      cfg.probe_points = {0.0};
      break;
    }
    case Model::Brusselator: {
      s.mesh = make_mesh(0.0, 1.0, static_cast<int>(pick("n", 200)));
      s.boundary = symmetric_plan({{{2, 0.0}, {3, 0.0}}}, {{{2, 0.0}, {3, 0.0}}},
                                  {{{2, 0.0}, {3, 0.0}}}, {{{2, 0.0}, {3, 0.0}}});
      s.initial = from_expressions("0.5", "1+5*x");
      cfg.dt = pick("dt", 0.01);
      cfg.t_end = pick("t_end", 15.0);
      cfg.snapshot_times = {3.0, 6.0, 10.8, 13.8};
      cfg.probe_points = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
      break;
    }
    case Model::Schnakenberg: {
      s.mesh = make_mesh(-1.0, 1.0, static_cast<int>(pick("n", 100)));
      s.boundary = symmetric_plan({{{1, 0.0}, {3, 0.0}}}, {{{1, 0.0}, {3, 0.0}}},
                                  {{{1, 0.0}, {3, 0.0}}}, {{{1, 0.0}, {3, 0.0}}});
      s.initial = from_expressions("0.919145+0.001*sum(j,1,25,cos(2*pi*j*x)/j)",
                                   "0.937903+0.001*sum(j,1,25,cos(2*pi*j*x)/j)");
      cfg.dt = pick("dt", 5e-5);
      cfg.t_end = pick("t_end", 2.5);
      cfg.snapshot_times = {cfg.t_end};
      cfg.probe_points = {0.0};
      break;
    }
    case Model::GrayScott: {
      const double L = pick("L", 50.0);
      s.mesh = make_mesh(-L, L, static_cast<int>(pick("n", 400)));
      s.boundary = symmetric_plan({{{0, 1.0}, {1, 0.0}}}, {{{0, 0.0}, {1, 0.0}}},
                                  {{{0, 1.0}, {1, 0.0}}}, {{{0, 0.0}, {1, 0.0}}});
      const std::string phase = "sin(pi*(x-" + num(L) + ")/(2*" + num(L) + "))^100";
      s.initial = from_expressions("1-0.5*" + phase, "0.25*" + phase);
      cfg.dt = pick("dt", 0.2);
      cfg.t_end = pick("t_end", 1000.0);
      cfg.snapshot_times = {100.0, 500.0, 1000.0};
      cfg.snapshot_times.erase(
          std::remove_if(cfg.snapshot_times.begin(), cfg.snapshot_times.end(),
                         [&](double t) { return t > cfg.t_end; }),
          cfg.snapshot_times.end());
      if (cfg.snapshot_times.empty() || cfg.snapshot_times.back() != cfg.t_end)
        cfg.snapshot_times.push_back(cfg.t_end);
      cfg.probe_points = {0.0};
      break;
    }
  }
  if (model != Model::GrayScott) {
    auto& snaps = cfg.snapshot_times;
    snaps.erase(std::remove_if(snaps.begin(), snaps.end(),
                               [&](double t) { return t > cfg.t_end; }),
                snaps.end());
  }
  cfg.validate();
  return p;
}

}  // namespace tqb
