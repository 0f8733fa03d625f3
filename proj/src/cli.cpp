#include "tqb/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tqb/diagnostics.hpp"
#include "tqb/error.hpp"
#include "tqb/stepper.hpp"

namespace tqb::cli {

namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Error config_error(const std::string& what) { return Error(Errc::config, what); }

ConfigValue parse_value(std::string_view raw, int line) {
  const std::string where = "line " + std::to_string(line) + ": ";
  if (raw.empty()) throw config_error(where + "missing value");
  if (raw.front() == '"') {
    const auto close = raw.find('"', 1);
    if (close == std::string_view::npos) throw config_error(where + "unterminated string");
    if (!trim(raw.substr(close + 1)).empty())
      throw config_error(where + "unexpected text after string");
    return std::string(raw.substr(1, close - 1));
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw config_error(where + "list must end with ']'");
    std::vector<double> list;
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      double v = 0.0;
      if (!parse_number(body.substr(0, comma), v))
        throw config_error(where + "list entries must be numbers");
      list.push_back(v);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
      if (body.empty()) throw config_error(where + "trailing comma in list");
    }
    return list;
  }
  double v = 0.0;
  if (!parse_number(raw, v))
    throw config_error(where + "value '" + std::string(raw) + "' is not a number");
  return v;
}

const std::vector<std::string>& custom_coefficient_names() {
  static const std::vector<std::string> names{"a1", "a2", "b1", "b2", "c1", "c2", "d1",
                                              "d2", "e1", "e2", "m1", "m2", "n1", "n2"};
  return names;
}

double& coefficient_slot(RDCoefficients& c, const std::string& name) {
  double* slots[] = {&c.a1, &c.a2, &c.b1, &c.b2, &c.c1, &c.c2, &c.d1,
                     &c.d2, &c.e1, &c.e2, &c.m1, &c.m2, &c.n1, &c.n2};
  const auto& names = custom_coefficient_names();
  const auto it = std::find(names.begin(), names.end(), name);
  return *slots[it - names.begin()];
}

std::vector<BoundaryCondition> parse_corner(const std::string& text, Species s, Side side,
                                            const std::string& key) {
  std::vector<BoundaryCondition> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto colon = item.find(':');
    double order = 0.0, target = 0.0;
    if (colon == std::string_view::npos || !parse_number(item.substr(0, colon), order) ||
        !parse_number(item.substr(colon + 1), target) || order != std::floor(order))
      throw config_error(key + ": expected 'order:target' pairs, got '" + std::string(item) +
                         "'");
    out.push_back({s, side, static_cast<int>(order), target});
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (out.size() != 2) throw config_error(key + ": needs exactly two conditions");
  return out;
}

ResolvedRun resolve_custom(const RunConfig& config) {
  NamedParams params = config.params;
  auto take = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end())
      throw Error(Errc::missing_parameter, std::string("custom model needs '") + key + "'");
    const double v = it->second;
    params.erase(it);
    return v;
  };
  ResolvedRun r;
  const double x0 = take("x0");
  const double xN = take("xN");
  const double n = take("n");
  if (n != std::floor(n) || n > 1e7) throw config_error("n must be an integer");
  r.setup.mesh = make_mesh(x0, xN, static_cast<int>(n));
  r.config.dt = take("dt");
  r.config.t_end = take("t_end");
  for (const auto& name : custom_coefficient_names()) {
    const auto it = params.find(name);
    if (it == params.end()) continue;
    coefficient_slot(r.setup.coefficients, name) = it->second;
    params.erase(it);
  }
  if (!params.empty())
    throw Error(Errc::unknown_parameter,
                "unknown key '" + params.begin()->first + "' for the custom model");

  if (!config.ic_u || !config.ic_v)
    throw Error(Errc::missing_parameter, "custom model needs ic_u and ic_v");
  r.setup.initial = from_expressions(*config.ic_u, *config.ic_v);

  const std::pair<const char*, std::pair<Species, Side>> corners[] = {
      {"u_left", {Species::U, Side::Left}},
      {"u_right", {Species::U, Side::Right}},
      {"v_left", {Species::V, Side::Left}},
      {"v_right", {Species::V, Side::Right}}};
  for (const auto& [name, where] : corners) {
    const auto it = config.boundary.find(name);
    if (it == config.boundary.end())
      throw Error(Errc::missing_parameter, std::string("custom model needs bc_") + name);
    for (const auto& bc : parse_corner(it->second, where.first, where.second,
                                       std::string("bc_") + name))
      r.setup.boundary.conditions.push_back(bc);
  }
  r.setup.boundary.validate();
  r.setup.label = "custom";
  r.config.snapshot_times = {r.config.t_end};
  return r;
}

void write_snapshots(const fs::path& path, const Trajectory& traj, const UniformMesh& mesh) {
  std::ofstream f(path);
  f << "t,x,u,v\n";
  for (const auto& s : traj.snapshots)
    for (int m = 0; m <= mesh.n; ++m) {
      const double x = m == mesh.n ? mesh.xN : mesh.knot(m);
      f << g17(s.t) << ',' << g17(x) << ',' << g17(s.u[m]) << ',' << g17(s.v[m]) << '\n';
    }
  if (!f) throw config_error("cannot write " + path.string());
}

void write_probes(const fs::path& path, const Trajectory& traj) {
  std::ofstream f(path);
  f << "t,x,u,v\n";
  if (!traj.probes.empty()) {
    const std::size_t count = traj.probes.front().samples.size();
    for (std::size_t k = 0; k < count; ++k)
      for (const auto& p : traj.probes) {
        const auto& s = p.samples[k];
        f << g17(s.t) << ',' << g17(p.x) << ',' << g17(s.u) << ',' << g17(s.v) << '\n';
      }
  }
  if (!f) throw config_error("cannot write " + path.string());
}

int count_maxima(const Eigen::VectorXd& profile) {
  const double range = profile.maxCoeff() - profile.minCoeff();
  if (!(range > 1e-8)) return 0;
  return count_interior_maxima(profile, 0.05 * range);
}

void write_report(const fs::path& path, const ResolvedRun& r, const Trajectory& traj) {
  std::ofstream f(path);
  f << "model: " << r.setup.label << '\n';
  f << "domain: [" << g17(r.setup.mesh.x0) << ", " << g17(r.setup.mesh.xN) << "]\n";
  f << "n: " << r.setup.mesh.n << '\n';
  f << "dt: " << g17(r.config.dt) << '\n';
  f << "t_end: " << g17(r.config.t_end) << '\n';
  f << "steps: " << traj.steps << '\n';
  f << "initial_u: " << r.setup.initial.u_source << '\n';
  f << "initial_v: " << r.setup.initial.v_source << '\n';

  double worst = traj.final.boundary_residual;
  for (const auto& s : traj.snapshots) worst = std::max(worst, s.boundary_residual);
  f << "max_boundary_residual: " << g17(worst) << '\n';

  if (traj.steps > 0) {
    f << "final_relative_error_u: " << g17(relative_error(traj.previous.u, traj.final.u)) << '\n';
    f << "final_relative_error_v: " << g17(relative_error(traj.previous.v, traj.final.v)) << '\n';
  }
  if (r.preset && r.preset->model == Model::Linear) {
    const ErrorReport e = linear_error(*r.preset, traj);
    f << "l2_u: " << g17(e.u.l2) << '\n';
    f << "linf_u: " << g17(e.u.linf) << '\n';
    f << "l2_v: " << g17(e.v.l2) << '\n';
    f << "linf_v: " << g17(e.v.linf) << '\n';
  }
  for (const auto& s : traj.snapshots)
    f << "snapshot t=" << g17(s.t) << ": maxima_u=" << count_maxima(s.u)
      << " maxima_v=" << count_maxima(s.v) << '\n';
  for (const auto& p : traj.probes) {
    std::vector<TimeValue> series;
    series.reserve(p.samples.size());
    for (const auto& s : p.samples) series.push_back({s.t, s.u});
    f << "probe x=" << g17(p.x) << ": period_u=";
    try {
      f << g17(estimate_period(series)) << '\n';
    } catch (const Error&) {
      f << "n/a\n";
    }
  }
  if (!f) throw config_error("cannot write " + path.string());
}

void write_plot(const fs::path& path, const ResolvedRun& r, const Trajectory& traj) {
  std::ofstream f(path);
  f << "# gnuplot 5 script; run from this directory\n";
  f << "set datafile separator ','\n";
  f << "set terminal svg size 1000,600\n";
  f << "set key outside right\n";
  f << "set xlabel 'x'\n";
  for (const char* species : {"u", "v"}) {
    const int column = species[0] == 'u' ? 3 : 4;
    f << "set output 'snapshots_" << species << ".svg'\n";
    f << "set ylabel '" << species << "'\n";
    f << "set title '" << r.setup.label << ": " << species << " profiles'\n";
    f << "plot";
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const std::string t = g17(traj.snapshots[i].t);
      f << (i ? ", \\\n    " : " ") << "'snapshots.csv' every ::1 using 2:($1==" << t << " ? $"
        << column << " : 1/0) with lines title 't=" << short_num(traj.snapshots[i].t) << "'";
    }
    if (traj.snapshots.empty()) f << " NaN notitle";
    f << '\n';
  }
  if (!traj.probes.empty()) {
    f << "set output 'probes.svg'\n";
    f << "set xlabel 't'\n";
    f << "set ylabel 'u'\n";
    f << "set title '" << r.setup.label << ": u at probe points'\n";
    f << "plot";
    for (std::size_t i = 0; i < traj.probes.size(); ++i) {
      const std::string x = g17(traj.probes[i].x);
      f << (i ? ", \\\n    " : " ") << "'probes.csv' every ::1 using 1:($2==" << x
        << " ? $3 : 1/0) with lines title 'x=" << short_num(traj.probes[i].x) << "'";
    }
    f << '\n';
  }
  f << "unset output\n";
  if (!f) throw config_error("cannot write " + path.string());
}

void print_results(const std::vector<CheckResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    out << to_string(r.status) << ' ' << r.name;
    if (r.h > 0.0) out << " h=" << short_num(r.h);
    out << ": " << r.detail << '\n';
  }
}

}  // namespace

ConfigTable parse_config(std::string_view text) {
  ConfigTable table;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string_view content = trim(std::string_view(raw).substr(0, cut));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos)
      throw config_error("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key(trim(content.substr(0, eq)));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](unsigned char c) {
          return std::isalnum(c) || c == '_';
        }))
      throw config_error("line " + std::to_string(line) + ": invalid key '" + key + "'");
    if (table.count(key))
      throw config_error("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    table.emplace(key, parse_value(trim(content.substr(eq + 1)), line));
  }
  return table;
}

void RunConfig::set(const std::string& key, const ConfigValue& value) {
  auto text = [&]() -> std::string {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    throw config_error("'" + key + "' expects a quoted string");
  };
  auto list = [&]() -> std::vector<double> {
    if (const auto* l = std::get_if<std::vector<double>>(&value)) return *l;
    if (const auto* d = std::get_if<double>(&value)) return {*d};
    throw config_error("'" + key + "' expects a list of numbers");
  };
  if (key == "model") {
    model = text();
  } else if (key == "output") {
    output = text();
  } else if (key == "ic_u") {
    ic_u = text();
  } else if (key == "ic_v") {
    ic_v = text();
  } else if (key.rfind("bc_", 0) == 0) {
    const std::string corner = key.substr(3);
    if (corner != "u_left" && corner != "u_right" && corner != "v_left" && corner != "v_right")
      throw config_error("unknown boundary key '" + key + "'");
    boundary[corner] = text();
  } else if (key == "snapshots") {
    snapshots = list();
  } else if (key == "probes") {
    probes = list();
  } else if (const auto* d = std::get_if<double>(&value)) {
    params[key] = *d;
  } else {
    throw config_error("'" + key + "' expects a number");
  }
}

RunConfig run_config_from(const ConfigTable& table) {
  RunConfig config;
  for (const auto& [key, value] : table) config.set(key, value);
  return config;
}

ResolvedRun resolve(const RunConfig& config) {
  ResolvedRun r;
  if (lower(config.model) == "custom") {
    r = resolve_custom(config);
  } else {
    if (config.ic_u || config.ic_v || !config.boundary.empty())
      throw config_error("initial and boundary expressions apply to the custom model only");
    const Model model = model_from_name(config.model);
    if (const auto it = config.params.find("n");
        it != config.params.end() && it->second != std::floor(it->second))
      throw config_error("n must be an integer");
    Preset p = preset(model, config.params);
    r.setup = p.setup;
    r.config = p.config;
    r.preset = std::move(p);
  }
  if (config.snapshots) r.config.snapshot_times = *config.snapshots;
  if (config.probes) r.config.probe_points = *config.probes;
  for (double x : r.config.probe_points)
    if (x < r.setup.mesh.x0 || x > r.setup.mesh.xN)
      throw config_error("probe point " + short_num(x) + " lies outside the domain");
  r.config.validate();
  return r;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ResolvedRun r;
  try {
    r = resolve(config);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  Trajectory traj;
  try {
    traj = run(r.setup, r.config);
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  try {
    const fs::path dir(config.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw config_error("cannot create " + dir.string() + ": " + ec.message());
    write_snapshots(dir / "snapshots.csv", traj, r.setup.mesh);
    write_probes(dir / "probes.csv", traj);
    write_report(dir / "report.txt", r, traj);
    write_plot(dir / "plot.gp", r, traj);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  out << r.setup.label << ": " << traj.steps << " steps to t=" << short_num(r.config.t_end)
      << ", output in " << config.output << '\n';
  return kSuccess;
}

int cmd_converge(const ConvergeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (model_from_name(options.model) != Model::Linear)
      throw config_error("model '" + options.model +
                         "' has no analytic solution; convergence studies need 'linear'");
    if (options.dts.empty()) throw config_error("at least one time step is required");
    for (double dt : options.dts)
      if (!(dt > 0.0) || dt > options.t_end)
        throw config_error("time steps must lie in (0, t_end]");
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  ConvergenceTable table;
  try {
    table = convergence_study(options.a, options.b, options.d, options.n, options.dts,
                              options.t_end);
  } catch (const Error& e) {
    const bool config_side = e.code() != Errc::singular_matrix &&
                             e.code() != Errc::evaluation_domain;
    err << (config_side ? "configuration error: " : "numerical failure: ") << e.what() << '\n';
    return config_side ? kConfigError : kNumericalFailure;
  }

  const fs::path dir(options.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(dir / "convergence.csv");
  if (ec || !f) {
    err << "configuration error: cannot write " << (dir / "convergence.csv").string() << '\n';
    return kConfigError;
  }
  auto field = [](double v) { return std::isnan(v) ? std::string("nan") : g17(v); };
  f << "dt,l2_u,linf_u,l2_v,linf_v,order_u,order_v\n";
  out << "dt          l2_u          linf_u        l2_v          linf_v        order_u  order_v\n";
  for (const auto& row : table.rows) {
    f << g17(row.dt) << ',' << g17(row.u.l2) << ',' << g17(row.u.linf) << ',' << g17(row.v.l2)
      << ',' << g17(row.v.linf) << ',' << field(row.order_u) << ',' << field(row.order_v)
      << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%-10g  %-12.6e  %-12.6e  %-12.6e  %-12.6e  %-7.3f  %-7.3f\n",
                  row.dt, row.u.l2, row.u.linf, row.v.l2, row.v.linf, row.order_u, row.order_v);
    out << line;
  }
  if (!f) {
    err << "configuration error: cannot write convergence.csv\n";
    return kConfigError;
  }
  return kSuccess;
}

int cmd_selftest(const SelftestOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_selftest(options);
  } catch (const Error& e) {
    err << "selftest aborted: " << e.what() << '\n';
    return kSelftestFailure;
  }
  print_results(results, out);
  const bool ok = all_passed(results);
  out << (ok ? "all checks passed\n" : "some checks failed\n");
  return ok ? kSuccess : kSelftestFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trigonometric quintic B-spline collocation solver for two-species "
               "reaction-diffusion systems",
               "tqb"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Simulate a preset or custom model");
  std::string config_path, model, output;
  int n = 0;
  double dt = 0.0, t_end = 0.0;
  std::vector<double> snapshots, probes;
  std::vector<std::string> settings;
  run_cmd->add_option("-c,--config", config_path, "key = value configuration file");
  auto* model_opt = run_cmd->add_option(
      "-m,--model", model, "linear, brusselator, schnakenberg, gray-scott or custom");
  auto* n_opt = run_cmd->add_option("-n,--n", n, "number of mesh intervals");
  auto* dt_opt = run_cmd->add_option("--dt", dt, "time step");
  auto* t_end_opt = run_cmd->add_option("--t-end", t_end, "final time");
  auto* snap_opt = run_cmd->add_option("--snapshots", snapshots, "snapshot times")
                       ->delimiter(',');
  auto* probe_opt = run_cmd->add_option("--probes", probes, "probe positions")->delimiter(',');
  auto* out_opt = run_cmd->add_option("-o,--output", output, "output directory");
  run_cmd->add_option("--set", settings, "extra key=value setting (repeatable)");

  auto* conv_cmd = app.add_subcommand("converge", "Error norms of the linear model against "
                                                  "its closed-form solution");
  ConvergeOptions conv;
  conv_cmd->add_option("--model", conv.model, "must be linear")->capture_default_str();
  conv_cmd->add_option("--a", conv.a, "reaction constant a")->capture_default_str();
  conv_cmd->add_option("--b", conv.b, "reaction constant b")->capture_default_str();
  conv_cmd->add_option("--d", conv.d, "diffusion constant d")->capture_default_str();
  conv_cmd->add_option("--n", conv.n, "number of mesh intervals")->capture_default_str();
  conv_cmd->add_option("--dts", conv.dts, "time steps")->delimiter(',');
  conv_cmd->add_option("--t-end", conv.t_end, "final time")->capture_default_str();
  conv_cmd->add_option("-o,--output", conv.output, "output directory")->capture_default_str();

  auto* self_cmd = app.add_subcommand("selftest", "Basis and linear algebra property checks");
  SelftestOptions self;
  self_cmd->add_option("--spacings", self.h_grid, "knot spacings to check")->delimiter(',');
  self_cmd->add_option("--systems", self.random_systems, "random banded systems")
      ->capture_default_str();
  self_cmd->add_option("--seed", self.seed, "random seed")->capture_default_str();
  self_cmd->add_option("--perturb-alpha", self.alpha_perturbation)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  if (*conv_cmd) return cmd_converge(conv, out, err);
  if (*self_cmd) return cmd_selftest(self, out, err);

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw config_error("cannot read " + config_path);
      std::stringstream buf;
      buf << f.rdbuf();
      config = run_config_from(parse_config(buf.str()));
    }
    if (*model_opt) config.model = model;
    if (*n_opt) config.params["n"] = n;
    if (*dt_opt) config.params["dt"] = dt;
    if (*t_end_opt) config.params["t_end"] = t_end;
    if (*snap_opt) config.snapshots = snapshots;
    if (*probe_opt) config.probes = probes;
    if (*out_opt) config.output = output;
    for (const auto& s : settings)
      for (const auto& [key, value] : parse_config(s)) config.set(key, value);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  return cmd_run(config, out, err);
}

}  // namespace tqb::cli
