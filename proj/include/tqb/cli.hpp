#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tqb/problem.hpp"
#include "tqb/selftest.hpp"

namespace tqb::cli {

enum ExitCode : int {
  kSuccess = 0,
  kSelftestFailure = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

using ConfigValue = std::variant<double, std::string, std::vector<double>>;
using ConfigTable = std::map<std::string, ConfigValue, std::less<>>;

/// Parses `key = value` lines. Values are numbers, double-quoted strings or
/// bracketed number lists; `#` starts a comment outside strings.
ConfigTable parse_config(std::string_view text);

/// Settings of one `run` invocation. Preset models take their constants,
/// n, dt, t_end (and L for gray-scott) from `params`. The custom model also
/// reads a1..n2, x0, xN there, plus the initial expressions and the four
/// boundary corners, e.g. bc_u_left = "1:0, 3:0" (order:target pairs).
struct RunConfig {
  std::string model = "linear";
  NamedParams params;
  std::optional<std::string> ic_u;
  std::optional<std::string> ic_v;
  std::map<std::string, std::string> boundary;  // u_left, u_right, v_left, v_right
  std::optional<std::vector<double>> snapshots;
  std::optional<std::vector<double>> probes;
  std::string output = "out";

  void set(const std::string& key, const ConfigValue& value);
};

RunConfig run_config_from(const ConfigTable& table);

struct ResolvedRun {
  ProblemSetup setup;
  SolverConfig config;
  std::optional<Preset> preset;  // absent for the custom model
};

/// Builds the problem and solver settings; throws tqb::Error on any
/// inconsistency.
ResolvedRun resolve(const RunConfig& config);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ConvergeOptions {
  std::string model = "linear";
  double a = 0.1;
  double b = 0.01;
  double d = 1.0;
  int n = 512;
  std::vector<double> dts{0.005, 0.01, 0.02, 0.04};
  double t_end = 1.0;
  std::string output = "out";
};

int cmd_converge(const ConvergeOptions& options, std::ostream& out, std::ostream& err);

int cmd_selftest(const SelftestOptions& options, std::ostream& out, std::ostream& err);

/// Entry point of the command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tqb::cli
