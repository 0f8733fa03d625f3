#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tqb/cli.hpp"
#include "tqb/error.hpp"

using namespace tqb;
using namespace tqb::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "tqb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tqb_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}

}  // namespace

TEST_CASE("config parsing") {
  const ConfigTable t = parse_config(
      "# comment\nmodel = \"brusselator\"  # trailing\nn = 64\nsnapshots = [1, 2.5]\n"
      "ic_u = \"a#b\"\n\n");
  CHECK(std::get<std::string>(t.at("model")) == "brusselator");
  CHECK(std::get<double>(t.at("n")) == 64);
  CHECK(std::get<std::vector<double>>(t.at("snapshots")) == std::vector<double>{1, 2.5});
  CHECK(std::get<std::string>(t.at("ic_u")) == "a#b");

  auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  CHECK(error_of("n = 1\nn = 2\n").find("line 2") != std::string::npos);
  CHECK(error_of("a = 1\nb = twelve\n").find("line 2") != std::string::npos);
  CHECK(error_of("c = \"open\n").find("line 1") != std::string::npos);
  CHECK(error_of("d = [1, 2,]\n").find("line 1") != std::string::npos);
  CHECK(error_of("novalue\n").find("line 1") != std::string::npos);
}

TEST_CASE("resolve applies overrides and rejects inconsistencies") {
  RunConfig c;
  c.model = "schnakenberg";
  c.params = {{"n", 50}, {"dt", 1e-3}, {"t_end", 0.1}};
  const ResolvedRun r = resolve(c);
  CHECK(r.setup.mesh.n == 50);
  CHECK(r.config.dt == 1e-3);
  c.ic_u = "1";
  CHECK_THROWS_AS(resolve(c), Error);
  c.ic_u.reset();
  c.probes = std::vector<double>{5.0};
  CHECK_THROWS_AS(resolve(c), Error);
}

TEST_CASE("selftest exit codes") {
  const Result ok = call({"selftest"});
  CHECK(ok.code == kSuccess);
  CHECK(ok.out.find("PASS banded-vs-dense") != std::string::npos);

  const Result bad = call({"selftest", "--spacings", "0.01,1.3", "--perturb-alpha", "1e-6"});
  CHECK(bad.code == kSelftestFailure);
  CHECK(bad.out.find("FAIL stencil-closed-form") != std::string::npos);
  CHECK(bad.out.find("REJECTED basis h=1.3") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(call({"run", "--model", "lorenz"}).code == kConfigError);
  CHECK(call({"run", "--bogus"}).code == kConfigError);
  CHECK(call({"converge", "--model", "brusselator"}).code == kConfigError);
  CHECK(call({"run", "--model", "linear", "--set", "q=1"}).code == kConfigError);

  const fs::path dir = scratch("badexpr");
  std::ofstream(dir / "run.cfg")
      << "model = \"custom\"\nx0 = 0\nxN = 1\nn = 20\ndt = 0.01\nt_end = 0.1\na1 = 1\na2 = 1\n"
         "ic_u = \"sin(x\"\nic_v = \"0\"\nbc_u_left = \"1:0, 3:0\"\nbc_u_right = \"1:0, 3:0\"\n"
         "bc_v_left = \"1:0, 3:0\"\nbc_v_right = \"1:0, 3:0\"\n";
  const Result r = call({"run", "-c", (dir / "run.cfg").string(), "-o", (dir / "out").string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("offset 5") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("numerical failures exit with 3") {
  const fs::path dir = scratch("nan");
  std::ofstream(dir / "run.cfg")
      << "model = \"custom\"\nx0 = 0\nxN = 1\nn = 20\ndt = 0.01\nt_end = 0.1\na1 = 1\na2 = 1\n"
         "ic_u = \"1/x\"\nic_v = \"0\"\nbc_u_left = \"1:0, 3:0\"\nbc_u_right = \"1:0, 3:0\"\n"
         "bc_v_left = \"1:0, 3:0\"\nbc_v_right = \"1:0, 3:0\"\n";
  CHECK(call({"run", "-c", (dir / "run.cfg").string(), "-o", (dir / "out").string()}).code ==
        kNumericalFailure);
}

TEST_CASE("run writes reproducible outputs") {
  const fs::path dir = scratch("run");
  const std::vector<std::string> base{"run", "--model", "brusselator", "-n", "40", "--t-end",
                                      "2", "--snapshots", "1,2", "--probes", "0,0.4"};
  auto with_out = [&](const std::string& sub) {
    auto a = base;
    a.push_back("-o");
    a.push_back((dir / sub).string());
    return a;
  };
  REQUIRE(call(with_out("a")).code == kSuccess);
  REQUIRE(call(with_out("b")).code == kSuccess);
  for (const char* f : {"snapshots.csv", "probes.csv", "report.txt", "plot.gp"}) {
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(first_line(dir / "a" / "snapshots.csv") == "t,x,u,v");
  CHECK(first_line(dir / "a" / "probes.csv") == "t,x,u,v");
  const std::string report = slurp(dir / "a" / "report.txt");
  CHECK(report.find("model: brusselator") != std::string::npos);
  CHECK(report.find("max_boundary_residual") != std::string::npos);
  // 2 snapshots of 41 knots plus the header
  std::ifstream snaps(dir / "a" / "snapshots.csv");
  int lines = 0;
  for (std::string l; std::getline(snaps, l);) ++lines;
  CHECK(lines == 83);
}

TEST_CASE("run from a config file with a custom model") {
  const fs::path dir = scratch("custom");
  std::ofstream(dir / "run.cfg")
      << "model = \"custom\"\nx0 = 0\nxN = 1\nn = 32\ndt = 0.01\nt_end = 0.2\n"
         "a1 = 0.01\na2 = 0.01\nb1 = -1\nc2 = -1\n"
         "ic_u = \"1+0.1*cos(pi*x)\"\nic_v = \"sum(j,1,3,cos(j*pi*x)/j)\"\n"
         "bc_u_left = \"1:0, 3:0\"\nbc_u_right = \"1:0, 3:0\"\n"
         "bc_v_left = \"1:0, 3:0\"\nbc_v_right = \"1:0, 3:0\"\nprobes = [0.5]\n";
  const Result r = call({"run", "-c", (dir / "run.cfg").string(), "-o", (dir / "out").string()});
  CHECK(r.code == kSuccess);
  CHECK(slurp(dir / "out" / "report.txt").find("model: custom") != std::string::npos);
}

TEST_CASE("converge writes the convergence table") {
  const fs::path dir = scratch("converge");
  const Result r = call({"converge", "--a", "2", "--b", "1", "--d", "0.001", "--n", "64",
                         "--dts", "0.02,0.04", "--t-end", "0.2", "-o", dir.string()});
  REQUIRE(r.code == kSuccess);
  CHECK(first_line(dir / "convergence.csv") == "dt,l2_u,linf_u,l2_v,linf_v,order_u,order_v");
}
