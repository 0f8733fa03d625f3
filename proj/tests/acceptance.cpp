// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "tqb/diagnostics.hpp"
#include "tqb/selftest.hpp"
#include "tqb/stepper.hpp"

using namespace tqb;

namespace {

struct Line {
  int id;
  bool ok;
  std::string detail;
};

std::vector<Line> lines;

void report(int id, bool ok, const std::string& detail) {
  lines.push_back({id, ok, detail});
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Reference error norms {L2 U, Linf U, L2 V, Linf V} per dt.
struct NormRow {
  double dt;
  std::array<double, 4> ref;
};

const std::array<NormRow, 4> kDiffusionDominated{{
    {0.005, {0.008090e-4, 0.009120e-4, 0.029344e-6, 0.033079e-6}},
    {0.01, {0.053460e-4, 0.060265e-4, 0.216594e-6, 0.244162e-6}},
    {0.02, {0.234949e-4, 0.264853e-4, 0.965627e-6, 1.088530e-6}},
    {0.04, {0.961033e-4, 1.083353e-4, 3.962253e-6, 4.466566e-6}},
}};

const std::array<NormRow, 4> kReactionDominated{{
    {0.005, {0.026827e-4, 0.030241e-4, 0.068087e-5, 0.076753e-5}},
    {0.01, {0.107324e-4, 0.120984e-4, 0.272462e-5, 0.307141e-5}},
    {0.02, {0.429339e-4, 0.483984e-4, 1.089996e-5, 1.228729e-5}},
    {0.04, {1.717837e-4, 1.936481e-4, 4.360663e-5, 4.915683e-5}},
}};

struct LinearResult {
  std::array<double, 4> norms;
  double seconds;
  double boundary;
};

LinearResult run_linear(double a, double b, double d, double dt) {
  const Preset p = preset(Model::Linear, {{"a", a}, {"b", b}, {"d", d}, {"n", 512}, {"dt", dt}});
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory traj = run(p.setup, p.config);
  const double secs = seconds_since(t0);
  const ErrorReport e = linear_error(p, traj);
  double worst = 0.0;
  for (const auto& s : traj.snapshots) worst = std::max(worst, s.boundary_residual);
  return {{e.u.l2, e.u.linf, e.v.l2, e.v.linf}, secs, worst};
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double max_snapshot_residual(const Trajectory& traj) {
  double worst = 0.0;
  for (const auto& s : traj.snapshots) worst = std::max(worst, s.boundary_residual);
  return worst;
}

double at_x(const Eigen::VectorXd& knots, const UniformMesh& mesh, double x) {
  const long m = std::lround((x - mesh.x0) / mesh.h);
  return knots[m];
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, double>> boundary_by_run;

  // 1, 2: diffusion-dominated linear case.
  std::array<LinearResult, 4> diff{};
  for (std::size_t i = 0; i < 4; ++i) {
    diff[i] = run_linear(0.1, 0.01, 1.0, kDiffusionDominated[i].dt);
    boundary_by_run.push_back({"linear dt=" + fmt("%g", kDiffusionDominated[i].dt),
                               diff[i].boundary});
  }
  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& row = kDiffusionDominated[i];
      double worst = 0.0;
      bool row_ok = diff[i].seconds < 5.0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double r = diff[i].norms[k] / row.ref[k];
        if (row.dt == 0.005)
          row_ok = row_ok && r >= 0.5 && r <= 2.0;
        else
          row_ok = row_ok && rel(diff[i].norms[k], row.ref[k]) <= 0.10;
        worst = std::max(worst, std::max(r, 1.0 / r));
      }
      ok = ok && row_ok;
      detail += fmt("dt=%g", row.dt) + fmt(" worst ratio %.3f", worst) +
                fmt(" (%.2fs)", diff[i].seconds) + (row_ok ? "; " : " [off]; ");
    }
    report(1, ok, detail);
  }

  std::array<LinearResult, 4> react{};
  for (std::size_t i = 0; i < 4; ++i) {
    react[i] = run_linear(2.0, 1.0, 0.001, kReactionDominated[i].dt);
    boundary_by_run.push_back({"linear a=2 dt=" + fmt("%g", kReactionDominated[i].dt),
                               react[i].boundary});
  }
  {
    // rows are ascending in dt: pairs (0.04, 0.02) and (0.02, 0.01)
    bool ok = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto* set : {&diff, &react})
      for (std::size_t i : {1u, 2u})
        for (std::size_t k = 0; k < 4; ++k) {
          const double order = std::log2((*set)[i + 1].norms[k] / (*set)[i].norms[k]);
          lo = std::min(lo, order);
          hi = std::max(hi, order);
          ok = ok && order >= 1.8 && order <= 2.2;
        }
    report(2, ok, fmt("observed orders in [%.4f, ", lo) + fmt("%.4f]", hi));
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k) {
        const double r = rel(react[i].norms[k], kReactionDominated[i].ref[k]);
        worst = std::max(worst, r);
        ok = ok && r <= 0.10;
      }
    report(3, ok, fmt("L2(U) at dt=0.01 is %.6e", react[1].norms[0]) +
                      fmt(", worst relative deviation %.2e", worst));
  }

  {
    const LinearResult stiff = run_linear(100.0, 1.0, 0.001, 0.02);
    boundary_by_run.push_back({"linear a=100 dt=0.02", stiff.boundary});
    const double r = rel(stiff.norms[2], 1.079096e-3);
    report(4, r <= 0.15, fmt("L2(V) = %.6e", stiff.norms[2]) + fmt(", deviation %.2e", r));
  }

  // 5: Brusselator oscillation.
  {
    const Preset p = preset(Model::Brusselator);
    const Trajectory traj = run(p.setup, p.config);
    boundary_by_run.push_back({"brusselator", max_snapshot_residual(traj)});
    const auto snap = std::find_if(traj.snapshots.begin(), traj.snapshots.end(),
                                   [](const Snapshot& s) { return std::abs(s.t - 6.0) < 1e-9; });
    const std::array<double, 6> xs{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const std::array<double, 6> ref{0.400865, 0.687572, 2.884364, 0.549937, 0.323697, 0.348838};
    int close = 0;
    double u04 = std::numeric_limits<double>::quiet_NaN();
    if (snap != traj.snapshots.end()) {
      for (std::size_t i = 0; i < 6; ++i)
        if (rel(at_x(snap->u, p.setup.mesh, xs[i]), ref[i]) <= 0.05) ++close;
      u04 = at_x(snap->u, p.setup.mesh, 0.4);
    }
    double period = std::numeric_limits<double>::quiet_NaN();
    for (const auto& probe : traj.probes)
      if (std::abs(probe.x - 0.4) < 1e-12) {
        std::vector<TimeValue> series;
        for (const auto& s : probe.samples) series.push_back({s.t, s.u});
        period = estimate_period(series);
      }
    const bool ok = rel(u04, 2.884364) <= 0.05 && std::abs(period - 7.8) <= 0.3 && close >= 4;
    report(5, ok, fmt("U(0.4, 6) = %.6f", u04) + fmt(", period at x=0.4 %.3f", period) +
                      ", " + std::to_string(close) + "/6 columns within 5%");
  }

  // 6: Brusselator homogeneous steady state.
  {
    Preset p = preset(Model::Brusselator, {{"t_end", 1.0}});
    p.setup.initial = from_expressions("1", "3.4");
    p.config.snapshot_times = {1.0};
    p.config.probe_points = {};
    double worst = 0.0;
    run(p.setup, p.config, [&](double, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
      worst = std::max({worst, (u.array() - 1.0).abs().maxCoeff(),
                        (v.array() - 3.4).abs().maxCoeff()});
    });
    report(6, worst <= 1e-8, fmt("max drift over 100 steps %.3e", worst));
  }

  // 7: Schnakenberg.
  {
    const std::array<double, 7> dts{5e-5, 1e-4, 1.2e-4, 1.32e-4, 1e-3, 2e-3, 5e-3};
    std::array<double, 7> err_u{}, err_v{};
    for (std::size_t i = 0; i < dts.size(); ++i) {
      const Preset p = preset(Model::Schnakenberg, {{"dt", dts[i]}});
      const Trajectory traj = run(p.setup, p.config);
      err_u[i] = relative_error(traj.previous.u, traj.final.u);
      err_v[i] = relative_error(traj.previous.v, traj.final.v);
      boundary_by_run.push_back({"schnakenberg dt=" + fmt("%g", dts[i]),
                                 max_snapshot_residual(traj)});
    }
    bool monotone = true;
    for (std::size_t i = 1; i < dts.size(); ++i) monotone = monotone && err_u[i] >= err_u[i - 1];

    const Preset fine = preset(Model::Schnakenberg, {{"n", 200}});
    const Trajectory traj = run(fine.setup, fine.config);
    boundary_by_run.push_back({"schnakenberg n=200", max_snapshot_residual(traj)});
    const int maxima = count_interior_maxima(traj.final.u, 1e-3);

    const bool ok = err_u[0] <= 1e-12 && err_u[6] <= 1e-4 && monotone && maxima == 9;
    std::string detail = fmt("rel U at 5e-5 %.3e", err_u[0]) + fmt(", at 5e-3 %.3e", err_u[6]) +
                         fmt(" (V %.3e)", err_v[6]) +
                         (monotone ? ", monotone" : ", not monotone in dt") +
                         ", maxima at N=200: " + std::to_string(maxima) + " (want 9)";
    report(7, ok, detail);
  }

  // 8: Gray-Scott.
  {
    const Preset p = preset(Model::GrayScott);
    double u_min = std::numeric_limits<double>::infinity(), u_max = -u_min, v_min = u_min;
    const Trajectory traj =
        run(p.setup, p.config, [&](double, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
          u_min = std::min(u_min, u.minCoeff());
          u_max = std::max(u_max, u.maxCoeff());
          v_min = std::min(v_min, v.minCoeff());
        });
    boundary_by_run.push_back({"gray-scott", max_snapshot_residual(traj)});
    int pulses_100 = -1, pulses_1000 = -1;
    for (const auto& s : traj.snapshots) {
      if (std::abs(s.t - 100.0) < 1e-9) pulses_100 = count_interior_maxima(s.v, 0.05);
      if (std::abs(s.t - 1000.0) < 1e-9) pulses_1000 = count_interior_maxima(s.v, 0.05);
    }
    const bool bounds = u_min >= 0.0 && u_max <= 1.05 && v_min >= -1e-8;
    const bool ok = bounds && pulses_100 == 2 && pulses_1000 == 4;
    report(8, ok, "pulses " + std::to_string(pulses_100) + " at t=100 (want 2), " +
                      std::to_string(pulses_1000) + " at t=1000 (want 4); U in [" +
                      fmt("%.4f", u_min) + fmt(", %.4f]", u_max) + fmt(", min V %.2e", v_min) +
                      (bounds ? " (bounds hold)" : " (bounds violated)"));
  }

  // 9: basis properties.
  {
    bool ok = true;
    std::string failed;
    for (double h : {0.01, 0.1, 0.5})
      for (const auto& r : basis_checks(h)) {
        if (r.status != CheckStatus::Pass) {
          ok = false;
          failed += " " + r.name + fmt("@%g", h);
        }
      }
    report(9, ok, ok ? "continuity, stencil and 1:26:66 checks pass for h in {0.01, 0.1, 0.5}"
                     : "failed:" + failed);
  }

  // 10: banded solver against dense elimination.
  {
    const CheckResult r = banded_oracle_check(200, 20240601u);
    report(10, r.status == CheckStatus::Pass, r.detail);
  }

  // 11: boundary conditions over every run above.
  {
    double worst = 0.0;
    std::string where;
    for (const auto& [name, value] : boundary_by_run)
      if (value >= worst) {
        worst = value;
        where = name;
      }
    report(11, worst <= 1e-9, fmt("max residual %.3e", worst) + " (" + where + ", " +
                                  std::to_string(boundary_by_run.size()) + " runs)");
  }

  const auto passed = std::count_if(lines.begin(), lines.end(), [](const Line& l) { return l.ok; });
  std::printf("%ld/%zu criteria passed\n", static_cast<long>(passed), lines.size());
  return passed == static_cast<long>(lines.size()) ? 0 : 1;
}
