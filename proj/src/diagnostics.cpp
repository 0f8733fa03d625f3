#include "tqb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "tqb/error.hpp"

namespace tqb {

NormPair l2_linf(const Eigen::VectorXd& numeric, const Eigen::VectorXd& exact, double h) {
  if (numeric.size() != exact.size())
    throw Error(Errc::dimension_mismatch, "error norms need arrays of equal length");
  const Eigen::VectorXd diff = numeric - exact;
  return {std::sqrt(h * diff.squaredNorm()), diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0};
}

double relative_error(const Eigen::VectorXd& prev, const Eigen::VectorXd& next) {
  if (prev.size() != next.size())
    throw Error(Errc::dimension_mismatch, "relative error needs arrays of equal length");
  const double denom = next.squaredNorm();
  if (!(denom > 0.0)) throw Error(Errc::zero_denominator, "relative error of a zero profile");
  return std::sqrt((next - prev).squaredNorm() / denom);
}

namespace {

struct Peak {
  Eigen::Index index;  // first sample of the (possibly flat) top
  Eigen::Index last;   // last sample of the top
  double prominence;
};

std::vector<Peak> find_peaks(const Eigen::VectorXd& y) {
  std::vector<Peak> peaks;
  const Eigen::Index n = y.size();
  Eigen::Index i = 1;
  while (i < n - 1) {
    if (y[i] > y[i - 1]) {
      Eigen::Index j = i;
      while (j + 1 < n && y[j + 1] == y[i]) ++j;
      if (j + 1 < n && y[j + 1] < y[i]) {
        double left_base = y[i];
        for (Eigen::Index k = i - 1; k >= 0 && y[k] <= y[i]; --k)
          left_base = std::min(left_base, y[k]);
        double right_base = y[i];
        for (Eigen::Index k = j + 1; k < n && y[k] <= y[i]; ++k)
          right_base = std::min(right_base, y[k]);
        peaks.push_back({i, j, y[i] - std::max(left_base, right_base)});
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return peaks;
}

}  // namespace

int count_interior_maxima(const Eigen::VectorXd& profile, double prominence) {
  if (!(prominence > 0.0)) throw Error(Errc::invalid_argument, "prominence must be positive");
  int count = 0;
  for (const Peak& p : find_peaks(profile))
    if (p.prominence >= prominence) ++count;
  return count;
}

double estimate_period(const std::vector<TimeValue>& series) {
  if (series.size() < 3) throw Error(Errc::insufficient_peaks, "series too short for a period");
  Eigen::VectorXd y(static_cast<Eigen::Index>(series.size()));
  for (std::size_t i = 0; i < series.size(); ++i) y[static_cast<Eigen::Index>(i)] = series[i].value;
  const double range = y.maxCoeff() - y.minCoeff();
  std::vector<double> times;
  if (range > 0.0) {
    for (const Peak& p : find_peaks(y)) {
      if (p.prominence < 0.05 * range) continue;
      const auto k = static_cast<std::size_t>(p.index);
      double t = 0.5 * (series[k].t + series[static_cast<std::size_t>(p.last)].t);
      if (p.index == p.last) {
        const double ym = series[k - 1].value, y0 = series[k].value, yp = series[k + 1].value;
        const double curvature = ym - 2 * y0 + yp;
        if (curvature < 0.0) {
          const double shift = 0.5 * (ym - yp) / curvature;
          const double step = shift >= 0 ? series[k + 1].t - series[k].t : series[k].t - series[k - 1].t;
          t = series[k].t + shift * step;
        }
      }
      times.push_back(t);
    }
  }
  if (times.size() < 2)
    throw Error(Errc::insufficient_peaks,
                "period needs at least two peaks, found " + std::to_string(times.size()));
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

ErrorReport linear_error(const Preset& linear, const Trajectory& traj) {
  const auto& mesh = linear.setup.mesh;
  const double a = linear.constants.at("a"), b = linear.constants.at("b"),
               d = linear.constants.at("d");
  const double t = traj.final.t;
  Eigen::VectorXd eu(mesh.n + 1), ev(mesh.n + 1);
  for (int m = 0; m <= mesh.n; ++m) {
    const auto exact = analytic_linear(mesh.knot(m), t, a, b, d);
    eu[m] = exact.u;
    ev[m] = exact.v;
  }
  return {l2_linf(traj.final.u, eu, mesh.h), l2_linf(traj.final.v, ev, mesh.h), mesh.n,
          linear.config.dt, t, linear.setup.label};
}

ConvergenceTable convergence_study(double a, double b, double d, int n, std::vector<double> dts,
                                   double t_end) {
  if (dts.empty()) throw Error(Errc::invalid_argument, "convergence study needs time steps");
  std::sort(dts.begin(), dts.end());

  std::vector<std::future<ConvergenceRow>> jobs;
  for (double dt : dts)
    jobs.push_back(std::async(std::launch::async, [=] {
      Preset p = preset(Model::Linear, {{"a", a}, {"b", b}, {"d", d}, {"n", double(n)},
                                        {"dt", dt}, {"t_end", t_end}});
      p.config.snapshot_times.clear();
      p.config.probe_points.clear();
      const ErrorReport err = linear_error(p, run(p.setup, p.config));
      ConvergenceRow row;
      row.dt = dt;
      row.n = n;
      row.u = err.u;
      row.v = err.v;
      return row;
    }));

  ConvergenceTable table;
  for (auto& job : jobs) table.rows.push_back(job.get());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    row.order_u = row.order_v = nan;
    for (std::size_t j = i + 1; j < table.rows.size(); ++j)
      if (std::abs(table.rows[j].dt - 2 * row.dt) <= 1e-9 * row.dt) {
        row.order_u = std::log2(table.rows[j].u.linf / row.u.linf);
        row.order_v = std::log2(table.rows[j].v.linf / row.v.linf);
      }
  }
  return table;
}

}  // namespace tqb
