#include "tqb/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "tqb/banded.hpp"
#include "tqb/error.hpp"
#include "tqb/trig_basis.hpp"

namespace tqb {

namespace {

std::string format(const char* fmt, double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

CheckResult verdict(std::string name, double h, bool ok, std::string detail) {
  return {std::move(name), h, ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

// alpha index ranges (0-based, inclusive) sharing one derivative order
constexpr std::array<std::array<int, 2>, 5> kOrderGroups{
    {{0, 2}, {3, 4}, {5, 7}, {8, 9}, {10, 12}}};

}  // namespace

std::array<double, 13> closed_form_weights(double h) {
  const double c = std::cos(0.5 * h);
  const double s = std::sin(0.5 * h);
  const double theta = std::sin(2.5 * h) * std::sin(2.0 * h) * std::sin(1.5 * h) *
                       std::sin(h) * std::sin(0.5 * h);
  const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  return {
      s5 / theta,
      2 * s5 * c * (16 * c2 - 3) / theta,
      2 * (1 + 48 * c4 - 16 * c2) * s5 / theta,
      2.5 * s4 * c / theta,
      5 * s4 * c2 * (8 * c2 - 3) / theta,
      1.25 * s3 * (5 * c2 - 1) / theta,
      2.5 * s3 * c * (16 * c4 - 15 * c2 + 3) / theta,
      -2.5 * s3 * (16 * c6 - 5 * c2 + 1) / theta,
      0.625 * s2 * c * (25 * c2 - 13) / theta,
      -1.25 * s2 * c2 * (8 * c4 - 35 * c2 + 15) / theta,
      0.3125 * (125 * c4 - 114 * c2 + 13) * s / theta,
      -0.625 * s * c * (176 * c6 - 137 * c4 - 6 * c2 + 15) / theta,
      0.625 * (92 * c6 - 117 * c4 + 62 * c2 - 13) * (4 * c2 - 1) * s / theta,
  };
}

std::vector<CheckResult> basis_checks(double h, double alpha_perturbation) {
  if (!(h > 0.0) || !(h < kMaxSpacing))
    return {{"basis", h, CheckStatus::Rejected, "spacing outside (0, 2*pi/5)"}};

  std::vector<CheckResult> out;
  const TrigQuinticSpline spline(h);

  double worst_jump = 0.0;
  for (int order = 0; order <= 4; ++order) {
    std::array<double, 7> left{}, right{};
    double scale = 0.0;
    for (int k = -3; k <= 3; ++k) {
      const double s = k * h;
      const auto i = static_cast<std::size_t>(k + 3);
      left[i] = k > -3 ? spline.eval_piece(k + 2, s, order) : 0.0;
      right[i] = k < 3 ? spline.eval_piece(k + 3, s, order) : 0.0;
      scale = std::max({scale, std::abs(left[i]), std::abs(right[i])});
    }
    for (std::size_t i = 0; i < 7; ++i)
      worst_jump = std::max(worst_jump, std::abs(left[i] - right[i]) / scale);
  }
  out.push_back(verdict("c4-continuity", h, worst_jump <= 1e-9,
                        format("max relative jump %.3g", worst_jump)));

  StencilWeights w = stencil_weights(spline);
  w.alpha[0] *= 1.0 + alpha_perturbation;

  const auto oracle = closed_form_weights(h);
  double worst_closed = 0.0;
  for (const auto& group : kOrderGroups) {
    double scale = 0.0;
    for (int i = group[0]; i <= group[1]; ++i)
      scale = std::max(scale, std::abs(oracle[static_cast<std::size_t>(i)]));
    for (int i = group[0]; i <= group[1]; ++i) {
      const auto k = static_cast<std::size_t>(i);
      worst_closed = std::max(worst_closed, std::abs(w.alpha[k] - oracle[k]) / scale);
    }
  }
  out.push_back(verdict("stencil-closed-form", h, worst_closed <= 1e-12,
                        format("max relative deviation %.3g", worst_closed)));

  const UniformMesh mesh = make_mesh(0.0, 16 * h, 16);
  const TrigBasis basis(mesh);
  const int m = 8;
  double worst_direct = 0.0;
  for (int order = 0; order <= 4; ++order) {
    const auto row = w.row(order);
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    for (int j = 0; j < 5; ++j) {
      const double direct = basis.value(m - 2 + j, mesh.knot(m), order);
      worst_direct = std::max(
          worst_direct, std::abs(direct - row[static_cast<std::size_t>(j)]) / scale);
    }
  }
  out.push_back(verdict("stencil-direct", h, worst_direct <= 1e-12,
                        format("max relative deviation %.3g", worst_direct)));

  const double dev = std::max(std::abs(w.a(2) / w.a(1) / 26.0 - 1.0),
                              std::abs(w.a(3) / w.a(1) / 66.0 - 1.0));
  out.push_back(verdict("small-h-ratio", h, dev <= h * h,
                        format("relative distance from 1:26:66 is %.3g", dev)));
  return out;
}

CheckResult banded_oracle_check(int systems, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_int_distribution<int> size(1, 60);
  std::uniform_int_distribution<int> width(0, 6);

  double worst = 0.0;
  for (int t = 0; t < systems; ++t) {
    // Every other system uses the collocation shape.
    const bool standard = t % 2 == 0;
    const int n = standard ? 50 : size(gen);
    const int kl = standard ? 5 : width(gen);
    const int ku = standard ? 5 : width(gen);
    BandedMatrix<double> a(n, kl, ku);
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
        if (j == i) continue;
        a.ref(i, j) = entry(gen);
        off += std::abs(a(i, j));
      }
      a.ref(i, i) = (entry(gen) < 0 ? -1.0 : 1.0) * (off + 0.5 + std::abs(entry(gen)));
    }
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = entry(gen);

    const Eigen::VectorXd x = lu_factor(a).solve(b);
    const Eigen::VectorXd y = dense_gauss_solve<double>(a.to_dense(), b);
    worst = std::max(worst, (x - y).lpNorm<Eigen::Infinity>() / y.lpNorm<Eigen::Infinity>());
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "%d systems, max relative difference %.3g", systems,
                worst);
  return verdict("banded-vs-dense", 0.0, worst <= 1e-10, detail);
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  std::vector<CheckResult> all;
  for (double h : options.h_grid) {
    auto part = basis_checks(h, options.alpha_perturbation);
    all.insert(all.end(), part.begin(), part.end());
  }
  all.push_back(banded_oracle_check(options.random_systems, options.seed));
  return all;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == CheckStatus::Fail; });
}

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    default: return "REJECTED";
  }
}

}  // namespace tqb
