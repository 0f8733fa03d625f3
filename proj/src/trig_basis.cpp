#include "tqb/trig_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tqb/error.hpp"

namespace tqb {

namespace {

using FactorPoly = std::map<std::vector<int>, double>;

// Trigonometric B-spline recurrence restricted to one knot interval. Knot i
// sits at offset i-3 (in units of h); B(i, k) has support [t_i, t_{i+k}].
FactorPoly recurrence(int i, int k, int piece, double h) {
  if (k == 1) {
    FactorPoly unit;
    if (i == piece) unit[{}] = 1.0;
    return unit;
  }
  const double denom = std::sin(0.5 * (k - 1) * h);
  FactorPoly out;
  for (const auto& [factors, c] : recurrence(i, k - 1, piece, h)) {
    std::vector<int> key = factors;
    key.push_back(i - 3);
    std::sort(key.begin(), key.end());
    out[key] += c / denom;
  }
  // sin((t_{i+k} - x)/2) = -sin((x - t_{i+k})/2)
  for (const auto& [factors, c] : recurrence(i + 1, k - 1, piece, h)) {
    std::vector<int> key = factors;
    key.push_back(i + k - 3);
    std::sort(key.begin(), key.end());
    out[key] -= c / denom;
  }
  return out;
}

struct Composition {
  std::array<int, 5> parts;
  double multinomial;
};

// All ways to distribute `order` derivatives over five factors.
std::vector<Composition> make_compositions(int order) {
  static constexpr std::array<double, 5> kFactorial{1, 1, 2, 6, 24};
  std::vector<Composition> out;
  std::array<int, 5> p{};
  for (p[0] = 0; p[0] <= order; ++p[0])
    for (p[1] = 0; p[0] + p[1] <= order; ++p[1])
      for (p[2] = 0; p[0] + p[1] + p[2] <= order; ++p[2])
        for (p[3] = 0; p[0] + p[1] + p[2] + p[3] <= order; ++p[3]) {
          p[4] = order - p[0] - p[1] - p[2] - p[3];
          double denom = 1.0;
          for (int r : p) denom *= kFactorial[static_cast<std::size_t>(r)];
          out.push_back({p, kFactorial[static_cast<std::size_t>(order)] / denom});
        }
  return out;
}

const std::vector<Composition>& compositions(int order) {
  static const std::array<std::vector<Composition>, 5> table{
      make_compositions(0), make_compositions(1), make_compositions(2),
      make_compositions(3), make_compositions(4)};
  return table[static_cast<std::size_t>(order)];
}

void check_order(int order) {
  if (order < 0 || order > 4)
    throw Error(Errc::invalid_order,
                "derivative order must be in 0..4, got " + std::to_string(order));
}

}  // namespace

UniformMesh make_mesh(double x0, double xN, int n) {
  if (!(xN > x0))
    throw Error(Errc::degenerate_domain, "mesh requires xN > x0");
  if (n < 8)
    throw Error(Errc::invalid_argument,
                "mesh requires at least 8 intervals, got " + std::to_string(n));
  const double h = (xN - x0) / n;
  if (!(h < kMaxSpacing))
    throw Error(Errc::domain_too_coarse,
                "knot spacing " + std::to_string(h) + " is not below 2*pi/5");
  return UniformMesh{x0, xN, n, h};
}

TrigQuinticSpline::TrigQuinticSpline(double h) : h_(h) {
  const std::array<double, 5> factors{std::sin(0.5 * h), std::sin(h),
                                      std::sin(1.5 * h), std::sin(2.0 * h),
                                      std::sin(2.5 * h)};
  if (!(h > 0.0) || !(h < kMaxSpacing) ||
      std::any_of(factors.begin(), factors.end(),
                  [](double f) { return !(f > 0.0); }))
    throw Error(Errc::theta_degenerate,
                "knot spacing must lie in (0, 2*pi/5), got " + std::to_string(h));
  theta_ = factors[0] * factors[1] * factors[2] * factors[3] * factors[4];

  for (int q = 0; q < 6; ++q) {
    auto& terms = pieces_[static_cast<std::size_t>(q)];
    for (const auto& [key, c] : recurrence(0, 6, q, h)) {
      if (c == 0.0) continue;
      Term t{c, {}};
      std::copy(key.begin(), key.end(), t.offsets.begin());
      terms.push_back(t);
    }
  }
}

double TrigQuinticSpline::eval_piece(int piece, double s, int order) const {
  check_order(order);
  const auto& comps = compositions(order);
  double total = 0.0;
  std::array<std::array<double, 5>, 5> f{};  // f[factor][derivative]
  for (const Term& term : pieces_[static_cast<std::size_t>(piece)]) {
    for (std::size_t j = 0; j < 5; ++j) {
      const double arg = 0.5 * (s - term.offsets[j] * h_);
      const double sn = std::sin(arg);
      const double cs = std::cos(arg);
      double scale = 1.0;
      for (int r = 0; r <= order; ++r) {
        const double base = (r % 2 == 0) ? sn : cs;
        const double sign = (r % 4 < 2) ? 1.0 : -1.0;
        f[j][static_cast<std::size_t>(r)] = scale * sign * base;
        scale *= 0.5;
      }
    }
    double sum = 0.0;
    for (const auto& comp : comps) {
      double prod = comp.multinomial;
      for (std::size_t j = 0; j < 5; ++j)
        prod *= f[j][static_cast<std::size_t>(comp.parts[j])];
      sum += prod;
    }
    total += term.coef * sum;
  }
  return total;
}

double TrigQuinticSpline::eval(double s, int order) const {
  check_order(order);
  if (s <= -3.0 * h_ || s >= 3.0 * h_) return 0.0;
  const int piece = std::clamp(static_cast<int>(std::floor(s / h_ + 3.0)), 0, 5);
  return eval_piece(piece, s, order);
}

TrigBasis::TrigBasis(const UniformMesh& mesh) : mesh_(mesh), spline_(mesh.h) {}

double TrigBasis::value(int m, double x, int order) const {
  check_order(order);
  if (m < -2 || m > mesh_.n + 2)
    throw Error(Errc::invalid_argument,
                "basis index " + std::to_string(m) + " outside [-2, N+2]");
  return spline_.eval(x - mesh_.knot(m), order);
}

double TrigBasis::combine(const Eigen::VectorXd& coefs, double x,
                          int order) const {
  if (coefs.size() != mesh_.n + 5)
    throw Error(Errc::dimension_mismatch, "coefficient vector must have N+5 entries");
  const int centre = static_cast<int>(std::floor((x - mesh_.x0) / mesh_.h));
  double sum = 0.0;
  for (int i = std::max(-2, centre - 3); i <= std::min(mesh_.n + 2, centre + 4); ++i)
    sum += value(i, x, order) * coefs[i + 2];
  return sum;
}

double basis_value(const TrigBasis& basis, int m, double x, int order) {
  return basis.value(m, x, order);
}

std::array<double, 5> StencilWeights::row(int order) const {
  check_order(order);
  switch (order) {
    case 0: return {a(1), a(2), a(3), a(2), a(1)};
    case 1: return {-a(4), -a(5), 0.0, a(5), a(4)};
    case 2: return {a(6), a(7), a(8), a(7), a(6)};
    case 3: return {-a(9), a(10), 0.0, -a(10), a(9)};
    default: return {a(11), a(12), a(13), a(12), a(11)};
  }
}

StencilWeights stencil_weights(const TrigQuinticSpline& spline) {
  const double h = spline.h();
  auto T = [&](double s, int order) { return spline.eval(s, order); };
  StencilWeights w;
  w.h = h;
  w.theta = spline.theta();
  w.alpha = {T(-2 * h, 0), T(-h, 0),  T(0, 0),     T(-2 * h, 1), T(-h, 1),
             T(-2 * h, 2), T(-h, 2),  T(0, 2),     T(-2 * h, 3), -T(-h, 3),
             T(-2 * h, 4), T(-h, 4),  T(0, 4)};
  for (double v : w.alpha)
    if (!std::isfinite(v))
      throw Error(Errc::theta_degenerate, "non-finite stencil weight");
  return w;
}

StencilWeights stencil_weights(double h) {
  return stencil_weights(TrigQuinticSpline(h));
}

}  // namespace tqb
