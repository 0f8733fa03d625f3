#include "tqb/discretize.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "tqb/error.hpp"

namespace tqb {

namespace {

std::size_t corner_index(Species s, Side side) {
  return static_cast<std::size_t>(2 * static_cast<int>(s) + static_cast<int>(side));
}

}  // namespace

StateVector StateVector::zeros(int n) {
  return StateVector{n, Eigen::VectorXd::Zero(n + 5), Eigen::VectorXd::Zero(n + 5)};
}

double nodal_value(const Eigen::VectorXd& coefs, const StencilWeights& w, int m, int order) {
  const auto row = w.row(order);
  double sum = 0.0;
  for (int j = 0; j < 5; ++j) sum += row[static_cast<std::size_t>(j)] * coefs[m + j];
  return sum;
}

Eigen::VectorXd knot_values(const Eigen::VectorXd& coefs, const StencilWeights& w) {
  const auto n = coefs.size() - 5;
  Eigen::VectorXd out(n + 1);
  for (Eigen::Index m = 0; m <= n; ++m) out[m] = nodal_value(coefs, w, static_cast<int>(m), 0);
  return out;
}

NodalField nodal_values(const StateVector& state, const StencilWeights& w) {
  NodalField field{Eigen::MatrixXd(state.n + 1, 5), Eigen::MatrixXd(state.n + 1, 5)};
  for (int m = 0; m <= state.n; ++m)
    for (int k = 0; k <= 4; ++k) {
      field.u(m, k) = nodal_value(state.delta, w, m, k);
      field.v(m, k) = nodal_value(state.gamma, w, m, k);
    }
  return field;
}

LinearizedReaction compute_beta(const RDCoefficients& c, double u, double v, double dt) {
  const double r = 1.0 / dt;
  const double uv = u * v;
  const double uu = u * u;
  const double vv = v * v;
  return {
      r - c.b1 / 2 - c.d1 * uv - c.e1 / 2 * v - c.m1 / 2 * vv,
      -c.c1 / 2 - c.d1 / 2 * uu - c.e1 / 2 * u - c.m1 * uv,
      r + c.b1 / 2 - c.m1 / 2 * vv,
      c.c1 / 2 - c.d1 / 2 * uu,
      -c.b2 / 2 - c.d2 * uv - c.e2 / 2 * v - c.m2 / 2 * vv,
      r - c.c2 / 2 - c.d2 / 2 * uu - c.e2 / 2 * u - c.m2 * uv,
      c.b2 / 2 - c.m2 / 2 * vv,
      r + c.c2 / 2 - c.d2 / 2 * uu,
  };
}

RowStencil compute_nu(const LinearizedReaction& beta, const StencilWeights& w, double a1,
                      double a2) {
  const auto val = w.row(0);
  const auto sec = w.row(2);
  RowStencil s;
  auto& nu = s.values;
  for (std::size_t j = 0; j < 5; ++j) {
    nu[2 * j] = beta[0] * val[j] - a1 / 2 * sec[j];
    nu[2 * j + 1] = beta[1] * val[j];
    nu[10 + 2 * j] = beta[2] * val[j] + a1 / 2 * sec[j];
    nu[10 + 2 * j + 1] = beta[3] * val[j];
    nu[20 + 2 * j] = beta[4] * val[j];
    nu[20 + 2 * j + 1] = beta[5] * val[j] - a2 / 2 * sec[j];
    nu[30 + 2 * j] = beta[6] * val[j];
    nu[30 + 2 * j + 1] = beta[7] * val[j] + a2 / 2 * sec[j];
  }
  return s;
}

GhostMap build_ghost_map(const BoundaryPlan& plan, const StencilWeights& w) {
  plan.validate();
  GhostMap gm;
  for (Species s : {Species::U, Species::V})
    for (Side side : {Side::Left, Side::Right}) {
      const auto pair = plan.corner(s, side);
      // Stencil positions 0..4 cover c_{m-2}..c_{m+2} at the boundary knot.
      const std::array<int, 2> ghost = side == Side::Left ? std::array{0, 1} : std::array{3, 4};
      const std::array<int, 3> inner =
          side == Side::Left ? std::array{2, 3, 4} : std::array{0, 1, 2};
      Eigen::Matrix2d m;
      Eigen::Matrix<double, 2, 3> r;
      Eigen::Vector2d t;
      for (int k = 0; k < 2; ++k) {
        const auto row = w.row(pair[static_cast<std::size_t>(k)].order);
        for (int g = 0; g < 2; ++g) m(k, g) = row[static_cast<std::size_t>(ghost[static_cast<std::size_t>(g)])];
        for (int i = 0; i < 3; ++i) r(k, i) = row[static_cast<std::size_t>(inner[static_cast<std::size_t>(i)])];
        t[k] = pair[static_cast<std::size_t>(k)].target;
      }
      const double det = m.determinant();
      if (std::abs(det) < 1e-12 * m.row(0).norm() * m.row(1).norm())
        throw Error(Errc::degenerate_boundary_pair,
                    "boundary orders " + std::to_string(pair[0].order) + " and " +
                        std::to_string(pair[1].order) + " do not determine the ghost coefficients");
      const Eigen::Matrix2d inv = m.inverse();
      GhostAffine& a = gm.at(s, side);
      a.weights = -inv * r;
      a.offset = inv * t;
    }
  return gm;
}

void apply_ghost_map(const GhostMap& gm, StateVector& state) {
  const int n = state.n;
  for (Species s : {Species::U, Species::V}) {
    Eigen::VectorXd& c = state.coefs(s);
    const GhostAffine& left = gm.at(s, Side::Left);
    const Eigen::Vector2d gl = left.weights * c.segment<3>(2) + left.offset;
    c[0] = gl[0];
    c[1] = gl[1];
    const GhostAffine& right = gm.at(s, Side::Right);
    const Eigen::Vector2d gr = right.weights * c.segment<3>(n) + right.offset;
    c[n + 3] = gr[0];
    c[n + 4] = gr[1];
  }
}

double boundary_residual(const BoundaryPlan& plan, const StencilWeights& w,
                         const StateVector& state) {
  double worst = 0.0;
  for (const auto& bc : plan.conditions) {
    const Eigen::VectorXd& c = state.coefs(bc.species);
    const int first = bc.side == Side::Left ? 0 : state.n;  // stencil start index (+2 offset)
    const auto row = w.row(bc.order);
    double sum = 0.0;
    double scale = std::abs(bc.target);
    for (int j = 0; j < 5; ++j) {
      const double term = row[static_cast<std::size_t>(j)] * c[first + j];
      sum += term;
      scale += std::abs(term);
    }
    worst = std::max(worst, std::abs(sum - bc.target) / std::max(1.0, scale));
  }
  return worst;
}

SystemMatrices assemble(const ProblemSetup& setup, const StateVector& state,
                        const StencilWeights& w, double dt, const GhostMap& gm) {
  if (!(dt > 0.0)) throw Error(Errc::invalid_argument, "time step must be positive");
  const int n = state.n;
  if (n != setup.mesh.n || state.delta.size() != n + 5 || state.gamma.size() != n + 5)
    throw Error(Errc::dimension_mismatch, "state does not match the mesh");

  const RDCoefficients& c = setup.coefficients;
  const int size = 2 * n + 2;
  SystemMatrices sys{BandedMatrix<double>(size, kCollocationBandwidth, kCollocationBandwidth),
                     Eigen::VectorXd::Zero(size)};

  // Adds coef * c_i^{n+1} of one species to a row, eliminating ghosts.
  auto add_implicit = [&](int row, Species s, int i, double coef) {
    const int parity = s == Species::U ? 0 : 1;
    if (i >= 0 && i <= n) {
      sys.a.ref(row, 2 * i + parity) += coef;
      return;
    }
    const bool left = i < 0;
    const GhostAffine& g = gm.at(s, left ? Side::Left : Side::Right);
    const int which = left ? i + 2 : i - n - 1;
    const int first = left ? 0 : n - 2;
    for (int k = 0; k < 3; ++k)
      sys.a.ref(row, 2 * (first + k) + parity) += coef * g.weights(which, k);
    sys.rhs[row] -= coef * g.offset[which];
  };

  // A corner that fixes both value and curvature turns the end-knot
  // collocation row of that species into a relation between known
  // quantities, so the row is replaced by the curvature equation.
  std::array<bool, 4> curvature_row{};
  for (Side side : {Side::Left, Side::Right})
    for (Species s : {Species::U, Species::V})
      curvature_row[corner_index(s, side)] = pins_value_and_curvature(setup.boundary, s, side);

  for (int m = 0; m <= n; ++m) {
    const double um = nodal_value(state.delta, w, m, 0);
    const double vm = nodal_value(state.gamma, w, m, 0);
    const RowStencil nu = compute_nu(compute_beta(c, um, vm, dt), w, c.a1, c.a2);
    const int row_u = 2 * m;
    const int row_v = 2 * m + 1;
    const bool end = m == 0 || m == n;
    const Side side = m == 0 ? Side::Left : Side::Right;
    const bool skip_u = end && curvature_row[corner_index(Species::U, side)];
    const bool skip_v = end && curvature_row[corner_index(Species::V, side)];
    double rhs_u = c.n1;
    double rhs_v = c.n2;
    for (int j = 0; j < 5; ++j) {
      const int i = m - 2 + j;
      if (!skip_u) {
        add_implicit(row_u, Species::U, i, nu.nu(2 * j + 1));
        add_implicit(row_u, Species::V, i, nu.nu(2 * j + 2));
        rhs_u += nu.nu(10 + 2 * j + 1) * state.u(i) + nu.nu(10 + 2 * j + 2) * state.v(i);
      }
      if (!skip_v) {
        add_implicit(row_v, Species::U, i, nu.nu(20 + 2 * j + 1));
        add_implicit(row_v, Species::V, i, nu.nu(20 + 2 * j + 2));
        rhs_v += nu.nu(30 + 2 * j + 1) * state.u(i) + nu.nu(30 + 2 * j + 2) * state.v(i);
      }
    }
    if (!skip_u) sys.rhs[row_u] += rhs_u;
    if (!skip_v) sys.rhs[row_v] += rhs_v;
  }

  const auto sec = w.row(2);
  const auto fourth = w.row(4);
  for (Side side : {Side::Left, Side::Right})
    for (Species s : {Species::U, Species::V}) {
      if (!curvature_row[corner_index(s, side)]) continue;
      const bool is_u = s == Species::U;
      if (is_u ? (c.d1 != 0.0 || c.e1 != 0.0 || c.m1 != 0.0)
               : (c.d2 != 0.0 || c.e2 != 0.0 || c.m2 != 0.0))
        throw Error(Errc::invalid_boundary_plan,
                    "value and curvature conditions at one end need a linear reaction term");
      const double diff = is_u ? c.a1 : c.a2;
      const double self = is_u ? c.b1 : c.c2;
      const double cross = is_u ? c.c1 : c.b2;
      const Species other = is_u ? Species::V : Species::U;
      const int m = side == Side::Left ? 0 : n;
      const int row = 2 * m + (is_u ? 0 : 1);
      double rhs = 0.0;
      for (int j = 0; j < 5; ++j) {
        const int i = m - 2 + j;
        const double s2 = sec[static_cast<std::size_t>(j)];
        const double s4 = fourth[static_cast<std::size_t>(j)];
        add_implicit(row, s, i, (1.0 / dt - self / 2) * s2 - diff / 2 * s4);
        add_implicit(row, other, i, -cross / 2 * s2);
        rhs += ((1.0 / dt + self / 2) * s2 + diff / 2 * s4) * state.coefs(s)[i + 2] +
               cross / 2 * s2 * state.coefs(other)[i + 2];
      }
      sys.rhs[row] += rhs;
    }
  return sys;
}

bool pins_value_and_curvature(const BoundaryPlan& plan, Species s, Side side) {
  const auto pair = plan.corner(s, side);
  const int lo = std::min(pair[0].order, pair[1].order);
  const int hi = std::max(pair[0].order, pair[1].order);
  return lo == 0 && hi == 2;
}

}  // namespace tqb
