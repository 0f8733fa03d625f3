#pragma once

#include <array>

#include <Eigen/Core>

#include "tqb/banded.hpp"
#include "tqb/problem.hpp"
#include "tqb/trig_basis.hpp"

namespace tqb {

/// Spline coefficients of both species. Index i in [-2, N+2] is stored at
/// position i+2.
struct StateVector {
  int n = 0;
  Eigen::VectorXd delta;  // U
  Eigen::VectorXd gamma;  // V

  static StateVector zeros(int n);

  double& u(int i) { return delta[i + 2]; }
  double& v(int i) { return gamma[i + 2]; }
  double u(int i) const { return delta[i + 2]; }
  double v(int i) const { return gamma[i + 2]; }

  Eigen::VectorXd& coefs(Species s) { return s == Species::U ? delta : gamma; }
  const Eigen::VectorXd& coefs(Species s) const { return s == Species::U ? delta : gamma; }
};

/// Knot values and derivatives: row m is knot m, column k the k-th derivative.
struct NodalField {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
};

NodalField nodal_values(const StateVector& state, const StencilWeights& w);

/// Order-k value at knot m of one coefficient vector.
double nodal_value(const Eigen::VectorXd& coefs, const StencilWeights& w, int m, int order);

/// Order-0 knot values of one coefficient vector.
Eigen::VectorXd knot_values(const Eigen::VectorXd& coefs, const StencilWeights& w);

/// beta_1..beta_8 of the linearized Crank-Nicolson step at one knot; index
/// 0 holds beta_1.
using LinearizedReaction = std::array<double, 8>;

LinearizedReaction compute_beta(const RDCoefficients& c, double u_n, double v_n, double dt);

/// nu_1..nu_40 of one collocation knot; nu(i) is 1-based.
///   1..10  implicit U-equation row   11..20 explicit U-equation row
///   21..30 implicit V-equation row   31..40 explicit V-equation row
/// Within each group the entries alternate (delta, gamma) over c_{m-2}..c_{m+2}.
struct RowStencil {
  std::array<double, 40> values{};
  double nu(int i) const { return values[static_cast<std::size_t>(i - 1)]; }
};

RowStencil compute_nu(const LinearizedReaction& beta, const StencilWeights& w, double a1,
                      double a2);

/// Ghost coefficients as affine functions of the three nearest interior
/// coefficients: (c_{-2}, c_{-1}) from (c_0, c_1, c_2) on the left,
/// (c_{N+1}, c_{N+2}) from (c_{N-2}, c_{N-1}, c_N) on the right.
struct GhostAffine {
  Eigen::Matrix<double, 2, 3> weights = Eigen::Matrix<double, 2, 3>::Zero();
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();
};

struct GhostMap {
  std::array<GhostAffine, 4> corners;

  const GhostAffine& at(Species s, Side side) const {
    return corners[static_cast<std::size_t>(2 * static_cast<int>(s) + static_cast<int>(side))];
  }
  GhostAffine& at(Species s, Side side) {
    return corners[static_cast<std::size_t>(2 * static_cast<int>(s) + static_cast<int>(side))];
  }
};

GhostMap build_ghost_map(const BoundaryPlan& plan, const StencilWeights& w);

/// Overwrites the four ghost coefficients of each species from the map.
void apply_ghost_map(const GhostMap& gm, StateVector& state);

/// Largest boundary-condition residual over the plan, each scaled by
/// max(1, sum_j |w_j c_j|) so that high-order stencils at small h are judged
/// relative to the magnitude of the terms they cancel.
double boundary_residual(const BoundaryPlan& plan, const StencilWeights& w,
                         const StateVector& state);

/// True when the corner prescribes both the value and the second
/// derivative. The end-knot collocation row of that species is then replaced
/// by the Crank-Nicolson curvature equation W''_t = a W'''' + (reaction)'',
/// which requires the species' reaction term to be linear.
bool pins_value_and_curvature(const BoundaryPlan& plan, Species s, Side side);

struct SystemMatrices {
  BandedMatrix<double> a;
  Eigen::VectorXd rhs;
};

inline constexpr int kCollocationBandwidth = 5;

/// Linear system for the next time level in interleaved unknown order
/// (delta_0, gamma_0, delta_1, gamma_1, ...), ghosts eliminated.
SystemMatrices assemble(const ProblemSetup& setup, const StateVector& state,
                        const StencilWeights& w, double dt, const GhostMap& gm);

}  // namespace tqb
