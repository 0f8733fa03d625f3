#pragma once

#include <array>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace tqb {

/// Uniform knot grid x_0..x_N with spacing h. Knots x_{-2}, x_{-1},
/// x_{N+1}, x_{N+2} extend the grid with the same spacing.
struct UniformMesh {
  double x0 = 0.0;
  double xN = 1.0;
  int n = 8;
  double h = 0.125;

  double knot(int m) const { return x0 + m * h; }
  int knot_count() const { return n + 1; }
};

/// Largest admissible knot spacing: all five sine factors of the
/// normalization stay strictly positive below it.
inline constexpr double kMaxSpacing = 2.0 * std::numbers::pi / 5.0;

UniformMesh make_mesh(double x0, double xN, int n);

/// Trigonometric quintic B-spline T_0 on a uniform grid of spacing h, centered
/// at the origin with support (-3h, 3h). Every T_m is a translate of it.
///
/// Each of the six polynomial-in-sines pieces is stored as a sum of products
/// of five factors sin((s - o*h)/2), o in -3..3, obtained from the
/// trigonometric B-spline recurrence. Derivatives are evaluated exactly with
/// the general Leibniz rule over the five factors.
class TrigQuinticSpline {
 public:
  explicit TrigQuinticSpline(double h);

  double h() const { return h_; }
  double theta() const { return theta_; }

  /// order-th derivative of T_0 at local coordinate s (0 outside the open
  /// support).
  double eval(double s, int order) const;

  /// Same as eval but forces the given piece (0..5, piece q covers
  /// [(q-3)h, (q-2)h]); used for one-sided limits at knots.
  double eval_piece(int piece, double s, int order) const;

 private:
  struct Term {
    double coef;
    std::array<int, 5> offsets;
  };

  double h_;
  double theta_;
  std::array<std::vector<Term>, 6> pieces_;
};

/// Basis functions T_m, m in [-2, N+2], on a fixed mesh.
class TrigBasis {
 public:
  explicit TrigBasis(const UniformMesh& mesh);

  const UniformMesh& mesh() const { return mesh_; }
  const TrigQuinticSpline& spline() const { return spline_; }

  /// order-th derivative of T_m at x.
  double value(int m, double x, int order) const;

  /// order-th derivative of sum_i T_i(x) c_i, with coefs indexed from -2
  /// (coefs[0] is c_{-2}).
  double combine(const Eigen::VectorXd& coefs, double x, int order) const;

 private:
  UniformMesh mesh_;
  TrigQuinticSpline spline_;
};

double basis_value(const TrigBasis& basis, int m, double x, int order);

/// Nodal stencil weights alpha_1..alpha_13 of the knot-value/derivative
/// identities. alpha[i-1] holds alpha_i:
///   U     = ( a1,  a2,  a3,  a2,  a1) . (c_{m-2} .. c_{m+2})
///   U'    = (-a4, -a5,  0,   a5,  a4)
///   U''   = ( a6,  a7,  a8,  a7,  a6)
///   U'''  = (-a9,  a10, 0,  -a10, a9)
///   U'''' = ( a11, a12, a13, a12, a11)
struct StencilWeights {
  std::array<double, 13> alpha{};
  double theta = 0.0;
  double h = 0.0;

  double a(int i) const { return alpha[static_cast<std::size_t>(i - 1)]; }

  /// Weights of c_{m-2}..c_{m+2} in the order-th derivative at x_m.
  std::array<double, 5> row(int order) const;
};

StencilWeights stencil_weights(double h);
StencilWeights stencil_weights(const TrigQuinticSpline& spline);

}  // namespace tqb
