#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tqb/trig_basis.hpp"

namespace tqb {

/// Coefficients of the two-species system
///   U_t = a1 U'' + b1 U + c1 V + d1 U^2 V + e1 U V + m1 U V^2 + n1
///   V_t = a2 V'' + b2 U + c2 V + d2 U^2 V + e2 U V + m2 U V^2 + n2
struct RDCoefficients {
  double a1 = 0, a2 = 0;
  double b1 = 0, b2 = 0;
  double c1 = 0, c2 = 0;
  double d1 = 0, d2 = 0;
  double e1 = 0, e2 = 0;
  double m1 = 0, m2 = 0;
  double n1 = 0, n2 = 0;

  /// True when no U^2V, UV or UV^2 term is present.
  bool is_linear() const {
    return d1 == 0 && d2 == 0 && e1 == 0 && e2 == 0 && m1 == 0 && m2 == 0;
  }
};

enum class Model { Linear, Brusselator, Schnakenberg, GrayScott };

using NamedParams = std::map<std::string, double, std::less<>>;

Model model_from_name(std::string_view name);
std::string_view model_name(Model model);

/// Row of the model table with the named constants substituted:
///   Linear: a, b, d   Brusselator: eps1, eps2, A, B
///   Schnakenberg: gamma, a, b, d   GrayScott: eps1, eps2, f, k
RDCoefficients coefficients_from_table(Model model, const NamedParams& params);

/// Names of the constants accepted by coefficients_from_table for a model.
const std::vector<std::string>& model_constant_names(Model model);

struct Reaction {
  double f;
  double g;
};

Reaction reaction_eval(const RDCoefficients& c, double u, double v);

enum class Species { U, V };
enum class Side { Left, Right };

/// order 0 fixes the value, 1..3 the derivative of that order.
struct BoundaryCondition {
  Species species;
  Side side;
  int order;
  double target;
};

struct BoundaryPlan {
  std::vector<BoundaryCondition> conditions;

  /// Two conditions with distinct orders at every (species, side) corner.
  void validate() const;

  /// The two conditions at one corner, in insertion order.
  std::array<BoundaryCondition, 2> corner(Species s, Side side) const;
};

/// Same pair of (order, target) conditions for both species on each side.
BoundaryPlan symmetric_plan(std::array<std::pair<int, double>, 2> left_u,
                            std::array<std::pair<int, double>, 2> left_v,
                            std::array<std::pair<int, double>, 2> right_u,
                            std::array<std::pair<int, double>, 2> right_v);

struct InitialCondition {
  std::function<double(double)> u;
  std::function<double(double)> v;
  std::string u_source;
  std::string v_source;
};

/// Initial data given as expressions in x (see expr.hpp for the grammar).
InitialCondition from_expressions(const std::string& u_src, const std::string& v_src);

struct SolverConfig {
  double dt = 0.01;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  std::vector<double> probe_points;

  void validate() const;
};

struct ProblemSetup {
  RDCoefficients coefficients;
  UniformMesh mesh;
  BoundaryPlan boundary;
  InitialCondition initial;
  std::string label;
};

struct Preset {
  Model model;
  NamedParams constants;  // model constants after overrides
  ProblemSetup setup;
  SolverConfig config;
};

/// Complete configuration of one of the four test problems. Overrides may
/// set the model constants plus n, dt, t_end (and L for GrayScott).
Preset preset(Model model, const NamedParams& overrides = {});

struct LinearSolution {
  double u;
  double v;
};

/// Closed-form solution of the linear test system U_t = dU'' - aU + V,
/// V_t = dV'' - bV.
LinearSolution analytic_linear(double x, double t, double a, double b, double d);

}  // namespace tqb
