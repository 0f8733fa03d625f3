#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "tqb/stepper.hpp"

namespace tqb {

struct NormPair {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Discrete L2 = sqrt(h * sum (a_j - b_j)^2) and max-norm of the difference.
NormPair l2_linf(const Eigen::VectorXd& numeric, const Eigen::VectorXd& exact, double h);

struct ErrorReport {
  NormPair u;
  NormPair v;
  int n = 0;
  double dt = 0.0;
  double t = 0.0;
  std::string label;
};

/// Successive-level relative error sqrt(sum |next-prev|^2 / sum |next|^2).
double relative_error(const Eigen::VectorXd& prev, const Eigen::VectorXd& next);

/// Interior local maxima whose prominence (height above the higher of the
/// two bounding minima) is at least `prominence`.
int count_interior_maxima(const Eigen::VectorXd& profile, double prominence);

struct TimeValue {
  double t;
  double value;
};

/// Mean spacing of successive peak times; peaks need a prominence of 5% of
/// the series range and are located to sub-sample accuracy by a parabola.
double estimate_period(const std::vector<TimeValue>& series);

struct ConvergenceRow {
  double dt = 0.0;
  int n = 0;
  NormPair u;
  NormPair v;
  double order_u = 0.0;  // log2 of the max-norm ratio to the row at 2*dt, NaN if absent
  double order_v = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // ascending dt
};

/// Error report of a finished linear-model run at its final time.
ErrorReport linear_error(const Preset& linear, const Trajectory& traj);

/// Runs the linear model for every dt to t_end and tabulates the errors.
ConvergenceTable convergence_study(double a, double b, double d, int n,
                                   std::vector<double> dts, double t_end = 1.0);

}  // namespace tqb
