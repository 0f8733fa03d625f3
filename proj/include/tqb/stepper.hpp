#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tqb/banded.hpp"
#include "tqb/discretize.hpp"
#include "tqb/problem.hpp"

namespace tqb {

struct Snapshot {
  double t = 0.0;
  Eigen::VectorXd u;  // knot values 0..N
  Eigen::VectorXd v;
  double boundary_residual = 0.0;
};

struct ProbeSample {
  double t;
  double u;
  double v;
};

struct ProbeSeries {
  double x;
  std::vector<ProbeSample> samples;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<ProbeSeries> probes;
  Snapshot previous;  // knot values one step before the end
  Snapshot final;
  long steps = 0;
};

/// Called after every accepted step (and once at t = 0) with knot values.
using StepObserver =
    std::function<void(double t, const Eigen::VectorXd& u, const Eigen::VectorXd& v)>;

/// Spline coefficients interpolating the initial data at every knot and
/// satisfying the four boundary conditions of each species. A value condition
/// takes over its boundary knot, and the data is then matched at the
/// neighbouring half-knot instead.
StateVector fit_initial(const ProblemSetup& setup, const StencilWeights& w);

/// One linearized Crank-Nicolson step.
StateVector step(const StateVector& state, const ProblemSetup& setup, const StencilWeights& w,
                 double dt, const GhostMap& gm);

/// Steps needed to reach t_end; a final shortened step lands exactly on it.
long step_count(double t_end, double dt);

/// Time stepper bound to one problem. For reactions without nonlinear terms
/// the system matrix does not depend on the state, so its factorization is
/// kept and reused while dt is unchanged.
class Integrator {
 public:
  explicit Integrator(const ProblemSetup& setup);

  const ProblemSetup& setup() const { return setup_; }
  const TrigBasis& basis() const { return basis_; }
  const StencilWeights& weights() const { return weights_; }
  const GhostMap& ghosts() const { return ghosts_; }

  StateVector initial_state() const;
  StateVector advance(const StateVector& state, double dt);

 private:
  ProblemSetup setup_;
  TrigBasis basis_;
  StencilWeights weights_;
  GhostMap ghosts_;
  std::optional<BandedLU<double>> cached_;
  double cached_dt_ = 0.0;
};

Trajectory run(const ProblemSetup& setup, const SolverConfig& config,
               const StepObserver& observer = {});

}  // namespace tqb
