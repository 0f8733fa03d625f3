#include "tqb/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "tqb/error.hpp"

namespace tqb {

namespace {

// Rows: boundary conditions of the left corner, knot interpolation at
// x_0..x_N, boundary conditions of the right corner. A value condition
// coincides with the interpolation row at its boundary knot, so it replaces
// that row's target and the lost equation becomes interpolation at the
// half-knot next to the boundary.
Eigen::VectorXd fit_species(const TrigBasis& basis, const BoundaryPlan& plan,
                            const StencilWeights& w, Species s,
                            const std::function<double(double)>& ic) {
  const UniformMesh& mesh = basis.mesh();
  const int n = mesh.n;
  const int size = n + 5;
  BandedMatrix<double> a(size, 5, 5);
  Eigen::VectorXd b(size);

  auto sample = [&](double x) {
    double y = 0.0;
    try {
      y = ic(x);
    } catch (const Error& e) {
      throw Error(e.code(), "initial condition failed at x = " + std::to_string(x) + ": " + e.what());
    }
    if (!std::isfinite(y))
      throw Error(Errc::evaluation_domain,
                  "initial condition is not finite at x = " + std::to_string(x));
    return y;
  };
  auto point_row = [&](int row, double x) {
    const int centre = static_cast<int>(std::floor((x - mesh.x0) / mesh.h));
    for (int i = std::max(-2, centre - 3); i <= std::min(n + 2, centre + 4); ++i) {
      const double t = basis.value(i, x, 0);
      if (t != 0.0) a.ref(row, i + 2) = t;
    }
    b[row] = sample(x);
  };

  std::array<std::optional<double>, 2> pinned;  // value targets at x_0, x_N
  for (Side side : {Side::Left, Side::Right}) {
    const bool left = side == Side::Left;
    int row = left ? 0 : n + 3;
    for (const auto& bc : plan.corner(s, side)) {
      if (bc.order == 0) {
        pinned[left ? 0 : 1] = bc.target;
        point_row(row, left ? mesh.x0 + 0.5 * mesh.h : mesh.xN - 0.5 * mesh.h);
      } else {
        const auto stencil = w.row(bc.order);
        for (int j = 0; j < 5; ++j) a.ref(row, (left ? 0 : n) + j) = stencil[static_cast<std::size_t>(j)];
        b[row] = bc.target;
      }
      ++row;
    }
  }
  const auto val = w.row(0);
  for (int m = 0; m <= n; ++m) {
    for (int j = 0; j < 5; ++j) a.ref(m + 2, m + j) = val[static_cast<std::size_t>(j)];
    if (m == 0 && pinned[0])
      b[m + 2] = *pinned[0];
    else if (m == n && pinned[1])
      b[m + 2] = *pinned[1];
    else
      b[m + 2] = sample(m == n ? mesh.xN : mesh.knot(m));
  }
  return lu_factor(std::move(a)).solve(b);
}

StateVector unpack(const Eigen::VectorXd& x, const StateVector& like, const GhostMap& gm) {
  StateVector next = StateVector::zeros(like.n);
  for (int i = 0; i <= like.n; ++i) {
    next.u(i) = x[2 * i];
    next.v(i) = x[2 * i + 1];
  }
  apply_ghost_map(gm, next);
  return next;
}

Snapshot snapshot_of(double t, const StateVector& s, const StencilWeights& w,
                     const BoundaryPlan& plan) {
  return {t, knot_values(s.delta, w), knot_values(s.gamma, w), boundary_residual(plan, w, s)};
}

}  // namespace

StateVector fit_initial(const ProblemSetup& setup, const StencilWeights& w) {
  setup.boundary.validate();
  if (!setup.initial.u || !setup.initial.v)
    throw Error(Errc::invalid_argument, "initial condition is not set");
  StateVector s = StateVector::zeros(setup.mesh.n);
  const TrigBasis basis(setup.mesh);
  s.delta = fit_species(basis, setup.boundary, w, Species::U, setup.initial.u);
  s.gamma = fit_species(basis, setup.boundary, w, Species::V, setup.initial.v);
  return s;
}

StateVector step(const StateVector& state, const ProblemSetup& setup, const StencilWeights& w,
                 double dt, const GhostMap& gm) {
  SystemMatrices sys = assemble(setup, state, w, dt, gm);
  const auto lu = lu_factor(std::move(sys.a));
  return unpack(lu.solve(sys.rhs), state, gm);
}

long step_count(double t_end, double dt) {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

Integrator::Integrator(const ProblemSetup& setup)
    : setup_(setup),
      basis_(setup.mesh),
      weights_(stencil_weights(basis_.spline())),
      ghosts_(build_ghost_map(setup.boundary, weights_)) {}

StateVector Integrator::initial_state() const { return fit_initial(setup_, weights_); }

StateVector Integrator::advance(const StateVector& state, double dt) {
  if (!setup_.coefficients.is_linear())
    return step(state, setup_, weights_, dt, ghosts_);
  SystemMatrices sys = assemble(setup_, state, weights_, dt, ghosts_);
  if (!cached_ || cached_dt_ != dt) {
    cached_.emplace(lu_factor(std::move(sys.a)));
    cached_dt_ = dt;
  }
  return unpack(cached_->solve(sys.rhs), state, ghosts_);
}

Trajectory run(const ProblemSetup& setup, const SolverConfig& config,
               const StepObserver& observer) {
  config.validate();
  Integrator integ(setup);
  const StencilWeights& w = integ.weights();
  const long steps = step_count(config.t_end, config.dt);

  Trajectory traj;
  traj.steps = steps;
  for (double x : config.probe_points) traj.probes.push_back({x, {}});

  StateVector state = integ.initial_state();
  std::size_t next_snapshot = 0;
  // A snapshot goes to the time level closest to its requested time.
  auto record = [&](double t, double t_after) {
    while (next_snapshot < config.snapshot_times.size() &&
           config.snapshot_times[next_snapshot] - t <= t_after - config.snapshot_times[next_snapshot]) {
      traj.snapshots.push_back(snapshot_of(t, state, w, setup.boundary));
      ++next_snapshot;
    }
    for (auto& probe : traj.probes)
      probe.samples.push_back({t, integ.basis().combine(state.delta, probe.x, 0),
                               integ.basis().combine(state.gamma, probe.x, 0)});
  };

  traj.final = snapshot_of(0.0, state, w, setup.boundary);
  traj.previous = traj.final;
  auto level = [&](long k) { return k >= steps ? config.t_end : k * config.dt; };
  record(0.0, steps > 0 ? level(1) : std::numeric_limits<double>::infinity());
  if (observer) observer(0.0, traj.final.u, traj.final.v);

  double t = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double t_next = level(k);
    try {
      state = integ.advance(state, t_next - t);
    } catch (const Error& e) {
      char where[96];
      std::snprintf(where, sizeof where, " (step %ld, t = %.6g)", k, t_next);
      throw Error(e.code(), e.what() + std::string(where));
    }
    t = t_next;
    traj.previous = std::move(traj.final);
    traj.final = snapshot_of(t, state, w, setup.boundary);
    record(t, k < steps ? level(k + 1) : std::numeric_limits<double>::infinity());
    if (observer) observer(t, traj.final.u, traj.final.v);
  }
  return traj;
}

}  // namespace tqb
