#pragma once

// Explicit time integration of the gradient descent
//
//     u_t = log det D^2 u + k log u* - log F(x, u),       u = 0 on the boundary,
//
// the steepest-descent dynamics of the energy J(u) = H(u) - integral of the
// source potential. Steps are accepted only when they keep the iterate
// discretely convex and do not increase J beyond a fixed tolerance; rejected
// steps halve dt (at most 30 times, then the step reports failure). The
// driver additionally caps requested steps at a nodewise linear-stability
// estimate so that the acceptance guard stays a safety net rather than the
// stepping mechanism.

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "magma/field.hpp"
#include "magma/source_spec.hpp"

namespace magma {

enum class FlowTermination {
  running,    // flow_run has not finished
  converged,  // max-norm of u_t fell below tol, or the field reached u_floor
  blow_up,    // max-norm of u exceeded blowup_factor * (initial max-norm)
  timeout,    // t passed t_max or the step budget ran out
};

struct FlowState {
  GridField u;
  double t = 0.0;
  double dt_last = 0.0;
  // (t, J) after every accepted step; entry 0 is the initial energy.
  std::vector<std::pair<double, double>> J_history;
  // Max-norm of the update field u_t at the current u.
  double residual = std::numeric_limits<double>::infinity();
  // Diagnostics refreshed whenever the update field is evaluated.
  double u_max = 0.0;       // max-norm of u
  double u_center = 0.0;    // u at the origin (interpolated)
  double min_star = 0.0;    // min over nodes of u* = <x, grad u> - u
  double min_source = 0.0;  // min over nodes of F(x, u)
  // Explicit-step stability estimate for the current u: the largest dt the
  // nodewise linearization of the update admits (with a 10% safety margin).
  double dt_stable = 0.0;
  FlowTermination termination = FlowTermination::running;
  long steps = 0;
  // Update field u_t of the current u, reused by the next step.
  std::optional<GridField> rhs;
};

struct FlowConfig {
  double k = 0.0;
  double dt0 = 0.0;    // initial step request; <= 0 picks h^2 / 4
  double tol = 1e-8;   // stationarity threshold on the max-norm of u_t
  double t_max = 50.0;
  double blowup_factor = 1e3;
  long max_steps = 2000000;
  // > 0: the run also counts as converged (to the zero field) once the
  // max-norm of u drops below this floor. Useful when the trivial field is
  // the attractor, where u_t itself does not vanish.
  double u_floor = 0.0;
  // Enforce the inscribed-ball depth bound on u(0) whenever the source stays
  // bounded away from zero (see barrier_bound).
  bool enforce_barrier = true;
};

// Depth every admissible state must reach at the origin when the source
// satisfies F >= eta > 0: the comparison profile v = eps (|x|^2 - r^2) on the
// inscribed ball of radius r = dist(0, boundary), with eps chosen so that
// (v*)^k det D^2 v <= eta, forces u(0) <= -eps r^2. Returns -eps r^2.
// Requires dimension + k > 0.
double barrier_bound(const Grid& g, double eta, double k);

// Seed a state from an initial field: evaluates the update field (residual,
// stability estimate, diagnostics) and records J(u0). Requires u0 negative
// at the origin and admissible (positive determinant, positive star when
// k != 0, positive source).
FlowState make_flow_state(const GridField& u0, const SourceSpec& F,
                          const FlowConfig& cfg);

// One explicit update u <- u + dt_acc * u_t with dt_acc = dt / 2^j for the
// smallest j in {0..30} whose candidate stays convex (positive determinant,
// positive u* when k != 0, positive source) and keeps J nonincreasing within
// 1e-8 * (1 + |J|). Mutates state; the accepted step lands in state.dt_last
// and the update field, residual, and diagnostics are refreshed at the new
// state. Throws SolverFailure on dt underflow or when the current state
// itself has a nonpositive determinant, star, or source (the logarithms
// would be undefined).
void flow_step(FlowState& state, const SourceSpec& F, const FlowConfig& cfg,
               double dt);

// Integrate from u0 until the residual drops to cfg.tol (converged), the
// field norm passes the blow-up threshold, or time/step budgets expire
// (timeout). Requested steps follow min(2 * dt_last, dt_stable, 1024 * dt0).
FlowState flow_run(const GridField& u0, const SourceSpec& F,
                   const FlowConfig& cfg);

}  // namespace magma
