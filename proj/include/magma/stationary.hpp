#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "magma/field.hpp"
#include "magma/ma_core.hpp"

namespace magma {

// High-level drivers for the power-law Dirichlet family
//
//   (u*)^k det D^2 u = lambda * (-u)^p,   u = 0 on the boundary,
//
// in its three regimes relative to the homogeneity degree n + k of the
// left-hand side: p < n+k (unique nonzero solution), p > n+k (nontrivial
// solution above the trivial one), and p = n+k (eigenvalue problem).

struct DirichletParams {
  double k = 0.0;
  double p = 1.0;
  double lambda = 1.0;
};

struct StationaryConfig {
  SolveConfig newton;  // inner Newton settings for every ladder rung

  // Regularization ladder: the degenerate right-hand side (-u)^p is never
  // given to Newton directly; each rung solves with (eps - u)^p warm-started
  // from the previous one.
  std::vector<double> eps_ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  // Subcritical uniqueness cross-check: two parabolic flows from distinct
  // starting shapes must land on the same field within 10 * flow_tol.
  bool uniqueness_check = true;
  double flow_tol = 1e-6;
  long flow_max_steps = 2000000;

  // Eigenvalue continuation and inverse-iteration polish.
  double s_step0 = 0.25;     // initial continuation increment
  double s_norm_cap = 50.0;  // ||u_s|| at which the family counts as blown up
  double s_step_min = 1e-6;  // smallest increment before the ladder stops
  int polish_iters = 40;
  double polish_tol = 1e-10;  // relative stabilization of the eigenvalue
};

struct StationaryResult {
  GridField u;
  double residual = 0.0;  // max-norm residual under the degenerate equation
  double J = 0.0;         // energy of the returned field
  // Failed cross-checks are reported here, never silently dropped.
  std::vector<std::string> warnings;
};

struct EigenResult {
  double lambda = 0.0;        // eigenvalue estimate after the polish
  GridField eigenfunction;    // normalized to sup-norm 1, negative inside
  // (s, ||u_s||_inf) along the continuation; empty for the scale-free case.
  std::vector<std::pair<double, double>> s_trace;
  double s_tilde = 0.0;       // fitted blow-up abscissa of the continuation
  double rayleigh_value = 0.0;
  double residual = 0.0;      // max-norm eigen-equation residual
  std::vector<std::string> warnings;
};

// Unique nonzero solution for 0 < p < n + k: regularization ladder at unit
// intensity, rescaled to the requested lambda by homogeneity.  When
// cfg.uniqueness_check is set, two parabolic flows from distinct starting
// shapes are run against the degenerate equation and any disagreement
// (between themselves or with the ladder limit) beyond 10 * flow_tol is
// recorded as a warning.  Errors: InvalidArgument outside the regime,
// SolverFailure from the inner solves.
StationaryResult solve_subcritical(std::shared_ptr<const Grid> g,
                                   const DirichletParams& params,
                                   const StationaryConfig& cfg = {});

// Nontrivial solution for p > n + k > 0.  The eigenfunction of the critical
// problem seeds the iteration at the amplitude where c^{n+k+1} H and the
// potential term of c * eigenfunction balance; the ladder is retried over
// amplitude multipliers {0.5, 1, 2, 4, 8}.  A converged field smaller than a
// tenth of the seed scale counts as a collapse onto the trivial branch and
// the sweep moves on.  The returned energy is reported and checked positive
// (warning otherwise).  Errors: InvalidArgument outside the regime,
// SolverFailure when the whole sweep fails.
StationaryResult solve_supercritical(std::shared_ptr<const Grid> g,
                                     const DirichletParams& params,
                                     const StationaryConfig& cfg = {});

// Eigenvalue problem (u*)^k det D^2 u = lambda |u|^{n+k} for n + k >= 0.
// Continuation in s along (u*)^k det D^2 u = (1 - s u)^{n+k} with adaptive
// increments (halved whenever the sup-norm more than doubles or the rung
// fails); the blow-up abscissa s_tilde is extrapolated from a linear fit of
// 1/||u_s|| over the last five points, lambda = s_tilde^{n+k}, and the pair
// is polished by normalized inverse iteration with Rayleigh updates.  For
// n + k = 0 the family is independent of s and the driver runs pure inverse
// iteration.  In two dimensions a polish failure degrades to the
// continuation estimate with a warning; in one dimension it is an error.
// Errors: InvalidArgument for n + k < 0; SolverFailure on continuation
// stall (norms stay bounded past the Rayleigh upper bound) or
// inverse-iteration divergence.
EigenResult solve_eigen(std::shared_ptr<const Grid> g, double k,
                        const StationaryConfig& cfg = {});

// c * u with c = lambda_target^{1/(n+k-p)}: exact homogeneity maps the
// unit-intensity solution to intensity lambda_target.  The scale-invariant
// case p = n + k is rejected.
GridField rescale_solution(const GridField& u, const DirichletParams& params,
                           double lambda_target);

}  // namespace magma
