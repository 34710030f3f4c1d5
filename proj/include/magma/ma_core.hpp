#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "magma/field.hpp"
#include "magma/source_spec.hpp"

namespace magma {

struct SolveConfig {
  double tol_residual = 1e-9;  // max-norm of the raw equation residual
  int max_newton = 60;
  double damping = 1.0;        // initial Newton step fraction, in (0, 1]
  bool convexity_guard = true; // reject steps losing axiswise convexity
  bool verbose = false;
};

struct SolveReport {
  GridField u;
  double residual = 0.0;            // raw residual max-norm of the result
  int newton_iters = 0;
  std::vector<double> trace;        // log-residual max-norm per iteration
};

// Dirichlet problem det D^2 u = f(x) > 0 with zero boundary data, by damped
// Newton on the log residual log det D^2 u - log f.  The linearization is
// the cofactor operator u^{ij} d_ij; the initial guess solves the Poisson
// problem lap u = n f^{1/n} (paraboloid fallback if that is not convex).
// Errors: newton-divergence; convexity-loss when damping underflows 1e-6.
SolveReport solve_fixed_rhs(std::shared_ptr<const Grid> g,
                            const std::function<double(Point)>& f,
                            const SolveConfig& cfg = {});

// Semilinear problem (u*)^k det D^2 u = F(x, u) with u* = <x, grad u> - u.
// Newton on log det D^2 u + k log u* - log F with the linearized operator
//   u^{ij} d_ij + (k/u*)(<x, grad .> - .) - (F_u/F) .
// `init` warm-starts the iteration (continuation ladders); F must be
// positive wherever it is evaluated.  Additional error: star-degeneracy
// when min u* < 1e-12 during the iteration (k != 0).
SolveReport solve_semilinear(std::shared_ptr<const Grid> g, double k,
                             const SourceSpec& F, const SolveConfig& cfg = {},
                             const GridField* init = nullptr);

// Raw residual field (u*)^k det D^2 u - F(x, u) evaluated nodewise; the
// certificate re-checked by tests on every returned solution.
std::vector<double> equation_residual(const GridField& u, double k,
                                      const SourceSpec& F);

}  // namespace magma
