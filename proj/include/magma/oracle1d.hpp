#pragma once

#include <functional>
#include <vector>

#include "magma/common.hpp"

namespace magma::oracle {

// Independent 1-D reference solvers used to freeze expected values in tests.
// Deliberately self-contained: no grid, no shared differencing or quadrature
// with the main modules.
//
// Shooting problem on the symmetric interval (-b, b):
//   u'' = lambda * (x u' - u)^(-k) * (eps - u)^p,   u(0) = -m,  u'(0) = 0,
// integrated until u crosses 0 (eps = 0 is the plain power family).
// Non-eigen mode root-finds m so the crossing lands at x = b; eigen mode
// fixes m = 1 (sup-norm normalization) and root-finds lambda instead.

struct ShootSpec {
  double k = 0.0;
  double p = 0.0;
  double lambda = 1.0;  // ignored (solved for) when eigen = true
  double eps = 0.0;     // shift in the (eps - u)^p factor
  double b = 1.0;       // right endpoint of the symmetric interval
  bool eigen = false;
  double tol = 1e-10;   // RK tolerance and boundary-hit tolerance
  double m_lo = 1e-4, m_hi = 50.0;        // shooting bracket on m
  double lam_lo = 1e-3, lam_hi = 1e4;     // bracket on lambda (eigen)
};

struct ShootResult {
  double m = 0.0;       // -u(0) of the returned trajectory
  double lambda = 0.0;  // lambda used (or found, in eigen mode)
  // Accepted-step samples on [0, b], x ascending, x.front()=0, x.back()=b.
  std::vector<double> x, u, up;
  long rhs_evals = 0;
};

ShootResult shoot(const ShootSpec& spec);

// Cubic-Hermite evaluation of the sampled trajectory; even extension to x<0.
double sample_u(const ShootResult& r, double x);
double sample_up(const ShootResult& r, double x);  // odd extension

// Adaptive quadrature of a smooth closed-form integrand to absolute
// tolerance `tol`; throws SolverFailure on non-convergence.
double quad(const std::function<double(double)>& f, double a, double b,
            double tol = 1e-12);

}  // namespace magma::oracle
