#pragma once

#include <functional>

#include "magma/field.hpp"
#include "magma/source_spec.hpp"

namespace magma {

// Energy and variation formulas for the weighted Hessian functional
//
//   H_k(u) = 1/(n+k+1) * integral (u*)^k (-u) det D^2 u dx
//
// over convex nonpositive u with u* = <x, grad u> - u.  All integrals use the
// cut-cell quadrature of the field's grid.  Negative powers of u* require a
// strictly positive star field; a degenerate star raises SolverFailure.

// H_k(u); homogeneous of degree n+k+1 in u.
double eval_H(const GridField& u, double k);
// Same, with the derivative tables already computed (they must belong to u).
double eval_H(const GridField& u, double k, const DerivedFields& d);

// H_k(u)^(1/(n+k+1)); homogeneous of degree 1 (exactly so in the discrete
// model, since eval_H is a polynomial in the node values).
double eval_Hnorm(const GridField& u, double k);

// J(u) = H_k(u) - integral potential(x, u) dx.  raw_convention switches the
// potential to the family's unnormalized antiderivative (shifts J by a
// u-independent constant).
double eval_J(const GridField& u, double k, const SourceSpec& source,
              bool raw_convention = false);
// Same, with the derivative tables already computed (they must belong to u).
double eval_J(const GridField& u, double k, const SourceSpec& source,
              const DerivedFields& d, bool raw_convention = false);

// d/dt H_k(u + t phi) at t = 0  =  - integral phi (u*)^k det D^2 u dx.
double first_variation(const GridField& u, const GridField& phi, double k);

// d^2/(dt ds) H_k(u + t phi + s psi) at 0:
//   integral adj(D^2 u) grad phi . grad psi (u*)^k dx
//   + k * integral phi psi (u*)^(k-1) det D^2 u dx.
// The first term contracts the adjugate directly (u^{ij} det = adj), so no
// matrix inverse is formed.  A node with det D^2 u <= 1e-12 violates the
// strict-convexity precondition and raises SolverFailure naming the node.
double second_variation(const GridField& u, const GridField& phi,
                        const GridField& psi, double k);

// integral (-u) det D^2 u / (u*)^(n+1) dx; equals the polar volume of the
// domain for every convex u < 0 in the continuum (degree-0 homogeneous).
double scale_invariant(const GridField& u);

// Generalized energy  H_h(u) = integral G(u*) (-u) det D^2 u / (u*)^(n+1) dx
// with G(x) = integral_0^x s^n h(s) ds for a weight h > 0 on (0, max u*].
// h(s) = s^k gives G(x) = x^(n+k+1)/(n+k+1) and reproduces eval_H(u, k)
// exactly.  G is computed once by adaptive quadrature on a cumulative table
// over [0, max u*] and evaluated by cubic Hermite interpolation (G' = s^n h
// is known pointwise, so the interpolant is 4th order on each table cell).
double eval_Hh(const GridField& u, const std::function<double(double)>& h);

// Rayleigh quotient (n+k+1) H_k(u) / integral |u|^(n+k+1) dx.
double rayleigh(const GridField& u, double k);

struct SobolevReport {
  double H = 0.0;      // eval_H(u, k)
  double bound = 0.0;  // |polar domain| |u(0)|^(n+k+1) / (n+k+1)
  double margin = 0.0; // H - bound
  bool ok = false;     // margin >= -tol
};

// Sharp lower bound H_k(u) >= |domain polar| |u(0)|^(n+k+1) / (n+k+1),
// with equality exactly at multiples of the gauge-squared profile.
SobolevReport sobolev_check(const GridField& u, double k, double tol = 1e-8);

}  // namespace magma
