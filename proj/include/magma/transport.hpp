#pragma once

#include <memory>
#include <vector>

#include "magma/field.hpp"

namespace magma {

// Symmetric 2x2 Hessian sample; xy and yy stay zero in 1-D.
struct SymMat {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  double det(int dim) const { return dim == 1 ? xx : xx * yy - xy * xy; }
};

// Pointwise sampling of the radial-graph transform of a negative convex
// field u: the graph of the convex potential phi with
//   phi(y) = 1/(-u(x)),  y = x/(-u(x)),
// whose gradient image covers the polar body of the domain.  Per sample:
//   grad phi = grad u / u*,           u* = <x, grad u> - u,
//   D^2 phi  = (-u/u*) (D^2u - grad u (D^2u x)^T/u*) (I - x grad u^T/u*),
// all evaluated from the nodal finite-difference derivatives of u (the
// Hessian comes from this closed form, never from differencing the
// irregular image cloud).  Nodes with -u below delta_cut (where the image
// point escapes to infinity) and nodes with nonpositive u* are dropped.
struct RadialGraphSample {
  std::shared_ptr<const Grid> grid;
  std::vector<int> node;       // originating interior node index
  std::vector<Point> x;        // source point
  std::vector<Point> y;        // image point x/(-u)
  std::vector<double> phi;     // potential value 1/(-u)
  std::vector<Point> grad;     // potential gradient
  std::vector<SymMat> hess;    // potential Hessian (closed form)
  std::vector<double> u_val;   // nodal data carried along: u, u*,
  std::vector<double> star;    //   det D^2 u and the quadrature weight
  std::vector<double> det_u;
  std::vector<double> weight;
  double delta_cut = 0.0;
  int n_dropped = 0;

  int dim() const { return grid->dim(); }
  size_t size() const { return node.size(); }
};

// delta_cut = 10 h ||grad u||_inf.  Errors: the zero field, or a field
// whose every node falls inside the cutoff band.
RadialGraphSample radial_transform(const GridField& u);

// max_i |<y_i, g_i> - phi_i + 1/u*_i|: the Legendre value of the potential
// at its own gradient must equal -1/u*.
double legendre_defect(const RadialGraphSample& s);

// Coverage deficiency of the polar body by the gradient image:
//   max_theta (1 - max_i <g_i, e_theta> / support(theta)),
// where support() is the polar body's support function (the gauge of the
// source domain).  0 means the image fills the polar body.
double support_gap(const RadialGraphSample& s, int directions = 64);

struct DualityReport {
  // Relative gap of the determinant identity
  //   det D^2 u / (u*)^{n+2} = phi^{n+2} det D^2 phi
  // per sample; with both sides built from the same nodal derivatives the
  // identity is exact algebra, so this measures floating-point consistency.
  double max_identity_residual = 0.0;
  double mean_identity_residual = 0.0;
  std::vector<double> identity_residual;  // per sample

  // Discretization-sensitive check that the closed-form Hessian really is
  // the Hessian of the sampled potential: for neighboring samples,
  //   g_j - g_i = (1/2)(H_i + H_j)(y_j - y_i) + O(|y_j - y_i|^3),
  // reported as the worst defect per unit displacement relative to the
  // local gradient scale.  Decays at second order under grid refinement.
  double hessian_consistency = 0.0;
  size_t n_samples = 0;
  size_t n_pairs = 0;
};
DualityReport verify_duality(const GridField& u);

struct PushforwardParams {
  double k = 0.0;        // star-weight exponent of the source problem
  double p = 1.0;        // zeroth-order exponent of the source problem
  double lambda = 1.0;   // intensity
  int bins = 64;         // 1-D: bins across the polar interval; 2-D: radial
  int angular_bins = 16; // 2-D only
  int min_samples = 1;   // thinner (nonempty) bins are flagged, not scored
};

// Mass-balance check of the transport interpretation: the gradient of the
// potential pushes mu = lambda dx / phi^{n+2+p} forward to
// nu = dy / (-phi_legendre)^{n+2+k}.  Both per-bin masses are pulled back
// to source-grid quadrature with the exact Jacobians of the image maps, so
// the per-bin discrepancy vanishes exactly when u solves
// (u*)^k det D^2 u = lambda (-u)^p.
struct PushforwardReport {
  double max_bin_discrepancy = 0.0;  // relative, over admissible bins
  double total_mass_gap = 0.0;       // |mu_tot - nu_tot| / nu_tot
  double support_gap = 0.0;          // polar-body coverage deficiency
  double max_dual_residual = 0.0;    // relative residual of the transformed
                                     // equation det H = lambda (-L)^{n+2+k}
                                     // / phi^{n+2+p}, L = Legendre value
  int bins_used = 0;                 // admissible bins scored
  int bins_flagged = 0;              // nonempty bins below min_samples
  std::vector<double> mu_mass, nu_mass;  // per-bin masses
};
PushforwardReport verify_pushforward(const GridField& u,
                                     const PushforwardParams& params = {});

}  // namespace magma
