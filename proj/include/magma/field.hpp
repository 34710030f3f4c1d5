#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "magma/grid.hpp"

namespace magma {

// Scalar field on the interior nodes of a Grid. Zero Dirichlet data on the
// boundary closure is implied by the stencils; values are nodal only.
class GridField {
 public:
  GridField() = default;
  explicit GridField(std::shared_ptr<const Grid> g)
      : grid_(std::move(g)), v_(grid_->size(), 0.0) {}
  GridField(std::shared_ptr<const Grid> g, std::vector<double> v);

  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }
  int size() const { return static_cast<int>(v_.size()); }

  double operator[](int m) const { return v_[m]; }
  double& operator[](int m) { return v_[m]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  double min() const;
  double max() const;
  double max_abs() const;

  // Bilinear (linear in 1-D) interpolation; non-interior corners read as 0.
  double value_at(Point p) const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> v_;
};

// All first/second derivatives, the Hessian determinant and the star
// transform u*(x) = <x, grad u(x)> - u(x), nodewise, in one pass.
// One-sided non-uniform closures are used where legs end on the boundary;
// the cross derivative falls back to rotated diagonal second differences
// when a diagonal neighbor is missing.
struct DerivedFields {
  std::vector<double> ux, uy;        // uy empty in 1-D
  std::vector<double> uxx, uyy, uxy; // uyy/uxy empty in 1-D
  std::vector<double> det;           // uxx (1-D) or uxx*uyy - uxy^2
  std::vector<double> star;
};

DerivedFields derive(const GridField& u);

// Individual views built on derive().
std::vector<double> hessian_det(const GridField& u);
GridField star(const GridField& u);

// Discrete convexity flag: every principal (axis) second difference positive.
bool convex_axiswise(const GridField& u);
// Stronger nodewise check: axis second differences and det both positive.
bool convex_nodewise(const GridField& u, const DerivedFields& d);

// Cut-cell quadrature of nodewise values (see Grid::quad_weights).
double integrate(const Grid& g, const std::vector<double>& vals);
double integrate(const Grid& g, const std::vector<double>& vals,
                 const std::vector<double>& weight);

// Named members of the zero-trace convex test family:
//   "quadratic[:c]"  c/2 * (gauge^2 - 1)        (1-D: affine-normalized coord)
//   "cosine[:c]"     -c * cos(pi * gauge / 2)
//   "exp[:c]"        c * (exp(gauge^2 - 1) - 1)
//   "random:seed[:c]" random positive combination of the three plus a small
//                     asymmetric zero-trace perturbation, shrunk until the
//                     discrete convexity flag holds.
// Smooth strictly convex domains only (interval / ball / ellipse).
GridField make_test_field(std::shared_ptr<const Grid> g,
                          const std::string& recipe);

// Linear algebra helpers on matching grids.
GridField axpy(double alpha, const GridField& x, const GridField& y);
GridField scaled(const GridField& x, double alpha);
double max_abs_diff(const GridField& a, const GridField& b);

}  // namespace magma
