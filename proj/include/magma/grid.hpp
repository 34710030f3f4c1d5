#pragma once

#include <memory>
#include <vector>

#include "magma/domain.hpp"

namespace magma {

// One stencil leg from an interior node toward a neighbor direction.
// idx >= 0: ends on interior node idx at distance `dist`.
// idx == -1: ends on the boundary (value pinned to 0) at distance `dist`.
// Axis legs measure dist in coordinate units; diagonal legs measure it as a
// fraction of one diagonal lattice step (so dist == 1 means the neighbor).
struct Leg {
  int idx = -1;
  double dist = 0.0;
};

// Per-node finite-difference coefficients derived from the leg geometry.
// Each derivative at the node is sum(coeff * u[leg]) + (center coeff) * u[m],
// where a leg ending on the boundary contributes 0. Shared by the field
// differentiation pass and by Jacobian assembly in the solvers, so the two
// can never drift apart.
struct Stencil {
  double dx_e = 0, dx_w = 0, dx_c = 0;
  double dy_n = 0, dy_s = 0, dy_c = 0;                            // 2-D only
  double dxx_e = 0, dxx_w = 0, dxx_c = 0;
  double dyy_n = 0, dyy_s = 0, dyy_c = 0;                         // 2-D only
  double dxy_ne = 0, dxy_sw = 0, dxy_se = 0, dxy_nw = 0, dxy_c = 0;
};

// Uniform lattice over the domain's bounding box, clipped to the domain.
// Interior nodes are lattice nodes strictly inside; every stencil leg that
// exits the domain is closed at the boundary-intersection point, where
// Dirichlet data (0) lives. Immutable; fields share it by shared_ptr.
class Grid {
 public:
  // Axis legs: 0=+x, 1=-x, 2=+y, 3=-y. Diagonals (2-D): 4=(+,+), 5=(-,-),
  // 6=(+,-), 7=(-,+).
  static constexpr int kE = 0, kW = 1, kN = 2, kS = 3;
  static constexpr int kNE = 4, kSW = 5, kSE = 6, kNW = 7;

  static std::shared_ptr<const Grid> make(const ConvexDomain& dom,
                                          int nodes_per_axis);

  const ConvexDomain& domain() const { return dom_; }
  int dim() const { return dom_.dim(); }
  int nodes_per_axis() const { return n_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double h() const { return dim() == 1 ? hx_ : std::max(hx_, hy_); }
  int size() const { return static_cast<int>(points_.size()); }

  Point point(int m) const { return points_[m]; }
  int lattice_i(int m) const { return ij_[m].first; }
  int lattice_j(int m) const { return ij_[m].second; }

  // Interior index of lattice node (i,j), or -1.
  int at(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= (dim() == 1 ? 1 : n_)) return -1;
    return idx_[static_cast<size_t>(j) * n_ + i];
  }

  const Leg& leg(int m, int dir) const { return legs_[m * legs_per_node_ + dir]; }
  bool has_full_cross(int m) const {
    return leg(m, kNE).idx >= 0 && leg(m, kSW).idx >= 0 &&
           leg(m, kSE).idx >= 0 && leg(m, kNW).idx >= 0;
  }
  // Number of nodes whose cross-derivative stencil fell back to the rotated
  // (diagonal second-difference) form.
  int rotated_cross_count() const { return rotated_cross_count_; }

  const Stencil& stencil(int m) const { return stencils_[m]; }

  // Cut-cell quadrature weight per interior node; see field.cpp for the rule.
  const std::vector<double>& quad_weights() const { return quad_w_; }
  // Clipped area that could not be attached to any interior node (slivers).
  double dropped_area() const { return dropped_area_; }

  double x0() const { return x0_; }
  double y0() const { return y0_; }

 private:
  Grid(const ConvexDomain& dom, int nodes_per_axis);
  void build_legs();
  void build_stencils();
  void build_quadrature();

  ConvexDomain dom_;
  int n_ = 0;
  double x0_ = 0, y0_ = 0, hx_ = 0, hy_ = 0;
  int legs_per_node_ = 2;
  std::vector<int> idx_;                       // lattice -> interior index
  std::vector<Point> points_;                  // interior node coordinates
  std::vector<std::pair<int, int>> ij_;        // interior -> lattice (i,j)
  std::vector<Leg> legs_;
  std::vector<Stencil> stencils_;
  std::vector<double> quad_w_;
  double dropped_area_ = 0.0;
  int rotated_cross_count_ = 0;
};

}  // namespace magma
