#include "magma/grid.hpp"

#include <algorithm>
#include <cmath>

namespace magma {

namespace {
// Interior nodes closer to the boundary than this fraction of a lattice step
// (along any axis) are pinned to the boundary instead; keeps the one-sided
// stencil coefficients bounded.
constexpr double kMinLegFraction = 1e-7;
}  // namespace

std::shared_ptr<const Grid> Grid::make(const ConvexDomain& dom, int n) {
  return std::shared_ptr<const Grid>(new Grid(dom, n));
}

Grid::Grid(const ConvexDomain& dom, int n) : dom_(dom), n_(n) {
  if (n < 17 || n > 1025)
    throw InvalidArgument("grid nodes per axis must be in [17, 1025]");
  auto bb = dom_.bounding_box();
  x0_ = bb[0];
  y0_ = bb[2];
  hx_ = (bb[1] - bb[0]) / (n_ - 1);
  hy_ = dim() == 2 ? (bb[3] - bb[2]) / (n_ - 1) : 0.0;
  legs_per_node_ = dim() == 1 ? 2 : 8;

  const int ny = dim() == 1 ? 1 : n_;
  idx_.assign(static_cast<size_t>(n_) * ny, -1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n_; ++i) {
      Point p{x0_ + i * hx_, dim() == 2 ? y0_ + j * hy_ : 0.0};
      if (!dom_.contains(p)) continue;
      // Pin near-degenerate nodes (boundary within a sliver of a step).
      bool degenerate = false;
      const Point dirs[4] = {{hx_, 0}, {-hx_, 0}, {0, hy_}, {0, -hy_}};
      int ndirs = dim() == 1 ? 2 : 4;
      for (int d = 0; d < ndirs && !degenerate; ++d) {
        Point q = p + kMinLegFraction * dirs[d];
        if (!dom_.contains(q)) degenerate = true;
      }
      if (degenerate) continue;
      idx_[static_cast<size_t>(j) * n_ + i] = static_cast<int>(points_.size());
      points_.push_back(p);
      ij_.emplace_back(i, j);
    }
  }
  if (points_.empty()) throw InvalidArgument("grid has no interior nodes");
  build_legs();
  build_stencils();
  build_quadrature();
}

void Grid::build_legs() {
  legs_.assign(static_cast<size_t>(size()) * legs_per_node_, Leg{});
  const int di[8] = {1, -1, 0, 0, 1, -1, 1, -1};
  const int dj[8] = {0, 0, 1, -1, 1, -1, -1, 1};
  for (int m = 0; m < size(); ++m) {
    Point p = points_[m];
    auto [i, j] = ij_[m];
    for (int d = 0; d < legs_per_node_; ++d) {
      Leg& L = legs_[m * legs_per_node_ + d];
      int ni = i + di[d], nj = j + dj[d];
      int nb = at(ni, nj);
      Point step{di[d] * hx_, dj[d] * hy_};
      bool diagonal = d >= 4;
      if (nb >= 0) {
        L.idx = nb;
        L.dist = diagonal ? 1.0 : std::abs(di[d]) * hx_ + std::abs(dj[d]) * hy_;
      } else {
        // Leg exits the domain (or ends on a pinned node): bisect the exit.
        double t = dom_.contains(p + step)
                       ? 1.0  // pinned neighbor still inside; treat full step
                       : dom_.ray_exit(p, step, 1.0);
        t = std::max(t, kMinLegFraction);
        L.idx = -1;
        L.dist = diagonal ? t : t * (std::abs(di[d]) * hx_ + std::abs(dj[d]) * hy_);
      }
    }
    if (dim() == 2 && !has_full_cross(m)) ++rotated_cross_count_;
  }
}

void Grid::build_stencils() {
  stencils_.assign(size(), Stencil{});
  // Non-uniform 3-point parabola-fit coefficients from forward/backward leg
  // distances: value = cf*u_fwd + cb*u_bwd + cc*u_center.
  auto first = [](double tf, double tb, double& cf, double& cb, double& cc) {
    double D = tf * tb * (tf + tb);
    cf = tb * tb / D;
    cb = -tf * tf / D;
    cc = (tf * tf - tb * tb) / D;
  };
  auto second = [](double tf, double tb, double& cf, double& cb, double& cc) {
    double D = tf * tb * (tf + tb);
    cf = 2.0 * tb / D;
    cb = 2.0 * tf / D;
    cc = -2.0 * (tf + tb) / D;
  };
  for (int m = 0; m < size(); ++m) {
    Stencil& s = stencils_[m];
    const Leg &E = leg(m, kE), &W = leg(m, kW);
    first(E.dist, W.dist, s.dx_e, s.dx_w, s.dx_c);
    second(E.dist, W.dist, s.dxx_e, s.dxx_w, s.dxx_c);
    if (dim() == 1) continue;
    const Leg &N = leg(m, kN), &S = leg(m, kS);
    first(N.dist, S.dist, s.dy_n, s.dy_s, s.dy_c);
    second(N.dist, S.dist, s.dyy_n, s.dyy_s, s.dyy_c);
    const double q4 = 1.0 / (4.0 * hx_ * hy_);
    if (has_full_cross(m)) {
      s.dxy_ne = q4;
      s.dxy_sw = q4;
      s.dxy_se = -q4;
      s.dxy_nw = -q4;
    } else {
      // Rotated closure: second differences along the two diagonals (in
      // diagonal-step units) give v.D2u.v for v = (hx, +-hy); the scaled
      // difference isolates the mixed term.
      const Leg &NE = leg(m, kNE), &SW = leg(m, kSW);
      const Leg &SE = leg(m, kSE), &NW = leg(m, kNW);
      double cf, cb, cc;
      second(NE.dist, SW.dist, cf, cb, cc);
      s.dxy_ne = cf * q4;
      s.dxy_sw = cb * q4;
      s.dxy_c = cc * q4;
      second(SE.dist, NW.dist, cf, cb, cc);
      s.dxy_se = -cf * q4;
      s.dxy_nw = -cb * q4;
      s.dxy_c -= cc * q4;
    }
  }
}

void Grid::build_quadrature() {
  quad_w_.assign(size(), 0.0);
  dropped_area_ = 0.0;
  if (dim() == 1) {
    double a = dom_.param_a(), b = dom_.param_b();
    for (int i = 0; i + 1 < n_; ++i) {
      double lo = std::max(a, x0_ + i * hx_);
      double hi = std::min(b, x0_ + (i + 1) * hx_);
      double len = hi - lo;
      if (len <= 0) continue;
      int c0 = at(i, 0), c1 = at(i + 1, 0);
      if (c0 >= 0 && c1 >= 0) {
        quad_w_[c0] += 0.5 * len;
        quad_w_[c1] += 0.5 * len;
      } else if (c0 >= 0) {
        quad_w_[c0] += len;
      } else if (c1 >= 0) {
        quad_w_[c1] += len;
      } else {
        dropped_area_ += len;
      }
    }
    return;
  }
  // 2-D: dual cells with 4 corner nodes. All-corners-inside cells are fully
  // inside (convexity), weighted exactly; boundary cells get their clipped
  // area from a 4x4 subgrid of contains() samples, shared among whatever
  // interior corners exist, falling back to the nearest interior node.
  const double cell = hx_ * hy_;
  for (int j = 0; j + 1 < n_; ++j) {
    for (int i = 0; i + 1 < n_; ++i) {
      int c[4] = {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)};
      int ninterior = (c[0] >= 0) + (c[1] >= 0) + (c[2] >= 0) + (c[3] >= 0);
      if (ninterior == 4) {
        for (int q = 0; q < 4; ++q) quad_w_[c[q]] += 0.25 * cell;
        continue;
      }
      double xa = x0_ + i * hx_, ya = y0_ + j * hy_;
      int inside = 0;
      for (int sj = 0; sj < 4; ++sj)
        for (int si = 0; si < 4; ++si) {
          Point s{xa + (si + 0.5) * hx_ / 4.0, ya + (sj + 0.5) * hy_ / 4.0};
          if (dom_.contains(s)) ++inside;
        }
      if (inside == 0) continue;
      double area = cell * inside / 16.0;
      if (ninterior > 0) {
        for (int q = 0; q < 4; ++q)
          if (c[q] >= 0) quad_w_[c[q]] += area / ninterior;
      } else {
        // Sliver cell with no interior corner: hand the mass to the nearest
        // interior node in the surrounding block, if any.
        int best = -1;
        double bestd = 0;
        Point centre{xa + 0.5 * hx_, ya + 0.5 * hy_};
        for (int dj2 = -1; dj2 <= 2; ++dj2)
          for (int di2 = -1; di2 <= 2; ++di2) {
            int nb = at(i + di2, j + dj2);
            if (nb < 0) continue;
            double d2 = dot(points_[nb] - centre, points_[nb] - centre);
            if (best < 0 || d2 < bestd) {
              best = nb;
              bestd = d2;
            }
          }
        if (best >= 0)
          quad_w_[best] += area;
        else
          dropped_area_ += area;
      }
    }
  }
}

}  // namespace magma
