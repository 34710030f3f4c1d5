#include "magma/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magma/domain.hpp"
#include "magma/grid.hpp"

namespace magma {

namespace {

// Support function of the source domain, sup_{x in Omega} <e, x>; equals
// the radial function of the polar body on unit vectors.  Evaluated by
// maximizing over a dense boundary fan (exact for the interval).
double domain_support(const ConvexDomain& dom, Point e) {
  if (dom.dim() == 1)
    return e.x >= 0.0 ? e.x * dom.boundary_point(0.0).x
                      : e.x * dom.boundary_point(3.14159265358979323846).x;
  double best = -std::numeric_limits<double>::infinity();
  const int table = 512;
  for (int l = 0; l < table; ++l) {
    double th = 2.0 * 3.14159265358979323846 * l / table;
    best = std::max(best, dot(e, dom.boundary_point(th)));
  }
  return best;
}

}  // namespace

RadialGraphSample radial_transform(const GridField& u) {
  auto g = u.grid_ptr();
  const int dim = g->dim();
  if (u.max_abs() == 0.0)
    throw InvalidArgument("radial_transform: the zero field has no graph");

  DerivedFields d = derive(u);
  double grad_inf = 0.0;
  for (int m = 0; m < g->size(); ++m) {
    Point gr{d.ux[m], dim == 2 ? d.uy[m] : 0.0};
    grad_inf = std::max(grad_inf, norm(gr));
  }

  RadialGraphSample s;
  s.grid = g;
  s.delta_cut = 10.0 * g->h() * grad_inf;
  const auto& w = g->quad_weights();

  for (int m = 0; m < g->size(); ++m) {
    double minus_u = -u[m];
    double st = d.star[m];
    if (minus_u < s.delta_cut || st <= 1e-250) {
      ++s.n_dropped;
      continue;
    }
    Point xm = g->point(m);
    Point b{d.ux[m], dim == 2 ? d.uy[m] : 0.0};
    double uxx = d.uxx[m];
    double uyy = dim == 2 ? d.uyy[m] : 0.0;
    double uxy = dim == 2 ? d.uxy[m] : 0.0;

    SymMat H;
    if (dim == 1) {
      double m2 = 1.0 - xm.x * b.x / st;
      H.xx = (minus_u / st) * uxx * m2 * m2;
    } else {
      // M1 = A - b (A x)^T / u*,  M2 = I - x b^T / u*,
      // H = (-u/u*) M1 M2 (symmetric since A is).
      double Ax0 = uxx * xm.x + uxy * xm.y;
      double Ax1 = uxy * xm.x + uyy * xm.y;
      double M1[2][2] = {{uxx - b.x * Ax0 / st, uxy - b.x * Ax1 / st},
                         {uxy - b.y * Ax0 / st, uyy - b.y * Ax1 / st}};
      double M2[2][2] = {{1.0 - xm.x * b.x / st, -xm.x * b.y / st},
                         {-xm.y * b.x / st, 1.0 - xm.y * b.y / st}};
      double P[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          P[i][j] = (minus_u / st) *
                    (M1[i][0] * M2[0][j] + M1[i][1] * M2[1][j]);
      H.xx = P[0][0];
      H.yy = P[1][1];
      H.xy = 0.5 * (P[0][1] + P[1][0]);
    }

    s.node.push_back(m);
    s.x.push_back(xm);
    s.y.push_back((1.0 / minus_u) * xm);
    s.phi.push_back(1.0 / minus_u);
    s.grad.push_back((1.0 / st) * b);
    s.hess.push_back(H);
    s.u_val.push_back(u[m]);
    s.star.push_back(st);
    s.det_u.push_back(d.det[m]);
    s.weight.push_back(w[m]);
  }

  if (s.size() == 0)
    throw InvalidArgument(
        "radial_transform: no node survives the boundary cutoff");
  return s;
}

double legendre_defect(const RadialGraphSample& s) {
  double worst = 0.0;
  for (size_t i = 0; i < s.size(); ++i)
    worst = std::max(
        worst, std::abs(dot(s.y[i], s.grad[i]) - s.phi[i] + 1.0 / s.star[i]));
  return worst;
}

double support_gap(const RadialGraphSample& s, int directions) {
  if (directions < 2) throw InvalidArgument("support_gap: directions < 2");
  const ConvexDomain& dom = s.grid->domain();
  std::vector<Point> dirs;
  if (s.dim() == 1) {
    dirs = {{1.0, 0.0}, {-1.0, 0.0}};
  } else {
    for (int l = 0; l < directions; ++l) {
      double th = 2.0 * 3.14159265358979323846 * l / directions;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  }
  double gap = 0.0;
  for (const Point& e : dirs) {
    double target = dom.gauge(e);  // support function of the polar body
    double reach = -std::numeric_limits<double>::infinity();
    for (const Point& gi : s.grad) reach = std::max(reach, dot(gi, e));
    gap = std::max(gap, 1.0 - reach / target);
  }
  return gap;
}

DualityReport verify_duality(const GridField& u) {
  RadialGraphSample s = radial_transform(u);
  const Grid& g = *s.grid;
  const int dim = s.dim();
  const int npk2 = dim + 2;

  DualityReport rep;
  rep.n_samples = s.size();
  rep.identity_residual.resize(s.size());
  double sum = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    double lhs = s.det_u[i] / std::pow(s.star[i], npk2);
    double rhs = std::pow(s.phi[i], npk2) * s.hess[i].det(dim);
    double rel = std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
    rep.identity_residual[i] = rel;
    rep.max_identity_residual = std::max(rep.max_identity_residual, rel);
    sum += rel;
  }
  rep.mean_identity_residual = sum / static_cast<double>(s.size());

  // Map node -> sample index to find lattice-adjacent sample pairs.
  std::vector<int> at_node(g.size(), -1);
  for (size_t i = 0; i < s.size(); ++i) at_node[s.node[i]] = static_cast<int>(i);

  auto pair_defect = [&](int i, int j) {
    Point dy = s.y[j] - s.y[i];
    double len = norm(dy);
    if (len < 1e-13) return;
    const SymMat &A = s.hess[i], &B = s.hess[j];
    Point mid{0.5 * ((A.xx + B.xx) * dy.x + (A.xy + B.xy) * dy.y),
              0.5 * ((A.xy + B.xy) * dy.x + (A.yy + B.yy) * dy.y)};
    Point defect = s.grad[j] - s.grad[i] - mid;
    double scale = len * (1.0 + std::max(norm(s.grad[i]), norm(s.grad[j])));
    rep.hessian_consistency =
        std::max(rep.hessian_consistency, norm(defect) / scale);
    ++rep.n_pairs;
  };

  for (size_t i = 0; i < s.size(); ++i) {
    int m = s.node[i];
    int li = g.lattice_i(m), lj = g.lattice_j(m);
    int east = g.at(li + 1, lj);
    if (east >= 0 && at_node[east] >= 0) pair_defect((int)i, at_node[east]);
    if (dim == 2) {
      int north = g.at(li, lj + 1);
      if (north >= 0 && at_node[north] >= 0)
        pair_defect((int)i, at_node[north]);
    }
  }
  return rep;
}

PushforwardReport verify_pushforward(const GridField& u,
                                     const PushforwardParams& params) {
  if (!(params.lambda > 0.0))
    throw InvalidArgument("verify_pushforward: lambda must be positive");
  if (params.bins < 1 || params.angular_bins < 1)
    throw InvalidArgument("verify_pushforward: need at least one bin");

  RadialGraphSample s = radial_transform(u);
  const ConvexDomain& dom = s.grid->domain();
  const int dim = s.dim();
  const double n2k = dim + 2 + params.k;
  const double n2p = dim + 2 + params.p;

  // Bin layout over the polar body.
  int total_bins =
      dim == 1 ? params.bins : params.bins * params.angular_bins;
  PushforwardReport rep;
  rep.mu_mass.assign(total_bins, 0.0);
  rep.nu_mass.assign(total_bins, 0.0);
  std::vector<int> count(total_bins, 0);

  double lo = 0.0, hi = 0.0;
  if (dim == 1) {
    lo = -dom.gauge({-1.0, 0.0});
    hi = dom.gauge({1.0, 0.0});
  }

  auto bin_of = [&](Point gi) {
    if (dim == 1) {
      double f = (gi.x - lo) / (hi - lo);
      int b = static_cast<int>(f * params.bins);
      return std::clamp(b, 0, params.bins - 1);
    }
    double th = std::atan2(gi.y, gi.x);
    int ja = static_cast<int>((th + 3.14159265358979323846) /
                              (2.0 * 3.14159265358979323846) *
                              params.angular_bins);
    ja = std::clamp(ja, 0, params.angular_bins - 1);
    // Radial fraction: |g| * support_Omega(e) since the polar body's radial
    // function is the reciprocal of the source support function.
    double r = norm(gi);
    double f = r == 0.0 ? 0.0 : r * domain_support(dom, (1.0 / r) * gi);
    int jr = std::clamp(static_cast<int>(f * params.bins), 0, params.bins - 1);
    return ja * params.bins + jr;
  };

  double mu_tot = 0.0, nu_tot = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    double minus_u = -s.u_val[i], st = s.star[i], w = s.weight[i];
    // Pullbacks to source quadrature: the image maps x -> y and x -> grad
    // have Jacobian determinants u*/(-u)^{n+1} and (-u) det D^2u / (u*)^{n+1}.
    double mu = params.lambda * std::pow(minus_u, params.p + 1.0) * st * w;
    double nu = std::pow(st, params.k + 1.0) * minus_u * s.det_u[i] * w;
    int b = bin_of(s.grad[i]);
    rep.mu_mass[b] += mu;
    rep.nu_mass[b] += nu;
    ++count[b];
    mu_tot += mu;
    nu_tot += nu;

    // Transformed-equation residual at the sample, in image variables.
    double lhs = s.hess[i].det(dim);
    double rhs = params.lambda * std::pow(1.0 / st, n2k) /
                 std::pow(s.phi[i], n2p);
    rep.max_dual_residual =
        std::max(rep.max_dual_residual,
                 std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300));
  }

  rep.total_mass_gap = std::abs(mu_tot - nu_tot) / std::max(nu_tot, 1e-300);
  for (int b = 0; b < total_bins; ++b) {
    if (count[b] == 0) continue;
    if (count[b] < params.min_samples) {
      ++rep.bins_flagged;
      continue;
    }
    ++rep.bins_used;
    double denom = std::max(rep.nu_mass[b], 1e-300);
    rep.max_bin_discrepancy =
        std::max(rep.max_bin_discrepancy,
                 std::abs(rep.mu_mass[b] - rep.nu_mass[b]) / denom);
  }
  rep.support_gap = support_gap(s);
  return rep;
}

}  // namespace magma
