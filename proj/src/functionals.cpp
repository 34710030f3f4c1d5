#include "magma/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace magma {

namespace {

void require_same_grid(const GridField& a, const GridField& b,
                       const char* what) {
  if (&a.grid() != &b.grid())
    throw InvalidArgument(std::string(what) + ": fields live on different grids");
}

double npk1(const GridField& u, double k) {
  double v = u.grid().dim() + k + 1.0;
  if (v <= 0.0)
    throw InvalidArgument("functional requires n + k + 1 > 0");
  return v;
}

// Minimum of u* over quadrature-active nodes; used to reject singular
// integrands before negative powers of the star field are formed.
double weighted_star_min(const Grid& g, const std::vector<double>& star) {
  double m = std::numeric_limits<double>::infinity();
  const auto& w = g.quad_weights();
  for (int i = 0; i < g.size(); ++i)
    if (w[i] > 0.0 && star[i] < m) m = star[i];
  return m;
}

void require_star_positive(const GridField& u, const std::vector<double>& star,
                           const char* what) {
  if (weighted_star_min(u.grid(), star) <= 0.0)
    throw SolverFailure(std::string(what) +
                        ": singular integrand, u* vanishes at an active node");
}

// Adaptive Simpson for the cumulative weight integral of eval_Hh.
double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double eps, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps || depth >= 40)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double eps) {
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw SolverFailure("eval_Hh: weight integrand not finite");
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, eps, 0);
}

}  // namespace

double eval_H(const GridField& u, double k) {
  return eval_H(u, k, derive(u));
}

double eval_H(const GridField& u, double k, const DerivedFields& d) {
  double denom = npk1(u, k);
  const Grid& g = u.grid();
  const auto& w = g.quad_weights();
  if (k < 0.0) require_star_positive(u, d.star, "eval_H");
  double acc = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    double sk = (k == 0.0) ? 1.0 : std::pow(d.star[m], k);
    acc += w[m] * sk * (-u[m]) * d.det[m];
  }
  return acc / denom;
}

double eval_Hnorm(const GridField& u, double k) {
  double e = npk1(u, k);
  double H = eval_H(u, k);
  if (H < 0.0)
    throw SolverFailure("eval_Hnorm: negative energy (field outside the convex cone)");
  return std::pow(H, 1.0 / e);
}

double eval_J(const GridField& u, double k, const SourceSpec& source,
              bool raw_convention) {
  return eval_J(u, k, source, derive(u), raw_convention);
}

double eval_J(const GridField& u, double k, const SourceSpec& source,
              const DerivedFields& d, bool raw_convention) {
  double H = eval_H(u, k, d);
  const Grid& g = u.grid();
  const auto& w = g.quad_weights();
  double pot = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    Point x = g.point(m);
    pot += w[m] * (raw_convention ? source.raw_potential(x, u[m])
                                  : source.potential(x, u[m]));
  }
  return H - pot;
}

double first_variation(const GridField& u, const GridField& phi, double k) {
  require_same_grid(u, phi, "first_variation");
  DerivedFields d = derive(u);
  const Grid& g = u.grid();
  const auto& w = g.quad_weights();
  if (k < 0.0) require_star_positive(u, d.star, "first_variation");
  double acc = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    double sk = (k == 0.0) ? 1.0 : std::pow(d.star[m], k);
    acc -= w[m] * phi[m] * sk * d.det[m];
  }
  return acc;
}

double second_variation(const GridField& u, const GridField& phi,
                        const GridField& psi, double k) {
  require_same_grid(u, phi, "second_variation");
  require_same_grid(u, psi, "second_variation");
  const Grid& g = u.grid();
  DerivedFields du = derive(u), dp = derive(phi), dq = derive(psi);
  const auto& w = g.quad_weights();
  if (k < 0.0 || (k != 0.0 && k < 1.0))
    require_star_positive(u, du.star, "second_variation");
  const bool two_d = g.dim() == 2;
  double acc = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    if (du.det[m] <= 1e-12) {
      char msg[96];
      std::snprintf(msg, sizeof msg,
                    "second_variation: degenerate Hessian at node %d (det=%g)",
                    m, du.det[m]);
      throw SolverFailure(msg);
    }
    double sk = (k == 0.0) ? 1.0 : std::pow(du.star[m], k);
    double quad;
    if (two_d) {
      // adj(D^2 u) : grad phi x grad psi
      quad = du.uyy[m] * dp.ux[m] * dq.ux[m] -
             du.uxy[m] * (dp.ux[m] * dq.uy[m] + dp.uy[m] * dq.ux[m]) +
             du.uxx[m] * dp.uy[m] * dq.uy[m];
    } else {
      quad = dp.ux[m] * dq.ux[m];  // 1-D adjugate is 1
    }
    acc += w[m] * quad * sk;
    if (k != 0.0) {
      double skm1 = std::pow(du.star[m], k - 1.0);
      acc += w[m] * k * phi[m] * psi[m] * skm1 * du.det[m];
    }
  }
  return acc;
}

double scale_invariant(const GridField& u) {
  const Grid& g = u.grid();
  int n = g.dim();
  DerivedFields d = derive(u);
  require_star_positive(u, d.star, "scale_invariant");
  const auto& w = g.quad_weights();
  double acc = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    acc += w[m] * (-u[m]) * d.det[m] / std::pow(d.star[m], n + 1.0);
  }
  return acc;
}

double eval_Hh(const GridField& u, const std::function<double(double)>& h) {
  const Grid& g = u.grid();
  const int n = g.dim();
  DerivedFields d = derive(u);
  const auto& w = g.quad_weights();
  double M = 0.0;
  for (int m = 0; m < g.size(); ++m)
    if (w[m] > 0.0 && d.star[m] > M) M = d.star[m];
  if (M <= 0.0) return 0.0;  // u identically 0: every term vanishes
  require_star_positive(u, d.star, "eval_Hh");

  // Cumulative table of G(x) = integral_0^x s^n h(s) ds on [0, M].
  auto integrand = [&](double s) {
    return s <= 0.0 ? 0.0 : std::pow(s, double(n)) * h(s);
  };
  const int segs = 1024;
  const double dx = M / segs;
  std::vector<double> G(segs + 1, 0.0), gp(segs + 1);
  for (int i = 0; i <= segs; ++i) gp[i] = integrand(i * dx);
  double rough = adaptive_simpson(integrand, 0.0, M, 1e-9);
  double eps_seg = 1e-13 * std::max(1.0, std::abs(rough)) / segs;
  for (int i = 0; i < segs; ++i) {
    double piece = adaptive_simpson(integrand, i * dx, (i + 1) * dx, eps_seg);
    if (!std::isfinite(piece))
      throw SolverFailure("eval_Hh: weight quadrature failed");
    G[i + 1] = G[i] + piece;
  }
  auto G_at = [&](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= M) return G[segs];
    int i = std::min<int>(segs - 1, int(x / dx));
    double t = (x - i * dx) / dx;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * G[i] + dx * h10 * gp[i] + h01 * G[i + 1] + dx * h11 * gp[i + 1];
  };

  double acc = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    if (w[m] == 0.0) continue;
    acc += w[m] * G_at(d.star[m]) * (-u[m]) * d.det[m] /
           std::pow(d.star[m], n + 1.0);
  }
  return acc;
}

double rayleigh(const GridField& u, double k) {
  double e = npk1(u, k);
  double H = eval_H(u, k);
  const Grid& g = u.grid();
  const auto& w = g.quad_weights();
  double den = 0.0;
  for (int m = 0; m < g.size(); ++m)
    if (w[m] > 0.0) den += w[m] * std::pow(std::abs(u[m]), e);
  if (den <= 0.0) throw InvalidArgument("rayleigh: zero denominator (u = 0)");
  return e * H / den;
}

SobolevReport sobolev_check(const GridField& u, double k, double tol) {
  double e = npk1(u, k);
  SobolevReport r;
  r.H = eval_H(u, k);
  double u0 = std::abs(u.value_at({0.0, 0.0}));
  r.bound = u.grid().domain().polar_volume() * std::pow(u0, e) / e;
  r.margin = r.H - r.bound;
  r.ok = r.margin >= -tol;
  return r;
}

}  // namespace magma
