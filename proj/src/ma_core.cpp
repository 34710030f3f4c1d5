#include "magma/ma_core.hpp"

#include <cmath>
#include <cstdio>

#include "magma/linear_solve.hpp"

namespace magma {

namespace {

// Poisson initializer: lap u0 = n f^{1/n}, zero trace, assembled from the
// same stencil tables the Newton linearization uses.
GridField poisson_init(const std::shared_ptr<const Grid>& gp,
                       const std::vector<double>& f) {
  const Grid& g = *gp;
  const int nm = g.size(), n = g.dim();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(nm) * 5);
  Eigen::VectorXd rhs(nm);
  for (int m = 0; m < nm; ++m) {
    const Stencil& s = g.stencil(m);
    double diag = s.dxx_c;
    auto add = [&](int dir, double c) {
      int q = g.leg(m, dir).idx;
      if (q >= 0 && c != 0.0) trip.emplace_back(m, q, c);
    };
    add(Grid::kE, s.dxx_e);
    add(Grid::kW, s.dxx_w);
    if (n == 2) {
      diag += s.dyy_c;
      add(Grid::kN, s.dyy_n);
      add(Grid::kS, s.dyy_s);
    }
    trip.emplace_back(m, m, diag);
    rhs[m] = n * std::pow(std::max(f[m], 1e-300), 1.0 / n);
  }
  Eigen::SparseMatrix<double> A(nm, nm);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd x = solve_sparse(A, rhs);
  GridField u0(gp);
  for (int m = 0; m < nm; ++m) u0[m] = x[m];
  return u0;
}

// Deep paraboloid with zero trace implied by the stencils; always convex.
GridField paraboloid_init(const std::shared_ptr<const Grid>& gp, double fmax) {
  const Grid& g = *gp;
  double R2 = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    Point p = g.point(m);
    R2 = std::max(R2, p.x * p.x + p.y * p.y);
  }
  double c = std::pow(std::max(fmax, 1e-12), 1.0 / g.dim());
  GridField u0(gp);
  for (int m = 0; m < g.size(); ++m) {
    Point p = g.point(m);
    u0[m] = 0.5 * c * (p.x * p.x + p.y * p.y - 1.0000001 * R2);
  }
  return u0;
}

struct ResidualEval {
  DerivedFields d;
  std::vector<double> log_r, raw_r, Fval;
  double log_norm = 0.0, raw_norm = 0.0;
  bool admissible = false;  // det > 0 everywhere (and u* > 0 if k != 0)
  double min_star = 0.0;
};

ResidualEval eval_residual(const GridField& u, double k,
                           const SourceSpec& F) {
  const Grid& g = u.grid();
  ResidualEval r;
  r.d = derive(u);
  const int nm = g.size();
  r.log_r.resize(nm);
  r.raw_r.resize(nm);
  r.Fval.resize(nm);
  r.min_star = std::numeric_limits<double>::infinity();
  r.admissible = true;
  for (int m = 0; m < nm; ++m) {
    double det = r.d.det[m], star = r.d.star[m];
    r.min_star = std::min(r.min_star, star);
    double Fm = F.F(g.point(m), u[m]);
    r.Fval[m] = Fm;
    if (det <= 0.0 || Fm <= 0.0 || (k != 0.0 && star <= 0.0)) {
      r.admissible = false;
      r.log_r[m] = r.raw_r[m] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sk = (k == 0.0) ? 1.0 : std::pow(star, k);
    r.log_r[m] = std::log(det) + (k == 0.0 ? 0.0 : k * std::log(star)) -
                 std::log(Fm);
    r.raw_r[m] = sk * det - Fm;
    r.log_norm = std::max(r.log_norm, std::abs(r.log_r[m]));
    r.raw_norm = std::max(r.raw_norm, std::abs(r.raw_r[m]));
  }
  return r;
}

// Linearization of the log residual at u: u^{ij} d_ij + (k/u*)(<x,grad> - id)
// - (F_u/F) id, assembled row-wise from the shared stencil tables.
Eigen::SparseMatrix<double> assemble_jacobian(const GridField& u, double k,
                                              const SourceSpec& F,
                                              const ResidualEval& re) {
  const Grid& g = u.grid();
  const int nm = g.size();
  const bool two_d = g.dim() == 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(nm) * 10);
  for (int m = 0; m < nm; ++m) {
    const Stencil& s = g.stencil(m);
    Point p = g.point(m);
    double det = re.d.det[m], star = re.d.star[m];
    double axx, ayy = 0.0, axy = 0.0;
    if (two_d) {
      axx = re.d.uyy[m] / det;
      ayy = re.d.uxx[m] / det;
      axy = -2.0 * re.d.uxy[m] / det;
    } else {
      axx = 1.0 / re.d.uxx[m];
    }
    double ks = (k == 0.0) ? 0.0 : k / star;
    double diag = axx * s.dxx_c + ks * (p.x * s.dx_c - 1.0) -
                  F.dF_du(p, u[m]) / re.Fval[m];
    auto add = [&](int dir, double c) {
      if (c == 0.0) return;
      int q = g.leg(m, dir).idx;
      if (q >= 0) trip.emplace_back(m, q, c);
    };
    add(Grid::kE, axx * s.dxx_e + ks * p.x * s.dx_e);
    add(Grid::kW, axx * s.dxx_w + ks * p.x * s.dx_w);
    if (two_d) {
      diag += ayy * s.dyy_c + ks * p.y * s.dy_c + axy * s.dxy_c;
      add(Grid::kN, ayy * s.dyy_n + ks * p.y * s.dy_n);
      add(Grid::kS, ayy * s.dyy_s + ks * p.y * s.dy_s);
      add(Grid::kNE, axy * s.dxy_ne);
      add(Grid::kSW, axy * s.dxy_sw);
      add(Grid::kSE, axy * s.dxy_se);
      add(Grid::kNW, axy * s.dxy_nw);
    }
    trip.emplace_back(m, m, diag);
  }
  Eigen::SparseMatrix<double> A(nm, nm);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

bool step_admissible(const GridField& u, double k, const SourceSpec& F,
                     const SolveConfig& cfg, ResidualEval& out) {
  out = eval_residual(u, k, F);
  if (!out.admissible) return false;
  if (k != 0.0 && out.min_star < 1e-12) return false;
  if (cfg.convexity_guard && !convex_nodewise(u, out.d)) return false;
  return true;
}

SolveReport newton_core(const std::shared_ptr<const Grid>& gp, double k,
                        const SourceSpec& F, const SolveConfig& cfg,
                        const GridField* init) {
  if (cfg.tol_residual <= 0.0)
    throw InvalidArgument("solve: tol_residual must be > 0");
  if (cfg.damping <= 0.0 || cfg.damping > 1.0)
    throw InvalidArgument("solve: damping must be in (0, 1]");
  const Grid& g = *gp;
  const int nm = g.size();

  GridField u(gp);
  ResidualEval re;
  bool warm = false;
  if (init) {
    if (init->grid_ptr() != gp)
      throw InvalidArgument("solve: init field lives on a different grid");
    u = *init;
    warm = step_admissible(u, k, F, cfg, re);
  }
  if (!warm) {
    std::vector<double> f0(nm);
    double fmax = 0.0;
    for (int m = 0; m < nm; ++m) {
      double v = F.F(g.point(m), 0.0);
      if (v <= 0.0) v = 1.0;  // degenerate-at-zero family: neutral seed
      f0[m] = v;
      fmax = std::max(fmax, v);
    }
    u = poisson_init(gp, f0);
    if (!step_admissible(u, k, F, cfg, re)) {
      u = paraboloid_init(gp, fmax);
      if (!step_admissible(u, k, F, cfg, re))
        throw SolverFailure("solve: no admissible initial iterate");
    }
  }

  SolveReport rep;
  rep.trace.push_back(re.log_norm);
  for (int it = 0; it < cfg.max_newton; ++it) {
    if (re.raw_norm <= cfg.tol_residual) {
      rep.u = u;
      rep.residual = re.raw_norm;
      rep.newton_iters = it;
      return rep;
    }
    Eigen::SparseMatrix<double> A = assemble_jacobian(u, k, F, re);
    Eigen::VectorXd rhs(nm);
    for (int m = 0; m < nm; ++m) rhs[m] = -re.log_r[m];
    Eigen::VectorXd delta = solve_sparse(A, rhs);

    double alpha = cfg.damping;
    bool accepted = false;
    while (alpha >= 1e-6) {
      GridField trial = u;
      for (int m = 0; m < nm; ++m) trial[m] += alpha * delta[m];
      ResidualEval rt;
      if (step_admissible(trial, k, F, cfg, rt) &&
          rt.log_norm <= (1.0 - 1e-4 * alpha) * re.log_norm) {
        u = std::move(trial);
        re = std::move(rt);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw SolverFailure(
          "solve: convexity-loss / no descent (damping underflow below 1e-6)");
    rep.trace.push_back(re.log_norm);
    if (cfg.verbose)
      std::fprintf(stderr, "newton %3d  |log r|=%.3e  |raw r|=%.3e  a=%.3f\n",
                   it + 1, re.log_norm, re.raw_norm, alpha);
  }
  if (re.raw_norm <= cfg.tol_residual) {
    rep.u = u;
    rep.residual = re.raw_norm;
    rep.newton_iters = cfg.max_newton;
    return rep;
  }
  throw SolverFailure("solve: newton-divergence (residual above tolerance)");
}

}  // namespace

SolveReport solve_fixed_rhs(std::shared_ptr<const Grid> g,
                            const std::function<double(Point)>& f,
                            const SolveConfig& cfg) {
  auto F = SourceSpec::callback(
      [f](Point x, double) { return f(x); }, [](Point, double) { return 0.0; },
      [f](Point x, double u) { return -f(x) * u; }, "fixed-rhs");
  return newton_core(g, 0.0, F, cfg, nullptr);
}

SolveReport solve_semilinear(std::shared_ptr<const Grid> g, double k,
                             const SourceSpec& F, const SolveConfig& cfg,
                             const GridField* init) {
  if (g->dim() + k < 0.0)
    throw InvalidArgument("solve_semilinear requires n + k >= 0");
  return newton_core(g, k, F, cfg, init);
}

std::vector<double> equation_residual(const GridField& u, double k,
                                      const SourceSpec& F) {
  const Grid& g = u.grid();
  DerivedFields d = derive(u);
  std::vector<double> r(g.size());
  for (int m = 0; m < g.size(); ++m) {
    double sk = (k == 0.0) ? 1.0 : std::pow(d.star[m], k);
    r[m] = sk * d.det[m] - F.F(g.point(m), u[m]);
  }
  return r;
}

}  // namespace magma
