#include "magma/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "magma/flow.hpp"
#include "magma/functionals.hpp"

namespace magma {

namespace {

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return std::string(buf);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Sup-norm-1 copy, preserving sign (fields are negative inside).
GridField normalized(const GridField& u) {
  double m = u.max_abs();
  if (!(m > 0.0))
    throw SolverFailure("cannot normalize an identically zero field");
  return scaled(u, 1.0 / m);
}

// One inverse-iteration update: solve det D^2 w_next = lam (w*)^{-k} |w|^{n+k}
// as a fixed-right-hand-side problem (the weight is frozen at the current
// iterate) and renormalize.  |w| vanishes on the boundary, so the right-hand
// side is evaluated on interior nodes only, where it is strictly positive.
// Near the fixed point the inner solution is the iterate itself, which
// therefore warm-starts the solve (a cold start is not reliably admissible
// for boundary-degenerate right-hand sides at coarse resolution).
GridField inverse_iterate(const GridField& w, double k, double lam,
                          const SolveConfig& newton) {
  auto g = w.grid_ptr();
  int n = g->dim();
  double nk = n + k;
  DerivedFields d = derive(w);
  GridField rhs(g);
  for (int m = 0; m < g->size(); ++m) {
    double v = lam;
    if (nk > 0.0) v *= std::pow(std::abs(w[m]), nk);
    if (k != 0.0) v *= std::pow(d.star[m], -k);
    rhs[m] = v;
  }
  auto F = SourceSpec::callback(
      [rhs](Point p, double) { return rhs.value_at(p); },
      [](Point, double) { return 0.0; },
      [rhs](Point p, double uv) { return -rhs.value_at(p) * uv; },
      "frozen-eigen-weight");
  SolveReport rep = solve_semilinear(g, 0.0, F, newton, &w);
  return normalized(rep.u);
}

}  // namespace

GridField rescale_solution(const GridField& u, const DirichletParams& params,
                           double lambda_target) {
  double nk = u.grid().dim() + params.k;
  if (std::abs(nk - params.p) <= 1e-12)
    throw InvalidArgument(
        "rescaling is undefined at p = n + k (scale-invariant case)");
  if (!(lambda_target > 0.0))
    throw InvalidArgument("lambda_target must be positive");
  return scaled(u, std::pow(lambda_target, 1.0 / (nk - params.p)));
}

StationaryResult solve_subcritical(std::shared_ptr<const Grid> g,
                                   const DirichletParams& params,
                                   const StationaryConfig& cfg) {
  double nk = g->dim() + params.k;
  if (!(params.lambda > 0.0))
    throw InvalidArgument("lambda must be positive");
  if (!(params.p > 0.0 && params.p < nk))
    throw InvalidArgument(
        fmt("subcritical driver needs 0 < p < n + k (got p=%g, n+k=%g)",
            params.p, nk));
  if (cfg.eps_ladder.empty())
    throw InvalidArgument("the regularization ladder must not be empty");

  // Ladder at unit intensity, each rung warm-started from the previous.
  GridField u;
  const GridField* init = nullptr;
  for (double eps : cfg.eps_ladder) {
    auto F = SourceSpec::shifted_power(1.0, params.p, eps);
    SolveReport rep = solve_semilinear(g, params.k, F, cfg.newton, init);
    u = std::move(rep.u);
    init = &u;
  }

  auto F_true = SourceSpec::power(params.lambda, params.p);
  StationaryResult out{rescale_solution(u, params, params.lambda)};
  out.residual = max_abs(equation_residual(out.u, params.k, F_true));
  out.J = eval_J(out.u, params.k, F_true);

  if (cfg.uniqueness_check) {
    double m = out.u.max_abs();
    FlowConfig fc;
    fc.k = params.k;
    fc.tol = cfg.flow_tol;
    fc.t_max = std::numeric_limits<double>::infinity();
    fc.max_steps = cfg.flow_max_steps;
    auto run = [&](const std::string& recipe) -> std::optional<GridField> {
      FlowState st = flow_run(make_test_field(g, recipe), F_true, fc);
      if (st.termination != FlowTermination::converged) return std::nullopt;
      return std::move(st.u);
    };
    auto f1 = run(fmt("quadratic:%.17g", 2.0 * m));
    auto f2 = run(fmt("exp:%.17g", m));
    if (!f1 || !f2) {
      out.warnings.push_back(
          "uniqueness cross-check inconclusive: a flow run exhausted its "
          "step budget before reaching stationarity");
    } else {
      double tol10 = 10.0 * cfg.flow_tol;
      double gap = max_abs_diff(*f1, *f2);
      if (gap > tol10)
        out.warnings.push_back(
            fmt("uniqueness cross-check mismatch: flows from two starting "
                "shapes differ by %.3g (allowed %.3g)",
                gap, tol10));
      double gap_ladder =
          std::max(max_abs_diff(*f1, out.u), max_abs_diff(*f2, out.u));
      if (gap_ladder > tol10)
        out.warnings.push_back(
            fmt("uniqueness cross-check mismatch: flow limit differs from "
                "the ladder solution by %.3g (allowed %.3g)",
                gap_ladder, tol10));
    }
  }
  return out;
}

StationaryResult solve_supercritical(std::shared_ptr<const Grid> g,
                                     const DirichletParams& params,
                                     const StationaryConfig& cfg) {
  double nk = g->dim() + params.k;
  if (!(params.lambda > 0.0))
    throw InvalidArgument("lambda must be positive");
  if (!(nk > 0.0 && params.p > nk))
    throw InvalidArgument(
        fmt("supercritical driver needs p > n + k > 0 (got p=%g, n+k=%g)",
            params.p, nk));
  if (cfg.eps_ladder.empty())
    throw InvalidArgument("the regularization ladder must not be empty");

  EigenResult eig = solve_eigen(g, params.k, cfg);
  const GridField& phi = eig.eigenfunction;  // sup-norm 1, negative inside

  // Seed amplitude: stationary point of a |c|^{n+k+1} - A |c|^{p+1}/(p+1)
  // along the eigenfunction ray, a = H(phi), A = lambda * integral |phi|^{p+1}.
  double a = eval_H(phi, params.k);
  std::vector<double> vals(g->size());
  for (int m = 0; m < g->size(); ++m)
    vals[m] = params.lambda * std::pow(std::abs(phi[m]), params.p + 1.0);
  double A = integrate(*g, vals);
  double scale =
      std::pow((nk + 1.0) * a / ((params.p + 1.0) * A), 1.0 / (params.p - nk));

  auto F_true = SourceSpec::power(params.lambda, params.p);
  for (double mult : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    GridField u = scaled(phi, mult * scale);
    try {
      const GridField* init = &u;
      for (double eps : cfg.eps_ladder) {
        auto F = SourceSpec::shifted_power(params.lambda, params.p, eps);
        SolveReport rep = solve_semilinear(g, params.k, F, cfg.newton, init);
        u = std::move(rep.u);
        init = &u;
      }
    } catch (const SolverFailure&) {
      continue;  // next amplitude
    }
    if (u.max_abs() < 0.1 * scale) continue;  // collapsed to the trivial branch

    StationaryResult out{std::move(u)};
    out.residual = max_abs(equation_residual(out.u, params.k, F_true));
    out.J = eval_J(out.u, params.k, F_true);
    if (!(out.J > 0.0))
      out.warnings.push_back(
          fmt("returned energy %.6g is not positive", out.J));
    if (!eig.warnings.empty())
      out.warnings.insert(out.warnings.end(), eig.warnings.begin(),
                          eig.warnings.end());
    return out;
  }
  throw SolverFailure(
      "supercritical amplitude sweep failed to reach a nontrivial solution");
}

EigenResult solve_eigen(std::shared_ptr<const Grid> g, double k,
                        const StationaryConfig& cfg) {
  int n = g->dim();
  double nk = n + k;
  if (nk < -1e-12)
    throw InvalidArgument("eigen driver needs dimension + k >= 0");

  EigenResult out;

  if (nk <= 1e-12) {
    // Scale-free case: the equation (u*)^{-n} det D^2 u = lambda is
    // invariant under u -> c u, so there is nothing to continue in; run
    // pure inverse iteration from a convex seed.
    GridField w = normalized(make_test_field(g, "quadratic:1"));
    double lam = rayleigh(w, k);
    bool settled = false;
    for (int it = 0; it < cfg.polish_iters; ++it) {
      w = inverse_iterate(w, k, lam, cfg.newton);
      double lam_new = rayleigh(w, k);
      if (!std::isfinite(lam_new) || lam_new <= 0.0)
        throw SolverFailure("inverse iteration diverged (eigenvalue left "
                            "the positive axis)");
      bool done = std::abs(lam_new - lam) <= cfg.polish_tol * (1.0 + lam_new);
      lam = lam_new;
      if (done) {
        settled = true;
        break;
      }
    }
    if (!settled)
      throw SolverFailure("inverse iteration failed to stabilize the "
                          "eigenvalue within the iteration budget");
    out.lambda = lam;
    out.eigenfunction = std::move(w);
    out.rayleigh_value = rayleigh(out.eigenfunction, k);
    out.residual = max_abs(equation_residual(out.eigenfunction, k,
                                             SourceSpec::constant(lam)));
    return out;
  }

  // Rayleigh upper bound from the deterministic trial shapes: the family
  // must blow up at or before s = (min quotient)^{1/(n+k)}.
  double lam_up = std::numeric_limits<double>::infinity();
  for (const char* recipe : {"quadratic:1", "cosine:1", "exp:1"})
    lam_up = std::min(lam_up, rayleigh(make_test_field(g, recipe), k));
  double s_up = std::pow(lam_up, 1.0 / nk);

  // Continuation: (u*)^k det D^2 u = (1 - s u)^{n+k}, warm-started rungs.
  SolveReport rep = solve_semilinear(g, k, SourceSpec::s_family(0.0, nk),
                                     cfg.newton);
  GridField u = std::move(rep.u);
  out.s_trace.emplace_back(0.0, u.max_abs());
  double s = 0.0, ds = cfg.s_step0;
  while (u.max_abs() < cfg.s_norm_cap && ds >= cfg.s_step_min) {
    if (s > 1.2 * s_up)
      throw SolverFailure(
          fmt("continuation stalled: ||u_s|| = %.3g still bounded at "
              "s = %.6g beyond the Rayleigh upper bound %.6g",
              u.max_abs(), s, s_up));
    double s_try = s + ds;
    std::optional<GridField> next;
    try {
      rep = solve_semilinear(g, k, SourceSpec::s_family(s_try, nk),
                             cfg.newton, &u);
      next = std::move(rep.u);
    } catch (const SolverFailure&) {
      ds *= 0.5;  // stepped past the asymptote; retry shorter
      continue;
    }
    if (next->max_abs() > 2.0 * u.max_abs() && ds > cfg.s_step_min) {
      ds *= 0.5;  // resolve the blow-up neighborhood before accepting
      continue;
    }
    u = std::move(*next);
    s = s_try;
    out.s_trace.emplace_back(s, u.max_abs());
  }
  if (out.s_trace.size() < 5)
    throw SolverFailure(
        "continuation ended with too few points for the asymptote fit");

  // Linear fit of 1/||u_s|| against s over the last five points; the zero
  // crossing estimates the blow-up abscissa.
  {
    size_t K = 5, first = out.s_trace.size() - K;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = first; i < out.s_trace.size(); ++i) {
      double x = out.s_trace[i].first, y = 1.0 / out.s_trace[i].second;
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double det = K * sxx - sx * sx;
    double slope = (K * sxy - sx * sy) / det;
    double icept = (sy * sxx - sx * sxy) / det;
    if (!(slope < 0.0))
      throw SolverFailure(
          "continuation stalled: reciprocal norms are not decreasing, no "
          "blow-up asymptote to fit");
    out.s_tilde = -icept / slope;
  }
  double lam = std::pow(out.s_tilde, nk);

  // Polish by normalized inverse iteration with Rayleigh updates.  In two
  // dimensions the determinant guard of the inner solves is marginal at
  // coarse resolution for near-eigenfunctions (the right-hand side decays
  // like a power of the boundary distance), so a polish failure there
  // degrades to the continuation estimate instead of erroring.
  GridField w = normalized(u);
  try {
    double lam_it = lam;
    bool settled = false;
    for (int it = 0; it < cfg.polish_iters; ++it) {
      w = inverse_iterate(w, k, lam_it, cfg.newton);
      double lam_new = rayleigh(w, k);
      if (!std::isfinite(lam_new) || lam_new <= 0.0 ||
          lam_new > 20.0 * (1.0 + lam))
        throw SolverFailure("inverse iteration diverged away from the "
                            "continuation estimate");
      bool done =
          std::abs(lam_new - lam_it) <= cfg.polish_tol * (1.0 + lam_new);
      lam_it = lam_new;
      if (done) {
        settled = true;
        break;
      }
    }
    if (!settled)
      throw SolverFailure("inverse iteration failed to stabilize the "
                          "eigenvalue within the iteration budget");
    lam = lam_it;
    out.eigenfunction = std::move(w);
  } catch (const SolverFailure& e) {
    if (n == 1) throw;
    out.warnings.push_back(
        fmt("polish degraded, keeping the continuation estimate (%s)",
            e.what()));
    out.eigenfunction = normalized(u);
  }

  out.lambda = lam;
  out.rayleigh_value = rayleigh(out.eigenfunction, k);
  out.residual = max_abs(equation_residual(
      out.eigenfunction, k, SourceSpec::power(lam, nk)));
  if (std::abs(out.lambda - out.rayleigh_value) >
      0.05 * std::max(out.lambda, 1e-300))
    out.warnings.push_back(
        fmt("eigen cross-check: lambda %.6g vs Rayleigh quotient %.6g "
            "disagree by more than 5%%",
            out.lambda, out.rayleigh_value));
  return out;
}

}  // namespace magma
