#include "magma/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "magma/functionals.hpp"

namespace magma {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return std::string(buf);
}

// Evaluates the update field u_t = log det + k log star - log F at the
// state's current u, along with the residual norm, the nodewise stability
// estimate, and the source/star diagnostics. Throws when any logarithm is
// undefined. On success the state's rhs cache and diagnostics are current.
void refresh_rhs(FlowState& st, const SourceSpec& F, double k) {
  const Grid& g = st.u.grid();
  DerivedFields d = derive(st.u);
  GridField r(st.u.grid_ptr());
  double inf_norm = 0.0;
  double min_F = std::numeric_limits<double>::infinity();
  double min_star = std::numeric_limits<double>::infinity();
  double rate_max = 0.0;
  const bool two_d = g.dim() == 2;
  for (int m = 0; m < g.size(); ++m) {
    double det = d.det[m];
    if (!(det > 0.0))
      throw SolverFailure(
          fmt("flow rhs: nonpositive second-derivative determinant %.3e at "
              "node %g; log undefined",
              det, static_cast<double>(m)));
    double star = d.star[m];
    min_star = std::min(min_star, star);
    if (k != 0.0 && !(star > 0.0))
      throw SolverFailure(
          fmt("flow rhs: nonpositive u* value %.3e at node %g; log undefined",
              star, static_cast<double>(m)));
    Point p = g.point(m);
    double Fv = F.F(p, st.u[m]);
    min_F = std::min(min_F, Fv);
    if (!(Fv > 1e-300))
      throw SolverFailure(
          fmt("flow rhs: source value %.3e at node %g is not positive; log "
              "undefined",
              Fv, static_cast<double>(m)));
    double v = std::log(det) - std::log(Fv);
    if (k != 0.0) v += k * std::log(star);
    r[m] = v;
    inf_norm = std::max(inf_norm, std::abs(v));

    // Nodewise decay rate of the linearized update: second-order
    // (log det) coefficients adj(D^2 u)/det against the stencil centers,
    // first-order and zeroth-order star terms, and the source reaction.
    const Stencil& s = g.stencil(m);
    double rate;
    if (two_d) {
      double axx = d.uyy[m] / det, ayy = d.uxx[m] / det;
      double axy = -2.0 * d.uxy[m] / det;
      rate = 2.0 * (axx * std::abs(s.dxx_c) + ayy * std::abs(s.dyy_c)) +
             2.0 * std::abs(axy) *
                 (std::abs(s.dxy_ne) + std::abs(s.dxy_sw) +
                  std::abs(s.dxy_se) + std::abs(s.dxy_nw) +
                  std::abs(s.dxy_c));
    } else {
      rate = 2.0 * std::abs(s.dxx_c) / d.uxx[m];
    }
    if (k != 0.0) {
      double adv = std::abs(p.x) *
                       (std::abs(s.dx_e) + std::abs(s.dx_w) +
                        std::abs(s.dx_c)) +
                   std::abs(p.y) * (std::abs(s.dy_n) + std::abs(s.dy_s) +
                                    std::abs(s.dy_c));
      rate += std::abs(k) * (adv + 1.0) / star;
    }
    rate += std::abs(F.dF_du(p, st.u[m])) / Fv;
    rate_max = std::max(rate_max, rate);
  }
  st.rhs = std::move(r);
  st.residual = inf_norm;
  st.min_source = min_F;
  st.min_star = min_star;
  st.dt_stable = 1.8 / rate_max;
  st.u_max = st.u.max_abs();
  st.u_center = st.u.value_at({0.0, 0.0});
}

// Candidate acceptance: discrete convexity plus positive determinant, star
// (when the weight is active), and source, so the next rhs evaluation stays
// well-defined. Returns the candidate's derivative tables through d_out on
// success so the energy can reuse them.
bool admissible(const GridField& u, const SourceSpec& F, double k,
                DerivedFields& d_out) {
  if (!convex_axiswise(u)) return false;
  d_out = derive(u);
  const Grid& g = u.grid();
  for (int m = 0; m < u.size(); ++m) {
    if (!(d_out.det[m] > 0.0)) return false;
    if (k != 0.0 && !(d_out.star[m] > 0.0)) return false;
    if (!(F.F(g.point(m), u[m]) > 1e-300)) return false;
  }
  return true;
}

}  // namespace

double barrier_bound(const Grid& g, double eta, double k) {
  int n = g.dim();
  if (!(n + k > 0.0))
    throw InvalidArgument("barrier_bound requires dimension + k > 0");
  if (!(eta > 0.0))
    throw InvalidArgument("barrier_bound requires a positive source floor");
  double r = g.domain().boundary_distance({0.0, 0.0});
  // On the inscribed ball, v = eps (|x|^2 - r^2) has det D^2 v = (2 eps)^n
  // and v* = eps (|x|^2 + r^2) in [eps r^2, 2 eps r^2]; bounding (v*)^k by
  // the end matching the sign of k gives
  //   (v*)^k det D^2 v <= 2^n eps^(n+k) * s_k,  s_k = (2 r^2)^k or (r^2)^k.
  double sk = k >= 0.0 ? std::pow(2.0 * r * r, k) : std::pow(r * r, k);
  double eps = std::pow(eta / (std::pow(2.0, n) * sk), 1.0 / (n + k));
  return -eps * r * r;
}

FlowState make_flow_state(const GridField& u0, const SourceSpec& F,
                          const FlowConfig& cfg) {
  int n = u0.grid().dim();
  if (cfg.k < -n) throw InvalidArgument("flow requires dimension + k >= 0");
  if (!(u0.value_at({0.0, 0.0}) < 0.0))
    throw InvalidArgument(
        "flow requires an initial field strictly negative at the origin");
  FlowState st{.u = u0};
  refresh_rhs(st, F, cfg.k);
  st.J_history.emplace_back(0.0, eval_J(u0, cfg.k, F));
  return st;
}

void flow_step(FlowState& st, const SourceSpec& F, const FlowConfig& cfg,
               double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("flow_step: dt must be positive");
  if (!st.rhs) refresh_rhs(st, F, cfg.k);
  if (st.J_history.empty())
    st.J_history.emplace_back(st.t, eval_J(st.u, cfg.k, F));
  double J_old = st.J_history.back().second;
  double trial = dt;
  for (int halvings = 0; halvings <= 30; ++halvings, trial *= 0.5) {
    GridField cand = axpy(trial, *st.rhs, st.u);
    DerivedFields dc;
    if (!admissible(cand, F, cfg.k, dc)) continue;
    double J_new;
    try {
      J_new = eval_J(cand, cfg.k, F, dc);
    } catch (const SolverFailure&) {
      continue;  // degenerate weight inside the energy: treat as rejection
    }
    if (J_new > J_old + 1e-8 * (1.0 + std::abs(J_old))) continue;
    st.u = std::move(cand);
    st.t += trial;
    st.dt_last = trial;
    st.J_history.emplace_back(st.t, J_new);
    ++st.steps;
    refresh_rhs(st, F, cfg.k);  // cannot throw: candidate was admissible
    if (!(st.u_center < 0.0))
      throw SolverFailure(
          fmt("flow invariant violated: center value %.3e is not negative at "
              "t=%.6g",
              st.u_center, st.t));
    return;
  }
  throw SolverFailure(
      fmt("flow_step: dt underflow after 30 halvings (dt=%.3e at t=%.6g); no "
          "admissible nonincreasing step",
          dt, st.t));
}

FlowState flow_run(const GridField& u0, const SourceSpec& F,
                   const FlowConfig& cfg) {
  if (!(cfg.tol >= 0.0)) throw InvalidArgument("flow_run: tol must be >= 0");
  if (!(cfg.t_max > 0.0)) throw InvalidArgument("flow_run: t_max must be > 0");
  if (cfg.max_steps <= 0)
    throw InvalidArgument("flow_run: max_steps must be positive");

  const Grid& g = u0.grid();
  FlowState st = make_flow_state(u0, F, cfg);
  double u0_norm = st.u_max;
  double dt0 = cfg.dt0 > 0.0 ? cfg.dt0 : 0.25 * g.h() * g.h();

  // The depth bound is enforced once the initial state itself sits below it;
  // the slack absorbs the O(h^2) gap between the discrete field and the
  // comparison profile.
  bool barrier_armed = false;
  double n_plus_k = g.dim() + cfg.k;

  if (st.residual <= cfg.tol) {
    st.termination = FlowTermination::converged;
    return st;
  }
  double dt_try = std::min(dt0, st.dt_stable);
  while (true) {
    flow_step(st, F, cfg, dt_try);

    // The comparison bound needs a lower bound of the source that is uniform
    // in u; a state-dependent minimum is not admissible as eta.
    double eta = F.positive_floor();
    if (cfg.enforce_barrier && n_plus_k > 0.0 && eta > 0.0) {
      double bound = barrier_bound(g, eta, cfg.k);
      double slack = 10.0 * g.h() * g.h() * (1.0 + st.u_max) + 1e-9;
      if (st.u_center <= bound + slack) {
        barrier_armed = true;
      } else if (barrier_armed) {
        throw SolverFailure(
            fmt("flow barrier violated: center value %.6g exceeds comparison "
                "bound %.6g at t=%.6g",
                st.u_center, bound, st.t));
      }
    }

    if (st.residual <= cfg.tol) {
      st.termination = FlowTermination::converged;
      break;
    }
    if (st.u_max > cfg.blowup_factor * u0_norm) {
      st.termination = FlowTermination::blow_up;
      break;
    }
    if (cfg.u_floor > 0.0 && st.u_max <= cfg.u_floor) {
      st.termination = FlowTermination::converged;
      break;
    }
    if (st.t >= cfg.t_max || st.steps >= cfg.max_steps) {
      st.termination = FlowTermination::timeout;
      break;
    }
    dt_try = std::min({2.0 * st.dt_last, st.dt_stable, 1024.0 * dt0});
  }
  return st;
}

}  // namespace magma
