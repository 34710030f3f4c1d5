// magma: command-line driver for the convex Hessian-functional library.
//
// Every run writes its artifacts (result.json, CSVs, manifest.json) into the
// output directory (--out, or the MAGMA_OUT environment variable, or the
// working directory).  Exit codes: 0 success, 2 numerical failure,
// 3 invalid configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "magma/domain.hpp"
#include "magma/field.hpp"
#include "magma/flow.hpp"
#include "magma/functionals.hpp"
#include "magma/io.hpp"
#include "magma/ma_core.hpp"
#include "magma/oracle1d.hpp"
#include "magma/stationary.hpp"
#include "magma/transport.hpp"

using nlohmann::json;
using namespace magma;

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Run configuration: defaults < JSON config file < explicit flags.

struct RunConfig {
  std::string command;
  std::string domain = "interval:-1,1";
  int grid = 129;
  double k = 0.0, p = 1.0, lambda = 1.0, eps = 0.0, s = 0.0;
  std::string rhs = "(-u)^p";
  std::string u0 = "quadratic:1";
  std::string field_path;
  std::string regime = "auto";
  double tol = 1e-9;        // solver residual tolerance
  double flow_tol = 1e-8;   // flow stationarity tolerance
  double dt0 = 0.0;
  double tmax = 50.0;
  bool eigen_weight = false;  // oracle: eigenvalue normalization
  int bins = 64, angular_bins = 16;
  int samples = 20;
  unsigned seed = 1;
  std::string study = "fixed-rhs-disk";
  std::vector<int> ladder = {65, 129, 257, 513};
  std::string out_dir;

  json echo() const {
    return json{{"command", command},
                {"domain", domain},
                {"grid", grid},
                {"k", k},
                {"p", p},
                {"lambda", lambda},
                {"eps", eps},
                {"s", s},
                {"rhs", rhs},
                {"u0", u0},
                {"field", field_path},
                {"regime", regime},
                {"tol", tol},
                {"flow_tol", flow_tol},
                {"dt0", dt0},
                {"tmax", tmax},
                {"eigen", eigen_weight},
                {"bins", bins},
                {"angular_bins", angular_bins},
                {"samples", samples},
                {"seed", seed},
                {"study", study},
                {"ladder", ladder},
                {"out", out_dir}};
  }

  void validate() const {
    if (grid < 17 || grid > 1025)
      throw InvalidArgument("grid must lie in [17, 1025]");
    if (!(tol > 0.0) || !(flow_tol > 0.0))
      throw InvalidArgument("tolerances must be positive");
    for (int n : ladder)
      if (n < 17 || n > 1025)
        throw InvalidArgument("ladder grids must lie in [17, 1025]");
  }
};

// Writes manifest.json next to the other artifacts.
void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    double wall_seconds, const std::string& termination) {
  json m = {{"config", cfg.echo()},
            {"version", kVersion},
            {"wall_seconds", wall_seconds},
            {"termination", termination}};
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << "\n";
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

SourceSpec make_rhs(const RunConfig& c) {
  if (c.rhs == "constant") return SourceSpec::constant(c.lambda);
  if (c.rhs == "(-u)^p" || c.rhs == "power")
    return SourceSpec::power(c.lambda, c.p);
  if (c.rhs == "(eps-u)^p" || c.rhs == "shifted_power")
    return SourceSpec::shifted_power(c.lambda, c.p, c.eps);
  if (c.rhs == "(1-su)^q" || c.rhs == "s_family")
    return SourceSpec::s_family(c.s, c.p);
  throw InvalidArgument(
      "unknown rhs '" + c.rhs +
      "'; use constant | (-u)^p | (eps-u)^p | (1-su)^q");
}

// ---------------------------------------------------------------------------
// Command bodies.  Each returns the result JSON and may write extra CSVs.

json cmd_solve(const RunConfig& c, const std::filesystem::path& dir) {
  auto g = Grid::make(ConvexDomain::parse(c.domain), c.grid);
  SolveConfig sc;
  sc.tol_residual = c.tol;
  auto rep = solve_semilinear(g, c.k, make_rhs(c), sc);
  save_field_csv(rep.u, (dir / "u.csv").string());

  std::ofstream trace(dir / "trace.csv");
  trace << "iteration,log10_residual\n";
  for (size_t i = 0; i < rep.trace.size(); ++i)
    trace << i << ',' << fmt17(rep.trace[i]) << "\n";

  return json{{"residual", rep.residual},
              {"newton_iters", rep.newton_iters},
              {"u_min", rep.u.min()},
              {"field", "u.csv"},
              {"trace", "trace.csv"}};
}

json cmd_solve_dirichlet(const RunConfig& c, const std::filesystem::path& dir) {
  auto g = Grid::make(ConvexDomain::parse(c.domain), c.grid);
  double nk = g->dim() + c.k;
  std::string regime = c.regime;
  if (regime == "auto") {
    if (std::abs(c.p - nk) <= 1e-12)
      regime = "eigen";
    else
      regime = c.p < nk ? "subcritical" : "supercritical";
  }

  StationaryConfig sc;
  sc.newton.tol_residual = c.tol;
  json out{{"regime", regime}};
  if (regime == "eigen") {
    auto e = solve_eigen(g, c.k, sc);
    save_field_csv(e.eigenfunction, (dir / "u.csv").string());
    out["lambda"] = e.lambda;
    out["rayleigh"] = e.rayleigh_value;
    out["residual"] = e.residual;
    out["warnings"] = e.warnings;
    out["note"] = "critical exponent: intensity is an eigenvalue, "
                  "--lambda was ignored";
  } else {
    DirichletParams dp{.k = c.k, .p = c.p, .lambda = c.lambda};
    auto r = regime == "subcritical" ? solve_subcritical(g, dp, sc)
                                     : solve_supercritical(g, dp, sc);
    save_field_csv(r.u, (dir / "u.csv").string());
    out["J"] = r.J;
    out["residual"] = r.residual;
    out["warnings"] = r.warnings;
    out["u_min"] = r.u.min();
  }
  out["field"] = "u.csv";
  return out;
}

json cmd_flow(const RunConfig& c, const std::filesystem::path& dir) {
  auto g = Grid::make(ConvexDomain::parse(c.domain), c.grid);
  GridField u0 = make_test_field(g, c.u0);
  SourceSpec F = make_rhs(c);

  FlowConfig fc;
  fc.k = c.k;
  fc.dt0 = c.dt0;
  fc.tol = c.flow_tol;
  fc.t_max = c.tmax;

  FlowState st = make_flow_state(u0, F, fc);
  const double u0_norm = st.u_max;
  const double dt0 = fc.dt0 > 0 ? fc.dt0 : g->h() * g->h() / 4.0;

  std::ofstream hist(dir / "history.csv");
  hist << "t,J,residual,u_max\n";
  auto emit = [&] {
    hist << fmt17(st.t) << ',' << fmt17(st.J_history.back().second) << ','
         << fmt17(st.residual) << ',' << fmt17(st.u_max) << "\n";
  };
  emit();
  // Same step policy as the library driver, with a history row per step:
  // request min(2 * dt_last, dt_stable, 1024 * dt0), step, then test for
  // stationarity / blow-up / budget exhaustion.
  if (st.residual <= fc.tol) st.termination = FlowTermination::converged;
  double dt_try = std::min(dt0, st.dt_stable);
  while (st.termination == FlowTermination::running) {
    flow_step(st, F, fc, dt_try);
    emit();
    if (st.residual <= fc.tol) {
      st.termination = FlowTermination::converged;
    } else if (st.u_max > fc.blowup_factor * u0_norm) {
      st.termination = FlowTermination::blow_up;
    } else if (fc.u_floor > 0.0 && st.u_max <= fc.u_floor) {
      st.termination = FlowTermination::converged;
    } else if (st.t >= fc.t_max || st.steps >= fc.max_steps) {
      st.termination = FlowTermination::timeout;
    }
    dt_try = std::min({2.0 * st.dt_last, st.dt_stable, 1024.0 * dt0});
  }
  save_field_csv(st.u, (dir / "u.csv").string());

  const char* term = st.termination == FlowTermination::converged ? "converged"
                     : st.termination == FlowTermination::blow_up ? "blow_up"
                                                                  : "timeout";
  return json{{"termination", term}, {"t", st.t},
              {"steps", st.steps},   {"J", st.J_history.back().second},
              {"residual", st.residual}, {"u_max", st.u_max},
              {"history", "history.csv"}, {"field", "u.csv"}};
}

json cmd_eigen(const RunConfig& c, const std::filesystem::path& dir) {
  auto g = Grid::make(ConvexDomain::parse(c.domain), c.grid);
  StationaryConfig sc;
  sc.newton.tol_residual = c.tol;
  auto e = solve_eigen(g, c.k, sc);
  save_field_csv(e.eigenfunction, (dir / "eigenfunction.csv").string());

  json trace = json::array();
  for (auto& [sv, norm] : e.s_trace) trace.push_back({sv, norm});
  return json{{"lambda", e.lambda},
              {"s_tilde", e.s_tilde},
              {"rayleigh", e.rayleigh_value},
              {"residual", e.residual},
              {"s_trace", trace},
              {"warnings", e.warnings},
              {"eigenfunction", "eigenfunction.csv"}};
}

json cmd_functional(const RunConfig& c, const std::filesystem::path&) {
  if (c.field_path.empty())
    throw InvalidArgument("functional: --field is required");
  GridField u = load_field_csv(c.field_path);
  auto d = derive(u);

  json out{{"H", eval_H(u, c.k, d)},
           {"Hnorm", eval_Hnorm(u, c.k)},
           {"rayleigh", rayleigh(u, c.k)},
           {"scale_invariant", scale_invariant(u)}};
  auto sob = sobolev_check(u, c.k);
  out["sobolev"] = {{"H", sob.H},
                    {"bound", sob.bound},
                    {"margin", sob.margin},
                    {"ok", sob.ok}};
  out["J"] = eval_J(u, c.k, make_rhs(c), d);
  return out;
}

// Polar-body volume by the radial formula: in 1-D the polar interval length;
// in 2-D the integral of radius^2/2 over angles with radius = 1/support.
double polar_volume(const ConvexDomain& dom) {
  if (dom.dim() == 1)
    return dom.gauge({1.0, 0.0}) + dom.gauge({-1.0, 0.0});
  const int nth = 4096;
  double acc = 0.0;
  for (int l = 0; l < nth; ++l) {
    double th = 2.0 * 3.14159265358979323846 * (l + 0.5) / nth;
    Point e{std::cos(th), std::sin(th)};
    double support = -1e300;
    for (int q = 0; q < 1024; ++q) {
      double ph = 2.0 * 3.14159265358979323846 * q / 1024;
      support = std::max(support, dot(e, dom.boundary_point(ph)));
    }
    acc += 0.5 / (support * support);
  }
  return acc * 2.0 * 3.14159265358979323846 / nth;
}

json cmd_invariant(const RunConfig& c, const std::filesystem::path&) {
  auto g = Grid::make(ConvexDomain::parse(c.domain), c.grid);
  const std::vector<std::string> recipes = {"quadratic:1", "cosine:1",
                                            "exp:1"};
  json per;
  double lo = 1e300, hi = -1e300, sum = 0.0;
  for (const auto& r : recipes) {
    double v = scale_invariant(make_test_field(g, r));
    per[r] = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  double mean = sum / recipes.size();
  double pv = polar_volume(g->domain());
  return json{{"scale_invariant", per},
              {"polar_volume", pv},
              {"max_relative_spread", (hi - lo) / std::abs(mean)},
              {"max_relative_error",
               std::max(std::abs(hi - pv), std::abs(lo - pv)) / pv}};
}

json cmd_sobolev(const RunConfig& c, const std::filesystem::path&) {
  auto g = Grid::make(ConvexDomain::parse(c.domain), c.grid);
  json rows = json::array();
  int failures = 0;
  double worst_margin = 1e300;
  for (int i = 0; i < c.samples; ++i) {
    std::string recipe = "random:" + std::to_string(c.seed + i);
    auto u = make_test_field(g, recipe);
    auto rep = sobolev_check(u, c.k);
    rows.push_back({{"recipe", recipe},
                    {"H", rep.H},
                    {"bound", rep.bound},
                    {"margin", rep.margin},
                    {"ok", rep.ok}});
    worst_margin = std::min(worst_margin, rep.margin);
    if (!rep.ok) ++failures;
  }
  return json{{"k", c.k},
              {"samples", c.samples},
              {"failures", failures},
              {"worst_margin", worst_margin},
              {"rows", rows}};
}

json cmd_transport_check(const RunConfig& c, const std::filesystem::path& dir) {
  if (c.field_path.empty())
    throw InvalidArgument("transport-check: --field is required");
  GridField u = load_field_csv(c.field_path);

  auto s = radial_transform(u);
  auto dual = verify_duality(u);
  PushforwardParams pp;
  pp.k = c.k;
  pp.p = c.p;
  pp.lambda = c.lambda;
  pp.bins = c.bins;
  pp.angular_bins = c.angular_bins;
  auto push = verify_pushforward(u, pp);

  std::ofstream csv(dir / "samples.csv");
  csv << "x1,x2,y1,y2,phi,gphi1,gphi2,residual\n";
  for (size_t i = 0; i < s.size(); ++i)
    csv << fmt17(s.x[i].x) << ',' << fmt17(s.x[i].y) << ','
        << fmt17(s.y[i].x) << ',' << fmt17(s.y[i].y) << ','
        << fmt17(s.phi[i]) << ',' << fmt17(s.grad[i].x) << ','
        << fmt17(s.grad[i].y) << ',' << fmt17(dual.identity_residual[i])
        << "\n";

  return json{{"samples", s.size()},
              {"dropped", s.n_dropped},
              {"delta_cut", s.delta_cut},
              {"legendre_defect", legendre_defect(s)},
              {"support_gap", push.support_gap},
              {"duality",
               {{"max_identity_residual", dual.max_identity_residual},
                {"mean_identity_residual", dual.mean_identity_residual},
                {"hessian_consistency", dual.hessian_consistency}}},
              {"pushforward",
               {{"max_bin_discrepancy", push.max_bin_discrepancy},
                {"total_mass_gap", push.total_mass_gap},
                {"max_dual_residual", push.max_dual_residual},
                {"bins_used", push.bins_used},
                {"bins_flagged", push.bins_flagged}}},
              {"sample_csv", "samples.csv"}};
}

json cmd_oracle(const RunConfig& c, const std::filesystem::path&) {
  oracle::ShootSpec sp;
  sp.k = c.k;
  sp.p = c.p;
  sp.lambda = c.lambda;
  sp.eigen = c.eigen_weight;
  if (c.eps > 0.0) sp.eps = c.eps;
  auto r = oracle::shoot(sp);

  json samples = json::array();
  const int keep = 65;
  for (int i = 0; i < keep; ++i) {
    double x = static_cast<double>(i) / (keep - 1);
    samples.push_back({x, oracle::sample_u(r, x)});
  }
  return json{{"m_star", r.m},
              {"lambda", r.lambda},
              {"u0", oracle::sample_u(r, 0.0)},
              {"samples", samples}};
}

json cmd_convergence_study(const RunConfig& c,
                           const std::filesystem::path& dir) {
  struct Row {
    int n;
    double h, err;
  };
  std::vector<Row> rows;
  std::string metric;
  bool aborted = false;
  std::string abort_reason;

  // Exact reference with nonzero fourth derivatives, so the second-order
  // truncation error is visible (quadratics are reproduced to rounding and
  // carry no measurable order): u = r^2/2 + r^4/4 - 3/4 vanishes on the unit
  // sphere and solves det D^2 u = (1 + 3r^2)(1 + r^2) in 2-D, u'' = 1 + 3x^2
  // in 1-D.
  auto quartic_err = [](std::shared_ptr<const Grid> g) {
    auto rep = solve_fixed_rhs(g, [dim = g->dim()](Point q) {
      double r2 = q.x * q.x + q.y * q.y;
      return dim == 1 ? 1.0 + 3.0 * r2 : (1.0 + 3.0 * r2) * (1.0 + r2);
    });
    std::vector<double> exact(g->size());
    for (int m = 0; m < g->size(); ++m) {
      Point q = g->point(m);
      double r2 = q.x * q.x + q.y * q.y;
      exact[m] = 0.5 * r2 + 0.25 * r2 * r2 - 0.75;
    }
    return max_abs_diff(rep.u, GridField(g, std::move(exact)));
  };

  for (int n : c.ladder) {
    try {
      if (c.study == "fixed-rhs-disk") {
        metric = "max error vs exact radial quartic";
        auto g = Grid::make(ConvexDomain::ball(1.0), n);
        rows.push_back({n, g->h(), quartic_err(g)});
      } else if (c.study == "fixed-rhs-interval") {
        metric = "max error vs exact quartic";
        auto g = Grid::make(ConvexDomain::interval(-1.0, 1.0), n);
        rows.push_back({n, g->h(), quartic_err(g)});
      } else if (c.study == "fixed-rhs-exactness") {
        metric = "max error vs exact quadratic (reproduced to rounding)";
        auto g = Grid::make(ConvexDomain::ball(1.0), n);
        auto rep = solve_fixed_rhs(g, [](Point) { return 1.0; });
        rows.push_back({n, g->h(), max_abs_diff(rep.u,
                                                make_test_field(g, "quadratic:1"))});
      } else if (c.study == "invariant-spread") {
        metric = "cross-recipe relative spread of the scale invariant";
        auto g = Grid::make(ConvexDomain::parse(c.domain), n);
        double lo = 1e300, hi = -1e300;
        for (const char* r : {"quadratic:1", "cosine:1", "exp:1"}) {
          double v = scale_invariant(make_test_field(g, r));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        rows.push_back({n, g->h(), (hi - lo) / std::abs(0.5 * (hi + lo))});
      } else if (c.study == "eigen-lambda") {
        metric = "eigenvalue drift between ladder rungs";
        auto g = Grid::make(ConvexDomain::parse(c.domain), n);
        auto e = solve_eigen(g, c.k);
        rows.push_back({n, g->h(), e.lambda});
      } else {
        throw InvalidArgument("unknown study '" + c.study + "'");
      }
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception& e) {
      aborted = true;
      abort_reason = e.what();
      break;
    }
  }

  std::ofstream csv(dir / "study.csv");
  csv << "n,h,value,observed_order\n";
  json jrows = json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    double order = 0.0;
    if (i > 0 && c.study != "eigen-lambda")
      order = std::log2(rows[i - 1].err / rows[i].err);
    if (i > 1 && c.study == "eigen-lambda") {
      double d1 = std::abs(rows[i - 1].err - rows[i - 2].err);
      double d2 = std::abs(rows[i].err - rows[i - 1].err);
      order = d2 > 0 ? std::log2(d1 / d2) : 0.0;
    }
    csv << rows[i].n << ',' << fmt17(rows[i].h) << ',' << fmt17(rows[i].err)
        << ',' << fmt17(order) << "\n";
    jrows.push_back(
        {{"n", rows[i].n}, {"h", rows[i].h}, {"value", rows[i].err},
         {"observed_order", order}});
  }

  json out{{"study", c.study}, {"metric", metric}, {"rows", jrows},
           {"table", "study.csv"}};
  if (aborted) {
    out["aborted"] = abort_reason;
    throw SolverFailure("study aborted after " + std::to_string(rows.size()) +
                        " rungs: " + abort_reason + " (partial table kept)");
  }
  return out;
}

// ---------------------------------------------------------------------------

void load_config_file(const std::string& path, RunConfig& c,
                      const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config file is not valid JSON: ") +
                          e.what());
  }
  // Flags given on the command line keep priority over file values.
  auto absent = [&](const char* flag) {
    auto* opt = app.get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (j.contains("domain") && absent("--domain")) c.domain = j["domain"];
  if (j.contains("grid") && absent("--grid")) c.grid = j["grid"];
  if (j.contains("k") && absent("--k")) c.k = j["k"];
  if (j.contains("p") && absent("--p")) c.p = j["p"];
  if (j.contains("lambda") && absent("--lambda")) c.lambda = j["lambda"];
  if (j.contains("eps") && absent("--eps")) c.eps = j["eps"];
  if (j.contains("s") && absent("--s")) c.s = j["s"];
  if (j.contains("rhs") && absent("--rhs")) c.rhs = j["rhs"];
  if (j.contains("u0") && absent("--u0")) c.u0 = j["u0"];
  if (j.contains("field") && absent("--field")) c.field_path = j["field"];
  if (j.contains("regime") && absent("--regime")) c.regime = j["regime"];
  if (j.contains("tol") && absent("--tol")) c.tol = j["tol"];
  if (j.contains("flow_tol") && absent("--flow-tol")) c.flow_tol = j["flow_tol"];
  if (j.contains("dt0") && absent("--dt0")) c.dt0 = j["dt0"];
  if (j.contains("tmax") && absent("--tmax")) c.tmax = j["tmax"];
  if (j.contains("bins") && absent("--bins")) c.bins = j["bins"];
  if (j.contains("angular_bins") && absent("--angular-bins"))
    c.angular_bins = j["angular_bins"];
  if (j.contains("samples") && absent("--samples")) c.samples = j["samples"];
  if (j.contains("seed") && absent("--seed")) c.seed = j["seed"];
  if (j.contains("study") && absent("--study")) c.study = j["study"];
  if (j.contains("ladder") && absent("--ladder"))
    c.ladder = j["ladder"].get<std::vector<int>>();
  if (j.contains("out") && absent("--out")) c.out_dir = j["out"];
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"magma: weighted Hessian functionals, flows and duality"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // Shared option set; registered on the main app so every subcommand can
  // use them uniformly (CLI11 fallthrough).
  app.add_option("--config", config_path, "JSON config file (flags override)");
  app.add_option("--domain", cfg.domain,
                 "domain descriptor: interval:a,b | ball:r | ellipse:a,b");
  app.add_option("--grid", cfg.grid, "nodes per axis, in [17, 1025]");
  app.add_option("--k", cfg.k, "star-weight exponent");
  app.add_option("--p", cfg.p, "zeroth-order exponent");
  app.add_option("--lambda", cfg.lambda, "intensity");
  app.add_option("--eps", cfg.eps, "shift of the regularized source");
  app.add_option("--s", cfg.s, "blend parameter of the (1-su)^q family");
  app.add_option("--rhs", cfg.rhs,
                 "source family: constant | (-u)^p | (eps-u)^p | (1-su)^q");
  app.add_option("--u0", cfg.u0, "initial field recipe, e.g. quadratic:2");
  app.add_option("--field", cfg.field_path, "input field CSV");
  app.add_option("--regime", cfg.regime,
                 "auto | subcritical | supercritical | eigen");
  app.add_option("--tol", cfg.tol, "solver residual tolerance");
  app.add_option("--flow-tol", cfg.flow_tol, "flow stationarity tolerance");
  app.add_option("--dt0", cfg.dt0, "initial flow step (<= 0 picks h^2/4)");
  app.add_option("--tmax", cfg.tmax, "flow time horizon");
  app.add_flag("--eigen", cfg.eigen_weight,
               "oracle: solve the eigenvalue normalization");
  app.add_option("--bins", cfg.bins, "pushforward bins (radial in 2-D)");
  app.add_option("--angular-bins", cfg.angular_bins,
                 "pushforward angular bins (2-D)");
  app.add_option("--samples", cfg.samples, "number of random recipes");
  app.add_option("--seed", cfg.seed, "seed of the random recipes");
  app.add_option("--study", cfg.study,
                 "fixed-rhs-disk | fixed-rhs-interval | fixed-rhs-exactness | "
                 "invariant-spread | eigen-lambda");
  app.add_option("--ladder", cfg.ladder, "grid ladder of the study");
  app.add_option("--out", cfg.out_dir,
                 "output directory (default: $MAGMA_OUT or .)");
  app.fallthrough();

  using Body = std::function<json(const RunConfig&, const std::filesystem::path&)>;
  std::vector<std::pair<CLI::App*, Body>> bodies;
  auto sub = [&](const char* name, const char* desc, Body body) {
    bodies.emplace_back(app.add_subcommand(name, desc), std::move(body));
  };
  sub("solve", "Newton solve of the semilinear problem", cmd_solve);
  sub("solve-dirichlet", "regime-aware boundary-value drivers",
      cmd_solve_dirichlet);
  sub("flow", "explicit energy-descent flow", cmd_flow);
  sub("eigen", "nonlinear eigenvalue driver", cmd_eigen);
  sub("functional", "evaluate functionals of a stored field", cmd_functional);
  sub("invariant", "scale-invariant integral vs the polar volume",
      cmd_invariant);
  sub("sobolev", "sharp lower-bound check over random recipes", cmd_sobolev);
  sub("transport-check", "radial-graph duality and pushforward report",
      cmd_transport_check);
  sub("oracle", "independent shooting reference for 1-D problems",
      cmd_oracle);
  sub("convergence-study", "grid ladder with observed orders",
      cmd_convergence_study);

  CLI11_PARSE(app, argc, argv);

  auto t0 = std::chrono::steady_clock::now();
  std::filesystem::path dir;
  std::string termination = "success";
  int code = 0;
  try {
    if (!config_path.empty()) load_config_file(config_path, cfg, app);
    if (cfg.out_dir.empty()) {
      const char* env = std::getenv("MAGMA_OUT");
      cfg.out_dir = env != nullptr && *env != '\0' ? env : ".";
    }
    dir = cfg.out_dir;
    std::filesystem::create_directories(dir);

    CLI::App* picked = nullptr;
    Body body;
    for (auto& [s, b] : bodies)
      if (s->parsed()) {
        picked = s;
        body = b;
      }
    cfg.command = picked->get_name();
    cfg.validate();

    json result = body(cfg, dir);
    write_json(dir / "result.json", result);
    std::cout << result.dump(2) << "\n";
  } catch (const InvalidArgument& e) {
    termination = std::string("invalid config: ") + e.what();
    std::cerr << "error (config): " << e.what() << "\n";
    code = 3;
  } catch (const SolverFailure& e) {
    termination = std::string("solver failure: ") + e.what();
    std::cerr << "error (solver): " << e.what() << "\n";
    code = 2;
  } catch (const std::exception& e) {
    termination = std::string("solver failure: ") + e.what();
    std::cerr << "error: " << e.what() << "\n";
    code = 2;
  }

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0).count();
  if (!dir.empty()) write_manifest(dir, cfg, wall, termination);
  return code;
}
