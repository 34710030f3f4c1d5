// Python bindings: the library's main operations on grids and fields —
// functional evaluation, the stationary solvers, the descent flow, and the
// radial-graph duality checks.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magma/domain.hpp"
#include "magma/field.hpp"
#include "magma/flow.hpp"
#include "magma/functionals.hpp"
#include "magma/io.hpp"
#include "magma/ma_core.hpp"
#include "magma/oracle1d.hpp"
#include "magma/stationary.hpp"
#include "magma/transport.hpp"

namespace py = pybind11;
using namespace magma;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> points_array(const std::vector<Point>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()),
                           static_cast<py::ssize_t>(2)});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < r.shape(0); ++i) {
    r(i, 0) = pts[static_cast<size_t>(i)].x;
    r(i, 1) = pts[static_cast<size_t>(i)].y;
  }
  return out;
}

py::dict solve_report_dict(const SolveReport& rep) {
  py::dict d;
  d["field"] = rep.u;
  d["residual"] = rep.residual;
  d["newton_iters"] = rep.newton_iters;
  d["trace"] = to_array(rep.trace);
  return d;
}

py::dict stationary_dict(const StationaryResult& r) {
  py::dict d;
  d["field"] = r.u;
  d["residual"] = r.residual;
  d["J"] = r.J;
  d["warnings"] = r.warnings;
  return d;
}

SourceSpec source_from(const std::string& family, double lam, double p,
                       double eps, double s) {
  if (family == "constant") return SourceSpec::constant(lam);
  if (family == "power") return SourceSpec::power(lam, p);
  if (family == "shifted_power") return SourceSpec::shifted_power(lam, p, eps);
  if (family == "s_family") return SourceSpec::s_family(s, p);
  throw InvalidArgument("unknown source family '" + family +
                        "'; use constant | power | shifted_power | s_family");
}

}  // namespace

PYBIND11_MODULE(_magma, m) {
  m.doc() =
      "Weighted Hessian functionals on convex domains: evaluation, descent "
      "flow, Dirichlet/eigenvalue solvers, and radial-graph duality checks.";
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidArgument>(m, "InvalidArgument",
                                          PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure",
                                        PyExc_RuntimeError);

  py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid",
                                          "Interior lattice of a domain")
      .def_property_readonly("h", &Grid::h)
      .def_property_readonly("n", &Grid::nodes_per_axis)
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def("points",
           [](const Grid& g) {
             std::vector<Point> pts(static_cast<size_t>(g.size()));
             for (int i = 0; i < g.size(); ++i)
               pts[static_cast<size_t>(i)] = g.point(i);
             return points_array(pts);
           },
           "Node coordinates, shape (size, 2); the y column is 0 in 1-D")
      .def("__repr__", [](const Grid& g) {
        return "<Grid dim=" + std::to_string(g.dim()) +
               " n=" + std::to_string(g.nodes_per_axis()) +
               " size=" + std::to_string(g.size()) + ">";
      });

  py::class_<GridField>(m, "Field", "Scalar field on the interior nodes")
      .def_property_readonly(
          "values", [](const GridField& u) { return to_array(u.values()); })
      .def_property_readonly("grid",
                             [](const GridField& u) {
                               return std::const_pointer_cast<Grid>(
                                   u.grid_ptr());
                             })
      .def_property_readonly("size", &GridField::size)
      .def("min", &GridField::min)
      .def("max", &GridField::max)
      .def("max_abs", &GridField::max_abs)
      .def("value_at",
           [](const GridField& u, double x, double y) {
             return u.value_at({x, y});
           },
           py::arg("x"), py::arg("y") = 0.0,
           "Interpolated value at a point (linear / bilinear)")
      .def("__len__", &GridField::size)
      .def("__repr__", [](const GridField& u) {
        return "<Field size=" + std::to_string(u.size()) +
               " min=" + std::to_string(u.min()) + ">";
      });

  m.def(
      "make_grid",
      [](const std::string& descriptor, int n) {
        return std::const_pointer_cast<Grid>(
            Grid::make(ConvexDomain::parse(descriptor), n));
      },
      py::arg("domain"), py::arg("n"),
      "Grid over a domain descriptor such as 'interval:-1,1' or 'ball:1'");

  m.def(
      "test_field",
      [](std::shared_ptr<Grid> g, const std::string& recipe) {
        return make_test_field(g, recipe);
      },
      py::arg("grid"), py::arg("recipe"),
      "Zero-trace convex test family: quadratic[:c], cosine[:c], exp[:c], "
      "random:seed[:c]");

  m.def(
      "field_from_values",
      [](std::shared_ptr<Grid> g, py::array_t<double> vals) {
        auto r = vals.unchecked<1>();
        if (r.shape(0) != g->size())
          throw InvalidArgument("field_from_values: expected " +
                                std::to_string(g->size()) + " values, got " +
                                std::to_string(r.shape(0)));
        std::vector<double> v(static_cast<size_t>(r.shape(0)));
        for (py::ssize_t i = 0; i < r.shape(0); ++i)
          v[static_cast<size_t>(i)] = r(i);
        return GridField(g, std::move(v));
      },
      py::arg("grid"), py::arg("values"));

  m.def("save_field", &save_field_csv, py::arg("field"), py::arg("path"));
  m.def("load_field", &load_field_csv, py::arg("path"));

  // ---- functionals -------------------------------------------------------
  m.def("eval_H", [](const GridField& u, double k) { return eval_H(u, k); },
        py::arg("field"), py::arg("k"),
        "Weighted Hessian integral of a zero-trace convex field");
  m.def("eval_Hnorm",
        [](const GridField& u, double k) { return eval_Hnorm(u, k); },
        py::arg("field"), py::arg("k"),
        "Homogeneity-one normalization of eval_H");
  m.def("rayleigh", &rayleigh, py::arg("field"), py::arg("k"),
        "Rayleigh quotient of the critical-exponent problem");
  m.def("scale_invariant", &scale_invariant, py::arg("field"),
        "Scale- and shape-invariant ratio; equals the polar volume in the "
        "limit of the optimal family");
  m.def(
      "sobolev_check",
      [](const GridField& u, double k, double tol) {
        auto r = sobolev_check(u, k, tol);
        py::dict d;
        d["H"] = r.H;
        d["bound"] = r.bound;
        d["margin"] = r.margin;
        d["ok"] = r.ok;
        return d;
      },
      py::arg("field"), py::arg("k"), py::arg("tol") = 1e-8,
      "Sharp lower bound of eval_H by the center depth and the polar volume");
  m.def(
      "eval_J",
      [](const GridField& u, double k, const std::string& family, double lam,
         double p, double eps, double s) {
        return eval_J(u, k, source_from(family, lam, p, eps, s));
      },
      py::arg("field"), py::arg("k"), py::arg("family") = "power",
      py::arg("lam") = 1.0, py::arg("p") = 1.0, py::arg("eps") = 0.0,
      py::arg("s") = 0.0, "Energy: eval_H minus the source potential");

  // ---- solvers -----------------------------------------------------------
  m.def(
      "solve_fixed_rhs",
      [](std::shared_ptr<Grid> g, const std::function<double(double, double)>& f,
         double tol) {
        SolveConfig cfg;
        cfg.tol_residual = tol;
        return solve_report_dict(solve_fixed_rhs(
            g, [&f](Point q) { return f(q.x, q.y); }, cfg));
      },
      py::arg("grid"), py::arg("f"), py::arg("tol") = 1e-9,
      "Dirichlet problem det D^2 u = f(x, y) with zero boundary data");
  m.def(
      "solve_semilinear",
      [](std::shared_ptr<Grid> g, double k, const std::string& family,
         double lam, double p, double eps, double s, double tol) {
        SolveConfig cfg;
        cfg.tol_residual = tol;
        return solve_report_dict(
            solve_semilinear(g, k, source_from(family, lam, p, eps, s), cfg));
      },
      py::arg("grid"), py::arg("k"), py::arg("family"), py::arg("lam") = 1.0,
      py::arg("p") = 1.0, py::arg("eps") = 0.0, py::arg("s") = 0.0,
      py::arg("tol") = 1e-9,
      "Weighted problem (u*)^k det D^2 u = F(x, u) by damped Newton");
  m.def(
      "solve_subcritical",
      [](std::shared_ptr<Grid> g, double k, double p, double lam,
         bool uniqueness_check) {
        StationaryConfig cfg;
        cfg.uniqueness_check = uniqueness_check;
        return stationary_dict(
            solve_subcritical(g, DirichletParams{k, p, lam}, cfg));
      },
      py::arg("grid"), py::arg("k"), py::arg("p"), py::arg("lam") = 1.0,
      py::arg("uniqueness_check") = false,
      "Unique nonzero solution of the power-law problem for p < dim + k");
  m.def(
      "solve_supercritical",
      [](std::shared_ptr<Grid> g, double k, double p, double lam) {
        return stationary_dict(
            solve_supercritical(g, DirichletParams{k, p, lam}));
      },
      py::arg("grid"), py::arg("k"), py::arg("p"), py::arg("lam") = 1.0,
      "Nontrivial solution above the trivial branch for p > dim + k");
  m.def(
      "solve_eigen",
      [](std::shared_ptr<Grid> g, double k) {
        auto e = solve_eigen(g, k);
        py::dict d;
        d["lam"] = e.lambda;
        d["eigenfunction"] = e.eigenfunction;
        d["s_tilde"] = e.s_tilde;
        d["rayleigh"] = e.rayleigh_value;
        d["residual"] = e.residual;
        d["warnings"] = e.warnings;
        return d;
      },
      py::arg("grid"), py::arg("k"),
      "Eigenvalue normalization at the critical exponent p = dim + k");

  // ---- flow ---------------------------------------------------------------
  m.def(
      "flow_run",
      [](const GridField& u0, double k, const std::string& family, double lam,
         double p, double eps, double s, double dt0, double tol,
         double t_max) {
        FlowConfig cfg;
        cfg.k = k;
        cfg.dt0 = dt0;
        cfg.tol = tol;
        cfg.t_max = t_max;
        FlowState st = flow_run(u0, source_from(family, lam, p, eps, s), cfg);
        py::dict d;
        d["field"] = st.u;
        d["t"] = st.t;
        d["steps"] = st.steps;
        d["residual"] = st.residual;
        d["J"] = st.J_history.back().second;
        d["termination"] =
            st.termination == FlowTermination::converged  ? "converged"
            : st.termination == FlowTermination::blow_up  ? "blow_up"
                                                          : "timeout";
        py::list hist;
        for (const auto& [t, J] : st.J_history)
          hist.append(py::make_tuple(t, J));
        d["J_history"] = hist;
        return d;
      },
      py::arg("u0"), py::arg("k"), py::arg("family"), py::arg("lam") = 1.0,
      py::arg("p") = 1.0, py::arg("eps") = 0.0, py::arg("s") = 0.0,
      py::arg("dt0") = 0.0, py::arg("tol") = 1e-8, py::arg("t_max") = 50.0,
      "Explicit energy-descent flow until stationarity, blow-up, or timeout");

  // ---- radial-graph duality ----------------------------------------------
  m.def(
      "radial_transform",
      [](const GridField& u) {
        auto sres = radial_transform(u);
        py::dict d;
        d["x"] = points_array(sres.x);
        d["y"] = points_array(sres.y);
        d["phi"] = to_array(sres.phi);
        d["grad"] = points_array(sres.grad);
        d["delta_cut"] = sres.delta_cut;
        d["n_dropped"] = sres.n_dropped;
        d["legendre_defect"] = legendre_defect(sres);
        d["support_gap"] = support_gap(sres);
        return d;
      },
      py::arg("field"),
      "Graph-to-radial-graph map y = x / (-u), phi = 1 / (-u) with its "
      "Legendre and support diagnostics");
  m.def(
      "verify_duality",
      [](const GridField& u) {
        auto r = verify_duality(u);
        py::dict d;
        d["max_identity_residual"] = r.max_identity_residual;
        d["mean_identity_residual"] = r.mean_identity_residual;
        d["hessian_consistency"] = r.hessian_consistency;
        d["n_samples"] = r.n_samples;
        d["n_pairs"] = r.n_pairs;
        return d;
      },
      py::arg("field"),
      "Determinant identity between a field and its radial-graph image");
  m.def(
      "verify_pushforward",
      [](const GridField& u, double k, double p, double lam, int bins,
         int angular_bins) {
        PushforwardParams pp;
        pp.k = k;
        pp.p = p;
        pp.lambda = lam;
        pp.bins = bins;
        pp.angular_bins = angular_bins;
        auto r = verify_pushforward(u, pp);
        py::dict d;
        d["max_bin_discrepancy"] = r.max_bin_discrepancy;
        d["total_mass_gap"] = r.total_mass_gap;
        d["support_gap"] = r.support_gap;
        d["max_dual_residual"] = r.max_dual_residual;
        d["bins_used"] = r.bins_used;
        d["bins_flagged"] = r.bins_flagged;
        return d;
      },
      py::arg("field"), py::arg("k") = 0.0, py::arg("p") = 1.0,
      py::arg("lam") = 1.0, py::arg("bins") = 64, py::arg("angular_bins") = 16,
      "Binned comparison of the gradient pushforward against the solved "
      "equation's target measure");

  // ---- 1-D oracle ----------------------------------------------------------
  m.def(
      "oracle_shoot",
      [](double k, double p, double lam, bool eigen, double eps, double b) {
        oracle::ShootSpec sp;
        sp.k = k;
        sp.p = p;
        sp.lambda = lam;
        sp.eigen = eigen;
        sp.eps = eps;
        sp.b = b;
        auto r = oracle::shoot(sp);
        py::dict d;
        d["m"] = r.m;
        d["lam"] = r.lambda;
        d["x"] = to_array(r.x);
        d["u"] = to_array(r.u);
        d["up"] = to_array(r.up);
        return d;
      },
      py::arg("k"), py::arg("p"), py::arg("lam") = 1.0,
      py::arg("eigen") = false, py::arg("eps") = 0.0, py::arg("b") = 1.0,
      "Independent shooting reference for the symmetric 1-D problems");
}
