#include <cmath>
#include <memory>

#include "doctest.h"
#include "magma/ma_core.hpp"
#include "magma/oracle1d.hpp"

using namespace magma;

namespace {
GridField exact_quadratic(const std::shared_ptr<const Grid>& g, double ax,
                          double ay) {
  // (ax x^2 + ay y^2 - 1) / 2, zero on the boundary curve ax x^2 + ay y^2 = 1
  GridField u(g);
  for (int m = 0; m < g->size(); ++m) {
    Point p = g->point(m);
    u[m] = 0.5 * (ax * p.x * p.x + ay * p.y * p.y - 1.0);
  }
  return u;
}
}  // namespace

TEST_CASE("fixed rhs: interval f=1 reproduces the quadratic near machine") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 257);
  auto rep = solve_fixed_rhs(g, [](Point) { return 1.0; });
  auto ex = exact_quadratic(g, 1.0, 0.0);
  CHECK(max_abs_diff(rep.u, ex) < 1e-10);
  CHECK(rep.residual <= 1e-9);
}

TEST_CASE("fixed rhs: disk f=1 reproduces the radial quadratic") {
  auto g = Grid::make(ConvexDomain::ball(1.0), 129);
  auto rep = solve_fixed_rhs(g, [](Point) { return 1.0; });
  auto ex = exact_quadratic(g, 1.0, 1.0);
  CHECK(max_abs_diff(rep.u, ex) < 1e-8);
}

TEST_CASE("fixed rhs: ellipse f=4 hits the anisotropic quadratic") {
  auto g = Grid::make(ConvexDomain::ellipse(1.0, 0.5), 129);
  auto rep = solve_fixed_rhs(g, [](Point) { return 4.0; });
  auto ex = exact_quadratic(g, 1.0, 4.0);
  CHECK(max_abs_diff(rep.u, ex) < 1e-8);
}

TEST_CASE("fixed rhs: manufactured exponential solution converges at order 2") {
  // u = exp(r^2 - 1) - 1 on the unit disk has
  // det D^2 u = 4 (1 + 2 r^2) exp(2 (r^2 - 1)).
  auto f = [](Point p) {
    double r2 = p.x * p.x + p.y * p.y;
    return 4.0 * (1.0 + 2.0 * r2) * std::exp(2.0 * (r2 - 1.0));
  };
  double err[3];
  int idx = 0;
  for (int n : {65, 129, 257}) {
    auto g = Grid::make(ConvexDomain::ball(1.0), n);
    auto rep = solve_fixed_rhs(g, f);
    double e = 0.0;
    for (int m = 0; m < g->size(); ++m) {
      Point p = g->point(m);
      double ex = std::exp(p.x * p.x + p.y * p.y - 1.0) - 1.0;
      e = std::max(e, std::abs(rep.u[m] - ex));
    }
    err[idx++] = e;
  }
  double o1 = std::log2(err[0] / err[1]);
  double o2 = std::log2(err[1] / err[2]);
  CHECK(o1 >= 1.8);
  CHECK(o2 >= 1.8);
}

TEST_CASE("comparison order: larger f gives deeper solution") {
  auto g = Grid::make(ConvexDomain::ball(1.0), 65);
  auto u1 = solve_fixed_rhs(g, [](Point) { return 1.0; }).u;
  auto u2 = solve_fixed_rhs(g, [](Point) { return 2.0; }).u;
  for (int m = 0; m < g->size(); ++m) CHECK(u1[m] >= u2[m] - 1e-10);
  // det(c D^2 u) = c^2 det D^2 u makes u2 = sqrt(2) u1 exactly.
  CHECK(max_abs_diff(u2, scaled(u1, std::sqrt(2.0))) < 1e-8);
}

TEST_CASE("semilinear with constant source equals fixed-rhs solve") {
  auto g = Grid::make(ConvexDomain::ball(1.0), 65);
  auto a = solve_fixed_rhs(g, [](Point) { return 1.0; });
  auto b = solve_semilinear(g, 0.0, SourceSpec::constant(1.0));
  CHECK(max_abs_diff(a.u, b.u) < 1e-12);
}

TEST_CASE("semilinear k=0 shifted source matches the shooting oracle") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 257);
  auto rep =
      solve_semilinear(g, 0.0, SourceSpec::shifted_power(1.0, 0.5, 0.1));
  oracle::ShootSpec spec;
  spec.k = 0;
  spec.p = 0.5;
  spec.eps = 0.1;
  spec.lambda = 1.0;
  auto orc = oracle::shoot(spec);
  double worst = 0.0;
  for (int m = 0; m < g->size(); ++m) {
    double ref = oracle::sample_u(orc, g->point(m).x);
    worst = std::max(worst, std::abs(rep.u[m] - ref));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("semilinear k=1 star-weighted equation matches the oracle") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 257);
  // (u*)^1 u'' = 1: s-family at s=0 with exponent q = n+k = 2 is (1-0*u)^2 = 1
  auto rep = solve_semilinear(g, 1.0, SourceSpec::s_family(0.0, 2.0));
  oracle::ShootSpec spec;
  spec.k = 1;
  spec.p = 0;
  spec.lambda = 1.0;
  auto orc = oracle::shoot(spec);
  double worst = 0.0;
  for (int m = 0; m < g->size(); ++m)
    worst = std::max(
        worst, std::abs(rep.u[m] - oracle::sample_u(orc, g->point(m).x)));
  CHECK(worst < 1e-5);
}

TEST_CASE("residual certificate is idempotent") {
  auto g = Grid::make(ConvexDomain::ball(1.0), 65);
  auto F = SourceSpec::shifted_power(1.0, 1.0, 0.5);
  auto rep = solve_semilinear(g, 1.0, F);
  auto res = equation_residual(rep.u, 1.0, F);
  double worst = 0.0;
  for (double v : res) worst = std::max(worst, std::abs(v));
  CHECK(worst == doctest::Approx(rep.residual).epsilon(1e-12));
  CHECK(worst <= 1e-9);
}

TEST_CASE("warm start converges immediately") {
  auto g = Grid::make(ConvexDomain::ball(1.0), 65);
  auto F = SourceSpec::constant(2.0);
  auto a = solve_semilinear(g, 0.0, F);
  auto b = solve_semilinear(g, 0.0, F, {}, &a.u);
  CHECK(b.newton_iters <= 1);
}

TEST_CASE("solver input validation and failure paths") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 65);
  SolveConfig bad;
  bad.tol_residual = 0.0;
  CHECK_THROWS_AS(solve_fixed_rhs(g, [](Point) { return 1.0; }, bad),
                  InvalidArgument);
  CHECK_THROWS_AS(solve_fixed_rhs(g, [](Point) { return -1.0; }),
                  SolverFailure);
  CHECK_THROWS_AS(solve_semilinear(g, -2.5, SourceSpec::constant(1.0)),
                  InvalidArgument);
}
