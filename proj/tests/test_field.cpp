#include <doctest.h>

#include <cmath>

#include "magma/field.hpp"

using namespace magma;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridField sample_fn(std::shared_ptr<const Grid> g, double (*f)(Point)) {
  GridField out(g);
  for (int m = 0; m < g->size(); ++m) out[m] = f(g->point(m));
  return out;
}
}  // namespace

TEST_CASE("quadrature: f == 1 integrates to the domain measure") {
  SUBCASE("interval, exact") {
    auto g = Grid::make(ConvexDomain::interval(-1, 1), 257);
    std::vector<double> one(g->size(), 1.0);
    CHECK(integrate(*g, one) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("1 - x^2 on the interval") {
    auto g = Grid::make(ConvexDomain::interval(-1, 1), 257);
    GridField f = sample_fn(g, [](Point p) { return 1.0 - p.x * p.x; });
    CHECK(integrate(*g, f.values()) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-4));
  }
  SUBCASE("unit square, exact") {
    auto g = Grid::make(ConvexDomain::rectangle(1, 1), 65);
    std::vector<double> one(g->size(), 1.0);
    CHECK(integrate(*g, one) == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("unit disk at h = 1/128") {
    auto g = Grid::make(ConvexDomain::ball(1), 257);
    CHECK(g->hx() == doctest::Approx(1.0 / 128.0));
    std::vector<double> one(g->size(), 1.0);
    CHECK(integrate(*g, one) == doctest::Approx(kPi).epsilon(1e-3));
  }
  SUBCASE("ellipse") {
    auto g = Grid::make(ConvexDomain::ellipse(1, 0.5), 257);
    std::vector<double> one(g->size(), 1.0);
    CHECK(integrate(*g, one) == doctest::Approx(kPi * 0.5).epsilon(1e-3));
  }
}

TEST_CASE("derivatives exact on quadratics") {
  SUBCASE("1-D") {
    auto g = Grid::make(ConvexDomain::interval(-1, 1), 65);
    GridField u = sample_fn(g, [](Point p) { return 0.5 * (p.x * p.x - 1); });
    DerivedFields d = derive(u);
    for (int m = 0; m < g->size(); ++m) {
      CHECK(d.ux[m] == doctest::Approx(g->point(m).x).epsilon(1e-10));
      CHECK(d.det[m] == doctest::Approx(1.0).epsilon(1e-9));
      double x = g->point(m).x;
      CHECK(d.star[m] == doctest::Approx(0.5 * (x * x + 1)).epsilon(1e-9));
    }
  }
  SUBCASE("2-D disk, anisotropic quadratic with cross term") {
    // Does not vanish on the boundary, so only nodes whose full stencil stays
    // interior see the exact quadratic; the boundary closure is checked by
    // the vanishing recipes below.
    auto g = Grid::make(ConvexDomain::ball(1), 65);
    GridField u(g);
    for (int m = 0; m < g->size(); ++m) {
      Point p = g->point(m);
      u[m] = p.x * p.x + 0.5 * p.y * p.y + 0.25 * p.x * p.y - 1.0;
    }
    DerivedFields d = derive(u);
    double want_det = 2.0 * 1.0 - 0.25 * 0.25;
    int tested = 0;
    for (int m = 0; m < g->size(); ++m) {
      bool full = g->has_full_cross(m);
      for (int dir = 0; dir < 4; ++dir) full = full && g->leg(m, dir).idx >= 0;
      if (!full) continue;
      ++tested;
      CHECK(d.uxx[m] == doctest::Approx(2.0).epsilon(1e-8));
      CHECK(d.uyy[m] == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(d.uxy[m] == doctest::Approx(0.25).epsilon(1e-7));
      CHECK(d.det[m] == doctest::Approx(want_det).epsilon(1e-7));
    }
    CHECK(tested > 1000);
  }
  SUBCASE("ellipse quadratic: u = (x^2 + 4 y^2 - 1)/2 has det 4") {
    auto g = Grid::make(ConvexDomain::ellipse(1, 0.5), 65);
    GridField u = make_test_field(g, "quadratic");
    DerivedFields d = derive(u);
    for (int m = 0; m < g->size(); ++m)
      CHECK(d.det[m] == doctest::Approx(4.0).epsilon(1e-7));
  }
}

TEST_CASE("star transform of the disk quadratic") {
  auto g = Grid::make(ConvexDomain::ball(1), 65);
  GridField u = make_test_field(g, "quadratic");
  GridField s = star(u);
  for (int m = 0; m < g->size(); ++m) {
    Point p = g->point(m);
    double r2 = p.x * p.x + p.y * p.y;
    CHECK(s[m] == doctest::Approx(0.5 * (r2 + 1)).epsilon(1e-8));
  }
  // u* >= min = -u(0), attained near the origin
  CHECK(s.min() == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("star minimum sits near the origin for random convex fields") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 129);
  for (uint64_t seed : {1ull, 7ull, 42ull}) {
    GridField u = make_test_field(g, "random:" + std::to_string(seed));
    REQUIRE(convex_axiswise(u));
    GridField s = star(u);
    double u0 = -u.value_at({0, 0});
    DerivedFields d = derive(u);
    double grad_max = 0;
    for (double v : d.ux) grad_max = std::max(grad_max, std::abs(v));
    CHECK(s.min() >= -1e-9);
    CHECK(std::abs(s.min() - u0) <= 2 * g->hx() * grad_max + 1e-9);
  }
}

TEST_CASE("hessian_det convergence on a non-polynomial profile") {
  // exp bump: interior max error drops at 2nd order; the one-sided boundary
  // ring closure is first-order pointwise, so the global max-norm is O(h).
  // Quadratic recipes are exact by construction (machine floor).
  auto err_at = [](int n, bool interior_only) {
    auto g = Grid::make(ConvexDomain::ball(1), n);
    GridField u = make_test_field(g, "exp");
    auto det = hessian_det(u);
    double e = 0;
    for (int m = 0; m < g->size(); ++m) {
      Point p = g->point(m);
      double r2 = p.x * p.x + p.y * p.y;
      if (interior_only && r2 > 0.8 * 0.8) continue;
      double ex = std::exp(r2 - 1.0);
      // radial profile f(r2)=e^{r2-1}-1: Hess = 2f' I + 4 f'' x x^T
      double want = (2 * ex + 4 * ex * p.x * p.x) * (2 * ex + 4 * ex * p.y * p.y) -
                    (4 * ex * p.x * p.y) * (4 * ex * p.x * p.y);
      e = std::max(e, std::abs(det[m] - want));
    }
    return e;
  };
  double i65 = err_at(65, true), i129 = err_at(129, true),
         i257 = err_at(257, true);
  INFO("interior errors ", i65, " ", i129, " ", i257);
  CHECK(std::log2(i65 / i129) >= 1.8);
  CHECK(std::log2(i129 / i257) >= 1.8);
  double g129 = err_at(129, false), g257 = err_at(257, false);
  INFO("global errors ", g129, " ", g257);
  CHECK(std::log2(g129 / g257) >= 0.8);  // boundary ring: first order

  // quadratic recipe: exact to rounding at every level (machine floor)
  auto g = Grid::make(ConvexDomain::ball(1), 129);
  GridField q = make_test_field(g, "quadratic");
  auto det = hessian_det(q);
  for (int m = 0; m < g->size(); ++m)
    CHECK(det[m] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("make_test_field rejects bad input") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 33);
  CHECK_THROWS_AS(make_test_field(g, "quadratic:-1"), InvalidArgument);
  CHECK_THROWS_AS(make_test_field(g, "nope"), InvalidArgument);
  auto r = Grid::make(ConvexDomain::rectangle(1, 1), 33);
  CHECK_THROWS_AS(make_test_field(r, "quadratic"), InvalidArgument);
}

TEST_CASE("value_at interpolates") {
  auto g = Grid::make(ConvexDomain::ball(1), 65);
  GridField u = make_test_field(g, "quadratic");
  CHECK(u.value_at({0, 0}) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(u.value_at({0.5, 0.25}) ==
        doctest::Approx(0.5 * (0.25 + 0.0625 - 1)).epsilon(1e-3));
}

TEST_CASE("grid bookkeeping") {
  auto g = Grid::make(ConvexDomain::ball(1), 65);
  CHECK(g->dim() == 2);
  // interior count close to pi r^2 / (hx hy)
  double expect = kPi / (g->hx() * g->hy());
  CHECK(std::abs(g->size() - expect) < 4 * 65);
  CHECK(g->dropped_area() < 1e-3);
  CHECK_THROWS_AS(Grid::make(ConvexDomain::ball(1), 5), InvalidArgument);
  CHECK_THROWS_AS(Grid::make(ConvexDomain::ball(1), 2000), InvalidArgument);
}
