#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "magma/domain.hpp"

using namespace magma;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("support function of the unit square") {
  auto d = ConvexDomain::rectangle(1.0, 1.0);
  CHECK(d.support(kPi / 4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d.support(0.0) == doctest::Approx(1.0));
  CHECK(d.support(kPi / 2) == doctest::Approx(1.0));
}

TEST_CASE("polar volumes against closed forms") {
  // interval (a,b) -> (1/|a|, 1/b), length 1/|a| + 1/b
  CHECK(ConvexDomain::interval(-1, 1).polar_volume() == doctest::Approx(2.0));
  CHECK(ConvexDomain::interval(-0.5, 2).polar_volume() ==
        doctest::Approx(2.0 + 0.5));
  // ball(r) -> ball(1/r)
  CHECK(ConvexDomain::ball(1.0).polar_volume() ==
        doctest::Approx(kPi).epsilon(1e-9));
  CHECK(ConvexDomain::ball(2.0).polar_volume() ==
        doctest::Approx(kPi / 4).epsilon(1e-9));
  // square [-1,1]^2 -> cross-polytope |x|+|y| <= 1, area 2
  CHECK(ConvexDomain::rectangle(1, 1).polar_volume() ==
        doctest::Approx(2.0).epsilon(1e-7));
  // ellipse(a,b) -> ellipse(1/a,1/b), area pi/(a b)
  CHECK(ConvexDomain::ellipse(1.0, 0.5).polar_volume() ==
        doctest::Approx(2.0 * kPi).epsilon(1e-9));
}

TEST_CASE("polar volume scaling law: |(cK)^o| = c^-n |K^o|") {
  for (double c : {0.5, 1.0, 1.7, 3.0}) {
    double base = ConvexDomain::ball(1.0).polar_volume();
    CHECK(ConvexDomain::ball(c).polar_volume() ==
          doctest::Approx(base / (c * c)).epsilon(1e-8));
    double rbase = ConvexDomain::rectangle(1, 2).polar_volume();
    CHECK(ConvexDomain::rectangle(c, 2 * c).polar_volume() ==
          doctest::Approx(rbase / (c * c)).epsilon(1e-8));
  }
}

TEST_CASE("polygon approximating the square matches its polar volume") {
  std::vector<Point> sq = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  auto p = ConvexDomain::polygon(sq);
  CHECK(p.polar_volume() ==
        doctest::Approx(ConvexDomain::rectangle(1, 1).polar_volume())
            .epsilon(2e-5));
  CHECK(p.volume() == doctest::Approx(4.0));
  CHECK(p.diameter() == doctest::Approx(2 * std::sqrt(2.0)));
}

TEST_CASE("boundary distance and diameter") {
  auto r = ConvexDomain::rectangle(1, 2);
  CHECK(r.boundary_distance({0, 0}) == doctest::Approx(1.0));
  CHECK(r.diameter() == doctest::Approx(2 * std::sqrt(5.0)));

  auto e = ConvexDomain::ellipse(2, 1);
  CHECK(e.boundary_distance({0, 0}) == doctest::Approx(1.0));
  CHECK(e.boundary_distance({1.9, 0}) == doctest::Approx(0.1).epsilon(1e-6));
  // off-axis closest point for a point on the long axis near the centre
  double d = e.boundary_distance({0.1, 0});
  CHECK(d < 1.0);  // strictly closer than the top vertex
  CHECK(d > 0.9);

  auto b = ConvexDomain::ball(1.5);
  CHECK(b.boundary_distance({0.5, 0}) == doctest::Approx(1.0));
  CHECK(b.diameter() == doctest::Approx(3.0));
}

TEST_CASE("interval preconditions") {
  CHECK_THROWS_AS(ConvexDomain::interval(0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ConvexDomain::interval(-1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ConvexDomain::ball(-1.0), InvalidArgument);
}

TEST_CASE("polygon validation") {
  // CW ordering rejected
  std::vector<Point> cw = {{1, -1}, {-1, -1}, {-1, 1}, {1, 1}};
  CHECK_THROWS_AS(ConvexDomain::polygon(cw), InvalidArgument);
  // origin outside rejected
  std::vector<Point> shifted = {{2, 1}, {4, 1}, {4, 3}, {2, 3}};
  CHECK_THROWS_AS(ConvexDomain::polygon(shifted), InvalidArgument);
}

TEST_CASE("contains is strict and ray_exit lands on the boundary") {
  auto b = ConvexDomain::ball(1.0);
  CHECK(b.contains({0.9, 0}));
  CHECK(!b.contains({1.0, 0}));
  double t = b.ray_exit({0.5, 0.0}, {1.0, 0.0}, 1.0);
  CHECK(t == doctest::Approx(0.5).epsilon(1e-10));

  auto e = ConvexDomain::ellipse(1, 0.5);
  double s = e.ray_exit({0, 0}, {0, 1}, 1.0);
  CHECK(s == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("gauge and boundary_point agree") {
  auto e = ConvexDomain::ellipse(2, 1);
  for (double th : {0.0, 0.3, 1.0, 2.5, 4.0}) {
    Point bp = e.boundary_point(th);
    CHECK(e.gauge(bp) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.contains({bp.x * 0.999, bp.y * 0.999}));
    CHECK(!e.contains({bp.x * 1.001, bp.y * 1.001}));
  }
}

TEST_CASE("json round trip") {
  auto d = ConvexDomain::parse("{\"kind\":\"ball\",\"r\":1.0}");
  CHECK(d.kind() == DomainKind::ball);
  CHECK(d.param_a() == doctest::Approx(1.0));
  auto d2 = ConvexDomain::from_json(d.to_json());
  CHECK(d2.kind() == DomainKind::ball);

  auto iv = ConvexDomain::parse("interval:-0.5,2");
  CHECK(iv.dim() == 1);
  CHECK(iv.param_a() == doctest::Approx(-0.5));
  auto pg = ConvexDomain::parse("polygon:1,0;0,1;-1,0;0,-1");
  CHECK(pg.kind() == DomainKind::polygon);
  CHECK(pg.volume() == doctest::Approx(2.0));
}
