#include <cmath>
#include <memory>

#include "doctest.h"
#include "magma/stationary.hpp"
#include "magma/transport.hpp"

using namespace magma;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridField quad_field(std::shared_ptr<const Grid> g) {
  return make_test_field(g, "quadratic:1");
}
}  // namespace

TEST_CASE("radial transform matches the closed-form image") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 513);
  auto u = quad_field(g);  // (x^2 - 1)/2: every map is known analytically
  auto s = radial_transform(u);

  CHECK(s.size() > 400);
  CHECK(s.n_dropped > 0);       // the boundary band is excluded
  CHECK(s.delta_cut > 0.0);

  bool found_center = false;
  double wy = 0, wp = 0, wg = 0, wh = 0, gmax = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    double x = s.x[i].x;
    if (std::abs(x) < 1e-12) {
      found_center = true;
      CHECK(std::abs(s.y[i].x) <= 1e-14);
      CHECK(std::abs(s.phi[i] - 2.0) <= 1e-14);
      CHECK(std::abs(s.grad[i].x) <= 1e-14);
    }
    wy = std::max(wy, std::abs(s.y[i].x - 2 * x / (1 - x * x)));
    wp = std::max(wp, std::abs(s.phi[i] - 2 / (1 - x * x)));
    wg = std::max(wg, std::abs(s.grad[i].x - 2 * x / (1 + x * x)));
    double hh = std::pow(1 - x * x, 3) / std::pow(1 + x * x, 3);
    wh = std::max(wh, std::abs(s.hess[i].xx - hh));
    gmax = std::max(gmax, std::abs(s.grad[i].x));
  }
  CHECK(found_center);
  CHECK(wy <= 1e-12);   // second differences are exact on quadratics
  CHECK(wp <= 1e-12);
  CHECK(wg <= 1e-12);
  CHECK(wh <= 1e-12);

  // Gradient image lies in the polar body [-1, 1] and nearly fills it.
  CHECK(gmax <= 1.0 + 5.0 * g->h());
  CHECK(support_gap(s) <= 5e-3);

  // Legendre value of the potential at its own gradient equals -1/u*.
  double d2max = 1.0;  // |u''| of the quadratic
  double budget = 5.0 * g->h() * 2.0 * d2max;
  CHECK(legendre_defect(s) <= budget);
  CHECK(legendre_defect(s) <= 1e-12);  // exact by construction
}

TEST_CASE("determinant duality identity holds at every sample") {
  // 1-D center sample: det u'' / (u*)^3 = 1/(1/2)^3 = 8 = phi^3 phi''.
  auto g1 = Grid::make(ConvexDomain::interval(-1, 1), 513);
  auto s1 = radial_transform(quad_field(g1));
  for (size_t i = 0; i < s1.size(); ++i)
    if (std::abs(s1.x[i].x) < 1e-12) {
      double lhs = s1.det_u[i] / std::pow(s1.star[i], 3);
      double rhs = std::pow(s1.phi[i], 3) * s1.hess[i].xx;
      CHECK(std::abs(lhs - 8.0) <= 1e-12);
      CHECK(std::abs(rhs - 8.0) <= 1e-12);
    }

  // 2-D: the relative gap stays at rounding level across scalings.
  auto g2 = Grid::make(ConvexDomain::ball(1.0), 129);
  for (const char* recipe : {"quadratic:0.5", "quadratic:1", "quadratic:2"}) {
    auto rep = verify_duality(make_test_field(g2, recipe));
    CHECK(rep.max_identity_residual <= 1e-12);
    CHECK(rep.mean_identity_residual <= 1e-13);
    CHECK(rep.n_samples > 1000);
  }
}

TEST_CASE("closed-form Hessian is second-order consistent with the cloud") {
  // The trapezoid defect between neighboring image samples measures how
  // well the closed-form Hessian differentiates the sampled gradient.
  double prev = 0.0;
  for (int N : {129, 257, 513}) {
    auto g = Grid::make(ConvexDomain::interval(-1, 1), N);
    auto rep = verify_duality(make_test_field(g, "exp:1"));
    if (prev > 0.0) CHECK(std::log2(prev / rep.hessian_consistency) >= 1.8);
    prev = rep.hessian_consistency;
  }
  prev = 0.0;
  for (int N : {65, 129, 257}) {
    auto g = Grid::make(ConvexDomain::ball(1.0), N);
    auto rep = verify_duality(quad_field(g));
    CHECK(rep.max_identity_residual <= 1e-3);  // pinned acceptance bound
    if (prev > 0.0) CHECK(std::log2(prev / rep.hessian_consistency) >= 1.8);
    prev = rep.hessian_consistency;
  }
  CHECK(prev <= 1e-4);  // absolute size at the finest ball grid
}

TEST_CASE("pushforward masses balance for the interval eigenpair") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 513);
  auto u = make_test_field(g, "cosine:1");  // -cos(pi x/2)

  PushforwardParams pp;
  pp.k = 0.0;
  pp.p = 1.0;
  pp.lambda = kPi * kPi / 4.0;
  auto rep = verify_pushforward(u, pp);
  CHECK(rep.max_bin_discrepancy <= 0.03);  // pinned acceptance bound
  CHECK(rep.max_bin_discrepancy <= 1e-4);  // measured headroom
  CHECK(rep.total_mass_gap <= 1e-4);
  CHECK(rep.support_gap <= 0.05);
  CHECK(rep.max_dual_residual <= 1e-4);
  CHECK(rep.bins_used == 64);
  CHECK(rep.bins_flagged == 0);

  // Negative control: a wrong intensity is not a solution and the mass
  // balance must say so loudly.
  pp.lambda = 1.0;
  CHECK(verify_pushforward(u, pp).max_bin_discrepancy >= 0.3);
}

TEST_CASE("pushforward masses balance for a solved 2-D field") {
  auto g = Grid::make(ConvexDomain::ball(1.0), 129);
  StationaryConfig cfg;
  cfg.uniqueness_check = false;
  auto sol = solve_subcritical(g, {.k = 0.0, .p = 1.0, .lambda = 1.0}, cfg);

  PushforwardParams pp;
  pp.k = 0.0;
  pp.p = 1.0;
  pp.lambda = 1.0;
  pp.bins = 8;
  pp.angular_bins = 16;
  auto rep = verify_pushforward(sol.u, pp);
  CHECK(rep.max_bin_discrepancy <= 1e-3);
  CHECK(rep.total_mass_gap <= 1e-3);
  CHECK(rep.support_gap <= 0.05);
  CHECK(rep.max_dual_residual <= 1e-3);
  CHECK(rep.bins_used == 8 * 16);
}

TEST_CASE("thin bins are flagged instead of scored") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 65);
  PushforwardParams pp;
  pp.min_samples = 3;
  auto rep = verify_pushforward(make_test_field(g, "cosine:1"), pp);
  CHECK(rep.bins_flagged > 0);
  CHECK(rep.bins_used >= 1);
  CHECK(rep.bins_used + rep.bins_flagged <= 64);
}

TEST_CASE("transport validation") {
  auto g = Grid::make(ConvexDomain::interval(-1, 1), 65);
  auto u = quad_field(g);

  CHECK_THROWS_AS(radial_transform(scaled(u, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(radial_transform(scaled(u, -1.0)), InvalidArgument);

  PushforwardParams bad;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(verify_pushforward(u, bad), InvalidArgument);
  bad.lambda = 1.0;
  bad.bins = 0;
  CHECK_THROWS_AS(verify_pushforward(u, bad), InvalidArgument);
}
