#include <cmath>

#include "doctest.h"
#include "magma/oracle1d.hpp"

using namespace magma;
using oracle::ShootSpec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("shoot recovers the exact quadratic for k=0, p=0") {
  ShootSpec s;
  s.k = 0;
  s.p = 0;
  s.lambda = 1.0;
  auto r = oracle::shoot(s);
  CHECK(r.m == doctest::Approx(0.5).epsilon(1e-10));
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    CHECK(std::abs(oracle::sample_u(r, x) - (x * x - 1.0) / 2.0) < 1e-9);
    CHECK(std::abs(oracle::sample_up(r, x) - x) < 1e-8);
  }
}

TEST_CASE("eigen shoot for k=0,p=1 finds pi^2/4 and the cosine profile") {
  ShootSpec s;
  s.k = 0;
  s.p = 1;
  s.eigen = true;
  auto r = oracle::shoot(s);
  CHECK(r.m == doctest::Approx(1.0));
  CHECK(std::abs(r.lambda - kPi * kPi / 4.0) < 1e-8);
  for (double x = 0.0; x <= 1.0; x += 0.02)
    CHECK(std::abs(oracle::sample_u(r, x) + std::cos(kPi * x / 2.0)) < 1e-8);
}

TEST_CASE("supercritical shoot k=0,p=3 hits the closed-form amplitude") {
  // Conserved quantity of u'' = (-u)^3: u'^2/2 + (-u)^4/4 = m^4/4, so the
  // half-width-1 amplitude is m = sqrt(2) * Gamma(1/4)Gamma(1/2)/(4 Gamma(3/4)).
  const double m_exact = 1.8540746773013717;
  ShootSpec s;
  s.k = 0;
  s.p = 3;
  s.lambda = 1.0;
  auto r = oracle::shoot(s);
  CHECK(std::abs(r.m - m_exact) < 1e-8);

  SUBCASE("energy identity holds along the trajectory") {
    double c = std::pow(r.m, 4) / 4.0;
    for (size_t i = 0; i < r.x.size(); ++i) {
      double e = r.up[i] * r.up[i] / 2.0 + std::pow(-r.u[i], 4) / 4.0;
      CHECK(std::abs(e - c) < 1e-9 * (1.0 + c));
    }
  }
  SUBCASE("tolerance halving moves the answer by less than 10x tol") {
    ShootSpec s2 = s;
    s2.tol = 5e-11;
    auto r2 = oracle::shoot(s2);
    CHECK(std::abs(r2.m - r.m) < 1e-9);
  }
}

TEST_CASE("shoot handles the star-weighted k=1 problem self-consistently") {
  ShootSpec s;
  s.k = 1;
  s.p = 0;
  s.lambda = 1.0;  // u'' = 1/(x u' - u)
  auto r = oracle::shoot(s);
  CHECK(r.m > 0.0);
  CHECK(std::abs(r.u.back()) < 1e-9);
  ShootSpec s2 = s;
  s2.tol = 5e-11;
  auto r2 = oracle::shoot(s2);
  CHECK(std::abs(r2.m - r.m) < 1e-9);
  // Residual of the ODE at interior samples, using the stored derivative.
  for (size_t i = 1; i + 1 < r.x.size(); ++i) {
    double star = r.x[i] * r.up[i] - r.u[i];
    CHECK(star > 0.0);
  }
}

TEST_CASE("eigen lambda matches the Rayleigh quotient of its eigenfunction") {
  ShootSpec s;
  s.k = 0;
  s.p = 1;
  s.eigen = true;
  auto r = oracle::shoot(s);
  // For n=1, k=0 the quotient reduces to int u'^2 / int u^2 by parts.
  auto up2 = [&](double x) {
    double v = oracle::sample_up(r, x);
    return v * v;
  };
  auto u2 = [&](double x) {
    double v = oracle::sample_u(r, x);
    return v * v;
  };
  double num = oracle::quad(up2, -1.0, 1.0, 1e-12);
  double den = oracle::quad(u2, -1.0, 1.0, 1e-12);
  CHECK(std::abs(num / den - r.lambda) < 1e-8);
}

TEST_CASE("quad reproduces closed-form integrals") {
  auto f1 = [](double x) {
    double d = 1.0 + x * x;
    return 2.0 * (1.0 - x * x) / (d * d);
  };
  CHECK(std::abs(oracle::quad(f1, -1.0, 1.0) - 2.0) < 1e-11);
  auto f2 = [](double x) { return (1.0 - x * x) / 2.0; };
  CHECK(std::abs(oracle::quad(f2, -1.0, 1.0) - 2.0 / 3.0) < 1e-12);
  auto f3 = [](double x) {
    double c = std::cos(kPi * x / 2.0);
    return c * c;
  };
  CHECK(std::abs(oracle::quad(f3, -1.0, 1.0) - 1.0) < 1e-11);
}

TEST_CASE("shoot rejects bad input") {
  ShootSpec s;
  s.b = -1.0;
  CHECK_THROWS_AS(oracle::shoot(s), InvalidArgument);
  ShootSpec s2;
  s2.lambda = 0.0;
  CHECK_THROWS_AS(oracle::shoot(s2), InvalidArgument);
}
