#pragma once

#include <functional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "magma/common.hpp"

namespace magma {

// Right-hand-side family F(x,u) > 0 for the semilinear equation
// (u*)^k det D^2 u = F(x,u), with the data the solvers and the energy need:
// the u-derivative and the potential integral of F(x,s) ds for s from u to 0.
//
// Built-ins:
//   power(lambda, p):          F = lambda * (-u)^p        (degenerate at u=0)
//   shifted_power(l, p, eps):  F = l * (eps - u)^p
//   s_family(s, q):            F = (1 - s u)^q
//   constant(eta):             F = eta
// The potential of the shifted/s families is normalized so that it vanishes
// at u = 0 (J(0) = 0); `raw_potential` selects the unnormalized convention.
class SourceSpec {
 public:
  static SourceSpec power(double lambda, double p);
  static SourceSpec shifted_power(double lambda, double p, double eps);
  static SourceSpec s_family(double s, double q);
  static SourceSpec constant(double eta);
  static SourceSpec callback(std::function<double(Point, double)> F,
                             std::function<double(Point, double)> dF_du,
                             std::function<double(Point, double)> potential,
                             std::string label = "callback");

  double F(Point x, double u) const { return F_(x, u); }
  double dF_du(Point x, double u) const { return dF_(x, u); }
  // integral of F(x,s) ds, s from u to 0 (normalized convention).
  double potential(Point x, double u) const { return pot_(x, u); }
  // Unnormalized convention where available (differs by a u-independent
  // constant); falls back to the normalized value.
  double raw_potential(Point x, double u) const { return raw_(x, u); }

  // inf over u <= 0 of F(x,u) when a positive lower bound exists, else 0.
  // Feeds the supersolution barrier monitor of the flow.
  double positive_floor() const { return floor_; }

  const std::string& label() const { return label_; }
  nlohmann::json to_json() const;

 private:
  SourceSpec() = default;
  std::function<double(Point, double)> F_, dF_, pot_, raw_;
  double floor_ = 0.0;
  std::string label_;
};

}  // namespace magma
