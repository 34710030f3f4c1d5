#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "magma/common.hpp"

namespace magma {

enum class DomainKind { interval, ball, ellipse, rectangle, polygon };

std::string to_string(DomainKind k);

// Bounded open convex domain containing the origin. Five shape families:
//   interval(a,b)   : 1-D, a < 0 < b
//   ball(r)         : 2-D disk of radius r
//   ellipse(a,b)    : 2-D, x^2/a^2 + y^2/b^2 < 1
//   rectangle(a,b)  : 2-D, |x| < a, |y| < b (axis-aligned, origin-centred)
//   polygon(verts)  : 2-D strictly convex CCW polygon (polar-volume / geometry
//                     use only; not a PDE domain because of the corners)
class ConvexDomain {
 public:
  static ConvexDomain interval(double a, double b);
  static ConvexDomain ball(double r);
  static ConvexDomain ellipse(double a, double b);
  static ConvexDomain rectangle(double a, double b);
  static ConvexDomain polygon(std::vector<Point> vertices_ccw);

  // {"kind":"ball","r":1.0} style descriptor.
  static ConvexDomain from_json(const nlohmann::json& j);
  // Either a JSON descriptor or the compact "kind:params" form, e.g.
  // "ball:1", "interval:-1,1", "ellipse:1,0.5", "polygon:1,0;0,1;-1,0;0,-1".
  static ConvexDomain parse(const std::string& descriptor);
  nlohmann::json to_json() const;

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::interval ? 1 : 2; }

  // Strict interior test (boundary excluded).
  bool contains(Point p) const;

  // Support function h(theta) = sup_{z in domain} <z, (cos theta, sin theta)>.
  // 2-D only.
  double support(double theta) const;

  // Volume (length/area) of the polar body {y : <x,y> <= 1 for all x}.
  // 1-D closed form; 2-D via 0.5 * integral of h(theta)^-2 on a 4096-panel
  // midpoint rule with a Richardson consistency check.
  double polar_volume() const;

  // Distance from an interior point to the boundary.
  double boundary_distance(Point p) const;

  double diameter() const;

  // Largest t in (0, t_hi] with contains(p + s*dir) for all s < t, i.e. the
  // exit parameter of the ray p + t*dir. Requires contains(p) and
  // !contains(p + t_hi*dir). Bisection on the strict-interior predicate.
  double ray_exit(Point p, Point dir, double t_hi) const;

  // Point where the ray from the origin in direction theta meets the boundary
  // (2-D), or the endpoint with the sign of s (1-D, s = +-1).
  Point boundary_point(double theta) const;

  // Gauge (Minkowski functional): g(p) = inf {t > 0 : p/t in domain}.
  // Equals the support function of the polar body in direction p.
  double gauge(Point p) const;

  // Axis-aligned bounding box {x0, x1, y0, y1} (y entries 0 in 1-D).
  std::array<double, 4> bounding_box() const;

  // Shape parameters, meaning depends on kind: interval/ellipse/rectangle use
  // (a, b); ball uses (r, r).
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  const std::vector<Point>& vertices() const { return verts_; }

  // Measure of the domain itself (length / area), exact per kind.
  double volume() const;

 private:
  ConvexDomain() = default;

  DomainKind kind_ = DomainKind::ball;
  double a_ = 1.0;
  double b_ = 1.0;
  std::vector<Point> verts_;  // polygon only
};

}  // namespace magma
