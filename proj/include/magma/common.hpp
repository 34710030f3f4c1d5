#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace magma {

inline constexpr const char* kVersion = "0.1.0";

// 2-vector used for both 1-D and 2-D points; y is ignored when dim == 1.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }

// Configuration / precondition violations. The CLI maps this to exit code 3.
class InvalidArgument : public std::runtime_error {
 public:
  explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (non-convergence, guard trips, ...). CLI exit code 2.
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace magma
