#include "magma/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace magma {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

GridField::GridField(std::shared_ptr<const Grid> g, std::vector<double> v)
    : grid_(std::move(g)), v_(std::move(v)) {
  if (static_cast<int>(v_.size()) != grid_->size())
    throw InvalidArgument("field size does not match grid");
}

double GridField::min() const {
  return *std::min_element(v_.begin(), v_.end());
}
double GridField::max() const {
  return *std::max_element(v_.begin(), v_.end());
}
double GridField::max_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double GridField::value_at(Point p) const {
  const Grid& g = *grid_;
  auto get = [&](int i, int j) {
    int m = g.at(i, j);
    return m >= 0 ? v_[m] : 0.0;
  };
  double fx = (p.x - g.x0()) / g.hx();
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nodes_per_axis() - 2);
  double sx = fx - i;
  if (g.dim() == 1)
    return (1 - sx) * get(i, 0) + sx * get(i + 1, 0);
  double fy = (p.y - g.y0()) / g.hy();
  int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.nodes_per_axis() - 2);
  double sy = fy - j;
  return (1 - sx) * (1 - sy) * get(i, j) + sx * (1 - sy) * get(i + 1, j) +
         (1 - sx) * sy * get(i, j + 1) + sx * sy * get(i + 1, j + 1);
}

DerivedFields derive(const GridField& u) {
  const Grid& g = u.grid();
  const int nm = g.size();
  DerivedFields d;
  d.ux.resize(nm);
  d.uxx.resize(nm);
  d.det.resize(nm);
  d.star.resize(nm);
  const bool two_d = g.dim() == 2;
  if (two_d) {
    d.uy.resize(nm);
    d.uyy.resize(nm);
    d.uxy.resize(nm);
  }
  auto val = [&](const Leg& L) { return L.idx >= 0 ? u[L.idx] : 0.0; };
  for (int m = 0; m < nm; ++m) {
    const double uc = u[m];
    const Stencil& s = g.stencil(m);
    const double ue = val(g.leg(m, Grid::kE)), uw = val(g.leg(m, Grid::kW));
    double ux = s.dx_e * ue + s.dx_w * uw + s.dx_c * uc;
    double uxx = s.dxx_e * ue + s.dxx_w * uw + s.dxx_c * uc;
    d.ux[m] = ux;
    d.uxx[m] = uxx;
    Point p = g.point(m);
    if (!two_d) {
      d.det[m] = uxx;
      d.star[m] = p.x * ux - uc;
      continue;
    }
    const double un = val(g.leg(m, Grid::kN)), us = val(g.leg(m, Grid::kS));
    double uy = s.dy_n * un + s.dy_s * us + s.dy_c * uc;
    double uyy = s.dyy_n * un + s.dyy_s * us + s.dyy_c * uc;
    double uxy = s.dxy_ne * val(g.leg(m, Grid::kNE)) +
                 s.dxy_sw * val(g.leg(m, Grid::kSW)) +
                 s.dxy_se * val(g.leg(m, Grid::kSE)) +
                 s.dxy_nw * val(g.leg(m, Grid::kNW)) + s.dxy_c * uc;
    d.uy[m] = uy;
    d.uyy[m] = uyy;
    d.uxy[m] = uxy;
    d.det[m] = uxx * uyy - uxy * uxy;
    d.star[m] = p.x * ux + p.y * uy - uc;
  }
  return d;
}

std::vector<double> hessian_det(const GridField& u) { return derive(u).det; }

GridField star(const GridField& u) {
  GridField s(u.grid_ptr());
  s.values() = derive(u).star;
  return s;
}

bool convex_axiswise(const GridField& u) {
  const Grid& g = u.grid();
  auto val = [&](const Leg& L) { return L.idx >= 0 ? u[L.idx] : 0.0; };
  for (int m = 0; m < g.size(); ++m) {
    const Stencil& s = g.stencil(m);
    double uxx = s.dxx_e * val(g.leg(m, Grid::kE)) +
                 s.dxx_w * val(g.leg(m, Grid::kW)) + s.dxx_c * u[m];
    if (uxx <= 0.0) return false;
    if (g.dim() == 2) {
      double uyy = s.dyy_n * val(g.leg(m, Grid::kN)) +
                   s.dyy_s * val(g.leg(m, Grid::kS)) + s.dyy_c * u[m];
      if (uyy <= 0.0) return false;
    }
  }
  return true;
}

bool convex_nodewise(const GridField& u, const DerivedFields& d) {
  const Grid& g = u.grid();
  for (int m = 0; m < g.size(); ++m) {
    if (d.uxx[m] <= 0.0 || d.det[m] <= 0.0) return false;
    if (g.dim() == 2 && d.uyy[m] <= 0.0) return false;
  }
  return true;
}

double integrate(const Grid& g, const std::vector<double>& vals) {
  if (static_cast<int>(vals.size()) != g.size())
    throw InvalidArgument("integrate: value count does not match grid");
  const auto& w = g.quad_weights();
  double s = 0.0;
  for (int m = 0; m < g.size(); ++m) s += w[m] * vals[m];
  return s;
}

double integrate(const Grid& g, const std::vector<double>& vals,
                 const std::vector<double>& weight) {
  if (vals.size() != weight.size() ||
      static_cast<int>(vals.size()) != g.size())
    throw InvalidArgument("integrate: size mismatch");
  const auto& w = g.quad_weights();
  double s = 0.0;
  for (int m = 0; m < g.size(); ++m) s += w[m] * vals[m] * weight[m];
  return s;
}

namespace {

// Deterministic base profiles in the normalized coordinate rho in [0,1)
// (1-D: affine map of the interval onto (-1,1), rho = |xi|; 2-D: the gauge).
struct Profiles {
  std::function<double(Point)> quadratic, cosine, expbump;
};

Profiles base_profiles(const Grid& g) {
  const ConvexDomain& dom = g.domain();
  if (dom.kind() == DomainKind::rectangle || dom.kind() == DomainKind::polygon)
    throw InvalidArgument(
        "test-field recipes need a smooth strictly convex domain "
        "(interval/ball/ellipse)");
  Profiles pr;
  if (dom.dim() == 1) {
    double a = dom.param_a(), b = dom.param_b();
    auto xi = [a, b](Point p) { return (2.0 * p.x - (a + b)) / (b - a); };
    pr.quadratic = [xi](Point p) {
      double t = xi(p);
      return 0.5 * (t * t - 1.0);
    };
    pr.cosine = [xi](Point p) { return -std::cos(0.5 * kPi * xi(p)); };
    pr.expbump = [xi](Point p) {
      double t = xi(p);
      return std::exp(t * t - 1.0) - 1.0;
    };
  } else {
    auto rho2 = [dom](Point p) {
      double u = p.x / dom.param_a(), v = p.y / dom.param_b();
      return u * u + v * v;
    };
    pr.quadratic = [rho2](Point p) { return 0.5 * (rho2(p) - 1.0); };
    pr.cosine = [rho2](Point p) {
      return -std::cos(0.5 * kPi * std::sqrt(rho2(p)));
    };
    pr.expbump = [rho2](Point p) { return std::exp(rho2(p) - 1.0) - 1.0; };
  }
  return pr;
}

GridField sample(std::shared_ptr<const Grid> g,
                 const std::function<double(Point)>& f) {
  GridField out(g);
  for (int m = 0; m < g->size(); ++m) out[m] = f(g->point(m));
  return out;
}

}  // namespace

GridField make_test_field(std::shared_ptr<const Grid> g,
                          const std::string& recipe) {
  std::string name = recipe;
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    size_t c = name.find(':', pos);
    parts.push_back(name.substr(pos, c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  const std::string& kind = parts[0];
  Profiles pr = base_profiles(*g);

  auto amplitude = [&](size_t at, double dflt) {
    return parts.size() > at ? std::stod(parts[at]) : dflt;
  };

  if (kind == "quadratic" || kind == "cosine" || kind == "exp") {
    double c = amplitude(1, 1.0);
    if (!(c > 0.0))
      throw InvalidArgument("recipe amplitude must be positive (got " +
                            std::to_string(c) + ")");
    auto& f = kind == "quadratic" ? pr.quadratic
              : kind == "cosine"  ? pr.cosine
                                  : pr.expbump;
    GridField out = sample(g, [&](Point p) { return c * f(p); });
    return out;
  }
  if (kind == "random") {
    if (parts.size() < 2) throw InvalidArgument("random recipe needs a seed");
    uint64_t seed = std::stoull(parts[1]);
    double c = amplitude(2, 1.0);
    if (!(c > 0.0)) throw InvalidArgument("recipe amplitude must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double cq = 0.3 + 1.2 * U(rng);
    double cc = 0.8 * U(rng);
    double ce = 0.8 * U(rng);
    double t1 = 2.0 * U(rng) - 1.0, t2 = 2.0 * U(rng) - 1.0,
           t3 = 2.0 * U(rng) - 1.0;
    double tau = 0.15 * (cq + cc + ce);
    const ConvexDomain& dom = g->domain();
    for (int attempt = 0; attempt < 40; ++attempt) {
      auto f = [&](Point p) {
        double base = cq * pr.quadratic(p) + cc * pr.cosine(p) + ce * pr.expbump(p);
        double pert;
        if (dom.dim() == 1) {
          double a = dom.param_a(), b = dom.param_b();
          double xi = (2.0 * p.x - (a + b)) / (b - a);
          pert = t1 * std::sin(kPi * (xi + 1.0) / 2.0) +
                 t2 * std::sin(kPi * (xi + 1.0)) +
                 t3 * std::sin(1.5 * kPi * (xi + 1.0));
        } else {
          double u = p.x / dom.param_a(), v = p.y / dom.param_b();
          double rho2 = u * u + v * v;
          pert = (1.0 - rho2) * (t1 * u + t2 * v + t3 * u * v);
        }
        return c * (base + tau * pert);
      };
      GridField out = sample(g, f);
      DerivedFields d = derive(out);
      if (convex_axiswise(out) && (g->dim() == 1 || convex_nodewise(out, d)))
        return out;
      tau *= 0.5;
    }
    throw SolverFailure("random recipe failed to reach a convex field");
  }
  throw InvalidArgument("unknown test-field recipe: " + recipe);
}

GridField axpy(double alpha, const GridField& x, const GridField& y) {
  if (x.grid_ptr() != y.grid_ptr())
    throw InvalidArgument("axpy: fields on different grids");
  GridField out(x.grid_ptr());
  for (int m = 0; m < x.size(); ++m) out[m] = alpha * x[m] + y[m];
  return out;
}

GridField scaled(const GridField& x, double alpha) {
  GridField out(x.grid_ptr());
  for (int m = 0; m < x.size(); ++m) out[m] = alpha * x[m];
  return out;
}

double max_abs_diff(const GridField& a, const GridField& b) {
  if (a.grid_ptr() != b.grid_ptr())
    throw InvalidArgument("max_abs_diff: fields on different grids");
  double s = 0;
  for (int m = 0; m < a.size(); ++m) s = std::max(s, std::abs(a[m] - b[m]));
  return s;
}

}  // namespace magma
