#include "magma/source_spec.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace magma {

namespace {
std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}
}  // namespace

SourceSpec SourceSpec::power(double lambda, double p) {
  if (lambda <= 0.0) throw InvalidArgument("power source: lambda must be > 0");
  if (p < 0.0) throw InvalidArgument("power source: p must be >= 0");
  SourceSpec s;
  s.F_ = [lambda, p](Point, double u) { return lambda * std::pow(-u, p); };
  s.dF_ = [lambda, p](Point, double u) {
    return p == 0.0 ? 0.0 : -lambda * p * std::pow(-u, p - 1.0);
  };
  s.pot_ = [lambda, p](Point, double u) {
    return lambda * std::pow(-u, p + 1.0) / (p + 1.0);
  };
  s.raw_ = s.pot_;
  s.floor_ = (p == 0.0) ? lambda : 0.0;
  s.label_ = fmt("power(lambda=%g,p=%g)", lambda, p);
  return s;
}

SourceSpec SourceSpec::shifted_power(double lambda, double p, double eps) {
  if (lambda <= 0.0) throw InvalidArgument("shifted source: lambda must be > 0");
  if (p < 0.0) throw InvalidArgument("shifted source: p must be >= 0");
  if (eps <= 0.0) throw InvalidArgument("shifted source: eps must be > 0");
  SourceSpec s;
  s.F_ = [lambda, p, eps](Point, double u) {
    return lambda * std::pow(eps - u, p);
  };
  s.dF_ = [lambda, p, eps](Point, double u) {
    return p == 0.0 ? 0.0 : -lambda * p * std::pow(eps - u, p - 1.0);
  };
  s.pot_ = [lambda, p, eps](Point, double u) {
    return lambda *
           (std::pow(eps - u, p + 1.0) - std::pow(eps, p + 1.0)) / (p + 1.0);
  };
  s.raw_ = [lambda, p, eps](Point, double u) {
    return lambda * std::pow(eps - u, p + 1.0) / (p + 1.0);
  };
  s.floor_ = lambda * std::pow(eps, p);  // min over u <= 0 is at u = 0
  s.label_ = fmt("shifted(lambda=%g,p=%g,eps=%g)", lambda, p, eps);
  return s;
}

SourceSpec SourceSpec::s_family(double sv, double q) {
  if (sv < 0.0) throw InvalidArgument("s-family source: s must be >= 0");
  if (q < 0.0) throw InvalidArgument("s-family source: q must be >= 0");
  SourceSpec s;
  s.F_ = [sv, q](Point, double u) { return std::pow(1.0 - sv * u, q); };
  s.dF_ = [sv, q](Point, double u) {
    return q == 0.0 ? 0.0 : -sv * q * std::pow(1.0 - sv * u, q - 1.0);
  };
  if (sv == 0.0) {
    s.pot_ = [](Point, double u) { return -u; };
    s.raw_ = s.pot_;
  } else {
    s.pot_ = [sv, q](Point, double u) {
      return (std::pow(1.0 - sv * u, q + 1.0) - 1.0) / (sv * (q + 1.0));
    };
    s.raw_ = [sv, q](Point, double u) {
      return std::pow(1.0 - sv * u, q + 1.0) / (sv * (q + 1.0));
    };
  }
  s.floor_ = 1.0;  // min over u <= 0 is at u = 0
  s.label_ = fmt("sfam(s=%g,q=%g)", sv, q);
  return s;
}

SourceSpec SourceSpec::constant(double eta) {
  if (eta <= 0.0) throw InvalidArgument("constant source: eta must be > 0");
  SourceSpec s;
  s.F_ = [eta](Point, double) { return eta; };
  s.dF_ = [](Point, double) { return 0.0; };
  s.pot_ = [eta](Point, double u) { return -eta * u; };
  s.raw_ = s.pot_;
  s.floor_ = eta;
  s.label_ = fmt("constant(eta=%g)", eta);
  return s;
}

SourceSpec SourceSpec::callback(std::function<double(Point, double)> F,
                                std::function<double(Point, double)> dF_du,
                                std::function<double(Point, double)> potential,
                                std::string label) {
  if (!F || !dF_du || !potential)
    throw InvalidArgument("callback source: all three callables are required");
  SourceSpec s;
  s.F_ = std::move(F);
  s.dF_ = std::move(dF_du);
  s.pot_ = std::move(potential);
  s.raw_ = s.pot_;
  s.floor_ = 0.0;  // unknown; callers needing a floor must supply a family
  s.label_ = std::move(label);
  return s;
}

nlohmann::json SourceSpec::to_json() const {
  return nlohmann::json{{"source", label_}, {"positive_floor", floor_}};
}

}  // namespace magma
