#include "rdblow/nonlinearity.hpp"

#include <cmath>
#include <string>

#include "rdblow/errors.hpp"

namespace rdblow {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::power_product: return "power_product";
    case Family::gradient_homogeneous: return "gradient_homogeneous";
    case Family::absorption: return "absorption";
    case Family::custom: return "custom";
  }
  return "unknown";
}

ShapeFunction ShapeFunction::power(double m) {
  return {"power", m,
          [m](double w) { return std::pow(w, m); },
          [m](double w) { return m == 0.0 ? 0.0 : m * std::pow(w, m - 1.0); }};
}

ShapeFunction ShapeFunction::exp_decay(double lambda) {
  return {"exp_decay", lambda,
          [lambda](double w) { return std::exp(-lambda * w); },
          [lambda](double w) { return -lambda * std::exp(-lambda * w); }};
}

ShapeFunction ShapeFunction::constant(double k) {
  return {"constant", k, [k](double) { return k; }, [](double) { return 0.0; }};
}

Nonlinearity Nonlinearity::custom(std::string name, Evaluator f1, Evaluator f2,
                                  std::optional<Evaluator> potential) {
  Nonlinearity nl;
  nl.family_ = Family::custom;
  nl.name_ = std::move(name);
  nl.f1_ = std::move(f1);
  nl.f2_ = std::move(f2);
  if (potential) nl.potential_ = std::move(*potential);
  return nl;
}

std::optional<double> Nonlinearity::parameter(std::string_view key) const {
  for (const auto& [k, v] : parameters_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Nonlinearity::require_potential(std::string_view context) const {
  if (!potential_) {
    throw Error(ErrorCode::NotGradientSystem,
                std::string(context) + " needs a potential F, '" + name_ + "' has none");
  }
}

double Nonlinearity::F(double u, double v) const {
  require_potential("F");
  return potential_(u, v);
}

Nonlinearity make_power_product(double c, double a_exp, double b_exp) {
  if (!(a_exp >= 1.0) || !(b_exp >= 1.0)) {
    throw Error(ErrorCode::BadExponent, "power_product exponents must be >= 1");
  }
  Nonlinearity nl;
  nl.family_ = Family::power_product;
  nl.name_ = "power_product";
  nl.parameters_ = {{"c", c}, {"a_exp", a_exp}, {"b_exp", b_exp}};
  nl.potential_ = [=](double u, double v) { return c * std::pow(u, a_exp) * std::pow(v, b_exp); };
  nl.f1_ = [=](double u, double v) {
    return c * a_exp * std::pow(u, a_exp - 1.0) * std::pow(v, b_exp);
  };
  nl.f2_ = [=](double u, double v) {
    return c * b_exp * std::pow(u, a_exp) * std::pow(v, b_exp - 1.0);
  };
  return nl;
}

Nonlinearity make_gradient_homogeneous(double c, double alpha, ShapeFunction h) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  const double degree = 2.0 * (1.0 + alpha);
  auto check_u = [](double u) {
    if (!(u > 0.0)) throw Error(ErrorCode::EvalAtZeroU, "homogeneous family needs u > 0");
  };

  Nonlinearity nl;
  nl.family_ = Family::gradient_homogeneous;
  nl.name_ = "gradient_homogeneous";
  nl.parameters_ = {{"c", c}, {"alpha", alpha}, {"shape_parameter", h.parameter}};
  nl.name_ += "/" + h.name;
  // dF/du = c u^{2a+1} (2(1+a) h(w) - w h'(w)),  dF/dv = c u^{2a+1} h'(w),  w = v/u
  nl.potential_ = [=](double u, double v) {
    check_u(u);
    return c * std::pow(u, degree) * h.value(v / u);
  };
  nl.f1_ = [=](double u, double v) {
    check_u(u);
    const double w = v / u;
    return c * std::pow(u, degree - 1.0) * (degree * h.value(w) - w * h.derivative(w));
  };
  nl.f2_ = [=](double u, double v) {
    check_u(u);
    return c * std::pow(u, degree - 1.0) * h.derivative(v / u);
  };
  return nl;
}

Nonlinearity make_absorption(double p, double q, double r, double s, double a, double b) {
  if (!(p >= 1.0) || !(q >= 1.0) || !(r >= 1.0) || !(s >= 1.0)) {
    throw Error(ErrorCode::BadExponent, "absorption exponents must be >= 1");
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "absorption coefficients must be positive");
  }
  Nonlinearity nl;
  nl.family_ = Family::absorption;
  nl.name_ = "absorption";
  nl.parameters_ = {{"p", p}, {"q", q}, {"r", r}, {"s", s}, {"a", a}, {"b", b}};
  nl.f1_ = [=](double u, double v) { return std::pow(v, p) - a * std::pow(u, r); };
  nl.f2_ = [=](double u, double v) { return std::pow(u, q) - b * std::pow(v, s); };
  return nl;
}

}  // namespace rdblow
