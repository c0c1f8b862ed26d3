#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rdblow {

enum class Family { power_product, gradient_homogeneous, absorption, custom };

std::string_view to_string(Family family);

using Evaluator = std::function<double(double u, double v)>;

/// Shape function h(w) for the homogeneous family, with its derivative.
struct ShapeFunction {
  std::string name;
  double parameter = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static ShapeFunction power(double m);          // h(w) = w^m
  static ShapeFunction exp_decay(double lambda);  // h(w) = exp(-lambda w)
  static ShapeFunction constant(double k);        // h(w) = k
};

/// Reaction terms (f1, f2) and, for gradient systems, the potential F with
/// dF/du = f1 and dF/dv = f2.
class Nonlinearity {
 public:
  /// Custom evaluator triple; pass F only when f1, f2 are its partials.
  static Nonlinearity custom(std::string name, Evaluator f1, Evaluator f2,
                             std::optional<Evaluator> potential = std::nullopt);

  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool has_potential() const noexcept { return static_cast<bool>(potential_); }
  [[nodiscard]] const std::vector<std::pair<std::string, double>>& parameters() const noexcept {
    return parameters_;
  }
  [[nodiscard]] std::optional<double> parameter(std::string_view key) const;

  /// Throws NotGradientSystem when no potential exists.
  [[nodiscard]] double F(double u, double v) const;
  [[nodiscard]] double f1(double u, double v) const { return f1_(u, v); }
  [[nodiscard]] double f2(double u, double v) const { return f2_(u, v); }

  /// Throws NotGradientSystem unless F is available.
  void require_potential(std::string_view context) const;

 private:
  friend Nonlinearity make_power_product(double, double, double);
  friend Nonlinearity make_gradient_homogeneous(double, double, ShapeFunction);
  friend Nonlinearity make_absorption(double, double, double, double, double, double);

  Nonlinearity() = default;

  Family family_ = Family::custom;
  std::string name_;
  std::vector<std::pair<std::string, double>> parameters_;
  Evaluator f1_;
  Evaluator f2_;
  Evaluator potential_;
};

/// F = c u^a v^b. Exponents below one are rejected (BadExponent).
Nonlinearity make_power_product(double c, double a_exp, double b_exp);

/// F = c u^{2(1+alpha)} h(v/u); defined for u > 0 only (EvalAtZeroU).
Nonlinearity make_gradient_homogeneous(double c, double alpha, ShapeFunction h);

/// f1 = v^p - a u^r, f2 = u^q - b v^s. Not a gradient system.
Nonlinearity make_absorption(double p, double q, double r, double s, double a, double b);

}  // namespace rdblow
