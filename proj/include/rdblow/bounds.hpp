#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "rdblow/errors.hpp"
#include "rdblow/functionals.hpp"
#include "rdblow/geometry.hpp"
#include "rdblow/hypotheses.hpp"
#include "rdblow/nonlinearity.hpp"

namespace rdblow {

/// Raised when a bound's hypothesis fails; carries the failing report.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(HypothesisReport report);
  [[nodiscard]] const HypothesisReport& report() const noexcept { return report_; }

 private:
  HypothesisReport report_;
};

struct UpperBoundResult {
  double alpha = 0.0;
  double E0 = 0.0;
  double J0 = 0.0;
  double M = 0.0;
  double t_upper = 0.0;       // 1 / (alpha M E0^alpha)
  double t_upper_alt = 0.0;   // E0 / (alpha J0)
  std::vector<HypothesisReport> hypothesis_reports;
};

/// Initial data either on a mesh (fields, possibly with traces) or as
/// constants on an analytic domain.
struct MeshData {
  const Mesh* mesh;
  const FieldPair* fields;
};
struct ConstantData {
  DomainSpec domain;
  double c1;
  double c2;
};
using InitialState = std::variant<MeshData, ConstantData>;

/// Blow-up time upper bound. Checks H1 on `box`, H2 and H3 on the data, and
/// refuses with HypothesisError or NonpositiveJ0.
UpperBoundResult upper_bound_blowup(const Nonlinearity& nl, const InitialState& data,
                                    double gamma1, double gamma2, double alpha,
                                    const SampleBox& box = {});

/// Largest admissible (beta1, beta2).
std::pair<double, double> select_betas(double p, double k1, double k2,
                                       const GeometryConstants& geo);

/// Left-hand side of the admissibility condition for one beta; <= 0 when
/// admissible, 0 at the value select_betas returns.
double beta_admissibility(double p, double k, const GeometryConstants& geo, double beta);

std::pair<double, double> compute_K(double p, double k, const GeometryConstants& geo,
                                    double beta);

struct LowerBoundIntegral {
  double t_lower = 0.0;
  double abs_error = 0.0;
};

/// Integral of 1 / (K1 xi^{3/2} + K2 xi^3) over [scriptE0, inf), evaluated
/// as the integral of 2 w^3 / (K1 w^3 + K2) over [0, scriptE0^{-1/2}].
LowerBoundIntegral lower_bound_blowup(double scriptE0, double K1, double K2);

enum class LowerMode { A2A3, A2prime };

std::string_view to_string(LowerMode mode);

struct LowerBoundResult {
  double p = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k = 0.0;
  double rho = 0.0;
  double d = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double scriptE0 = 0.0;
  double t_lower = 0.0;
  double integral_abs_error = 0.0;
  LowerMode mode = LowerMode::A2prime;
  bool smooth_boundary_caveat = false;  // set for boxes
  std::vector<HypothesisReport> hypothesis_reports;
};

LowerBoundResult lower_bound_pipeline(const Nonlinearity& nl, const InitialState& data, double p,
                                      double k1, double k2, LowerMode mode,
                                      const SampleBox& box = {});

}  // namespace rdblow
