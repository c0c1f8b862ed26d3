#pragma once

#include <optional>
#include <string>
#include <utility>

#include "rdblow/functionals.hpp"
#include "rdblow/geometry.hpp"
#include "rdblow/nonlinearity.hpp"

namespace rdblow {

enum class Hypothesis { H1, H2, H3, A2, A3, A2prime };

std::string_view to_string(Hypothesis h);

/// Log-uniform sampling box for pointwise conditions in (u, v).
struct SampleBox {
  double u_min = 1e-3;
  double u_max = 1e3;
  double v_min = 1e-3;
  double v_max = 1e3;
  int samples_per_axis = 64;

  [[nodiscard]] std::string describe() const;
};

struct Witness {
  bool spatial = false;  // true: x holds a point of Omega; false: (u, v)
  double u = 0.0;
  double v = 0.0;
  Point x{0.0, 0.0, 0.0};
  double slack = 0.0;  // unnormalised slack at the witness
};

/// Pointwise checks report the smallest normalised slack
/// (slack / sum of magnitudes of the terms); integral checks the slack
/// over |LHS| + |RHS|. holds iff margin >= -tolerance.
struct HypothesisReport {
  Hypothesis hypothesis = Hypothesis::H1;
  bool holds = true;
  double margin = 0.0;
  double tolerance = 1e-9;
  std::optional<Witness> witness;
  std::string sampling;
};

inline constexpr double kHoldsTolerance = 1e-9;

/// u f1 + v f2 >= 2(1+alpha) F on the box. NotGradientSystem without F.
HypothesisReport check_H1(const Nonlinearity& nl, double alpha, const SampleBox& box = {});

/// Integral conditions on the initial data with the mesh quadrature and the
/// discrete gradient energy. Traces in `initial` are used when present.
std::pair<HypothesisReport, HypothesisReport> check_H2_H3(const Nonlinearity& nl,
                                                          const FieldPair& initial,
                                                          const Mesh& mesh, double gamma1,
                                                          double gamma2);

/// Same conditions for spatially constant data on an analytic domain
/// (zero gradient, boundary term gamma c^2 |boundary|).
std::pair<HypothesisReport, HypothesisReport> check_H2_H3_constant(const Nonlinearity& nl,
                                                                   double c1, double c2,
                                                                   const DomainSpec& domain,
                                                                   double gamma1, double gamma2);

/// f1 <= k1 u^{p+1} and f2 <= k2 v^{p+1}.
std::pair<HypothesisReport, HypothesisReport> check_A2_A3(const Nonlinearity& nl, double k1,
                                                          double k2, double p,
                                                          const SampleBox& box = {});

/// u^{2p-1} f1 + v^{2p-1} f2 <= k1 u^{3p} + k2 v^{3p}.
HypothesisReport check_A2prime(const Nonlinearity& nl, double k1, double k2, double p,
                               const SampleBox& box = {});

enum class AbsorptionCase {
  blowup_exists,
  all_global,
  all_global_bounded,
  threshold_blowup_small_ab,
  threshold_global_bounded,
  threshold_global,
};

std::string_view to_string(AbsorptionCase c);

/// Case split for u_t = Lu + v^p - a u^r, v_t = Lv + u^q - b v^s.
AbsorptionCase classify_absorption(double p, double q, double r, double s, double a, double b);

}  // namespace rdblow
