#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdblow/nonlinearity.hpp"

// Reference values for tests and acceptance runs. Nothing here shares
// stepping or quadrature code with the solver and bounds modules: the ODE
// integrator is Boost.Odeint's Dormand-Prince 5(4) and the quadrature is a
// plain composite trapezoid.
namespace rdblow::oracle {

struct OdeSample {
  double t;
  double u;
  double v;
};

struct OdeBlowup {
  double time;
  double uncertainty;
};

struct OdeTrace {
  std::vector<OdeSample> samples;
  std::optional<OdeBlowup> blowup_time;
  std::string method;
};

/// Spatially homogeneous Neumann reduction u' = f1(u, v), v' = f2(u, v).
/// Integrates at tolerance 1e-12 until 1 / max(u, v) drops below `cutoff`
/// or t_max is reached. The blow-up time comes from the local power law
/// of s = 1 / max(u, v), extrapolated with s and s' from the vector field;
/// the uncertainty is the change when the cutoff is halved.
OdeTrace ode_reduce(const Nonlinearity& nl, double u0, double v0, double t_max,
                    double cutoff = 1e-6);

/// Solution of the same ODE at the requested increasing times.
std::vector<OdeSample> ode_evaluate(const Nonlinearity& nl, double u0, double v0,
                                    std::span<const double> times);

/// Composite trapezoid with a fixed number of panels.
double brute_force_integral(const std::function<double(double)>& fn, double a, double b,
                            long panels);

/// F = u^2 v^2, u0 = v0 = c: u = v = c (1 - 4 c^2 t)^{-1/2}.
double blowup_time_u2v2_symmetric(double c);
double solution_u2v2_symmetric(double c, double t);

/// F = u^2 v^3, u0 = v0 = 1, from the first integral v^2 = (3u^2 - 1)/2:
/// (2^{3/2}/4)(sqrt 2 - pi + 2 arctan sqrt 2).
double blowup_time_u2v3_unit();

}  // namespace rdblow::oracle
