#include "rdblow/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "rdblow/errors.hpp"

namespace rdblow::oracle {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kTol = 1e-12;
constexpr long kMaxSteps = 50'000'000;

struct Field {
  const Nonlinearity* nl;
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    dxdt[0] = nl->f1(x[0], x[1]);
    dxdt[1] = nl->f2(x[0], x[1]);
  }
};

// s = 1 / max(u, v) and ds/dt.
std::pair<double, double> inverse_growth(const Nonlinearity& nl, const State& x) {
  const bool use_u = x[0] >= x[1];
  const double m = use_u ? x[0] : x[1];
  const double dm = use_u ? nl.f1(x[0], x[1]) : nl.f2(x[0], x[1]);
  return {1.0 / m, -dm / (m * m)};
}

// Root of s = A (t* - t)^g from two points: q = s / s' is linear in t with
// slope 1/g, so g = dt / dq and t* = t - g q.
double extrapolate(double t1, double q1, double t2, double q2) {
  const double g = (t2 - t1) / (q2 - q1);
  return t2 - g * q2;
}

}  // namespace

OdeTrace ode_reduce(const Nonlinearity& nl, double u0, double v0, double t_max, double cutoff) {
  if (u0 < 0.0 || v0 < 0.0) throw Error(ErrorCode::InvalidArgument, "ode_reduce needs u0, v0 >= 0");
  if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "cutoff must be positive");

  OdeTrace trace;
  trace.method = "Boost.Odeint controlled Dormand-Prince 5(4), abs/rel tol 1e-12";
  auto stepper = odeint::make_controlled(kTol, kTol, odeint::runge_kutta_dopri5<State>());
  const Field field{&nl};

  State x{u0, v0};
  double t = 0.0;
  double dt = 1e-6;
  trace.samples.push_back({t, x[0], x[1]});

  // Last two accepted points, for the power-law extrapolation.
  double t_prev = 0.0;
  double q_prev = 0.0;
  bool have_prev = false;
  std::optional<double> estimate_at_cutoff;
  const double half_cutoff = 0.5 * cutoff;

  for (long steps = 0; steps < kMaxSteps && t < t_max; ++steps) {
    dt = std::min(dt, t_max - t);
    if (stepper.try_step(field, x, t, dt) != odeint::success) continue;
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) break;
    trace.samples.push_back({t, x[0], x[1]});

    const double m = std::max(x[0], x[1]);
    if (!(m > 0.0)) continue;
    const auto [s, ds] = inverse_growth(nl, x);
    if (!(ds < 0.0)) {
      have_prev = false;
      continue;
    }
    const double q = s / ds;
    if (have_prev && s < cutoff && !estimate_at_cutoff) {
      estimate_at_cutoff = extrapolate(t_prev, q_prev, t, q);
    }
    if (have_prev && s < half_cutoff && estimate_at_cutoff) {
      const double refined = extrapolate(t_prev, q_prev, t, q);
      trace.blowup_time = OdeBlowup{refined, std::abs(refined - *estimate_at_cutoff)};
      break;
    }
    t_prev = t;
    q_prev = q;
    have_prev = true;
  }
  return trace;
}

std::vector<OdeSample> ode_evaluate(const Nonlinearity& nl, double u0, double v0,
                                    std::span<const double> times) {
  std::vector<OdeSample> out;
  if (times.empty()) return out;
  auto stepper = odeint::make_controlled(kTol, kTol, odeint::runge_kutta_dopri5<State>());
  const Field field{&nl};
  State x{u0, v0};
  std::vector<double> ts(times.begin(), times.end());
  if (ts.front() > 0.0) ts.insert(ts.begin(), 0.0);
  odeint::integrate_times(stepper, field, x, ts.begin(), ts.end(), 1e-6,
                          [&](const State& s, double t) {
                            if (t >= times.front()) out.push_back({t, s[0], s[1]});
                          });
  return out;
}

double brute_force_integral(const std::function<double(double)>& fn, double a, double b,
                            long panels) {
  if (panels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 panels");
  const double h = (b - a) / static_cast<double>(panels);
  long double sum = 0.5L * (fn(a) + fn(b));
  for (long i = 1; i < panels; ++i) sum += fn(a + h * static_cast<double>(i));
  return static_cast<double>(sum * h);
}

double blowup_time_u2v2_symmetric(double c) { return 1.0 / (4.0 * c * c); }

double solution_u2v2_symmetric(double c, double t) {
  return c / std::sqrt(1.0 - 4.0 * c * c * t);
}

double blowup_time_u2v3_unit() {
  const double r2 = std::numbers::sqrt2;
  return std::pow(2.0, 1.5) / 4.0 * (r2 - std::numbers::pi + 2.0 * std::atan(r2));
}

}  // namespace rdblow::oracle
