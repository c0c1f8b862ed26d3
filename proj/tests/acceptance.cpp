// Acceptance runs: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rdblow/bounds.hpp"
#include "rdblow/errors.hpp"
#include "rdblow/functionals.hpp"
#include "rdblow/geometry.hpp"
#include "rdblow/hypotheses.hpp"
#include "rdblow/initial_data.hpp"
#include "rdblow/nonlinearity.hpp"
#include "rdblow/oracle.hpp"
#include "rdblow/solver.hpp"

using namespace rdblow;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "[fail] ") << what;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Mesh cube_mesh(int dim, int n) {
  const std::vector<double> h(dim, 1.0);
  return build_mesh(DomainSpec::box(h), n);
}

Nonlinearity zero_reaction() {
  return Nonlinearity::custom(
      "zero", [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
      Evaluator([](double, double) { return 0.0; }));
}

double lower_integrand(double w, double K1, double K2) {
  const double w3 = w * w * w;
  return 2 * w3 / (K1 * w3 + K2);
}

// Shared between criteria 1 and 6.
SolveTrace& run_one() {
  static SolveTrace trace = [] {
    const Mesh m = cube_mesh(3, 16);
    SolverConfig c(m, make_power_product(1, 2, 2));
    c.g1.assign(m.cell_count(), 1.0);
    c.g2.assign(m.cell_count(), 1.0);
    c.t_end = 0.3;
    c.alpha = 1.0;
    c.p = 2.0;
    return simulate(c);
  }();
  return trace;
}

void criterion1(Verdict& v) {
  const auto nl = make_power_product(1, 2, 2);
  const Mesh m = cube_mesh(3, 16);
  FieldPair g;
  g.u.assign(m.cell_count(), 1.0);
  g.v.assign(m.cell_count(), 1.0);
  g.nonnegative = true;
  const auto up = upper_bound_blowup(nl, MeshData{&m, &g}, 0, 0, 1.0);
  v.require(std::abs(up.t_upper - 0.25) <= 1e-9, "t_upper " + fmt(up.t_upper));

  const auto ode = oracle::ode_reduce(nl, 1, 1, 1.0);
  v.require(ode.blowup_time && std::abs(ode.blowup_time->time - 0.25) <= 1e-6,
            "ode blow-up " + (ode.blowup_time ? fmt(ode.blowup_time->time) : "none"));

  const auto& trace = run_one();
  const bool est = trace.blowup_estimate.has_value();
  v.require(est && std::abs(trace.blowup_estimate->time - 0.25) <= 1e-3,
            "pde estimate " + (est ? fmt(trace.blowup_estimate->time) : "none") + " at 16^3");
}

void criterion2(Verdict& v) {
  const auto nl = make_power_product(1, 2, 3);
  const Mesh m = cube_mesh(2, 32);
  FieldPair g;
  g.u.assign(m.cell_count(), 1.0);
  g.v.assign(m.cell_count(), 1.0);
  g.nonnegative = true;
  const auto up = upper_bound_blowup(nl, MeshData{&m, &g}, 0, 0, 1.5);
  v.require(std::abs(up.t_upper - 2.0 / 15.0) <= 1e-12, "t_upper " + fmt(up.t_upper));
  v.require(std::abs(up.t_upper_alt - 2.0 / 15.0) <= 1e-12, "E0/(alpha J0) " + fmt(up.t_upper_alt));

  const double closed = oracle::blowup_time_u2v3_unit();
  const auto ode = oracle::ode_reduce(nl, 1, 1, 1.0);
  v.require(ode.blowup_time && std::abs(ode.blowup_time->time - closed) <= 1e-6,
            "ode blow-up " + (ode.blowup_time ? fmt(ode.blowup_time->time) : "none") +
                " vs closed form " + fmt(closed));
  v.require(closed <= up.t_upper, "oracle below t_upper");
}

void criterion3(Verdict& v) {
  const auto nl = make_power_product(1, 2, 3);
  const auto at15 = check_H1(nl, 1.5);
  v.require(at15.holds, "H1 at 1.5 margin " + fmt(at15.margin));
  const auto at16 = check_H1(nl, 1.6);
  v.require(!at16.holds, "H1 at 1.6 margin " + fmt(at16.margin));
  if (at16.witness) {
    const auto& w = *at16.witness;
    // u f1 + v f2 - 2(1+alpha) F = (5 - 2(1+alpha)) u^2 v^3
    const double expected = (5 - 2 * 2.6) * w.u * w.u * w.v * w.v * w.v;
    v.require(std::abs(w.slack - expected) <= 1e-9 * std::abs(expected) && w.slack < 0,
              "witness (" + fmt(w.u) + ", " + fmt(w.v) + ") slack " + fmt(w.slack));
  } else {
    v.require(false, "no witness at 1.6");
  }
}

void criterion4(Verdict& v) {
  const auto r = lower_bound_pipeline(make_power_product(1, 2, 2),
                                      ConstantData{DomainSpec::ball(3, 1.0), 1, 1}, 2, 2, 2,
                                      LowerMode::A2prime);
  v.require(r.integral_abs_error <= 1e-10, "integral error " + fmt(r.integral_abs_error));
  v.require(r.t_lower > 0 && r.t_lower <= 0.25, "t_lower " + fmt(r.t_lower));
  const double ref = oracle::brute_force_integral(
      [&](double w) { return lower_integrand(w, r.K1, r.K2); }, 0.0, 1 / std::sqrt(r.scriptE0),
      10'000'000);
  v.require(std::abs(r.t_lower - ref) <= 1e-8, "trapezoid " + fmt(ref));
}

void criterion5(Verdict& v) {
  const auto nl = make_absorption(3, 3, 3, 3, 0.01, 0.01);
  const auto a2 = check_A2prime(nl, 1, 1, 2);
  v.require(a2.holds, "A2' k=1 margin " + fmt(a2.margin));
  const auto cls = classify_absorption(3, 3, 3, 3, 0.01, 0.01);
  v.require(cls == AbsorptionCase::threshold_blowup_small_ab,
            "class " + std::string(to_string(cls)));

  const std::vector<double> h{1, 1, 1};
  const auto lower =
      lower_bound_pipeline(nl, ConstantData{DomainSpec::box(h), 2, 2}, 2, 1, 1, LowerMode::A2prime);
  const Mesh m = cube_mesh(3, 24);
  SolverConfig c(m, nl);
  c.g1.assign(m.cell_count(), 2.0);
  c.g2.assign(m.cell_count(), 2.0);
  c.t_end = 0.2;
  c.p = 2.0;
  const auto trace = simulate(c);
  v.require(trace.outcome == Outcome::blowup_detected, "outcome " + std::string(to_string(trace.outcome)));
  const bool est = trace.blowup_estimate.has_value();
  v.require(est && trace.blowup_estimate->time >= lower.t_lower,
            "t_estimate " + (est ? fmt(trace.blowup_estimate->time) : "none") + " >= t_lower " +
                fmt(lower.t_lower));
}

void criterion6(Verdict& v) {
  const auto& trace = run_one();
  MonitorSettings ms;
  ms.alpha = 1.0;
  const auto rep = run_monitors(trace.samples, ms);
  v.require(rep.j_checked > 10 && rep.j_violations == 0,
            "J checked " + std::to_string(rep.j_checked) + ", violations " +
                std::to_string(rep.j_violations));
  v.require(rep.inequality_checked > 10 && rep.inequality_violations == 0,
            "inequality checked " + std::to_string(rep.inequality_checked) + ", violations " +
                std::to_string(rep.inequality_violations));
}

void criterion7(Verdict& v) {
  const double gamma = 1.0;
  double k = 0.8;
  for (int i = 0; i < 50; ++i) {
    k -= (k * std::tan(k) - gamma) / (std::tan(k) + k / (std::cos(k) * std::cos(k)));
  }
  auto exact = [k](const Point& x, double t) {
    return std::exp(-t) * std::cos(k * x[0]) * std::cos(k * x[1]);
  };
  std::vector<double> err;
  for (int n : {16, 32, 64, 128}) {
    const Mesh m = cube_mesh(2, n);
    SolverConfig c(m, zero_reaction());
    for (const auto& x : m.cell_centers()) {
      c.g1.push_back(exact(x, 0));
      c.g2.push_back(exact(x, 0));
    }
    c.gamma1 = c.gamma2 = gamma;
    c.t_end = 0.1;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-12;
    c.source = [&](const Point& x, double t) {
      const double s = (2 * k * k - 1) * exact(x, t);
      return std::pair{s, s};
    };
    const auto trace = simulate(c);
    double e = 0;
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      e = std::max(e, std::abs(trace.final_state.u[i] - exact(m.cell_centers()[i], c.t_end)));
    }
    err.push_back(e);
  }
  double worst = 1e300;
  for (std::size_t i = 1; i < err.size(); ++i) worst = std::min(worst, std::log2(err[i - 1] / err[i]));
  v.require(worst >= 1.9, "worst observed order " + fmt(worst));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 2.0);
  const Mesh m = cube_mesh(3, 8);
  SolverConfig heat(m, zero_reaction());
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    heat.g1.push_back(U(rng));
    heat.g2.push_back(U(rng));
  }
  heat.t_end = 0.5;
  const auto neumann = simulate(heat);
  const double m0 = interior_integral(m, heat.g1);
  const double m1 = interior_integral(m, neumann.final_state.u);
  v.require(std::abs(m1 - m0) / m0 <= 1e-10, "mass drift " + fmt(std::abs(m1 - m0) / m0));

  heat.gamma1 = heat.gamma2 = 1.0;
  const auto robin = simulate(heat);
  bool decreasing = robin.samples.size() > 10;
  for (std::size_t i = 1; i < robin.samples.size(); ++i) {
    decreasing = decreasing && robin.samples[i].E < robin.samples[i - 1].E;
  }
  v.require(decreasing, "Robin E decreasing over " + std::to_string(robin.samples.size()) +
                            " samples");
}

void criterion8(Verdict& v) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ext(0.2, 3.0);
  double worst_geo = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = trial % 2 ? 2 : 3;
    std::vector<double> L(dim);
    for (auto& x : L) x = ext(rng);
    const auto g = geometry_constants(DomainSpec::box(L));
    // Boundary sampled on each face with the outward normal; d over the
    // sampled closure, corners included.
    const int n = 20;
    double rho = 1e300, d = 0;
    for (int axis = 0; axis < dim; ++axis) {
      for (int side : {-1, 1}) {
        const long total = static_cast<long>(std::pow(n + 1, dim - 1));
        for (long k = 0; k < total; ++k) {
          long r = k;
          Point x{0, 0, 0};
          for (int a = 0; a < dim; ++a) {
            if (a == axis) {
              x[a] = side * L[a];
              continue;
            }
            const int i = static_cast<int>(r % (n + 1));
            r /= n + 1;
            x[a] = -L[a] + 2.0 * L[a] * i / n;
          }
          rho = std::min(rho, side * x[axis]);
          d = std::max(d, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
        }
      }
    }
    worst_geo = std::max({worst_geo, std::abs(g.rho - rho), std::abs(g.d - d)});
  }
  v.require(worst_geo <= 1e-6, "geometry worst deviation " + fmt(worst_geo));

  std::uniform_real_distribution<double> K1(0.1, 10.0), K2(0.01, 200.0), E(0.5, 100.0);
  double worst_int = 0;
  for (int i = 0; i < 20; ++i) {
    const double k1 = K1(rng), k2 = K2(rng), e0 = E(rng);
    const auto r = lower_bound_blowup(e0, k1, k2);
    const double ref = oracle::brute_force_integral(
        [&](double w) { return lower_integrand(w, k1, k2); }, 0.0, 1 / std::sqrt(e0), 1'000'000);
    worst_int = std::max(worst_int, std::abs(r.t_lower - ref));
  }
  v.require(worst_int <= 1e-8, "integral worst deviation " + fmt(worst_int));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
      {"1 exact-equality upper bound", criterion1},
      {"2 u^2 v^3 upper bound", criterion2},
      {"3 H1 threshold", criterion3},
      {"4 lower-bound pipeline", criterion4},
      {"5 absorption sandwich", criterion5},
      {"6 monitor suite", criterion6},
      {"7 solver verification", criterion7},
      {"8 geometry and quadrature oracles", criterion8},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s criterion %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name,
                v.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
