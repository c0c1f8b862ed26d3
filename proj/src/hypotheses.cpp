#include "rdblow/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "rdblow/errors.hpp"

namespace rdblow {
namespace {

struct SlackEval {
  double slack;
  double scale;
};

using SlackFn = std::function<SlackEval(double u, double v)>;

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i) {
    g[i] = i == n - 1 ? hi : lo * std::exp(ratio * i / (n - 1));
  }
  return g;
}

void validate(const SampleBox& box) {
  if (!(box.u_min > 0.0) || !(box.v_min > 0.0) || !(box.u_max > box.u_min) ||
      !(box.v_max > box.v_min) || box.samples_per_axis < 2) {
    throw Error(ErrorCode::InvalidArgument, "degenerate sampling box " + box.describe());
  }
}

// Grid points, the diagonal u = v and the unit probe (1, 1) when inside.
std::vector<std::pair<double, double>> sample_points(const SampleBox& box) {
  validate(box);
  const auto us = log_grid(box.u_min, box.u_max, box.samples_per_axis);
  const auto vs = log_grid(box.v_min, box.v_max, box.samples_per_axis);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(us.size() * vs.size() + us.size() + 1);
  for (double u : us) {
    for (double v : vs) pts.emplace_back(u, v);
  }
  const double lo = std::max(box.u_min, box.v_min);
  const double hi = std::min(box.u_max, box.v_max);
  if (hi > lo) {
    for (double w : log_grid(lo, hi, box.samples_per_axis)) pts.emplace_back(w, w);
  }
  if (box.u_min <= 1.0 && 1.0 <= box.u_max && box.v_min <= 1.0 && 1.0 <= box.v_max) {
    pts.emplace_back(1.0, 1.0);
  }
  return pts;
}

HypothesisReport sweep(Hypothesis which, const SampleBox& box, const SlackFn& fn) {
  HypothesisReport report;
  report.hypothesis = which;
  report.tolerance = kHoldsTolerance;

  struct Scored {
    double rel;
    double u;
    double v;
    double slack;
  };
  // Below this scale the terms are subnormal and carry too few bits for a
  // relative slack to mean anything.
  constexpr double kUnresolved =
      std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::vector<Scored> scored;
  int skipped = 0;
  int underflowed = 0;
  for (const auto& [u, v] : sample_points(box)) {
    const auto e = fn(u, v);
    if (!std::isfinite(e.slack) || !std::isfinite(e.scale)) {
      ++skipped;
      continue;
    }
    if (e.scale > 0.0 && e.scale < kUnresolved) {
      ++underflowed;
      continue;
    }
    const double rel = e.scale > 0.0 ? e.slack / e.scale : 0.0;
    scored.push_back({rel, u, v, e.slack});
  }

  std::ostringstream desc;
  desc << "log-uniform " << box.describe() << ", diagonal u=v and unit probe";
  if (skipped > 0) desc << "; " << skipped << " non-finite samples skipped";
  if (underflowed > 0) desc << "; " << underflowed << " underflowing samples skipped";
  report.sampling = desc.str();

  if (scored.empty()) {
    report.holds = false;
    report.margin = -std::numeric_limits<double>::infinity();
    report.witness = Witness{};
    return report;
  }

  double margin = scored.front().rel;
  for (const auto& s : scored) margin = std::min(margin, s.rel);
  report.margin = margin;
  report.holds = margin >= -report.tolerance;
  if (!report.holds) {
    // Among points tying for the worst normalised slack, report the one
    // nearest (1, 1) in log distance.
    const double tie = 1e-9 * std::abs(margin);
    const Scored* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& s : scored) {
      if (s.rel > margin + tie) continue;
      const double lu = std::log(s.u);
      const double lv = std::log(s.v);
      const double dist = lu * lu + lv * lv;
      if (dist < best_dist) {
        best_dist = dist;
        best = &s;
      }
    }
    Witness w;
    w.u = best->u;
    w.v = best->v;
    w.slack = best->slack;
    report.witness = w;
  }
  return report;
}

HypothesisReport integral_report(Hypothesis which, double lhs, double rhs,
                                 std::optional<Point> worst_point, std::string sampling) {
  HypothesisReport report;
  report.hypothesis = which;
  report.tolerance = kHoldsTolerance;
  const double scale = std::abs(lhs) + std::abs(rhs);
  const double slack = lhs - rhs;
  report.margin = scale > 0.0 ? slack / scale : 0.0;
  report.holds = report.margin >= -report.tolerance;
  report.sampling = std::move(sampling);
  if (!report.holds) {
    Witness w;
    w.spatial = true;
    w.x = worst_point.value_or(Point{0.0, 0.0, 0.0});
    w.slack = slack;
    report.witness = w;
  }
  return report;
}

void require_nonnegative(std::span<const double> g, const char* name) {
  bool any_positive = false;
  for (double x : g) {
    if (x < 0.0) {
      throw Error(ErrorCode::NegativeInitialData, std::string(name) + " has negative values");
    }
    any_positive = any_positive || x > 0.0;
  }
  if (!any_positive) {
    throw Error(ErrorCode::NegativeInitialData, std::string(name) + " vanishes identically");
  }
}

}  // namespace

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3: return "H3";
    case Hypothesis::A2: return "A2";
    case Hypothesis::A3: return "A3";
    case Hypothesis::A2prime: return "A2prime";
  }
  return "unknown";
}

std::string SampleBox::describe() const {
  std::ostringstream os;
  os << "u in [" << u_min << ", " << u_max << "], v in [" << v_min << ", " << v_max << "], "
     << samples_per_axis << " samples/axis";
  return os.str();
}

HypothesisReport check_H1(const Nonlinearity& nl, double alpha, const SampleBox& box) {
  nl.require_potential("check_H1");
  const double c = 2.0 * (1.0 + alpha);
  return sweep(Hypothesis::H1, box, [&](double u, double v) {
    const double a = u * nl.f1(u, v);
    const double b = v * nl.f2(u, v);
    const double f = c * nl.F(u, v);
    return SlackEval{a + b - f, std::abs(a) + std::abs(b) + std::abs(f)};
  });
}

std::pair<HypothesisReport, HypothesisReport> check_H2_H3(const Nonlinearity& nl,
                                                          const FieldPair& initial,
                                                          const Mesh& mesh, double gamma1,
                                                          double gamma2) {
  nl.require_potential("check_H2_H3");
  require_nonnegative(initial.u, "g1");
  require_nonnegative(initial.v, "g2");

  const auto j = functional_J(initial, mesh, nl, 1.0, gamma1, gamma2);
  const double lhs = 2.0 * j.intF;

  auto worst_cell = [&](std::span<const double> g, double gamma,
                        const std::optional<std::vector<double>>& trace) {
    std::optional<std::span<const double>> tr;
    if (trace) tr = std::span<const double>(*trace);
    auto local = gradient_energy_by_cell(g, mesh, gamma, tr);
    const auto faces = boundary_face_values(g, mesh, gamma, tr);
    for (std::size_t i = 0; i < faces.size(); ++i) {
      local[mesh.boundary_faces()[i].cell] +=
          gamma * faces[i] * faces[i] * mesh.boundary_faces()[i].area;
    }
    std::size_t worst = 0;
    double worst_density = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < local.size(); ++c) {
      const double density =
          2.0 * nl.F(initial.u[c], initial.v[c]) * mesh.cell_volume() - local[c];
      if (density < worst_density) {
        worst_density = density;
        worst = c;
      }
    }
    return mesh.cell_centers()[worst];
  };

  const std::string sampling = "mesh quadrature, " + std::to_string(mesh.cell_count()) +
                               " cells" + (initial.u_trace ? ", data traces" : ", Robin closure");
  auto h2 = integral_report(Hypothesis::H2, lhs, gamma1 * j.bdry_u + j.grad_u_energy,
                            std::nullopt, sampling);
  auto h3 = integral_report(Hypothesis::H3, lhs, gamma2 * j.bdry_v + j.grad_v_energy,
                            std::nullopt, sampling);
  if (h2.witness) h2.witness->x = worst_cell(initial.u, gamma1, initial.u_trace);
  if (h3.witness) h3.witness->x = worst_cell(initial.v, gamma2, initial.v_trace);
  return {h2, h3};
}

std::pair<HypothesisReport, HypothesisReport> check_H2_H3_constant(const Nonlinearity& nl,
                                                                   double c1, double c2,
                                                                   const DomainSpec& domain,
                                                                   double gamma1, double gamma2) {
  nl.require_potential("check_H2_H3");
  if (c1 < 0.0 || c2 < 0.0) throw Error(ErrorCode::NegativeInitialData, "negative constant data");
  if (c1 == 0.0 || c2 == 0.0) {
    throw Error(ErrorCode::NegativeInitialData, "constant data vanishes identically");
  }
  const double lhs = 2.0 * nl.F(c1, c2) * domain.volume();
  const double area = domain.boundary_measure();
  const std::string sampling = "analytic constant data";
  return {integral_report(Hypothesis::H2, lhs, gamma1 * c1 * c1 * area, Point{}, sampling),
          integral_report(Hypothesis::H3, lhs, gamma2 * c2 * c2 * area, Point{}, sampling)};
}

std::pair<HypothesisReport, HypothesisReport> check_A2_A3(const Nonlinearity& nl, double k1,
                                                          double k2, double p,
                                                          const SampleBox& box) {
  auto a2 = sweep(Hypothesis::A2, box, [&](double u, double v) {
    const double bound = k1 * std::pow(u, p + 1.0);
    const double f = nl.f1(u, v);
    return SlackEval{bound - f, std::abs(bound) + std::abs(f)};
  });
  auto a3 = sweep(Hypothesis::A3, box, [&](double u, double v) {
    const double bound = k2 * std::pow(v, p + 1.0);
    const double f = nl.f2(u, v);
    return SlackEval{bound - f, std::abs(bound) + std::abs(f)};
  });
  return {a2, a3};
}

HypothesisReport check_A2prime(const Nonlinearity& nl, double k1, double k2, double p,
                               const SampleBox& box) {
  return sweep(Hypothesis::A2prime, box, [&](double u, double v) {
    const double bu = k1 * std::pow(u, 3.0 * p);
    const double bv = k2 * std::pow(v, 3.0 * p);
    const double gu = std::pow(u, 2.0 * p - 1.0) * nl.f1(u, v);
    const double gv = std::pow(v, 2.0 * p - 1.0) * nl.f2(u, v);
    return SlackEval{bu + bv - gu - gv,
                     std::abs(bu) + std::abs(bv) + std::abs(gu) + std::abs(gv)};
  });
}

std::string_view to_string(AbsorptionCase c) {
  switch (c) {
    case AbsorptionCase::blowup_exists: return "blowup_exists";
    case AbsorptionCase::all_global: return "all_global";
    case AbsorptionCase::all_global_bounded: return "all_global_bounded";
    case AbsorptionCase::threshold_blowup_small_ab: return "threshold_blowup_small_ab";
    case AbsorptionCase::threshold_global_bounded: return "threshold_global_bounded";
    case AbsorptionCase::threshold_global: return "threshold_global";
  }
  return "unknown";
}

AbsorptionCase classify_absorption(double p, double q, double r, double s, double a, double b) {
  if (!(p > 0 && q > 0 && r > 0 && s > 0 && a > 0 && b > 0)) {
    throw Error(ErrorCode::InvalidArgument, "absorption parameters must be positive");
  }
  const double pq = p * q;
  const double critical = std::max(r, 1.0) * std::max(s, 1.0);
  const double tol = 1e-12 * std::max(pq, critical);
  if (pq > critical + tol) return AbsorptionCase::blowup_exists;
  if (pq < critical - tol) {
    return r >= 1.0 && s >= 1.0 ? AbsorptionCase::all_global_bounded : AbsorptionCase::all_global;
  }
  if (r >= 1.0 && s >= 1.0 && std::pow(a, q) * std::pow(b, r) >= 1.0) {
    return AbsorptionCase::threshold_global_bounded;
  }
  if (r > 1.0 && s > 1.0) return AbsorptionCase::threshold_blowup_small_ab;
  return AbsorptionCase::threshold_global;
}

}  // namespace rdblow
