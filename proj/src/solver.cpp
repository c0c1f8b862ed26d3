#include "rdblow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "rdblow/errors.hpp"

namespace rdblow {
namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::reached_t_end: return "reached_t_end";
    case Outcome::blowup_detected: return "blowup_detected";
    case Outcome::step_underflow: return "step_underflow";
  }
  return "unknown";
}

ReactionDiffusionSystem::ReactionDiffusionSystem(const Mesh& mesh, Nonlinearity nl, double gamma1,
                                                 double gamma2, SourceTerm source)
    : mesh_(&mesh), nl_(std::move(nl)), gamma1_(gamma1), gamma2_(gamma2),
      source_(std::move(source)) {
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "Robin coefficients must be >= 0");
  }
}

void ReactionDiffusionSystem::laplacian(std::span<const double> field, double gamma,
                                        std::span<double> out) const {
  const auto& n = mesh_->cells_per_axis();
  const auto& h = mesh_->spacing();
  const auto& stride = mesh_->strides();
  const int dim = mesh_->dimension();
  const int nx = n[0];
  const int ny = n[1];
  const int nz = dim == 3 ? n[2] : 1;

  std::array<double, 3> inv_h2{};
  std::array<double, 3> ghost{};
  for (int a = 0; a < dim; ++a) {
    inv_h2[a] = 1.0 / (h[a] * h[a]);
    ghost[a] = robin_ghost_ratio(gamma, h[a]);
  }

  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = static_cast<std::size_t>(j) * stride[1] +
                              (dim == 3 ? static_cast<std::size_t>(k) * stride[2] : 0);
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = row + static_cast<std::size_t>(i);
        const double uc = field[c];
        const double xl = i > 0 ? field[c - 1] : ghost[0] * uc;
        const double xr = i + 1 < nx ? field[c + 1] : ghost[0] * uc;
        double lap = (xl - 2.0 * uc + xr) * inv_h2[0];
        const double yl = j > 0 ? field[c - stride[1]] : ghost[1] * uc;
        const double yr = j + 1 < ny ? field[c + stride[1]] : ghost[1] * uc;
        lap += (yl - 2.0 * uc + yr) * inv_h2[1];
        if (dim == 3) {
          const double zl = k > 0 ? field[c - stride[2]] : ghost[2] * uc;
          const double zr = k + 1 < nz ? field[c + stride[2]] : ghost[2] * uc;
          lap += (zl - 2.0 * uc + zr) * inv_h2[2];
        }
        out[c] = lap;
      }
    }
  }
}

void ReactionDiffusionSystem::evaluate(double t, std::span<const double> y,
                                       std::span<double> dydt) const {
  const std::size_t n = mesh_->cell_count();
  const auto u = y.subspan(0, n);
  const auto v = y.subspan(n, n);
  auto du = dydt.subspan(0, n);
  auto dv = dydt.subspan(n, n);
  laplacian(u, gamma1_, du);
  laplacian(v, gamma2_, dv);
  const auto& centers = mesh_->cell_centers();
  for (std::size_t c = 0; c < n; ++c) {
    du[c] += nl_.f1(u[c], v[c]);
    dv[c] += nl_.f2(u[c], v[c]);
    if (source_) {
      const auto [su, sv] = source_(centers[c], t);
      du[c] += su;
      dv[c] += sv;
    }
    if (!std::isfinite(du[c]) || !std::isfinite(dv[c])) {
      throw Error(ErrorCode::NonFiniteField, "non-finite derivative in cell " + std::to_string(c));
    }
  }
}

std::pair<std::vector<double>, std::vector<double>> rhs(const FieldPair& fields, const Mesh& mesh,
                                                        const Nonlinearity& nl, double gamma1,
                                                        double gamma2) {
  const std::size_t n = mesh.cell_count();
  if (fields.u.size() != n || fields.v.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "field size does not match mesh");
  }
  ReactionDiffusionSystem system(mesh, nl, gamma1, gamma2);
  std::vector<double> y(fields.u);
  y.insert(y.end(), fields.v.begin(), fields.v.end());
  std::vector<double> dydt(2 * n);
  system.evaluate(fields.t, y, dydt);
  return {std::vector<double>(dydt.begin(), dydt.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(dydt.begin() + static_cast<std::ptrdiff_t>(n), dydt.end())};
}

StepAttempt step(const ReactionDiffusionSystem& system, double t, std::span<const double> y,
                 std::span<const double> k1, double dt, double rel_tol, double abs_tol) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const std::size_t n = y.size();
  StepAttempt out;
  std::vector<double> stage(n), k2(n), k3(n);
  out.y.resize(n);
  out.k_last.resize(n);
  try {
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
    system.evaluate(t + 0.5 * dt, stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.75 * dt * k2[i];
    system.evaluate(t + 0.75 * dt, stage, k3);
    for (std::size_t i = 0; i < n; ++i) {
      out.y[i] = y[i] + dt * (2.0 / 9.0 * k1[i] + 1.0 / 3.0 * k2[i] + 4.0 / 9.0 * k3[i]);
    }
    system.evaluate(t + dt, out.y, out.k_last);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonFiniteField) throw;
    out.overflow = true;
    out.error_norm = std::numeric_limits<double>::infinity();
    return out;
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double err = dt * (-5.0 / 72.0 * k1[i] + 1.0 / 12.0 * k2[i] + 1.0 / 9.0 * k3[i] -
                             1.0 / 8.0 * out.k_last[i]);
    const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out.y[i]));
    worst = std::max(worst, std::abs(err) / scale);
  }
  if (!std::isfinite(worst)) {
    out.overflow = true;
    worst = std::numeric_limits<double>::infinity();
  }
  out.error_norm = worst;
  return out;
}

BlowupEstimate estimate_blowup_time(std::span<const TailSample> tail, double initial_sup) {
  std::vector<TailSample> pts;
  for (const auto& s : tail) {
    if (s.sup > 10.0 * initial_sup && std::isfinite(s.sup)) pts.push_back(s);
  }
  if (pts.size() < 8) {
    throw Error(ErrorCode::InsufficientSamples,
                "need 8 samples above 10x the initial sup-norm, have " +
                    std::to_string(pts.size()));
  }
  constexpr std::size_t kWindow = 32;
  if (pts.size() > kWindow) pts.erase(pts.begin(), pts.end() - kWindow);

  struct Fit {
    double root;
    double score;
    bool valid;
  };
  // Times are shifted by the last sample so the fit works on small numbers.
  auto fit = [](std::span<const TailSample> s, double theta) {
    const double t0 = s.back().t;
    const std::size_t m = s.size();
    double mt = 0.0, my = 0.0;
    std::vector<double> ys(m);
    for (std::size_t i = 0; i < m; ++i) {
      ys[i] = std::pow(s[i].sup, -1.0 / theta);
      mt += s[i].t - t0;
      my += ys[i];
    }
    mt /= m;
    my /= m;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dt = s[i].t - t0 - mt;
      stt += dt * dt;
      sty += dt * (ys[i] - my);
    }
    if (!(stt > 0.0)) return Fit{0.0, 0.0, false};
    const double slope = sty / stt;
    const double intercept = my - slope * mt;
    if (!(slope < 0.0)) return Fit{0.0, 0.0, false};
    double ss = 0.0;
    double ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < m; ++i) {
      const double r = ys[i] - (intercept + slope * (s[i].t - t0));
      ss += r * r;
      ymin = std::min(ymin, ys[i]);
      ymax = std::max(ymax, ys[i]);
    }
    const double range = ymax - ymin;
    const double score = range > 0.0 ? std::sqrt(ss / m) / range : 0.0;
    return Fit{t0 - intercept / slope, score, true};
  };

  static constexpr double kThetas[] = {0.25, 1.0 / 3.0, 0.5, 1.0, 1.5, 2.0};
  BlowupEstimate best;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> roots;
  for (double theta : kThetas) {
    const auto f = fit(pts, theta);
    if (!f.valid) continue;
    roots.push_back(f.root);
    if (f.score < best_score) {
      best_score = f.score;
      best.time = f.root;
      best.theta = theta;
    }
  }
  if (roots.empty()) {
    throw Error(ErrorCode::InsufficientSamples, "no candidate exponent gives a growing fit");
  }

  double spread = 0.0;
  for (double r : roots) spread = std::max(spread, std::abs(r - best.time));
  const auto dropped = fit(std::span<const TailSample>(pts).first(pts.size() - 1), best.theta);
  if (dropped.valid) spread = std::max(spread, std::abs(dropped.root - best.time));
  best.uncertainty = spread;
  best.method = "power-law LS fit of sup^(-1/theta), theta in {1/4,1/3,1/2,1,3/2,2}, last " +
                std::to_string(pts.size()) + " samples";
  return best;
}

SolveTrace simulate(const SolverConfig& config) {
  const Mesh& mesh = config.mesh;
  const std::size_t n = mesh.cell_count();
  if (config.g1.size() != n || config.g2.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "initial data size does not match mesh");
  }
  if (!(config.dt_min < config.dt_init && config.dt_init <= config.dt_max)) {
    throw Error(ErrorCode::InvalidArgument, "need dt_min < dt_init <= dt_max");
  }
  if (config.sample_stride < 1) throw Error(ErrorCode::InvalidArgument, "sample_stride >= 1");

  ReactionDiffusionSystem system(mesh, config.nl, config.gamma1, config.gamma2, config.source);
  const double dt_stable = 0.4 * mesh.min_spacing() * mesh.min_spacing() / (2.0 * mesh.dimension());
  const SampleSettings sample_settings{config.alpha, config.gamma1, config.gamma2, config.p};

  std::vector<double> y(config.g1);
  y.insert(y.end(), config.g2.begin(), config.g2.end());
  const double initial_sup_u = max_abs(config.g1);
  const double initial_sup_v = max_abs(config.g2);
  const double initial_sup = std::max(initial_sup_u, initial_sup_v);
  if (!(config.sup_threshold > initial_sup)) {
    throw Error(ErrorCode::InvalidArgument, "sup_threshold must exceed the initial sup-norm");
  }

  SolveTrace trace;
  auto fields_at = [&](double t) {
    FieldPair f;
    f.u.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    f.v.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    f.t = t;
    return f;
  };
  auto record = [&](double t, double dt) {
    FieldPair f = fields_at(t);
    EnergySample s;
    try {
      s = sample_energies(f, mesh, config.nl, sample_settings);
    } catch (const Error& e) {
      // Integrands can overflow right at the end of a blow-up run.
      if (e.code() != ErrorCode::NonFiniteSample) throw;
      return;
    }
    if (config.nonnegative) {
      // scriptE sees clamped copies; the state itself is left alone.
      for (auto* comp : {&f.u, &f.v}) {
        for (double& x : *comp) {
          if (x < 0.0) {
            x = 0.0;
            ++trace.clamp_events;
          }
        }
      }
      f.nonnegative = true;
      try {
        s.scriptE = energy_scriptE(f, mesh, config.p);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonFiniteSample) throw;
        s.scriptE.reset();
      }
    }
    s.dt = dt;
    if (!trace.samples.empty() && !(s.t > trace.samples.back().t)) return;
    trace.samples.push_back(s);
  };

  std::vector<double> k1(2 * n);
  system.evaluate(0.0, y, k1);

  double t = 0.0;
  double dt = std::min({config.dt_init, config.dt_max, dt_stable});
  double prev_error = 1.0;
  long since_sample = 0;
  std::deque<TailSample> tail;
  record(0.0, 0.0);

  auto finish_blowup = [&](const std::string& trigger, double threshold_u, double threshold_v) {
    trace.outcome = Outcome::blowup_detected;
    trace.trigger = trigger;
    const auto f = fields_at(t);
    trace.u_blew_up = max_abs(f.u) >= threshold_u;
    trace.v_blew_up = max_abs(f.v) >= threshold_v;
    std::vector<TailSample> tail_vec(tail.begin(), tail.end());
    try {
      trace.blowup_estimate = estimate_blowup_time(tail_vec, initial_sup);
      // The fit only sees the tail; local errors accepted along the whole
      // trajectory shift t* by roughly rel_tol * t.
      trace.blowup_estimate->uncertainty += config.rel_tol * t;
    } catch (const Error&) {
      trace.blowup_estimate.reset();
    }
  };

  constexpr double kSafety = 0.9;
  constexpr double kGrowthForBlowup = 1e3;
  while (true) {
    if (t >= config.t_end) {
      trace.outcome = Outcome::reached_t_end;
      trace.trigger = "t_end";
      break;
    }
    if (trace.accepted_steps + trace.rejected_steps >= config.max_steps) {
      trace.outcome = Outcome::step_underflow;
      trace.trigger = "max_steps";
      break;
    }
    const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(t);
    if (dt < config.dt_min || dt <= resolution) {
      const double sup = max_abs(y);
      if (sup >= kGrowthForBlowup * std::max(initial_sup, 1e-300)) {
        finish_blowup("resolution_limit", kGrowthForBlowup * initial_sup_u,
                      kGrowthForBlowup * initial_sup_v);
      } else {
        trace.outcome = Outcome::step_underflow;
        trace.trigger = "dt_min";
      }
      break;
    }

    const double h = std::min(dt, config.t_end - t);
    auto attempt = step(system, t, y, k1, h, config.rel_tol, config.abs_tol);
    if (attempt.overflow) {
      ++trace.rejected_steps;
      dt = 0.5 * h;
      continue;
    }
    const double err = attempt.error_norm;
    if (err > 1.0) {
      ++trace.rejected_steps;
      dt = h * std::max(0.2, kSafety * std::pow(err, -1.0 / 3.0));
      continue;
    }

    ++trace.accepted_steps;
    t = (h == config.t_end - t) ? config.t_end : t + h;
    y = std::move(attempt.y);
    k1 = std::move(attempt.k_last);

    const double e = std::max(err, 1e-10);
    double factor = kSafety * std::pow(e, -0.7 / 3.0) * std::pow(prev_error, 0.4 / 3.0);
    factor = std::clamp(factor, 0.2, 5.0);
    prev_error = e;
    dt = std::min({h * factor, config.dt_max, dt_stable});

    const double sup = max_abs(y);
    if (sup > 10.0 * initial_sup) {
      tail.push_back({t, sup});
      if (tail.size() > 256) tail.pop_front();
    }
    if (++since_sample >= config.sample_stride) {
      record(t, h);
      since_sample = 0;
    }
    if (sup >= config.sup_threshold) {
      finish_blowup("sup_threshold", config.sup_threshold, config.sup_threshold);
      break;
    }
  }

  if (trace.samples.back().t < t) record(t, dt);
  trace.final_state = fields_at(t);
  return trace;
}

}  // namespace rdblow
