#include "rdblow/commands.hpp"

#include <algorithm>
#include <cmath>

#include "rdblow/bounds.hpp"
#include "rdblow/errors.hpp"
#include "rdblow/initial_data.hpp"
#include "rdblow/oracle.hpp"
#include "rdblow/solver.hpp"

namespace rdblow {
namespace {

// Everything derived from a config before any command runs. Not movable
// once state() has been taken, since MeshData points into it.
struct Prepared {
  explicit Prepared(const ExperimentConfig& cfg)
      : config(cfg), nl(cfg.nonlinearity.build()), domain(cfg.domain.spec()) {
    if (domain.kind() == DomainKind::box) {
      mesh.emplace(build_mesh(domain, cfg.domain.cells_per_axis));
      fields.emplace(sample_initial(cfg.initial, *mesh));
    } else if (cfg.initial.kind != InitialKind::constant) {
      throw Error(ErrorCode::ConfigError, "ball domains accept constant initial data only");
    } else if (cfg.initial.c1 < 0.0 || cfg.initial.c2 < 0.0) {
      throw Error(ErrorCode::NegativeInitialData, "initial amplitudes must be >= 0");
    }
  }
  Prepared(const Prepared&) = delete;
  Prepared& operator=(const Prepared&) = delete;

  [[nodiscard]] InitialState state() const {
    if (mesh) return MeshData{&*mesh, &*fields};
    return ConstantData{domain, config.initial.c1, config.initial.c2};
  }

  const ExperimentConfig& config;
  Nonlinearity nl;
  DomainSpec domain;
  std::optional<Mesh> mesh;
  std::optional<FieldPair> fields;
};

json header(Command command, const ExperimentConfig& cfg) {
  json j;
  j["command"] = std::string(to_string(command));
  j["config"] = to_json(cfg);
  return j;
}

// Runs fn; on a library error records it under `key` and folds its exit
// status into `exit_code`.
template <class Fn>
bool guarded(json& report, const std::string& key, int& exit_code, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const Error& e) {
    report[key] = {{"refused", error_json(e)}};
    exit_code = std::max(exit_code, exit_code_for(e.code()));
    return false;
  }
}

std::optional<UpperBoundResult> run_upper(const Prepared& prep, json& report, int& exit_code) {
  const auto& cfg = prep.config;
  std::optional<UpperBoundResult> result;
  guarded(report, "upper", exit_code, [&] {
    result = upper_bound_blowup(prep.nl, prep.state(), cfg.robin.gamma1, cfg.robin.gamma2,
                                *cfg.hypotheses.alpha, cfg.hypotheses.box);
    report["upper"] = to_json(*result);
  });
  return result;
}

std::optional<LowerBoundResult> run_lower(const Prepared& prep, json& report, int& exit_code) {
  const auto& h = prep.config.hypotheses;
  std::optional<LowerBoundResult> result;
  guarded(report, "lower", exit_code, [&] {
    result = lower_bound_pipeline(prep.nl, prep.state(), *h.p, h.k1, h.k2, h.mode, h.box);
    report["lower"] = to_json(*result);
  });
  return result;
}

// Independent ODE reference, only meaningful for constant data with
// Neumann conditions, where the PDE solution stays spatially constant.
void add_oracle(const Prepared& prep, json& report) {
  const auto& cfg = prep.config;
  if (cfg.initial.kind != InitialKind::constant || cfg.robin.gamma1 != 0.0 ||
      cfg.robin.gamma2 != 0.0) {
    return;
  }
  json o;
  try {
    const auto trace =
        oracle::ode_reduce(prep.nl, cfg.initial.c1, cfg.initial.c2, cfg.solver.t_end);
    o["method"] = trace.method;
    o["t_max"] = cfg.solver.t_end;
    if (trace.blowup_time) {
      o["blowup_time"] = trace.blowup_time->time;
      o["uncertainty"] = trace.blowup_time->uncertainty;
    } else {
      o["blowup_time"] = nullptr;
    }
  } catch (const Error& e) {
    o["error"] = error_json(e);
  }
  report["oracle"] = o;
}

std::string energy_trend(std::span<const EnergySample> samples) {
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = samples[i - 1].E;
    const double b = samples[i].E;
    const double slack = 1e-12 * std::max(std::abs(a), std::abs(b));
    if (b > a + slack) up = true;
    if (b < a - slack) down = true;
  }
  if (up && down) return "mixed";
  if (up) return "increasing";
  if (down) return "decreasing";
  return "constant";
}

std::optional<SolveTrace> run_simulation(const Prepared& prep, json& report, int& exit_code) {
  const auto& cfg = prep.config;
  std::optional<SolveTrace> trace;
  guarded(report, "simulation", exit_code, [&] {
    if (!prep.mesh) {
      throw Error(ErrorCode::BallMeshUnsupported, "simulation needs a box domain");
    }
    SolverConfig sc(*prep.mesh, prep.nl);
    sc.gamma1 = cfg.robin.gamma1;
    sc.gamma2 = cfg.robin.gamma2;
    sc.g1 = prep.fields->u;
    sc.g2 = prep.fields->v;
    sc.t_end = cfg.solver.t_end;
    sc.dt_init = cfg.solver.dt_init;
    sc.dt_min = cfg.solver.dt_min;
    sc.dt_max = cfg.solver.dt_max;
    sc.rel_tol = cfg.solver.rel_tol;
    sc.abs_tol = cfg.solver.abs_tol;
    sc.sup_threshold = cfg.solver.sup_threshold;
    sc.sample_stride = cfg.solver.sample_stride;
    sc.alpha = cfg.hypotheses.alpha.value_or(1.0);
    sc.p = cfg.hypotheses.p.value_or(1.0);
    sc.nonnegative = true;
    trace = simulate(sc);

    json sim = to_json(*trace);
    sim["E_trend"] = energy_trend(trace->samples);
    if (prep.nl.has_potential()) {
      MonitorSettings ms;
      ms.alpha = sc.alpha;
      sim["monitors"] = to_json(run_monitors(trace->samples, ms));
    } else {
      sim["monitors"] = nullptr;
    }
    report["simulation"] = sim;
    if (trace->outcome == Outcome::step_underflow) {
      exit_code = std::max(exit_code, kExitNumerical);
    }
  });
  return trace;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::check: return "check";
    case Command::bounds: return "bounds";
    case Command::simulate: return "simulate";
    case Command::sandwich: return "sandwich";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  if (name == "check") return Command::check;
  if (name == "bounds") return Command::bounds;
  if (name == "simulate") return Command::simulate;
  if (name == "sandwich") return Command::sandwich;
  throw Error(ErrorCode::ConfigError, "unknown command '" + std::string(name) + "'");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::BallMeshUnsupported:
    case ErrorCode::ResolutionTooCoarse:
    case ErrorCode::BadExponent:
      return kExitConfig;
    case ErrorCode::HypothesisFailed:
    case ErrorCode::NonpositiveJ0:
    case ErrorCode::NonpositiveE0:
    case ErrorCode::DimensionNot3:
    case ErrorCode::NotGradientSystem:
    case ErrorCode::NegativeInitialData:
      return kExitFailed;
    case ErrorCode::NonFiniteSample:
    case ErrorCode::NonFiniteField:
    case ErrorCode::EvalAtZeroU:
    case ErrorCode::NegativeField:
    case ErrorCode::InsufficientSamples:
      return kExitNumerical;
  }
  return kExitNumerical;
}

CommandResult cmd_check(const ExperimentConfig& cfg) {
  CommandResult out;
  out.report = header(Command::check, cfg);
  const Prepared prep(cfg);
  const auto& h = cfg.hypotheses;
  json checks = json::array();
  bool all_hold = true;

  auto record = [&](const HypothesisReport& r) {
    checks.push_back(to_json(r));
    all_hold = all_hold && r.holds;
  };
  auto attempt = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      checks.push_back({{"check", what}, {"refused", error_json(e)}});
      all_hold = false;
      out.exit_code = std::max(out.exit_code, exit_code_for(e.code()));
    }
  };

  if (h.alpha) {
    attempt("H1", [&] { record(check_H1(prep.nl, *h.alpha, h.box)); });
    attempt("H2_H3", [&] {
      const auto [h2, h3] =
          prep.mesh ? check_H2_H3(prep.nl, *prep.fields, *prep.mesh, cfg.robin.gamma1,
                                  cfg.robin.gamma2)
                    : check_H2_H3_constant(prep.nl, cfg.initial.c1, cfg.initial.c2, prep.domain,
                                           cfg.robin.gamma1, cfg.robin.gamma2);
      record(h2);
      record(h3);
    });
  }
  if (h.p) {
    if (h.mode == LowerMode::A2A3) {
      attempt("A2_A3", [&] {
        const auto [a2, a3] = check_A2_A3(prep.nl, h.k1, h.k2, *h.p, h.box);
        record(a2);
        record(a3);
      });
    } else {
      attempt("A2prime", [&] { record(check_A2prime(prep.nl, h.k1, h.k2, *h.p, h.box)); });
    }
  }
  out.report["checks"] = checks;

  if (cfg.nonlinearity.family == "absorption") {
    const auto& n = cfg.nonlinearity;
    out.report["absorption_case"] =
        std::string(to_string(classify_absorption(n.p, n.q, n.r, n.s, n.a, n.b)));
  }
  out.report["all_hold"] = all_hold;
  if (!all_hold) out.exit_code = std::max(out.exit_code, kExitFailed);
  return out;
}

CommandResult cmd_bounds(const ExperimentConfig& cfg) {
  CommandResult out;
  out.report = header(Command::bounds, cfg);
  const Prepared prep(cfg);
  if (cfg.hypotheses.upper) run_upper(prep, out.report, out.exit_code);
  if (cfg.hypotheses.lower) run_lower(prep, out.report, out.exit_code);
  add_oracle(prep, out.report);
  return out;
}

CommandResult cmd_simulate(const ExperimentConfig& cfg) {
  CommandResult out;
  out.report = header(Command::simulate, cfg);
  const Prepared prep(cfg);
  auto trace = run_simulation(prep, out.report, out.exit_code);
  if (trace) out.samples = std::move(trace->samples);
  add_oracle(prep, out.report);
  return out;
}

CommandResult cmd_sandwich(const ExperimentConfig& cfg) {
  CommandResult out;
  out.report = header(Command::sandwich, cfg);
  const Prepared prep(cfg);

  // Refused bounds make the report partial, not failed.
  int bound_status = kExitOk;
  std::optional<UpperBoundResult> upper;
  std::optional<LowerBoundResult> lower;
  if (cfg.hypotheses.upper) upper = run_upper(prep, out.report, bound_status);
  if (cfg.hypotheses.lower) lower = run_lower(prep, out.report, bound_status);
  if (bound_status == kExitConfig) out.exit_code = kExitConfig;

  auto trace = run_simulation(prep, out.report, out.exit_code);
  add_oracle(prep, out.report);

  json s;
  s["partial"] = !(upper && lower);
  s["t_lower"] = lower ? json(lower->t_lower) : json(nullptr);
  s["t_upper"] = upper ? json(upper->t_upper) : json(nullptr);
  bool violated = false;
  if (trace && trace->blowup_estimate) {
    const auto& est = *trace->blowup_estimate;
    const double tol = std::max(1e-3, 2.0 * est.uncertainty);
    s["t_estimate"] = est.time;
    s["tolerance"] = tol;
    if (upper) {
      const bool ok = est.time <= upper->t_upper + tol;
      s["estimate_below_upper"] = ok;
      violated = violated || !ok;
    }
    if (lower) {
      const bool ok = lower->t_lower <= est.time + tol;
      s["lower_below_estimate"] = ok;
      violated = violated || !ok;
    }
  } else if (trace && trace->outcome == Outcome::reached_t_end && upper) {
    // Surviving past the upper bound contradicts it.
    const bool ok = cfg.solver.t_end <= upper->t_upper + 1e-3;
    s["t_estimate"] = nullptr;
    s["survived_past_upper"] = !ok;
    violated = !ok;
  } else {
    s["t_estimate"] = nullptr;
  }
  s["holds"] = !violated;
  if (violated) {
    out.exit_code = std::max(out.exit_code, kExitFailed);
    json tail = json::array();
    const auto& samples = trace->samples;
    const std::size_t from = samples.size() > 16 ? samples.size() - 16 : 0;
    for (std::size_t i = from; i < samples.size(); ++i) {
      tail.push_back({{"t", samples[i].t}, {"E", samples[i].E},
                      {"sup_u", samples[i].sup_u}, {"sup_v", samples[i].sup_v}});
    }
    s["diagnostics"] = {{"trace_tail", tail}};
  }
  out.report["sandwich"] = s;
  if (trace) out.samples = std::move(trace->samples);
  return out;
}

CommandResult run_command(Command command, const ExperimentConfig& config) {
  CommandResult out;
  try {
    switch (command) {
      case Command::check: return cmd_check(config);
      case Command::bounds: return cmd_bounds(config);
      case Command::simulate: return cmd_simulate(config);
      case Command::sandwich: return cmd_sandwich(config);
    }
  } catch (const Error& e) {
    out.report = header(command, config);
    out.report["error"] = error_json(e);
    out.exit_code = exit_code_for(e.code());
  }
  return out;
}

void write_outputs(const CommandResult& result, const OutputBlock& outputs,
                   const std::filesystem::path& directory) {
  if (outputs.report) write_text(directory / "report.json", result.report.dump(2) + "\n");
  if (result.samples.empty()) return;
  if (outputs.trace) write_text(directory / "trace.csv", trace_csv(result.samples));
  if (outputs.plot) write_text(directory / "plot.dat", plot_dat(result.samples));
}

}  // namespace rdblow
