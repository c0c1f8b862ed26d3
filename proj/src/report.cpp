#include "rdblow/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rdblow/errors.hpp"

namespace rdblow {
namespace {

// JSON has no nan or inf; those become null.
json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json optional_number(const std::optional<double>& x) {
  return x ? number(*x) : json(nullptr);
}

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> row(const EnergySample& s) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {s.t,           s.E,           s.J.value_or(nan), s.scriptE.value_or(nan),
          s.grad_u_energy, s.grad_v_energy, s.bdry_u,      s.bdry_v,
          s.intF.value_or(nan), s.sup_u, s.sup_v, s.dt};
}

constexpr const char* kColumns[] = {"t",      "E",      "J",    "scriptE", "grad_u_energy",
                                    "grad_v_energy", "bdry_u", "bdry_v", "intF", "sup_u",
                                    "sup_v",  "dt"};

std::string table(std::span<const EnergySample> samples, const std::string& sep,
                  const std::string& header_prefix) {
  std::string out = header_prefix;
  for (std::size_t i = 0; i < std::size(kColumns); ++i) {
    if (i) out += sep;
    out += kColumns[i];
  }
  out += '\n';
  for (const auto& s : samples) {
    const auto r = row(s);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += sep;
      out += format(r[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

json to_json(const HypothesisReport& report) {
  json j;
  j["hypothesis"] = std::string(to_string(report.hypothesis));
  j["holds"] = report.holds;
  j["margin"] = number(report.margin);
  j["tolerance"] = report.tolerance;
  if (report.witness) {
    const Witness& w = *report.witness;
    json wj;
    if (w.spatial) {
      wj["x"] = {w.x[0], w.x[1], w.x[2]};
    }
    wj["u"] = number(w.u);
    wj["v"] = number(w.v);
    wj["slack"] = number(w.slack);
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  j["sampling"] = report.sampling;
  return j;
}

json to_json(const UpperBoundResult& r) {
  json j;
  j["alpha"] = r.alpha;
  j["E0"] = number(r.E0);
  j["J0"] = number(r.J0);
  j["M"] = number(r.M);
  j["t_upper"] = number(r.t_upper);
  j["t_upper_alt"] = number(r.t_upper_alt);
  json reports = json::array();
  for (const auto& h : r.hypothesis_reports) reports.push_back(to_json(h));
  j["hypothesis_reports"] = reports;
  return j;
}

json to_json(const LowerBoundResult& r) {
  json j;
  j["p"] = r.p;
  j["k1"] = r.k1;
  j["k2"] = r.k2;
  j["k"] = r.k;
  j["rho"] = r.rho;
  j["d"] = r.d;
  j["beta1"] = r.beta1;
  j["beta2"] = r.beta2;
  j["beta"] = r.beta;
  j["K1"] = number(r.K1);
  j["K2"] = number(r.K2);
  j["scriptE0"] = number(r.scriptE0);
  j["t_lower"] = number(r.t_lower);
  j["integral_abs_error"] = number(r.integral_abs_error);
  j["mode"] = std::string(to_string(r.mode));
  j["smooth_boundary_caveat"] = r.smooth_boundary_caveat;
  j["beta_note"] = "each k_i is paired with its own beta_i; beta = min(beta1, beta2)";
  json reports = json::array();
  for (const auto& h : r.hypothesis_reports) reports.push_back(to_json(h));
  j["hypothesis_reports"] = reports;
  return j;
}

json to_json(const MonitorReport& m) {
  json j;
  j["ok"] = m.ok();
  j["j_checked"] = m.j_checked;
  j["j_violations"] = m.j_violations;
  j["worst_j_relative_drop"] = number(m.worst_j_relative_drop);
  j["inequality_checked"] = m.inequality_checked;
  j["inequality_violations"] = m.inequality_violations;
  j["worst_inequality_excess"] = number(m.worst_inequality_excess);
  return j;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  json d;
  d["kind"] = c.domain.kind == DomainKind::box ? "box" : "ball";
  d["dimension"] = c.domain.dimension;
  if (c.domain.kind == DomainKind::box) {
    d["half_extents"] = c.domain.half_extents;
    d["cells_per_axis"] = c.domain.cells_per_axis;
  } else {
    d["radius"] = c.domain.radius;
  }
  j["domain"] = d;

  const auto& n = c.nonlinearity;
  json nj;
  nj["family"] = n.family;
  if (n.family == "power_product") {
    nj["c"] = n.c;
    nj["a_exp"] = n.a_exp;
    nj["b_exp"] = n.b_exp;
  } else if (n.family == "gradient_homogeneous") {
    nj["c"] = n.c;
    nj["alpha"] = n.alpha;
    nj["shape"] = n.shape;
    nj["shape_parameter"] = n.shape_parameter;
  } else {
    nj["p"] = n.p;
    nj["q"] = n.q;
    nj["r"] = n.r;
    nj["s"] = n.s;
    nj["a"] = n.a;
    nj["b"] = n.b;
  }
  j["nonlinearity"] = nj;

  json g;
  g["kind"] = std::string(to_string(c.initial.kind));
  g["c1"] = c.initial.c1;
  g["c2"] = c.initial.c2;
  if (c.initial.kind == InitialKind::cosine) g["epsilon"] = c.initial.epsilon;
  if (c.initial.kind == InitialKind::gaussian) g["width"] = c.initial.width;
  j["initial"] = g;

  j["robin"] = {{"gamma1", c.robin.gamma1}, {"gamma2", c.robin.gamma2}};

  json h;
  h["alpha"] = optional_number(c.hypotheses.alpha);
  h["p"] = optional_number(c.hypotheses.p);
  h["k1"] = c.hypotheses.k1;
  h["k2"] = c.hypotheses.k2;
  h["mode"] = std::string(to_string(c.hypotheses.mode));
  h["box"] = c.hypotheses.box.describe();
  h["upper"] = c.hypotheses.upper;
  h["lower"] = c.hypotheses.lower;
  j["hypotheses"] = h;

  const auto& s = c.solver;
  j["solver"] = {{"t_end", s.t_end},         {"dt_init", s.dt_init},
                 {"dt_min", s.dt_min},       {"dt_max", s.dt_max},
                 {"rel_tol", s.rel_tol},     {"abs_tol", s.abs_tol},
                 {"sup_threshold", s.sup_threshold}, {"sample_stride", s.sample_stride}};
  return j;
}

json to_json(const SolveTrace& trace) {
  json j;
  j["outcome"] = std::string(to_string(trace.outcome));
  j["trigger"] = trace.trigger;
  j["integrator"] = trace.integrator;
  if (trace.blowup_estimate) {
    const auto& b = *trace.blowup_estimate;
    j["t_estimate"] = number(b.time);
    j["uncertainty"] = number(b.uncertainty);
    j["theta"] = b.theta;
    j["estimate_method"] = b.method;
  } else {
    j["t_estimate"] = nullptr;
  }
  j["u_above_threshold"] = trace.u_blew_up;
  j["v_above_threshold"] = trace.v_blew_up;
  j["component_note"] =
      "per-component sup-norms are observations only; no claim is made about which "
      "component blows up";
  j["accepted_steps"] = trace.accepted_steps;
  j["rejected_steps"] = trace.rejected_steps;
  j["clamp_events"] = trace.clamp_events;
  j["samples"] = trace.samples.size();
  if (!trace.samples.empty()) {
    const auto& last = trace.samples.back();
    j["final_time"] = last.t;
    j["final_sup_u"] = number(last.sup_u);
    j["final_sup_v"] = number(last.sup_v);
  }
  return j;
}

json error_json(const std::exception& e) {
  json j;
  if (const auto* h = dynamic_cast<const HypothesisError*>(&e)) {
    j["code"] = std::string(to_string(h->code()));
    j["message"] = h->what();
    j["failed_hypothesis"] = std::string(to_string(h->report().hypothesis));
    j["report"] = to_json(h->report());
  } else if (const auto* r = dynamic_cast<const Error*>(&e)) {
    j["code"] = std::string(to_string(r->code()));
    j["message"] = r->what();
  } else {
    j["code"] = "Internal";
    j["message"] = e.what();
  }
  return j;
}

std::string trace_csv(std::span<const EnergySample> samples) { return table(samples, ",", ""); }

std::string plot_dat(std::span<const EnergySample> samples) { return table(samples, " ", "# "); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
}

}  // namespace rdblow
