#include "rdblow/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rdblow/errors.hpp"

namespace rdblow {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"experiment", {"name"}},
      {"domain", {"kind", "dimension", "half_extents", "radius", "cells_per_axis"}},
      {"nonlinearity",
       {"family", "c", "a_exp", "b_exp", "alpha", "shape", "shape_parameter", "p", "q", "r", "s",
        "a", "b"}},
      {"initial", {"kind", "c1", "c2", "epsilon", "width"}},
      {"robin", {"gamma1", "gamma2"}},
      {"hypotheses",
       {"alpha", "p", "k1", "k2", "mode", "box_min", "box_max", "samples", "upper", "lower"}},
      {"solver",
       {"t_end", "dt_init", "dt_min", "dt_max", "rel_tol", "abs_tol", "sup_threshold",
        "sample_stride"}},
      {"outputs", {"directory", "report", "trace", "plot"}},
  };
  return keys;
}

double parse_real(const std::string& where, const std::string& text) {
  std::istringstream in(text);
  double x = 0.0;
  in >> x;
  if (in.fail() || !(in >> std::ws).eof()) fail(where + ": not a number: '" + text + "'");
  if (!std::isfinite(x)) fail(where + ": not finite: '" + text + "'");
  return x;
}

int parse_int(const std::string& where, const std::string& text) {
  const double x = parse_real(where, text);
  if (x != std::floor(x) || std::abs(x) > 1e9) fail(where + ": not an integer: '" + text + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& where, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
  if (text == "false" || text == "no" || text == "0" || text == "off") return false;
  fail(where + ": not a boolean: '" + text + "'");
}

std::vector<double> parse_list(const std::string& where, std::string text) {
  for (char& ch : text) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(text);
  std::vector<double> out;
  std::string item;
  while (in >> item) out.push_back(parse_real(where, item));
  if (out.empty()) fail(where + ": empty list");
  return out;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  [[nodiscard]] std::optional<std::string> raw(const std::string& key) const {
    if (!tree_) return std::nullopt;
    auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return it->second.data();
  }
  void real(const std::string& key, double& out) const {
    if (auto s = raw(key)) out = parse_real(where(key), *s);
  }
  void real(const std::string& key, std::optional<double>& out) const {
    if (auto s = raw(key)) out = parse_real(where(key), *s);
  }
  void integer(const std::string& key, int& out) const {
    if (auto s = raw(key)) out = parse_int(where(key), *s);
  }
  void boolean(const std::string& key, bool& out) const {
    if (auto s = raw(key)) out = parse_bool(where(key), *s);
  }
  void text(const std::string& key, std::string& out) const {
    if (auto s = raw(key)) out = *s;
  }
  [[nodiscard]] std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

void check_keys(const pt::ptree& root) {
  const auto& allowed = allowed_keys();
  for (const auto& [name, section] : root) {
    auto it = allowed.find(name);
    if (it == allowed.end()) {
      if (section.empty()) fail("key outside any section: '" + name + "'");
      fail("unknown section [" + name + "]");
    }
    for (const auto& [key, value] : section) {
      if (!it->second.count(key)) fail("unknown key '" + key + "' in [" + name + "]");
    }
  }
}

Section section(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return {it == root.not_found() ? nullptr : &it->second, name};
}

void read_domain(const Section& s, DomainBlock& d) {
  std::string kind = "box";
  s.text("kind", kind);
  if (kind == "box") {
    d.kind = DomainKind::box;
  } else if (kind == "ball") {
    d.kind = DomainKind::ball;
  } else {
    fail("domain.kind: unknown domain '" + kind + "'");
  }
  std::optional<double> dim;
  s.real("dimension", dim);
  if (auto h = s.raw("half_extents")) {
    d.half_extents = parse_list(s.where("half_extents"), *h);
    if (!dim) d.dimension = static_cast<int>(d.half_extents.size());
  }
  if (dim) {
    d.dimension = parse_int(s.where("dimension"), *s.raw("dimension"));
    if (d.kind == DomainKind::box && !s.raw("half_extents")) {
      d.half_extents.assign(static_cast<std::size_t>(std::max(d.dimension, 0)), 1.0);
    }
  }
  if (d.dimension != 2 && d.dimension != 3) fail("domain.dimension must be 2 or 3");
  if (d.kind == DomainKind::box && static_cast<int>(d.half_extents.size()) != d.dimension) {
    fail("domain.half_extents needs one entry per dimension");
  }
  s.real("radius", d.radius);
  if (auto c = s.raw("cells_per_axis")) {
    d.cells_per_axis.clear();
    for (double x : parse_list(s.where("cells_per_axis"), *c)) {
      d.cells_per_axis.push_back(parse_int(s.where("cells_per_axis"), std::to_string(x)));
    }
  }
}

void read_nonlinearity(const Section& s, NonlinearityBlock& n) {
  s.text("family", n.family);
  s.real("c", n.c);
  s.real("a_exp", n.a_exp);
  s.real("b_exp", n.b_exp);
  s.real("alpha", n.alpha);
  s.text("shape", n.shape);
  s.real("shape_parameter", n.shape_parameter);
  s.real("p", n.p);
  s.real("q", n.q);
  s.real("r", n.r);
  s.real("s", n.s);
  s.real("a", n.a);
  s.real("b", n.b);
  if (n.family != "power_product" && n.family != "gradient_homogeneous" &&
      n.family != "absorption") {
    fail("nonlinearity.family: unknown family '" + n.family + "'");
  }
  if (n.shape != "power" && n.shape != "exp_decay" && n.shape != "constant") {
    fail("nonlinearity.shape: unknown shape '" + n.shape + "'");
  }
}

void read_initial(const Section& s, InitialDataSpec& g) {
  std::string kind = "constant";
  s.text("kind", kind);
  if (kind == "constant") {
    g.kind = InitialKind::constant;
  } else if (kind == "cosine") {
    g.kind = InitialKind::cosine;
  } else if (kind == "gaussian") {
    g.kind = InitialKind::gaussian;
  } else {
    fail("initial.kind: unknown initial data '" + kind + "'");
  }
  s.real("c1", g.c1);
  s.real("c2", g.c2);
  s.real("epsilon", g.epsilon);
  s.real("width", g.width);
}

void read_hypotheses(const Section& s, HypothesisBlock& h) {
  s.real("alpha", h.alpha);
  s.real("p", h.p);
  s.real("k1", h.k1);
  s.real("k2", h.k2);
  std::string mode = "A2prime";
  s.text("mode", mode);
  if (mode == "A2A3") {
    h.mode = LowerMode::A2A3;
  } else if (mode == "A2prime") {
    h.mode = LowerMode::A2prime;
  } else {
    fail("hypotheses.mode must be A2A3 or A2prime");
  }
  if (auto lo = s.raw("box_min")) {
    h.box.u_min = h.box.v_min = parse_real(s.where("box_min"), *lo);
  }
  if (auto hi = s.raw("box_max")) {
    h.box.u_max = h.box.v_max = parse_real(s.where("box_max"), *hi);
  }
  s.integer("samples", h.box.samples_per_axis);
  if (!(h.box.u_min > 0.0) || !(h.box.u_max > h.box.u_min)) {
    fail("hypotheses: need 0 < box_min < box_max");
  }
  if (h.box.samples_per_axis < 2) fail("hypotheses.samples must be >= 2");
  h.upper = h.alpha.has_value();
  h.lower = h.p.has_value();
  s.boolean("upper", h.upper);
  s.boolean("lower", h.lower);
  if (h.upper && !h.alpha) fail("hypotheses.upper requires hypotheses.alpha");
  if (h.lower && !h.p) fail("hypotheses.lower requires hypotheses.p");
}

void read_solver(const Section& s, SolverBlock& v) {
  s.real("t_end", v.t_end);
  s.real("dt_init", v.dt_init);
  s.real("dt_min", v.dt_min);
  s.real("dt_max", v.dt_max);
  s.real("rel_tol", v.rel_tol);
  s.real("abs_tol", v.abs_tol);
  s.real("sup_threshold", v.sup_threshold);
  s.integer("sample_stride", v.sample_stride);
  if (!(v.t_end > 0.0)) fail("solver.t_end must be positive");
  if (!(v.dt_min > 0.0) || !(v.dt_init >= v.dt_min) || !(v.dt_max >= v.dt_init)) {
    fail("solver: need 0 < dt_min <= dt_init <= dt_max");
  }
  if (!(v.rel_tol > 0.0) || !(v.abs_tol > 0.0)) fail("solver tolerances must be positive");
  if (v.sample_stride < 1) fail("solver.sample_stride must be >= 1");
}

void read_outputs(const Section& s, OutputBlock& o) {
  std::string dir;
  s.text("directory", dir);
  if (!dir.empty()) o.directory = dir;
  s.boolean("report", o.report);
  s.boolean("trace", o.trace);
  s.boolean("plot", o.plot);
}

}  // namespace

DomainSpec DomainBlock::spec() const {
  if (kind == DomainKind::ball) return DomainSpec::ball(dimension, radius);
  return DomainSpec::box(half_extents);
}

Nonlinearity NonlinearityBlock::build() const {
  if (family == "power_product") return make_power_product(c, a_exp, b_exp);
  if (family == "absorption") return make_absorption(p, q, r, s, a, b);
  if (family == "gradient_homogeneous") {
    ShapeFunction h = shape == "power"       ? ShapeFunction::power(shape_parameter)
                      : shape == "exp_decay" ? ShapeFunction::exp_decay(shape_parameter)
                                             : ShapeFunction::constant(shape_parameter);
    return make_gradient_homogeneous(c, alpha, std::move(h));
  }
  fail("unknown nonlinearity family '" + family + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    fail(std::string("malformed file: ") + e.what());
  }
  check_keys(root);

  ExperimentConfig cfg;
  section(root, "experiment").text("name", cfg.name);
  read_domain(section(root, "domain"), cfg.domain);
  read_nonlinearity(section(root, "nonlinearity"), cfg.nonlinearity);
  read_initial(section(root, "initial"), cfg.initial);
  section(root, "robin").real("gamma1", cfg.robin.gamma1);
  section(root, "robin").real("gamma2", cfg.robin.gamma2);
  if (cfg.robin.gamma1 < 0.0 || cfg.robin.gamma2 < 0.0) fail("robin: gammas must be >= 0");
  read_hypotheses(section(root, "hypotheses"), cfg.hypotheses);
  read_solver(section(root, "solver"), cfg.solver);
  read_outputs(section(root, "outputs"), cfg.outputs);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rdblow
