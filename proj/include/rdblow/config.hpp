#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rdblow/bounds.hpp"
#include "rdblow/geometry.hpp"
#include "rdblow/hypotheses.hpp"
#include "rdblow/initial_data.hpp"
#include "rdblow/nonlinearity.hpp"

namespace rdblow {

struct DomainBlock {
  DomainKind kind = DomainKind::box;
  int dimension = 3;
  std::vector<double> half_extents{1.0, 1.0, 1.0};
  double radius = 1.0;
  std::vector<int> cells_per_axis{16};

  [[nodiscard]] DomainSpec spec() const;
};

struct NonlinearityBlock {
  std::string family = "power_product";
  double c = 1.0;
  double a_exp = 2.0;
  double b_exp = 2.0;
  double alpha = 1.0;
  std::string shape = "power";
  double shape_parameter = 1.0;
  double p = 3.0, q = 3.0, r = 3.0, s = 3.0;
  double a = 0.01, b = 0.01;

  [[nodiscard]] Nonlinearity build() const;
};

struct RobinBlock {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

struct HypothesisBlock {
  std::optional<double> alpha;
  std::optional<double> p;
  double k1 = 1.0;
  double k2 = 1.0;
  LowerMode mode = LowerMode::A2prime;
  SampleBox box;
  // Default to true when alpha (upper) or p (lower) is given.
  bool upper = false;
  bool lower = false;
};

struct SolverBlock {
  double t_end = 1.0;
  double dt_init = 1e-4;
  double dt_min = 1e-15;
  double dt_max = 1e-2;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double sup_threshold = 1e8;
  int sample_stride = 1;
};

struct OutputBlock {
  std::filesystem::path directory = ".";
  bool report = true;
  bool trace = true;
  bool plot = true;
};

/// One experiment, read from a sectioned key = value file with sections
/// [domain] [nonlinearity] [initial] [robin] [hypotheses] [solver]
/// [outputs]. Unknown sections or keys are rejected.
struct ExperimentConfig {
  std::string name = "experiment";
  DomainBlock domain;
  NonlinearityBlock nonlinearity;
  InitialDataSpec initial;
  RobinBlock robin;
  HypothesisBlock hypotheses;
  SolverBlock solver;
  OutputBlock outputs;
};

/// Throws Error(ConfigError) on malformed input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rdblow
