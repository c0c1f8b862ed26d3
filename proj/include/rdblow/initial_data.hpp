#pragma once

#include <string_view>
#include <utility>

#include "rdblow/functionals.hpp"
#include "rdblow/geometry.hpp"

namespace rdblow {

enum class InitialKind { constant, cosine, gaussian };

std::string_view to_string(InitialKind kind);

/// Catalog of nonnegative initial data (g1, g2):
///   constant  g_i = c_i
///   cosine    g_i = c_i (1 + epsilon cos(pi x_1 / L_1))
///   gaussian  g_i = c_i exp(-|x|^2 / (2 width^2))
struct InitialDataSpec {
  InitialKind kind = InitialKind::constant;
  double c1 = 1.0;
  double c2 = 1.0;
  double epsilon = 0.1;
  double width = 0.5;

  [[nodiscard]] std::pair<double, double> at(const Point& x, const DomainSpec& domain) const;
};

/// Cell-centre values plus boundary traces at face centres, flagged
/// nonnegative.
FieldPair sample_initial(const InitialDataSpec& spec, const Mesh& mesh);

}  // namespace rdblow
