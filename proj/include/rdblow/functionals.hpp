#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rdblow/geometry.hpp"
#include "rdblow/nonlinearity.hpp"

namespace rdblow {

/// Discrete pair (u, v) on mesh cells at time t.
///
/// Optional traces hold one value per boundary face. They are used for
/// initial data known as functions, whose boundary values need not satisfy
/// the Robin condition. Without traces the face value is reconstructed from
/// the Robin closure, which is what the solver's stencil sees.
struct FieldPair {
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;
  bool nonnegative = false;
  std::optional<std::vector<double>> u_trace;
  std::optional<std::vector<double>> v_trace;
};

/// Robin closure ratio ghost/cell for d/dnu + gamma = 0 at a face of a
/// cell with spacing h normal to the face.
[[nodiscard]] inline double robin_ghost_ratio(double gamma, double h) {
  return (2.0 - gamma * h) / (2.0 + gamma * h);
}

/// Face values on the boundary: trace when supplied, else the closure value
/// 2 u_c / (2 + gamma h).
std::vector<double> boundary_face_values(std::span<const double> field, const Mesh& mesh,
                                         double gamma,
                                         std::optional<std::span<const double>> trace = {});

/// Sum over faces of (jump / h)^2 times the face's dual volume. Boundary
/// faces use the one-sided difference to the face value over h/2.
double discrete_gradient_energy(std::span<const double> field, const Mesh& mesh, double gamma,
                                std::optional<std::span<const double>> trace = {});

/// Per-cell split of discrete_gradient_energy (each face shared equally by
/// its cells, boundary half-cells to their own cell). Sums to the total.
std::vector<double> gradient_energy_by_cell(std::span<const double> field, const Mesh& mesh,
                                            double gamma,
                                            std::optional<std::span<const double>> trace = {});

/// Integral over the boundary of the squared face value.
double boundary_square_integral(std::span<const double> field, const Mesh& mesh, double gamma,
                                std::optional<std::span<const double>> trace = {});

double energy_E(const FieldPair& fields, const Mesh& mesh);

struct JComponents {
  double alpha = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double grad_u_energy = 0.0;
  double grad_v_energy = 0.0;
  double bdry_u = 0.0;
  double bdry_v = 0.0;
  double intF = 0.0;
  double J = 0.0;

  /// J rebuilt from the five pieces.
  [[nodiscard]] double recombine() const;
};

JComponents functional_J(const FieldPair& fields, const Mesh& mesh, const Nonlinearity& nl,
                         double alpha, double gamma1, double gamma2);

/// Integral of u^{2p} + v^{2p}. Requires the nonnegativity flag; values in
/// [-1e-12, 0) are read as zero, anything lower is NegativeField.
double energy_scriptE(const FieldPair& fields, const Mesh& mesh, double p);

struct EnergySample {
  double t = 0.0;
  double E = 0.0;
  std::optional<double> J;
  std::optional<double> scriptE;
  double grad_u_energy = 0.0;
  double grad_v_energy = 0.0;
  double bdry_u = 0.0;
  double bdry_v = 0.0;
  std::optional<double> intF;
  double sup_u = 0.0;
  double sup_v = 0.0;
  double dt = 0.0;
};

struct SampleSettings {
  double alpha = 1.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double p = 1.0;
};

/// All monitor quantities at one time. J and intF are absent without a
/// potential, scriptE without the nonnegativity flag.
EnergySample sample_energies(const FieldPair& fields, const Mesh& mesh, const Nonlinearity& nl,
                             const SampleSettings& settings);

struct MonitorSettings {
  double alpha = 1.0;
  double j_rel_tol = 1e-3;
  double inequality_rel_tol = 1e-3;
  double sup_cap = 1e3;
};

struct MonitorReport {
  int j_checked = 0;
  int j_violations = 0;
  double worst_j_relative_drop = 0.0;
  int inequality_checked = 0;
  int inequality_violations = 0;
  double worst_inequality_excess = 0.0;

  [[nodiscard]] bool ok() const { return j_violations == 0 && inequality_violations == 0; }
};

/// Checks J nondecreasing sample-to-sample and (1+alpha) E'/E <= J'/J with
/// centred differences of log E and log J, first and last samples skipped.
/// Only samples with J > 0 and both sup-norms below sup_cap take part.
MonitorReport run_monitors(std::span<const EnergySample> samples, const MonitorSettings& settings);

}  // namespace rdblow
