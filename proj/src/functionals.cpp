#include "rdblow/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "rdblow/errors.hpp"

namespace rdblow {
namespace {

void check_size(std::span<const double> field, const Mesh& mesh) {
  if (field.size() != mesh.cell_count()) {
    throw Error(ErrorCode::InvalidArgument, "field size does not match mesh");
  }
}

std::optional<std::span<const double>> as_span(const std::optional<std::vector<double>>& v) {
  if (!v) return std::nullopt;
  return std::span<const double>(*v);
}

double sup_norm(std::span<const double> field) {
  double m = 0.0;
  for (double x : field) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> boundary_face_values(std::span<const double> field, const Mesh& mesh,
                                         double gamma,
                                         std::optional<std::span<const double>> trace) {
  check_size(field, mesh);
  const auto& faces = mesh.boundary_faces();
  if (trace) {
    if (trace->size() != faces.size()) {
      throw Error(ErrorCode::InvalidArgument, "trace needs one value per boundary face");
    }
    return {trace->begin(), trace->end()};
  }
  std::vector<double> values(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const double h = mesh.spacing()[faces[i].axis];
    values[i] = 2.0 * field[faces[i].cell] / (2.0 + gamma * h);
  }
  return values;
}

std::vector<double> gradient_energy_by_cell(std::span<const double> field, const Mesh& mesh,
                                            double gamma,
                                            std::optional<std::span<const double>> trace) {
  check_size(field, mesh);
  const int dim = mesh.dimension();
  const auto& n = mesh.cells_per_axis();
  const auto& h = mesh.spacing();
  const auto& stride = mesh.strides();
  const double vol = mesh.cell_volume();

  std::vector<double> share(field.size(), 0.0);
  for (std::size_t c = 0; c < field.size(); ++c) {
    const auto idx = mesh.index_of(c);
    for (int a = 0; a < dim; ++a) {
      if (idx[a] + 1 >= n[a]) continue;
      const std::size_t nb = c + stride[a];
      const double diff = (field[nb] - field[c]) / h[a];
      const double e = diff * diff * vol;
      share[c] += 0.5 * e;
      share[nb] += 0.5 * e;
    }
  }
  const auto face_values = boundary_face_values(field, mesh, gamma, trace);
  const auto& faces = mesh.boundary_faces();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const double half = 0.5 * h[faces[i].axis];
    const double diff = (face_values[i] - field[faces[i].cell]) / half;
    share[faces[i].cell] += diff * diff * 0.5 * vol;
  }
  return share;
}

double discrete_gradient_energy(std::span<const double> field, const Mesh& mesh, double gamma,
                                std::optional<std::span<const double>> trace) {
  check_size(field, mesh);
  const int dim = mesh.dimension();
  const auto& n = mesh.cells_per_axis();
  const auto& h = mesh.spacing();
  const auto& stride = mesh.strides();

  CompensatedSum sum;
  for (std::size_t c = 0; c < field.size(); ++c) {
    const auto idx = mesh.index_of(c);
    for (int a = 0; a < dim; ++a) {
      if (idx[a] + 1 >= n[a]) continue;
      const double diff = (field[c + stride[a]] - field[c]) / h[a];
      sum.add(diff * diff);
    }
  }
  const auto face_values = boundary_face_values(field, mesh, gamma, trace);
  const auto& faces = mesh.boundary_faces();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const double half = 0.5 * h[faces[i].axis];
    const double diff = (face_values[i] - field[faces[i].cell]) / half;
    sum.add(0.5 * diff * diff);
  }
  return sum.value() * mesh.cell_volume();
}

double boundary_square_integral(std::span<const double> field, const Mesh& mesh, double gamma,
                                std::optional<std::span<const double>> trace) {
  auto values = boundary_face_values(field, mesh, gamma, trace);
  for (double& x : values) x *= x;
  return boundary_integral(mesh, values);
}

double energy_E(const FieldPair& fields, const Mesh& mesh) {
  check_size(fields.u, mesh);
  check_size(fields.v, mesh);
  std::vector<double> density(fields.u.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    density[i] = fields.u[i] * fields.u[i] + fields.v[i] * fields.v[i];
  }
  return interior_integral(mesh, density);
}

double JComponents::recombine() const {
  const double s = 2.0 * (1.0 + alpha);
  return -s * (gamma1 * bdry_u + grad_u_energy) - s * (gamma2 * bdry_v + grad_v_energy) +
         2.0 * s * intF;
}

JComponents functional_J(const FieldPair& fields, const Mesh& mesh, const Nonlinearity& nl,
                         double alpha, double gamma1, double gamma2) {
  nl.require_potential("functional_J");
  check_size(fields.u, mesh);
  check_size(fields.v, mesh);

  JComponents j;
  j.alpha = alpha;
  j.gamma1 = gamma1;
  j.gamma2 = gamma2;
  j.grad_u_energy = discrete_gradient_energy(fields.u, mesh, gamma1, as_span(fields.u_trace));
  j.grad_v_energy = discrete_gradient_energy(fields.v, mesh, gamma2, as_span(fields.v_trace));
  j.bdry_u = boundary_square_integral(fields.u, mesh, gamma1, as_span(fields.u_trace));
  j.bdry_v = boundary_square_integral(fields.v, mesh, gamma2, as_span(fields.v_trace));

  std::vector<double> density(fields.u.size());
  for (std::size_t i = 0; i < density.size(); ++i) density[i] = nl.F(fields.u[i], fields.v[i]);
  j.intF = interior_integral(mesh, density);
  j.J = j.recombine();
  return j;
}

double energy_scriptE(const FieldPair& fields, const Mesh& mesh, double p) {
  check_size(fields.u, mesh);
  check_size(fields.v, mesh);
  if (!fields.nonnegative) {
    throw Error(ErrorCode::NegativeField, "scriptE needs fields flagged nonnegative");
  }
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
  constexpr double floor = -1e-12;
  std::vector<double> density(fields.u.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double u = fields.u[i];
    const double v = fields.v[i];
    if (u < floor || v < floor) {
      throw Error(ErrorCode::NegativeField, "cell " + std::to_string(i) + " below -1e-12");
    }
    density[i] = std::pow(std::max(u, 0.0), 2.0 * p) + std::pow(std::max(v, 0.0), 2.0 * p);
  }
  return interior_integral(mesh, density);
}

EnergySample sample_energies(const FieldPair& fields, const Mesh& mesh, const Nonlinearity& nl,
                             const SampleSettings& settings) {
  EnergySample s;
  s.t = fields.t;
  s.E = energy_E(fields, mesh);
  s.sup_u = sup_norm(fields.u);
  s.sup_v = sup_norm(fields.v);
  if (nl.has_potential()) {
    const auto j =
        functional_J(fields, mesh, nl, settings.alpha, settings.gamma1, settings.gamma2);
    s.J = j.J;
    s.intF = j.intF;
    s.grad_u_energy = j.grad_u_energy;
    s.grad_v_energy = j.grad_v_energy;
    s.bdry_u = j.bdry_u;
    s.bdry_v = j.bdry_v;
  } else {
    s.grad_u_energy = discrete_gradient_energy(fields.u, mesh, settings.gamma1, as_span(fields.u_trace));
    s.grad_v_energy = discrete_gradient_energy(fields.v, mesh, settings.gamma2, as_span(fields.v_trace));
    s.bdry_u = boundary_square_integral(fields.u, mesh, settings.gamma1, as_span(fields.u_trace));
    s.bdry_v = boundary_square_integral(fields.v, mesh, settings.gamma2, as_span(fields.v_trace));
  }
  if (fields.nonnegative) s.scriptE = energy_scriptE(fields, mesh, settings.p);
  return s;
}

MonitorReport run_monitors(std::span<const EnergySample> samples, const MonitorSettings& settings) {
  MonitorReport report;
  auto usable = [&](const EnergySample& s) {
    return s.J && *s.J > 0.0 && s.E > 0.0 && s.sup_u < settings.sup_cap &&
           s.sup_v < settings.sup_cap;
  };

  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const auto& a = samples[k];
    const auto& b = samples[k + 1];
    if (!a.J || !b.J || a.sup_u >= settings.sup_cap || a.sup_v >= settings.sup_cap ||
        b.sup_u >= settings.sup_cap || b.sup_v >= settings.sup_cap) {
      continue;
    }
    ++report.j_checked;
    const double scale = std::max(std::abs(*a.J), 1e-300);
    const double drop = (*a.J - *b.J) / scale;
    report.worst_j_relative_drop = std::max(report.worst_j_relative_drop, drop);
    if (drop > settings.j_rel_tol) ++report.j_violations;
  }

  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const auto& prev = samples[k - 1];
    const auto& next = samples[k + 1];
    if (!usable(prev) || !usable(samples[k]) || !usable(next)) continue;
    ++report.inequality_checked;
    // Both sides share the denominator t_{k+1} - t_{k-1}, so compare the
    // numerators of the centred differences of log E and log J.
    const double lhs = (1.0 + settings.alpha) * (std::log(next.E) - std::log(prev.E));
    const double rhs = std::log(*next.J) - std::log(*prev.J);
    const double allowance =
        settings.inequality_rel_tol * std::max(std::abs(lhs), std::abs(rhs)) + 1e-14;
    const double excess = lhs - rhs;
    report.worst_inequality_excess = std::max(report.worst_inequality_excess, excess);
    if (excess > allowance) ++report.inequality_violations;
  }
  return report;
}

}  // namespace rdblow
