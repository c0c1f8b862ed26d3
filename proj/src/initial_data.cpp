#include "rdblow/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "rdblow/errors.hpp"

namespace rdblow {

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::constant: return "constant";
    case InitialKind::cosine: return "cosine";
    case InitialKind::gaussian: return "gaussian";
  }
  return "unknown";
}

std::pair<double, double> InitialDataSpec::at(const Point& x, const DomainSpec& domain) const {
  switch (kind) {
    case InitialKind::constant:
      return {c1, c2};
    case InitialKind::cosine: {
      const double L = domain.kind() == DomainKind::box ? domain.half_extents()[0] : domain.radius();
      const double shape = 1.0 + epsilon * std::cos(std::numbers::pi * x[0] / L);
      return {c1 * shape, c2 * shape};
    }
    case InitialKind::gaussian: {
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      const double shape = std::exp(-r2 / (2.0 * width * width));
      return {c1 * shape, c2 * shape};
    }
  }
  return {0.0, 0.0};
}

FieldPair sample_initial(const InitialDataSpec& spec, const Mesh& mesh) {
  if (spec.c1 < 0.0 || spec.c2 < 0.0) {
    throw Error(ErrorCode::NegativeInitialData, "initial amplitudes must be >= 0");
  }
  if (spec.kind == InitialKind::cosine && std::abs(spec.epsilon) > 1.0) {
    throw Error(ErrorCode::NegativeInitialData, "cosine amplitude |epsilon| must be <= 1");
  }
  if (spec.kind == InitialKind::gaussian && !(spec.width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian width must be positive");
  }
  FieldPair f;
  f.nonnegative = true;
  f.u.reserve(mesh.cell_count());
  f.v.reserve(mesh.cell_count());
  for (const auto& x : mesh.cell_centers()) {
    const auto [a, b] = spec.at(x, mesh.spec());
    f.u.push_back(a);
    f.v.push_back(b);
  }
  std::vector<double> tu, tv;
  for (const auto& face : mesh.boundary_faces()) {
    const auto [a, b] = spec.at(face.center, mesh.spec());
    tu.push_back(a);
    tv.push_back(b);
  }
  f.u_trace = std::move(tu);
  f.v_trace = std::move(tv);
  return f;
}

}  // namespace rdblow
