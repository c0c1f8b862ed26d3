#include "rdblow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rdblow/errors.hpp"

namespace rdblow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BallMeshUnsupported: return "BallMeshUnsupported";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::EvalAtZeroU: return "EvalAtZeroU";
    case ErrorCode::NotGradientSystem: return "NotGradientSystem";
    case ErrorCode::NegativeInitialData: return "NegativeInitialData";
    case ErrorCode::NegativeField: return "NegativeField";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::NonpositiveJ0: return "NonpositiveJ0";
    case ErrorCode::NonpositiveE0: return "NonpositiveE0";
    case ErrorCode::DimensionNot3: return "DimensionNot3";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

DomainSpec DomainSpec::box(std::span<const double> half_extents) {
  if (half_extents.size() != 2 && half_extents.size() != 3) {
    throw Error(ErrorCode::InvalidArgument, "box dimension must be 2 or 3");
  }
  DomainSpec spec;
  spec.kind_ = DomainKind::box;
  spec.dimension_ = static_cast<int>(half_extents.size());
  for (std::size_t i = 0; i < half_extents.size(); ++i) {
    if (!(half_extents[i] > 0.0) || !std::isfinite(half_extents[i])) {
      throw Error(ErrorCode::InvalidArgument, "box half-extents must be positive and finite");
    }
    spec.half_extents_[i] = half_extents[i];
  }
  return spec;
}

DomainSpec DomainSpec::ball(int dimension, double radius) {
  if (dimension != 2 && dimension != 3) {
    throw Error(ErrorCode::InvalidArgument, "ball dimension must be 2 or 3");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "ball radius must be positive and finite");
  }
  DomainSpec spec;
  spec.kind_ = DomainKind::ball;
  spec.dimension_ = dimension;
  spec.radius_ = radius;
  return spec;
}

double DomainSpec::volume() const {
  if (kind_ == DomainKind::ball) {
    return dimension_ == 2 ? std::numbers::pi * radius_ * radius_
                           : 4.0 / 3.0 * std::numbers::pi * radius_ * radius_ * radius_;
  }
  double v = 1.0;
  for (int i = 0; i < dimension_; ++i) v *= 2.0 * half_extents_[i];
  return v;
}

double DomainSpec::boundary_measure() const {
  if (kind_ == DomainKind::ball) {
    return dimension_ == 2 ? 2.0 * std::numbers::pi * radius_
                           : 4.0 * std::numbers::pi * radius_ * radius_;
  }
  // Each axis contributes two faces whose measure is the product of the
  // other full side lengths.
  double total = 0.0;
  for (int a = 0; a < dimension_; ++a) {
    double face = 1.0;
    for (int b = 0; b < dimension_; ++b) {
      if (b != a) face *= 2.0 * half_extents_[b];
    }
    total += 2.0 * face;
  }
  return total;
}

double Mesh::min_spacing() const noexcept {
  double h = spacing_[0];
  for (int a = 1; a < dimension(); ++a) h = std::min(h, spacing_[a]);
  return h;
}

std::array<int, 3> Mesh::index_of(std::size_t cell) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dimension() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(cell / strides_[a]);
    cell -= static_cast<std::size_t>(idx[a]) * strides_[a];
  }
  return idx;
}

Mesh build_mesh(const DomainSpec& spec, int cells_per_axis) {
  const int n[1] = {cells_per_axis};
  return build_mesh(spec, n);
}

Mesh build_mesh(const DomainSpec& spec, std::span<const int> cells_per_axis) {
  if (spec.kind() == DomainKind::ball) {
    throw Error(ErrorCode::BallMeshUnsupported, "balls are used analytically only");
  }
  const int dim = spec.dimension();
  if (cells_per_axis.size() != 1 && static_cast<int>(cells_per_axis.size()) != dim) {
    throw Error(ErrorCode::InvalidArgument, "cells_per_axis needs 1 or N entries");
  }

  Mesh mesh(spec);
  std::size_t stride = 1;
  double vol = 1.0;
  for (int a = 0; a < dim; ++a) {
    const int na = cells_per_axis.size() == 1 ? cells_per_axis[0] : cells_per_axis[a];
    if (na < 4) {
      throw Error(ErrorCode::ResolutionTooCoarse,
                  "need at least 4 cells per axis, got " + std::to_string(na));
    }
    mesh.cells_[a] = na;
    mesh.spacing_[a] = 2.0 * spec.half_extents()[a] / na;
    mesh.strides_[a] = stride;
    stride *= static_cast<std::size_t>(na);
    vol *= mesh.spacing_[a];
  }
  mesh.cell_volume_ = vol;

  const std::size_t count = stride;
  mesh.centers_.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    const auto idx = mesh.index_of(c);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
      x[a] = -spec.half_extents()[a] + (idx[a] + 0.5) * mesh.spacing_[a];
    }
    mesh.centers_[c] = x;
  }

  for (std::size_t c = 0; c < count; ++c) {
    const auto idx = mesh.index_of(c);
    for (int a = 0; a < dim; ++a) {
      const double area = vol / mesh.spacing_[a];
      for (int side : {-1, 1}) {
        const bool exterior = side < 0 ? idx[a] == 0 : idx[a] == mesh.cells_[a] - 1;
        if (!exterior) continue;
        Point normal{0.0, 0.0, 0.0};
        normal[a] = side;
        Point center = mesh.centers_[c];
        center[a] = side * spec.half_extents()[a];
        mesh.faces_.push_back(BoundaryFace{c, a, side, normal, center, area});
      }
    }
  }
  return mesh;
}

GeometryConstants geometry_constants(const DomainSpec& spec) {
  if (spec.kind() == DomainKind::ball) {
    return {spec.radius(), spec.radius()};
  }
  // On the face x_a = +-L_a the normal is +-e_a, so x . nu = L_a there.
  double rho = spec.half_extents()[0];
  double d2 = 0.0;
  for (int a = 0; a < spec.dimension(); ++a) {
    rho = std::min(rho, spec.half_extents()[a]);
    d2 += spec.half_extents()[a] * spec.half_extents()[a];
  }
  return {rho, std::sqrt(d2)};
}

double interior_integral(const Mesh& mesh, std::span<const double> samples) {
  if (samples.size() != mesh.cell_count()) {
    throw Error(ErrorCode::InvalidArgument, "one sample per cell required");
  }
  CompensatedSum sum;
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteSample, "interior sample");
    sum.add(s);
  }
  return sum.value() * mesh.cell_volume();
}

double boundary_integral(const Mesh& mesh, std::span<const double> boundary_samples) {
  const auto& faces = mesh.boundary_faces();
  if (boundary_samples.size() != faces.size()) {
    throw Error(ErrorCode::InvalidArgument, "one sample per boundary face required");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (!std::isfinite(boundary_samples[i])) {
      throw Error(ErrorCode::NonFiniteSample, "boundary sample");
    }
    sum.add(boundary_samples[i] * faces[i].area);
  }
  return sum.value();
}

}  // namespace rdblow
