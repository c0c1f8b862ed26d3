#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rdblow {

using Point = std::array<double, 3>;

enum class DomainKind { box, ball };

/// A convex domain centred on the origin. Boxes are [-L_i, L_i] per axis,
/// balls have radius R. Unused trailing axes are zero.
class DomainSpec {
 public:
  static DomainSpec box(std::span<const double> half_extents);
  static DomainSpec ball(int dimension, double radius);

  [[nodiscard]] DomainKind kind() const noexcept { return kind_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] const std::array<double, 3>& half_extents() const noexcept { return half_extents_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }

  /// |Omega|; analytic for both kinds.
  [[nodiscard]] double volume() const;
  /// |boundary of Omega|; analytic for both kinds.
  [[nodiscard]] double boundary_measure() const;

 private:
  DomainSpec() = default;
  DomainKind kind_ = DomainKind::box;
  int dimension_ = 0;
  std::array<double, 3> half_extents_{};
  double radius_ = 0.0;
};

struct BoundaryFace {
  std::size_t cell;
  int axis;
  int side;  // -1 for the low face, +1 for the high face
  Point normal;
  Point center;
  double area;
};

/// Uniform cell-centred grid over a box. Cells are stored x-fastest.
class Mesh {
 public:
  [[nodiscard]] const DomainSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] int dimension() const noexcept { return spec_.dimension(); }
  [[nodiscard]] const std::array<int, 3>& cells_per_axis() const noexcept { return cells_; }
  [[nodiscard]] const std::array<double, 3>& spacing() const noexcept { return spacing_; }
  [[nodiscard]] std::size_t cell_count() const noexcept { return centers_.size(); }
  [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }
  [[nodiscard]] const std::vector<Point>& cell_centers() const noexcept { return centers_; }
  [[nodiscard]] const std::vector<BoundaryFace>& boundary_faces() const noexcept { return faces_; }
  [[nodiscard]] const std::array<std::size_t, 3>& strides() const noexcept { return strides_; }
  [[nodiscard]] double min_spacing() const noexcept;

  /// Per-axis index of a cell.
  [[nodiscard]] std::array<int, 3> index_of(std::size_t cell) const noexcept;

 private:
  friend Mesh build_mesh(const DomainSpec& spec, std::span<const int> cells_per_axis);
  explicit Mesh(const DomainSpec& spec) : spec_(spec) {}

  DomainSpec spec_;
  std::array<int, 3> cells_{1, 1, 1};
  std::array<double, 3> spacing_{};
  std::array<std::size_t, 3> strides_{};
  double cell_volume_ = 0.0;
  std::vector<Point> centers_;
  std::vector<BoundaryFace> faces_;
};

struct GeometryConstants {
  double rho;  // min over the boundary of x . nu
  double d;    // max over the closure of |x|
};

/// Builds the grid. cells_per_axis may hold one entry (used for every axis)
/// or one entry per axis.
Mesh build_mesh(const DomainSpec& spec, std::span<const int> cells_per_axis);
Mesh build_mesh(const DomainSpec& spec, int cells_per_axis);

GeometryConstants geometry_constants(const DomainSpec& spec);

/// Midpoint rule over cells, compensated summation in cell order.
double interior_integral(const Mesh& mesh, std::span<const double> samples);

/// Sum of face value times face area, in boundary-face order.
double boundary_integral(const Mesh& mesh, std::span<const double> boundary_samples);

/// Neumaier-compensated accumulator; deterministic for a fixed order.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace rdblow
