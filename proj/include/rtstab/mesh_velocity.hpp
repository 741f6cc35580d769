#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace rtstab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
constexpr double norm_sq(Vec2 a) noexcept { return dot(a, a); }

/// Rectangular domain description. Only dimension 2 is supported.
struct DomainSpec {
  int dimension = 2;
  Vec2 origin{0.0, 0.0};
  Vec2 extents{1.0, 1.0};
  std::array<int, 2> cells{32, 32};
};

/// One cell face lying on the domain boundary.
struct BoundaryFace {
  std::size_t id = 0;
  std::size_t cell = 0;
  Vec2 normal;  // outward unit normal
  Vec2 center;
  double area = 0.0;  // face length in 2-D
};

/// Uniform cell-centred grid over a rectangle. Cells are numbered
/// `ix + nx * iy`. Boundary faces are listed left, right, bottom, top.
class SpatialMesh {
 public:
  static SpatialMesh build(const DomainSpec& spec);

  [[nodiscard]] int dimension() const noexcept { return 2; }
  [[nodiscard]] Vec2 origin() const noexcept { return origin_; }
  [[nodiscard]] Vec2 extents() const noexcept { return extents_; }
  [[nodiscard]] Vec2 cell_size() const noexcept { return cell_size_; }
  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] int ny() const noexcept { return ny_; }
  [[nodiscard]] std::size_t num_cells() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }
  [[nodiscard]] std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(nx_) * static_cast<std::size_t>(iy);
  }
  [[nodiscard]] Vec2 cell_center(std::size_t cell) const noexcept;
  [[nodiscard]] double cell_volume() const noexcept {
    return cell_size_.x * cell_size_.y;
  }
  [[nodiscard]] double area() const noexcept { return extents_.x * extents_.y; }
  [[nodiscard]] double perimeter() const noexcept {
    return 2.0 * (extents_.x + extents_.y);
  }
  [[nodiscard]] const std::vector<BoundaryFace>& boundary_faces() const noexcept {
    return faces_;
  }
  [[nodiscard]] std::array<Vec2, 4> corners() const noexcept;

 private:
  Vec2 origin_;
  Vec2 extents_;
  Vec2 cell_size_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<BoundaryFace> faces_;
};

/// Discrete ordinates: a product of a radial midpoint rule on [v0, v1]
/// and an equispaced angular rule. Weights integrate over the annulus
/// {v0 <= |v| <= v1}; when v0 == v1 they integrate arc length on the
/// circle of radius v0.
struct VelocitySet {
  std::vector<Vec2> ordinates;
  std::vector<double> weights;
  double v_min_speed = 0.0;
  double v_max_speed = 0.0;
  int n_angles = 0;
  int n_speeds = 0;

  [[nodiscard]] std::size_t size() const noexcept { return ordinates.size(); }
  [[nodiscard]] double measure() const noexcept;
  [[nodiscard]] double min_speed_sq() const noexcept;
  /// Exact measure of the velocity set for the configured speeds.
  [[nodiscard]] double continuum_measure() const noexcept;
};

VelocitySet build_velocity_set(double v0, double v1, int n_angles, int n_speeds);

struct BoundaryEntry {
  std::size_t face = 0;
  std::size_t ordinate = 0;
  double nu_dot_v = 0.0;
};

/// Outflow (nu.v > 0) and inflow (nu.v < 0) boundary entries. Pairs with
/// |nu.v| < tol are tangential and belong to neither list.
struct BoundaryPartition {
  std::vector<BoundaryEntry> gamma_plus;
  std::vector<BoundaryEntry> gamma_minus;
  double tol = 0.0;
};

[[nodiscard]] inline double default_tangential_tol(const VelocitySet& vset) {
  return 1e-12 * vset.v_max_speed;
}

BoundaryPartition classify_boundary(const SpatialMesh& mesh,
                                    const VelocitySet& vset, double tol);

/// min and max of v.x over the closed domain and the ordinates.
struct ProjectionRange {
  double min = 0.0;
  double max = 0.0;
};

ProjectionRange velocity_projection_range(const SpatialMesh& mesh,
                                          const VelocitySet& vset);

/// Smallest horizon T for which the observation-time condition can hold:
/// (max v.x - min v.x) / D with D = beta if given, else min |v|^2.
double min_observation_time(const SpatialMesh& mesh, const VelocitySet& vset,
                            std::optional<double> beta = std::nullopt);

/// Mesh, ordinates and boundary partition bundled together, plus the
/// upwind connectivity derived from them. Immutable once built.
class PhaseSpace {
 public:
  /// Upwind source for one axis of one (cell, ordinate) pair.
  struct Upwind {
    double rate = 0.0;           // |v_k| / h_k
    std::ptrdiff_t cell = -1;    // interior neighbour, or -1
    std::ptrdiff_t ghost = -1;   // gamma_minus entry, or -1
  };

  PhaseSpace(SpatialMesh mesh, VelocitySet vset);
  PhaseSpace(SpatialMesh mesh, VelocitySet vset, double tol);

  [[nodiscard]] const SpatialMesh& mesh() const noexcept { return mesh_; }
  [[nodiscard]] const VelocitySet& vset() const noexcept { return vset_; }
  [[nodiscard]] const BoundaryPartition& partition() const noexcept {
    return partition_;
  }
  [[nodiscard]] std::size_t num_cells() const noexcept { return mesh_.num_cells(); }
  [[nodiscard]] std::size_t num_ordinates() const noexcept { return vset_.size(); }
  [[nodiscard]] std::size_t slice_size() const noexcept {
    return num_cells() * num_ordinates();
  }
  [[nodiscard]] std::size_t slot(std::size_t cell, std::size_t j) const noexcept {
    return cell * num_ordinates() + j;
  }

  [[nodiscard]] const Upwind& upwind_x(std::size_t cell, std::size_t j) const {
    return upwind_x_[slot(cell, j)];
  }
  [[nodiscard]] const Upwind& upwind_y(std::size_t cell, std::size_t j) const {
    return upwind_y_[slot(cell, j)];
  }
  /// Signed streaming direction per axis (+1, -1, or 0 when tangential).
  [[nodiscard]] int direction_x(std::size_t j) const { return dir_x_[j]; }
  [[nodiscard]] int direction_y(std::size_t j) const { return dir_y_[j]; }

  /// Largest dt * sum_k |v_k|/h_k over ordinates, per unit dt.
  [[nodiscard]] double max_courant_rate() const noexcept { return max_rate_; }

 private:
  void build_stencil();

  SpatialMesh mesh_;
  VelocitySet vset_;
  BoundaryPartition partition_;
  std::vector<Upwind> upwind_x_;
  std::vector<Upwind> upwind_y_;
  std::vector<int> dir_x_;
  std::vector<int> dir_y_;
  double max_rate_ = 0.0;
};

}  // namespace rtstab
