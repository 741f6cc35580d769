#include "rtstab/mesh_velocity.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "rtstab/errors.hpp"

namespace rtstab {

SpatialMesh SpatialMesh::build(const DomainSpec& spec) {
  if (spec.dimension != 2) {
    throw ConfigError(fmt::format(
        "dimension: only 2-D rectangular meshes are supported (got {})",
        spec.dimension));
  }
  if (!(spec.extents.x > 0.0) || !(spec.extents.y > 0.0)) {
    throw ConfigError(fmt::format("extents must be positive (got {}, {})",
                                  spec.extents.x, spec.extents.y));
  }
  if (spec.cells[0] <= 0 || spec.cells[1] <= 0) {
    throw ConfigError(fmt::format("cell counts must be positive (got {}, {})",
                                  spec.cells[0], spec.cells[1]));
  }

  SpatialMesh mesh;
  mesh.origin_ = spec.origin;
  mesh.extents_ = spec.extents;
  mesh.nx_ = spec.cells[0];
  mesh.ny_ = spec.cells[1];
  mesh.cell_size_ = {spec.extents.x / mesh.nx_, spec.extents.y / mesh.ny_};

  const double hx = mesh.cell_size_.x;
  const double hy = mesh.cell_size_.y;
  const double x0 = spec.origin.x;
  const double y0 = spec.origin.y;
  const double x1 = x0 + spec.extents.x;
  const double y1 = y0 + spec.extents.y;

  auto add = [&mesh](std::size_t cell, Vec2 normal, Vec2 center, double area) {
    mesh.faces_.push_back({mesh.faces_.size(), cell, normal, center, area});
  };
  for (int iy = 0; iy < mesh.ny_; ++iy) {
    add(mesh.index(0, iy), {-1.0, 0.0}, {x0, y0 + (iy + 0.5) * hy}, hy);
  }
  for (int iy = 0; iy < mesh.ny_; ++iy) {
    add(mesh.index(mesh.nx_ - 1, iy), {1.0, 0.0}, {x1, y0 + (iy + 0.5) * hy}, hy);
  }
  for (int ix = 0; ix < mesh.nx_; ++ix) {
    add(mesh.index(ix, 0), {0.0, -1.0}, {x0 + (ix + 0.5) * hx, y0}, hx);
  }
  for (int ix = 0; ix < mesh.nx_; ++ix) {
    add(mesh.index(ix, mesh.ny_ - 1), {0.0, 1.0}, {x0 + (ix + 0.5) * hx, y1}, hx);
  }
  return mesh;
}

Vec2 SpatialMesh::cell_center(std::size_t cell) const noexcept {
  const auto ix = static_cast<int>(cell % static_cast<std::size_t>(nx_));
  const auto iy = static_cast<int>(cell / static_cast<std::size_t>(nx_));
  return {origin_.x + (ix + 0.5) * cell_size_.x,
          origin_.y + (iy + 0.5) * cell_size_.y};
}

std::array<Vec2, 4> SpatialMesh::corners() const noexcept {
  const double x1 = origin_.x + extents_.x;
  const double y1 = origin_.y + extents_.y;
  return {Vec2{origin_.x, origin_.y}, Vec2{x1, origin_.y}, Vec2{origin_.x, y1},
          Vec2{x1, y1}};
}

double VelocitySet::measure() const noexcept {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

double VelocitySet::min_speed_sq() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : ordinates) m = std::min(m, norm_sq(v));
  return m;
}

double VelocitySet::continuum_measure() const noexcept {
  if (v_min_speed == v_max_speed) return 2.0 * std::numbers::pi * v_min_speed;
  return std::numbers::pi *
         (v_max_speed * v_max_speed - v_min_speed * v_min_speed);
}

VelocitySet build_velocity_set(double v0, double v1, int n_angles, int n_speeds) {
  if (!(v0 > 0.0)) {
    throw DomainError(fmt::format(
        "v_min = {}: the velocity set must exclude the origin (need v_min > 0)",
        v0));
  }
  if (v0 > v1) {
    throw ConfigError(fmt::format("v_min = {} exceeds v_max = {}", v0, v1));
  }
  if (n_angles < 4) {
    throw ConfigError(fmt::format("n_angles must be >= 4 (got {})", n_angles));
  }
  if (n_speeds < 1) {
    throw ConfigError(fmt::format("n_speeds must be >= 1 (got {})", n_speeds));
  }

  VelocitySet vset;
  vset.v_min_speed = v0;
  vset.v_max_speed = v1;
  vset.n_angles = n_angles;

  const double dtheta = 2.0 * std::numbers::pi / n_angles;
  std::vector<double> speeds;
  std::vector<double> shell_measure;
  if (v0 == v1) {
    speeds.push_back(v0);
    shell_measure.push_back(v0);
  } else {
    const double dr = (v1 - v0) / n_speeds;
    for (int k = 0; k < n_speeds; ++k) {
      const double lo = v0 + k * dr;
      const double hi = (k + 1 == n_speeds) ? v1 : lo + dr;
      speeds.push_back(0.5 * (lo + hi));
      shell_measure.push_back(0.5 * (hi * hi - lo * lo));
    }
  }
  vset.n_speeds = static_cast<int>(speeds.size());

  // Components below this fraction of the speed are rounding noise from
  // cos/sin at multiples of pi/2; snap them so axis-aligned ordinates are exact.
  constexpr double snap = 1e-14;
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    for (int a = 0; a < n_angles; ++a) {
      const double theta = a * dtheta;
      double cx = std::cos(theta);
      double cy = std::sin(theta);
      if (std::abs(cx) < snap) cx = 0.0;
      if (std::abs(cy) < snap) cy = 0.0;
      vset.ordinates.push_back({speeds[k] * cx, speeds[k] * cy});
      vset.weights.push_back(shell_measure[k] * dtheta);
    }
  }
  return vset;
}

BoundaryPartition classify_boundary(const SpatialMesh& mesh,
                                    const VelocitySet& vset, double tol) {
  if (!(tol >= 0.0)) {
    throw DomainError(fmt::format("tangential tolerance must be >= 0 (got {})", tol));
  }
  BoundaryPartition part;
  part.tol = tol;
  for (const auto& face : mesh.boundary_faces()) {
    for (std::size_t j = 0; j < vset.size(); ++j) {
      const double nv = dot(face.normal, vset.ordinates[j]);
      if (nv > tol) {
        part.gamma_plus.push_back({face.id, j, nv});
      } else if (nv < -tol) {
        part.gamma_minus.push_back({face.id, j, nv});
      }
    }
  }
  return part;
}

ProjectionRange velocity_projection_range(const SpatialMesh& mesh,
                                          const VelocitySet& vset) {
  ProjectionRange range{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
  for (const auto& corner : mesh.corners()) {
    for (const auto& v : vset.ordinates) {
      const double p = dot(v, corner);
      range.min = std::min(range.min, p);
      range.max = std::max(range.max, p);
    }
  }
  return range;
}

double min_observation_time(const SpatialMesh& mesh, const VelocitySet& vset,
                            std::optional<double> beta) {
  const double vmin_sq = vset.min_speed_sq();
  double denom = vmin_sq;
  if (beta) {
    if (!(*beta > 0.0) || !(*beta < vmin_sq)) {
      throw DomainError(fmt::format(
          "beta = {} must satisfy 0 < beta < min|v|^2 = {}", *beta, vmin_sq));
    }
    denom = *beta;
  }
  const auto range = velocity_projection_range(mesh, vset);
  return (range.max - range.min) / denom;
}

PhaseSpace::PhaseSpace(SpatialMesh mesh, VelocitySet vset)
    : PhaseSpace(std::move(mesh), vset, default_tangential_tol(vset)) {}

PhaseSpace::PhaseSpace(SpatialMesh mesh, VelocitySet vset, double tol)
    : mesh_(std::move(mesh)), vset_(std::move(vset)) {
  partition_ = classify_boundary(mesh_, vset_, tol);
  build_stencil();
}

void PhaseSpace::build_stencil() {
  const std::size_t nord = vset_.size();
  const double tol = partition_.tol;
  dir_x_.resize(nord);
  dir_y_.resize(nord);
  for (std::size_t j = 0; j < nord; ++j) {
    const Vec2 v = vset_.ordinates[j];
    dir_x_[j] = v.x > tol ? 1 : (v.x < -tol ? -1 : 0);
    dir_y_[j] = v.y > tol ? 1 : (v.y < -tol ? -1 : 0);
  }

  // (face, ordinate) -> gamma_minus entry
  const auto& faces = mesh_.boundary_faces();
  std::vector<std::ptrdiff_t> ghost_of(faces.size() * nord, -1);
  for (std::size_t e = 0; e < partition_.gamma_minus.size(); ++e) {
    const auto& entry = partition_.gamma_minus[e];
    ghost_of[entry.face * nord + entry.ordinate] = static_cast<std::ptrdiff_t>(e);
  }

  const int nx = mesh_.nx();
  const int ny = mesh_.ny();
  // Face id layout: left [0, ny), right [ny, 2ny), bottom [2ny, 2ny+nx), top.
  auto left_face = [&](int iy) { return static_cast<std::size_t>(iy); };
  auto right_face = [&](int iy) { return static_cast<std::size_t>(ny + iy); };
  auto bottom_face = [&](int ix) { return static_cast<std::size_t>(2 * ny + ix); };
  auto top_face = [&](int ix) { return static_cast<std::size_t>(2 * ny + nx + ix); };

  const Vec2 h = mesh_.cell_size();
  upwind_x_.assign(slice_size(), {});
  upwind_y_.assign(slice_size(), {});
  max_rate_ = 0.0;
  for (std::size_t j = 0; j < nord; ++j) {
    const Vec2 v = vset_.ordinates[j];
    const double rx = dir_x_[j] != 0 ? std::abs(v.x) / h.x : 0.0;
    const double ry = dir_y_[j] != 0 ? std::abs(v.y) / h.y : 0.0;
    max_rate_ = std::max(max_rate_, rx + ry);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const std::size_t c = mesh_.index(ix, iy);
        auto& ux = upwind_x_[slot(c, j)];
        auto& uy = upwind_y_[slot(c, j)];
        ux.rate = rx;
        uy.rate = ry;
        if (dir_x_[j] > 0) {
          if (ix > 0) ux.cell = static_cast<std::ptrdiff_t>(mesh_.index(ix - 1, iy));
          else ux.ghost = ghost_of[left_face(iy) * nord + j];
        } else if (dir_x_[j] < 0) {
          if (ix + 1 < nx) ux.cell = static_cast<std::ptrdiff_t>(mesh_.index(ix + 1, iy));
          else ux.ghost = ghost_of[right_face(iy) * nord + j];
        }
        if (dir_y_[j] > 0) {
          if (iy > 0) uy.cell = static_cast<std::ptrdiff_t>(mesh_.index(ix, iy - 1));
          else uy.ghost = ghost_of[bottom_face(ix) * nord + j];
        } else if (dir_y_[j] < 0) {
          if (iy + 1 < ny) uy.cell = static_cast<std::ptrdiff_t>(mesh_.index(ix, iy + 1));
          else uy.ghost = ghost_of[top_face(ix) * nord + j];
        }
      }
    }
  }
}

}  // namespace rtstab
