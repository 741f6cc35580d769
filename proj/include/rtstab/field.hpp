#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rtstab {

/// Boundary values recorded at every time level: outflow entries follow
/// `BoundaryPartition::gamma_plus`, inflow entries `gamma_minus`.
class BoundaryTraces {
 public:
  BoundaryTraces() = default;
  BoundaryTraces(std::size_t num_times, double dt, std::size_t n_out,
                 std::size_t n_in);

  [[nodiscard]] std::size_t num_times() const noexcept { return num_times_; }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  [[nodiscard]] std::size_t num_out() const noexcept { return n_out_; }
  [[nodiscard]] std::size_t num_in() const noexcept { return n_in_; }

  [[nodiscard]] std::span<const double> out(std::size_t k) const {
    return {out_.data() + k * n_out_, n_out_};
  }
  [[nodiscard]] std::span<double> out(std::size_t k) {
    return {out_.data() + k * n_out_, n_out_};
  }
  [[nodiscard]] std::span<const double> in(std::size_t k) const {
    return {in_.data() + k * n_in_, n_in_};
  }
  [[nodiscard]] std::span<double> in(std::size_t k) {
    return {in_.data() + k * n_in_, n_in_};
  }

  /// Pointwise a - b; both traces must share shape and dt.
  friend BoundaryTraces operator-(const BoundaryTraces& a, const BoundaryTraces& b);

 private:
  std::size_t num_times_ = 0;
  double dt_ = 0.0;
  std::size_t n_out_ = 0;
  std::size_t n_in_ = 0;
  std::vector<double> out_;
  std::vector<double> in_;
};

/// u(x_i, v_j, t_k) on the full grid, stored time-major so that each
/// time level is one contiguous (cell, ordinate) slice.
class AngularDensityField {
 public:
  AngularDensityField() = default;
  AngularDensityField(std::size_t num_cells, std::size_t num_ordinates,
                      std::size_t num_times, double dt, std::size_t n_out,
                      std::size_t n_in);

  [[nodiscard]] std::size_t num_cells() const noexcept { return num_cells_; }
  [[nodiscard]] std::size_t num_ordinates() const noexcept { return num_ordinates_; }
  [[nodiscard]] std::size_t num_times() const noexcept { return num_times_; }
  [[nodiscard]] std::size_t num_steps() const noexcept {
    return num_times_ == 0 ? 0 : num_times_ - 1;
  }
  [[nodiscard]] std::size_t slice_size() const noexcept {
    return num_cells_ * num_ordinates_;
  }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  [[nodiscard]] double time(std::size_t k) const noexcept {
    return static_cast<double>(k) * dt_;
  }
  [[nodiscard]] double final_time() const noexcept { return time(num_steps()); }

  [[nodiscard]] double at(std::size_t cell, std::size_t j, std::size_t k) const {
    return values_[k * slice_size() + cell * num_ordinates_ + j];
  }
  [[nodiscard]] double& at(std::size_t cell, std::size_t j, std::size_t k) {
    return values_[k * slice_size() + cell * num_ordinates_ + j];
  }
  [[nodiscard]] std::span<const double> snapshot(std::size_t k) const {
    return {values_.data() + k * slice_size(), slice_size()};
  }
  [[nodiscard]] std::span<double> snapshot(std::size_t k) {
    return {values_.data() + k * slice_size(), slice_size()};
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] const BoundaryTraces& traces() const noexcept { return traces_; }
  [[nodiscard]] BoundaryTraces& traces() noexcept { return traces_; }

 private:
  std::size_t num_cells_ = 0;
  std::size_t num_ordinates_ = 0;
  std::size_t num_times_ = 0;
  double dt_ = 0.0;
  std::vector<double> values_;
  BoundaryTraces traces_;
};

}  // namespace rtstab
