#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "rtstab/field.hpp"
#include "rtstab/mesh_velocity.hpp"

namespace rtstab {

enum class FieldLabel { sigma_a, sigma_s, sigma_t, source, other };

std::string_view to_string(FieldLabel label) noexcept;

/// Scalar field over (cell, ordinate). Cross sections are stored per
/// ordinate even when they are physically isotropic.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(std::size_t num_cells, std::size_t num_ordinates,
                   FieldLabel label, double fill = 0.0);

  static CoefficientField constant(const PhaseSpace& ps, double value,
                                   FieldLabel label = FieldLabel::other);
  static CoefficientField from_function(const PhaseSpace& ps, FieldLabel label,
                                        const std::function<double(Vec2, Vec2)>& fn);

  [[nodiscard]] std::size_t num_cells() const noexcept { return num_cells_; }
  [[nodiscard]] std::size_t num_ordinates() const noexcept { return num_ordinates_; }
  [[nodiscard]] FieldLabel label() const noexcept { return label_; }
  void set_label(FieldLabel label) noexcept { label_ = label; }

  [[nodiscard]] double at(std::size_t cell, std::size_t j) const {
    return values_[cell * num_ordinates_ + j];
  }
  [[nodiscard]] double& at(std::size_t cell, std::size_t j) {
    return values_[cell * num_ordinates_ + j];
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

  [[nodiscard]] double sup_norm() const noexcept;
  [[nodiscard]] double min_value() const noexcept;
  /// L2(Omega x V) norm with cell-volume and ordinate-weight quadrature.
  [[nodiscard]] double l2_norm(const PhaseSpace& ps) const;
  [[nodiscard]] bool is_zero() const noexcept;

  CoefficientField& operator+=(const CoefficientField& other);
  CoefficientField& operator-=(const CoefficientField& other);
  CoefficientField& operator*=(double s) noexcept;

 private:
  void check_shape(const CoefficientField& other) const;

  std::size_t num_cells_ = 0;
  std::size_t num_ordinates_ = 0;
  FieldLabel label_ = FieldLabel::other;
  std::vector<double> values_;
};

CoefficientField operator+(CoefficientField a, const CoefficientField& b);
CoefficientField operator-(CoefficientField a, const CoefficientField& b);
CoefficientField operator*(double s, CoefficientField a);

/// base + amplitude * exp(-|x - center|^2 / (2 width^2)), isotropic in v.
CoefficientField gaussian_bump(const PhaseSpace& ps, double base, double amplitude,
                               Vec2 center, double width,
                               FieldLabel label = FieldLabel::other);

/// base +/- amplitude on a blocks x blocks checkerboard of the domain.
CoefficientField checkerboard(const PhaseSpace& ps, double base, double amplitude,
                              int blocks, FieldLabel label = FieldLabel::other);

/// Reads `cell_id,ordinate_id,value` rows; every (cell, ordinate) pair
/// must appear exactly once.
CoefficientField load_coefficient_csv(const std::filesystem::path& path,
                                      const PhaseSpace& ps, FieldLabel label);

CoefficientField total_attenuation(const CoefficientField& sigma_a,
                                   const CoefficientField& sigma_s);

/// Tabulated phase function p(x_i, v_j, v_j') with the row normalisation
/// sum_j' p(i, j, j') w_j' = 1.
class PhaseKernel {
 public:
  PhaseKernel() = default;

  [[nodiscard]] std::size_t num_cells() const noexcept { return num_cells_; }
  [[nodiscard]] std::size_t num_ordinates() const noexcept { return num_ordinates_; }
  [[nodiscard]] double at(std::size_t cell, std::size_t j_out, std::size_t j_in) const {
    return values_[(cell * num_ordinates_ + j_out) * num_ordinates_ + j_in];
  }
  /// Kernel row for (cell, outgoing ordinate).
  [[nodiscard]] std::span<const double> row(std::size_t cell, std::size_t j_out) const {
    return {values_.data() + (cell * num_ordinates_ + j_out) * num_ordinates_,
            num_ordinates_};
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] double row_sum(std::size_t cell, std::size_t j_out) const;
  /// Largest |row_sum - 1| over all rows.
  [[nodiscard]] double max_normalization_error() const;

 private:
  friend PhaseKernel normalize_phase(std::span<const double>, std::size_t,
                                     const VelocitySet&);
  std::size_t num_cells_ = 0;
  std::size_t num_ordinates_ = 0;
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// Divides each (cell, outgoing ordinate) row of `raw` by its quadrature
/// sum. `raw` is laid out (cell, j_out, j_in) and must be nonnegative.
PhaseKernel normalize_phase(std::span<const double> raw, std::size_t num_cells,
                            const VelocitySet& vset);

/// p == 1 / |V| everywhere.
PhaseKernel isotropic_phase(const PhaseSpace& ps);

/// Time-dependent source factor R(x, v, t). Either one (cell, ordinate)
/// slice shared by every time level or one slice per level.
class SourceFactor {
 public:
  SourceFactor() = default;

  static SourceFactor constant(const PhaseSpace& ps, double value);
  static SourceFactor time_independent(const CoefficientField& values);
  /// Uses every recorded time level of `history`, scaled by `scale`.
  static SourceFactor from_history(const AngularDensityField& history, double scale);
  /// Slice-per-level data: `data.size()` must equal num_times * slice size.
  static SourceFactor from_levels(std::size_t num_cells, std::size_t num_ordinates,
                                  std::size_t num_times, std::vector<double> data);

  [[nodiscard]] bool time_dependent() const noexcept { return num_times_ > 0; }
  [[nodiscard]] std::size_t num_times() const noexcept { return num_times_; }
  [[nodiscard]] std::size_t slice_size() const noexcept {
    return num_cells_ * num_ordinates_;
  }
  [[nodiscard]] std::span<const double> slice(std::size_t k) const;
  [[nodiscard]] double at(std::size_t cell, std::size_t j, std::size_t k) const {
    return slice(k)[cell * num_ordinates_ + j];
  }
  /// min over the grid of R(., ., 0).
  [[nodiscard]] double min_initial() const;

 private:
  std::size_t num_cells_ = 0;
  std::size_t num_ordinates_ = 0;
  std::size_t num_times_ = 0;  // 0: time independent
  std::vector<double> data_;
};

struct AdmissibilityBounds {
  double M = 10.0;
};

/// Discrete norms behind the admissible class: sup norms, time-derivative
/// norms by forward differences, spatial gradients by centred differences
/// with one-sided fallback at the boundary.
struct AdmissibilityReport {
  bool is_coefficient = false;
  double bound = 0.0;
  double sup_norm = 0.0;
  double dt_l2_norm = 0.0;         // ||d_t u||_{L2(Q x (0,T))}
  double h1_linf_norm = 0.0;       // ||u||_{H1(0,T; Linf)}
  double h2_l2_norm = 0.0;         // ||u||_{H2(0,T; L2)}
  double grad_h1_l2_norm = 0.0;    // ||grad u||_{H1(0,T; L2)}
  double total = 0.0;              // compared against the bound
  bool pass = false;
};

AdmissibilityReport check_admissibility(const CoefficientField& field,
                                        const AdmissibilityBounds& bounds);
AdmissibilityReport check_admissibility(const AngularDensityField& field,
                                        const PhaseSpace& ps,
                                        const AdmissibilityBounds& bounds);

}  // namespace rtstab
