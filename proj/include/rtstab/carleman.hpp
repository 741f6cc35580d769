#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtstab/coefficients.hpp"
#include "rtstab/field.hpp"
#include "rtstab/mesh_velocity.hpp"

namespace rtstab {

/// Parameters of the linear Carleman weight phi(x, v, t) = -beta t + v.x
/// and the level sets used to separate t = 0 from t = T:
///   r_max - beta T < r0 < r1 < r_min,   mu = r1 - r0,
///   phi > r1 for t in [0, delta],   phi < r0 for t in [T - 2 delta, T].
struct CarlemanConfig {
  double beta = 0.0;
  double horizon = 0.0;
  double r_min = 0.0;  // min of v.x over the closed domain and ordinates
  double r_max = 0.0;  // max of v.x
  double r0 = 0.0;
  double r1 = 0.0;
  double delta = 0.0;
  double mu = 0.0;
  double s0 = 0.0;
  std::vector<double> s_grid;
};

double weight_phi(Vec2 x, Vec2 v, double t, double beta) noexcept;

/// d_t phi + v.grad phi = |v|^2 - beta; throws unless it is positive.
double weight_B(Vec2 v, double beta);

struct SRange {
  double s_min = 0.0;
  double s_max = 0.0;
  int count = 8;
};

/// Places r0 and r1 at the tertiles of (r_max - beta T, r_min) and picks
/// delta = 0.9 min((r_min - r1)/beta, (r0 - r_max + beta T)/(2 beta), T/3).
/// Without an explicit range, s0 = 5/(r_min - r0) and the grid holds 8
/// log-spaced values on [s0, 4 s0].
CarlemanConfig make_carleman_config(const SpatialMesh& mesh, const VelocitySet& vset,
                                    double horizon, double beta,
                                    std::optional<SRange> s_range = std::nullopt);

/// Throws ConfigError naming the first violated ordering constraint.
void validate(const CarlemanConfig& cfg, const VelocitySet& vset);

/// 1 on [0, T - 2 delta], 0 on [T - delta, T], quintic smoothstep between.
double cutoff_chi(double t, const CarlemanConfig& cfg);
double cutoff_chi_derivative(double t, const CarlemanConfig& cfg);

/// Extremes of phi over a sampled grid of cell centres, boundary face
/// centres, domain corners, ordinates and times in [0, delta] and
/// [T - 2 delta, T].
struct WeightLevelScan {
  double min_phi_early = 0.0;  // must exceed r1
  double max_phi_late = 0.0;   // must stay below r0
  double min_phi_initial = 0.0;  // min phi(x, v, 0), at least r_min
  bool early_ok = false;
  bool late_ok = false;
};

WeightLevelScan scan_weight_levels(const PhaseSpace& ps, const CarlemanConfig& cfg,
                                   std::size_t time_samples = 64);

/// z = chi(t) d_t u with forward differences in t (z at t = T is 0).
/// Boundary traces are transformed the same way.
AngularDensityField auxiliary_z(const AngularDensityField& field,
                                const CarlemanConfig& cfg);

/// Weighted integrals of one Carleman inequality at one value of s. All
/// four terms are stored divided by exp(log_shift); ratios are unaffected.
struct CarlemanTerms {
  double s = 0.0;
  double lhs_initial = 0.0;  // s int |u(0)|^2 e^{2 s phi(0)}
  double lhs_bulk = 0.0;     // s^2 int int |u|^2 e^{2 s phi}
  double rhs_source = 0.0;   // int int |P_h u|^2 e^{2 s phi}
  double rhs_boundary = 0.0; // boundary term over Gamma+ (x s nu.v when weighted)
  double log_shift = 0.0;
  std::optional<double> c;   // (lhs) / (rhs), absent when both sides vanish
};

struct CarlemanReport {
  std::string lemma_id;
  std::vector<CarlemanTerms> terms;

  /// max C / min C over terms with s in [s_lo, s_hi]; nullopt if any C is missing.
  [[nodiscard]] std::optional<double> c_spread(double s_lo, double s_hi) const;
};

/// Carleman inequality for the full transport operator including scattering.
/// The source term is the residual of the solver's own step map applied to
/// the field; the boundary term is unweighted.
CarlemanReport evaluate_carleman_scattering(const AngularDensityField& field,
                                            const CarlemanConfig& cfg,
                                            const PhaseSpace& ps,
                                            const CoefficientField& sigma_t,
                                            const CoefficientField& sigma_s,
                                            const PhaseKernel& kernel);

/// Carleman inequality for streaming plus attenuation only; the boundary
/// term carries s (nu.v).
CarlemanReport evaluate_carleman_streaming(const AngularDensityField& field,
                                           const CarlemanConfig& cfg,
                                           const PhaseSpace& ps,
                                           const CoefficientField& sigma_t);

/// Both inequalities on the same field.
std::pair<CarlemanReport, CarlemanReport> evaluate_carleman_pair(
    const AngularDensityField& field, const CarlemanConfig& cfg, const PhaseSpace& ps,
    const CoefficientField& sigma_t, const CoefficientField& sigma_s,
    const PhaseKernel& kernel);

}  // namespace rtstab
