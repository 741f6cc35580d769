#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtstab/coefficients.hpp"
#include "rtstab/mesh_velocity.hpp"
#include "rtstab/transport.hpp"

namespace rtstab {

enum class ExperimentKind { sigma_t, sigma_s, linearized };

std::string_view to_string(ExperimentKind kind) noexcept;

/// sqrt of the boundary quadrature of |d_t u|^2, weighted by nu.v when
/// `weighted`. The weighted norm is only defined on the outflow side.
double measurement_norm(const MeasurementTrace& trace, bool weighted);

/// One coefficient pair (or one source f) and the boundary data it produces.
struct StabilityReport {
  std::string experiment_id;
  ExperimentKind kind = ExperimentKind::linearized;
  TraceSide side = TraceSide::gamma_plus;
  bool weighted = true;
  double amplitude = 0.0;
  double coefficient_diff_norm = 0.0;  // ||sigma^1 - sigma^2|| or ||f||
  double measurement_norm = 0.0;
  std::optional<double> ratio;         // coefficient norm / measurement norm
  bool degenerate = false;             // zero coefficient difference
  double solution_scale = 0.0;         // sup |u| over the run(s)
  std::vector<std::string> notes;
};

struct ExperimentOptions {
  std::string id;
  double amplitude = 0.0;
  AdmissibilityBounds bounds;
  SolverOptions solver;
};

/// Two forward solves differing only in sigma_t (sigma_t + perturbation);
/// the data are d_t(u1 - u2) on Gamma+ with the nu.v weight.
StabilityReport run_sigma_t_experiment(const ProblemData& base,
                                       const CoefficientField& perturbation,
                                       const PhaseSpace& ps, double dt,
                                       const ExperimentOptions& options = {});

/// As above with sigma_s perturbed and sigma_t held fixed across the pair.
StabilityReport run_sigma_s_experiment(const ProblemData& base,
                                       const CoefficientField& perturbation,
                                       const PhaseSpace& ps, double dt,
                                       const ExperimentOptions& options = {});

/// Linearised source problem with zero initial data. `side` selects the
/// weighted outflow norm (gamma_plus) or the unweighted full-boundary norm
/// (full); the former requires zero inflow.
StabilityReport run_linearized_experiment(const CoefficientField& f,
                                          const SourceFactor& R,
                                          const CoefficientField& sigma_t,
                                          const CoefficientField& sigma_s,
                                          const PhaseKernel& phase,
                                          const PhaseSpace& ps, double horizon,
                                          double dt, TraceSide side, double beta,
                                          const ExperimentOptions& options = {},
                                          InflowFn inflow = {});

/// Least-squares slope of log ||f||^2 against log(measurement^2).
struct HolderFit {
  double theta = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-log fit
  std::size_t count = 0;
};

HolderFit fit_holder_exponent(std::span<const StabilityReport> reports);

struct EnsembleSummary {
  ExperimentKind kind = ExperimentKind::linearized;
  std::size_t count = 0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double spread = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Ratio statistics over an ensemble of one experiment kind and side.
EnsembleSummary verify_both_sided(std::span<const StabilityReport> reports,
                                  double spread_threshold);

/// Smooth Gaussian bump with random centre and width, fixed amplitude.
CoefficientField random_perturbation(std::mt19937_64& rng, const PhaseSpace& ps,
                                     double amplitude,
                                     FieldLabel label = FieldLabel::other);

/// Sum of two Gaussian bumps with random signs, centres and widths, with a
/// mild random angular modulation. Unit peak amplitude per bump.
CoefficientField random_source(std::mt19937_64& rng, const PhaseSpace& ps);

/// Runs `job(i)` for i in [0, count) on up to `threads` workers; results
/// are returned in index order regardless of scheduling.
std::vector<StabilityReport> run_jobs(std::size_t count, int threads,
                                      const std::function<StabilityReport(std::size_t)>& job);

}  // namespace rtstab
