#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rtstab/coefficients.hpp"
#include "rtstab/field.hpp"
#include "rtstab/mesh_velocity.hpp"

namespace rtstab {

/// Inflow data g as a function of (gamma_minus entry, time).
using InflowFn = std::function<double(std::size_t entry, double t)>;

InflowFn zero_inflow();
InflowFn constant_inflow(double value);
/// Time-constant extension of a(x, v) onto the inflow boundary: each
/// gamma_minus entry takes the value of its adjacent cell.
InflowFn inflow_from_initial(const CoefficientField& initial, const PhaseSpace& ps);

/// Initial/boundary value problem. When `source_f` is present the
/// right-hand side f(x, v) R(x, v, t) is added (the linearised problem).
struct ProblemData {
  CoefficientField initial;
  InflowFn inflow;  // empty means zero inflow
  CoefficientField sigma_t;
  CoefficientField sigma_s;
  PhaseKernel phase;
  double horizon = 0.0;
  std::optional<CoefficientField> source_f;
  std::optional<SourceFactor> source_R;
};

struct SolverOptions {
  double cfl_factor = 0.9;
};

/// Largest time step for which the explicit upwind update is a convex
/// combination: cfl_factor / max_j (|v_jx|/hx + |v_jy|/hy).
double max_stable_dt(const PhaseSpace& ps, double cfl_factor = 0.9);

/// Number of steps used to cover [0, T] with steps no longer than dt.
std::size_t step_count(double horizon, double dt);

/// One explicit time step of the discrete transport operator:
///   u* = u - dt v.grad_h u                      (first-order upwind)
///   next = e^{-sigma_t dt} u* + dt phi(sigma_t dt) (sigma_s S(u) + q)
/// with phi(z) = (1 - e^{-z}) / z. Absorption is integrated exactly, so a
/// constant attenuation factors out of the streaming update.
class TransportStep {
 public:
  TransportStep(const PhaseSpace& ps, const CoefficientField& sigma_t,
                const CoefficientField* sigma_s, const PhaseKernel* kernel, double dt);

  [[nodiscard]] double dt() const noexcept { return dt_; }

  /// `source` may be empty. `next` must not alias `u`.
  void advance(std::span<const double> u, std::span<const double> inflow,
               std::span<const double> source, std::span<double> next) const;

  /// Outflow trace: each gamma_plus entry takes its adjacent cell value.
  void record_outflow(std::span<const double> u, std::span<double> out) const;

 private:
  const PhaseSpace* ps_;
  const CoefficientField* sigma_s_;
  const PhaseKernel* kernel_;
  double dt_;
  std::vector<double> decay_;
  std::vector<double> gain_;
  std::vector<std::size_t> out_slot_;
};

/// Discrete v.grad u by first-order upwind differences; inflow values act
/// as ghost data on gamma_minus faces.
std::vector<double> apply_streaming(std::span<const double> u, const PhaseSpace& ps,
                                    std::span<const double> inflow);

/// S(i, j) = sum_j' p(i, j, j') u(i, j') w_j'.
std::vector<double> scattering_integral(std::span<const double> u,
                                        const PhaseKernel& kernel,
                                        const VelocitySet& vset);

AngularDensityField solve_forward(const ProblemData& data, const PhaseSpace& ps,
                                  double dt, const SolverOptions& options = {});

AngularDensityField solve_linearized(const CoefficientField& f, const SourceFactor& R,
                                     const CoefficientField& sigma_t,
                                     const CoefficientField& sigma_s,
                                     const PhaseKernel& phase, const PhaseSpace& ps,
                                     double horizon, double dt,
                                     const SolverOptions& options = {},
                                     InflowFn inflow = {});

enum class TraceSide { gamma_plus, gamma_minus, full };

std::string_view to_string(TraceSide side) noexcept;

/// Time derivative of recorded boundary values with the quadrature
/// metadata (nu.v, face area, ordinate weight) needed to integrate it.
struct MeasurementTrace {
  struct Entry {
    std::size_t face = 0;
    std::size_t ordinate = 0;
    double nu_dot_v = 0.0;
    double area = 0.0;
    double weight = 0.0;
  };

  TraceSide side = TraceSide::gamma_plus;
  double dt = 0.0;
  std::size_t num_times = 0;
  std::vector<Entry> entries;
  std::vector<double> derivative;  // entry-major: [entry * num_times + k]

  [[nodiscard]] double at(std::size_t entry, std::size_t k) const {
    return derivative[entry * num_times + k];
  }
};

/// Centred differences in t, one-sided at t = 0 and t = T.
MeasurementTrace time_derivative_trace(const BoundaryTraces& traces,
                                       const PhaseSpace& ps, TraceSide side);
MeasurementTrace time_derivative_trace(const AngularDensityField& field,
                                       const PhaseSpace& ps, TraceSide side);

/// Quadrature of |d_t u|^2 over the trace's side and [0, T]:
/// sum over entries and levels of (nu.v if weighted else 1) * dS * w_j * dt_k.
double boundary_integral(const MeasurementTrace& trace, bool weighted);

/// Trapezoid weights for integrating over recorded time levels.
inline double trapezoid_weight(std::size_t k, std::size_t num_times, double dt) {
  return (k == 0 || k + 1 == num_times) ? 0.5 * dt : dt;
}

}  // namespace rtstab
