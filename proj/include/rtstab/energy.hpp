#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtstab/field.hpp"
#include "rtstab/mesh_velocity.hpp"
#include "rtstab/transport.hpp"

namespace rtstab {

/// E(t_k) = sum_i sum_j |u(i, j, k)|^2 |cell| w_j at every time level.
struct EnergyTrace {
  std::vector<double> time;
  std::vector<double> energy;
};

EnergyTrace energy(const AngularDensityField& field, const PhaseSpace& ps);

/// Result of fitting the smallest constant C with lhs <= C * sum(rhs).
/// Fitted constants are empirical; nothing compares them to a reference.
struct InequalityReport {
  std::string inequality_id;
  bool applicable = true;   // false when both sides vanish
  bool violation = false;   // lhs > 0 with a vanishing right-hand side
  std::optional<double> c_fit;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_components;
  double argmax_t = 0.0;
  std::vector<std::string> notes;
};

/// max_t E(t) against E(0) + int_0^T int_{Gamma-} |u|^2 + ||f R||^2, where
/// the source norm is taken over Omega x V x (0, T).
InequalityReport verify_gronwall_bound(const AngularDensityField& field,
                                       const ProblemData& data, const PhaseSpace& ps);

/// int int_{Gamma+} |d_t u|^2 against ||f||^2 + int int_{Gamma-} |d_t u|^2.
InequalityReport verify_outflow_bound(const AngularDensityField& field,
                                      const PhaseSpace& ps, double f_norm);

/// Discrete energy balance
///   E(T) - E(0) = int_0^T [ -boundary flux - 2 sigma_t |u|^2
///                           + 2 sigma_s S(u) u + 2 f R u ] dt
/// with the time integral by the trapezoid rule. The scattering gain uses
/// the kernel in the argument order of the transport equation.
struct EnergyBalance {
  double energy_initial = 0.0;
  double energy_final = 0.0;
  double outflow_flux = 0.0;    // int int_{Gamma+} (nu.v) |u|^2, >= 0
  double inflow_flux = 0.0;     // -int int_{Gamma-} (nu.v) |u|^2, >= 0
  double absorption = 0.0;      // 2 int sigma_t |u|^2
  double scattering = 0.0;      // 2 int sigma_s S(u) u
  double source = 0.0;          // 2 int f R u
  double residual = 0.0;        // signed E(T) - E(0) - rhs
  bool inflow_sign_consistent = true;
};

EnergyBalance energy_identity_residual(const AngularDensityField& field,
                                       const ProblemData& data, const PhaseSpace& ps);

}  // namespace rtstab
