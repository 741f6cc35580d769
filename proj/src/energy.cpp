#include "rtstab/energy.hpp"

#include <algorithm>
#include <cmath>

#include "rtstab/errors.hpp"

namespace rtstab {

namespace {

double weighted_sq(std::span<const double> u, const PhaseSpace& ps) {
  const auto& w = ps.vset().weights;
  const std::size_t nord = ps.num_ordinates();
  double sum = 0.0;
  for (std::size_t s = 0; s < u.size(); ++s) sum += u[s] * u[s] * w[s % nord];
  return sum * ps.mesh().cell_volume();
}

std::span<const double> source_slice(const SourceFactor& R, std::size_t k) {
  if (!R.time_dependent()) return R.slice(0);
  return R.slice(std::min(k, R.num_times() - 1));
}

// ||f R||^2 over Omega x V x (0, T).
double source_norm_sq(const ProblemData& data, const PhaseSpace& ps, std::size_t nt,
                      double dt) {
  if (!data.source_f || !data.source_R) return 0.0;
  const auto f = data.source_f->values();
  std::vector<double> q(f.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto r = source_slice(*data.source_R, k);
    for (std::size_t s = 0; s < q.size(); ++s) q[s] = f[s] * r[s];
    sum += trapezoid_weight(k, nt, dt) * weighted_sq(q, ps);
  }
  return sum;
}

}  // namespace

EnergyTrace energy(const AngularDensityField& field, const PhaseSpace& ps) {
  if (field.slice_size() != ps.slice_size()) {
    throw ConfigError("field does not match the phase space");
  }
  EnergyTrace e;
  e.time.reserve(field.num_times());
  e.energy.reserve(field.num_times());
  for (std::size_t k = 0; k < field.num_times(); ++k) {
    e.time.push_back(field.time(k));
    e.energy.push_back(weighted_sq(field.snapshot(k), ps));
  }
  return e;
}

InequalityReport verify_gronwall_bound(const AngularDensityField& field,
                                       const ProblemData& data, const PhaseSpace& ps) {
  const EnergyTrace e = energy(field, ps);
  const std::size_t nt = field.num_times();
  const double dt = field.dt();

  const auto& faces = ps.mesh().boundary_faces();
  const auto& part = ps.partition();
  const auto& w = ps.vset().weights;
  double inflow = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto g = field.traces().in(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& entry = part.gamma_minus[i];
      acc += g[i] * g[i] * faces[entry.face].area * w[entry.ordinate];
    }
    inflow += trapezoid_weight(k, nt, dt) * acc;
  }
  const double src = source_norm_sq(data, ps, nt, dt);

  InequalityReport r;
  r.inequality_id = "gronwall_energy_bound";
  r.rhs_components = {{"energy_initial", e.energy.front()},
                      {"inflow_integral", inflow},
                      {"source_norm_sq", src}};
  const auto it = std::max_element(e.energy.begin(), e.energy.end());
  r.lhs = *it;
  r.argmax_t = e.time[static_cast<std::size_t>(it - e.energy.begin())];
  const double rhs = e.energy.front() + inflow + src;
  if (rhs > 0.0) {
    r.c_fit = r.lhs / rhs;
  } else if (r.lhs > 0.0) {
    r.violation = true;
    r.notes.emplace_back("energy is positive while every right-hand side term vanishes");
  } else {
    r.applicable = false;
  }
  return r;
}

InequalityReport verify_outflow_bound(const AngularDensityField& field,
                                      const PhaseSpace& ps, double f_norm) {
  const auto out = time_derivative_trace(field, ps, TraceSide::gamma_plus);
  const auto in = time_derivative_trace(field, ps, TraceSide::gamma_minus);
  const double lhs = boundary_integral(out, false);
  const double inflow = boundary_integral(in, false);
  const double f_sq = f_norm * f_norm;

  InequalityReport r;
  r.inequality_id = "outflow_time_derivative_bound";
  r.lhs = lhs;
  r.rhs_components = {{"source_norm_sq", f_sq}, {"inflow_dt_integral", inflow}};
  r.argmax_t = field.final_time();
  const double rhs = f_sq + inflow;
  if (rhs > 0.0) {
    r.c_fit = lhs / rhs;
  } else if (lhs > 0.0) {
    r.violation = true;
    r.notes.emplace_back("outflow derivative is nonzero while the data vanish");
  } else {
    r.applicable = false;
  }
  return r;
}

EnergyBalance energy_identity_residual(const AngularDensityField& field,
                                       const ProblemData& data, const PhaseSpace& ps) {
  if (field.slice_size() != ps.slice_size()) {
    throw ConfigError("field does not match the phase space");
  }
  const std::size_t nt = field.num_times();
  if (nt < 2) throw InsufficientDataError("energy balance needs at least 2 time levels");
  const double dt = field.dt();
  const double vol = ps.mesh().cell_volume();
  const auto& w = ps.vset().weights;
  const std::size_t nord = ps.num_ordinates();
  const auto& faces = ps.mesh().boundary_faces();
  const auto& part = ps.partition();
  const bool scatter = !data.sigma_s.is_zero();
  const bool has_source = data.source_f && data.source_R;

  EnergyBalance b;
  for (const auto& e : part.gamma_minus) {
    if (!(e.nu_dot_v < 0.0)) b.inflow_sign_consistent = false;
  }

  std::vector<double> s_u;
  for (std::size_t k = 0; k < nt; ++k) {
    const double tw = trapezoid_weight(k, nt, dt);
    const auto u = field.snapshot(k);

    double out_flux = 0.0;
    const auto uo = field.traces().out(k);
    for (std::size_t i = 0; i < uo.size(); ++i) {
      const auto& e = part.gamma_plus[i];
      out_flux += e.nu_dot_v * uo[i] * uo[i] * faces[e.face].area * w[e.ordinate];
    }
    double in_flux = 0.0;
    const auto ui = field.traces().in(k);
    for (std::size_t i = 0; i < ui.size(); ++i) {
      const auto& e = part.gamma_minus[i];
      in_flux -= e.nu_dot_v * ui[i] * ui[i] * faces[e.face].area * w[e.ordinate];
    }

    double absorb = 0.0;
    for (std::size_t s = 0; s < u.size(); ++s) {
      absorb += data.sigma_t.values()[s] * u[s] * u[s] * w[s % nord];
    }
    double gain = 0.0;
    if (scatter) {
      s_u = scattering_integral(u, data.phase, ps.vset());
      for (std::size_t s = 0; s < u.size(); ++s) {
        gain += data.sigma_s.values()[s] * s_u[s] * u[s] * w[s % nord];
      }
    }
    double src = 0.0;
    if (has_source) {
      const auto f = data.source_f->values();
      const auto r = source_slice(*data.source_R, k);
      for (std::size_t s = 0; s < u.size(); ++s) src += f[s] * r[s] * u[s] * w[s % nord];
    }

    b.outflow_flux += tw * out_flux;
    b.inflow_flux += tw * in_flux;
    b.absorption += tw * 2.0 * absorb * vol;
    b.scattering += tw * 2.0 * gain * vol;
    b.source += tw * 2.0 * src * vol;
  }

  b.energy_initial = weighted_sq(field.snapshot(0), ps);
  b.energy_final = weighted_sq(field.snapshot(nt - 1), ps);
  const double rhs =
      -b.outflow_flux + b.inflow_flux - b.absorption + b.scattering + b.source;
  b.residual = (b.energy_final - b.energy_initial) - rhs;
  return b;
}

}  // namespace rtstab
