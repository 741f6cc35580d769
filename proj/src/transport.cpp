#include "rtstab/transport.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rtstab/errors.hpp"

namespace rtstab {

InflowFn zero_inflow() {
  return [](std::size_t, double) { return 0.0; };
}

InflowFn constant_inflow(double value) {
  return [value](std::size_t, double) { return value; };
}

InflowFn inflow_from_initial(const CoefficientField& initial, const PhaseSpace& ps) {
  const auto& faces = ps.mesh().boundary_faces();
  std::vector<double> values;
  values.reserve(ps.partition().gamma_minus.size());
  for (const auto& e : ps.partition().gamma_minus) {
    values.push_back(initial.at(faces[e.face].cell, e.ordinate));
  }
  return [values = std::move(values)](std::size_t entry, double) { return values[entry]; };
}

double max_stable_dt(const PhaseSpace& ps, double cfl_factor) {
  if (!(cfl_factor > 0.0) || cfl_factor > 1.0) {
    throw ConfigError(fmt::format("cfl_factor must lie in (0, 1] (got {})", cfl_factor));
  }
  return cfl_factor / ps.max_courant_rate();
}

std::size_t step_count(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw ConfigError(fmt::format("horizon and dt must be positive (T = {}, dt = {})",
                                  horizon, dt));
  }
  const double ratio = horizon / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
  return std::max<std::size_t>(n, 1);
}

namespace {

// (1 - e^{-z}) / z, continuous at z = 0.
double phi1(double z) {
  if (std::abs(z) < 1e-300) return 1.0;
  return -std::expm1(-z) / z;
}

void check_shape(const CoefficientField& f, const PhaseSpace& ps, const char* name) {
  if (f.num_cells() != ps.num_cells() || f.num_ordinates() != ps.num_ordinates()) {
    throw ConfigError(fmt::format("{} does not match the phase space ({} x {} expected)",
                                  name, ps.num_cells(), ps.num_ordinates()));
  }
}

void check_inflow_size(std::span<const double> inflow, const PhaseSpace& ps) {
  if (inflow.size() != ps.partition().gamma_minus.size()) {
    throw IncompleteDataError(fmt::format(
        "inflow data has {} entries but the inflow boundary has {}", inflow.size(),
        ps.partition().gamma_minus.size()));
  }
}

double upwind_value(const PhaseSpace::Upwind& up, std::span<const double> u,
                    std::span<const double> inflow, std::size_t nord, std::size_t j) {
  if (up.cell >= 0) return u[static_cast<std::size_t>(up.cell) * nord + j];
  if (up.ghost >= 0) return inflow[static_cast<std::size_t>(up.ghost)];
  return 0.0;
}

}  // namespace

TransportStep::TransportStep(const PhaseSpace& ps, const CoefficientField& sigma_t,
                             const CoefficientField* sigma_s, const PhaseKernel* kernel,
                             double dt)
    : ps_(&ps), sigma_s_(sigma_s), kernel_(kernel), dt_(dt) {
  check_shape(sigma_t, ps, "sigma_t");
  if (sigma_s_ != nullptr) {
    check_shape(*sigma_s_, ps, "sigma_s");
    if (sigma_s_->is_zero()) {
      sigma_s_ = nullptr;
    } else if (kernel_ == nullptr || kernel_->num_cells() != ps.num_cells() ||
               kernel_->num_ordinates() != ps.num_ordinates()) {
      throw ConfigError("phase kernel missing or does not match the phase space");
    }
  }
  decay_.resize(ps.slice_size());
  gain_.resize(ps.slice_size());
  for (std::size_t s = 0; s < ps.slice_size(); ++s) {
    const double z = sigma_t.values()[s] * dt;
    decay_[s] = std::exp(-z);
    gain_[s] = dt * phi1(z);
  }
  const auto& faces = ps.mesh().boundary_faces();
  out_slot_.reserve(ps.partition().gamma_plus.size());
  for (const auto& e : ps.partition().gamma_plus) {
    out_slot_.push_back(ps.slot(faces[e.face].cell, e.ordinate));
  }
}

void TransportStep::advance(std::span<const double> u, std::span<const double> inflow,
                            std::span<const double> source,
                            std::span<double> next) const {
  const PhaseSpace& ps = *ps_;
  check_inflow_size(inflow, ps);
  const std::size_t nord = ps.num_ordinates();
  const auto& w = ps.vset().weights;
  const bool has_source = !source.empty();

  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    for (std::size_t j = 0; j < nord; ++j) {
      const std::size_t s = c * nord + j;
      const auto& ux = ps.upwind_x(c, j);
      const auto& uy = ps.upwind_y(c, j);
      const double lx = dt_ * ux.rate;
      const double ly = dt_ * uy.rate;
      // Convex form of u - dt (rate_x (u - u_x) + rate_y (u - u_y)).
      const double star = (1.0 - lx - ly) * u[s] +
                          lx * upwind_value(ux, u, inflow, nord, j) +
                          ly * upwind_value(uy, u, inflow, nord, j);
      double rhs = has_source ? source[s] : 0.0;
      if (sigma_s_ != nullptr) {
        const auto row = kernel_->row(c, j);
        const double* uc = u.data() + c * nord;
        double scatter = 0.0;
        for (std::size_t jp = 0; jp < nord; ++jp) scatter += row[jp] * uc[jp] * w[jp];
        rhs += sigma_s_->values()[s] * scatter;
      }
      next[s] = decay_[s] * star + gain_[s] * rhs;
    }
  }
}

void TransportStep::record_outflow(std::span<const double> u, std::span<double> out) const {
  for (std::size_t e = 0; e < out_slot_.size(); ++e) out[e] = u[out_slot_[e]];
}

std::vector<double> apply_streaming(std::span<const double> u, const PhaseSpace& ps,
                                    std::span<const double> inflow) {
  if (u.size() != ps.slice_size()) {
    throw ConfigError("field slice does not match the phase space");
  }
  check_inflow_size(inflow, ps);
  const std::size_t nord = ps.num_ordinates();
  std::vector<double> out(u.size());
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    for (std::size_t j = 0; j < nord; ++j) {
      const std::size_t s = c * nord + j;
      const auto& ux = ps.upwind_x(c, j);
      const auto& uy = ps.upwind_y(c, j);
      out[s] = ux.rate * (u[s] - upwind_value(ux, u, inflow, nord, j)) +
               uy.rate * (u[s] - upwind_value(uy, u, inflow, nord, j));
    }
  }
  return out;
}

std::vector<double> scattering_integral(std::span<const double> u,
                                        const PhaseKernel& kernel,
                                        const VelocitySet& vset) {
  const std::size_t nord = vset.size();
  if (kernel.num_ordinates() != nord || u.size() != kernel.num_cells() * nord) {
    throw ConfigError("scattering integral: dimensions do not agree");
  }
  std::vector<double> out(u.size());
  for (std::size_t c = 0; c < kernel.num_cells(); ++c) {
    const double* uc = u.data() + c * nord;
    for (std::size_t j = 0; j < nord; ++j) {
      const auto row = kernel.row(c, j);
      double s = 0.0;
      for (std::size_t jp = 0; jp < nord; ++jp) s += row[jp] * uc[jp] * vset.weights[jp];
      out[c * nord + j] = s;
    }
  }
  return out;
}

AngularDensityField solve_forward(const ProblemData& data, const PhaseSpace& ps,
                                  double dt, const SolverOptions& options) {
  check_shape(data.initial, ps, "initial data");
  check_shape(data.sigma_t, ps, "sigma_t");
  check_shape(data.sigma_s, ps, "sigma_s");
  if (data.sigma_t.min_value() < 0.0 || data.sigma_s.min_value() < 0.0) {
    throw DomainError("cross sections must be nonnegative");
  }
  const double dt_max = max_stable_dt(ps, options.cfl_factor);
  if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12)) {
    throw StabilityError(fmt::format(
        "dt = {} violates the CFL bound {} (cfl_factor {}); refusing to run", dt, dt_max,
        options.cfl_factor));
  }
  const std::size_t nsteps = step_count(data.horizon, dt);
  const double h = data.horizon / static_cast<double>(nsteps);

  const bool has_source = data.source_f.has_value();
  if (has_source) {
    check_shape(*data.source_f, ps, "source f");
    if (!data.source_R) throw ConfigError("source f given without source factor R");
    if (data.source_R->slice_size() != ps.slice_size()) {
      throw ConfigError("source factor R does not match the phase space");
    }
    if (data.source_R->time_dependent() && data.source_R->num_times() < nsteps) {
      throw InsufficientDataError(fmt::format(
          "source factor has {} time levels, the solve needs {}",
          data.source_R->num_times(), nsteps));
    }
  }

  const auto& part = ps.partition();
  AngularDensityField field(ps.num_cells(), ps.num_ordinates(), nsteps + 1, h,
                            part.gamma_plus.size(), part.gamma_minus.size());
  std::copy(data.initial.values().begin(), data.initial.values().end(),
            field.snapshot(0).begin());

  const TransportStep step(ps, data.sigma_t, &data.sigma_s, &data.phase, h);
  auto& traces = field.traces();
  std::vector<double> source;
  if (has_source) source.resize(ps.slice_size());

  for (std::size_t k = 0; k <= nsteps; ++k) {
    const double t = field.time(k);
    auto in = traces.in(k);
    if (data.inflow) {
      for (std::size_t e = 0; e < in.size(); ++e) in[e] = data.inflow(e, t);
    }
    step.record_outflow(field.snapshot(k), traces.out(k));
    if (k == nsteps) break;

    if (has_source) {
      const auto f = data.source_f->values();
      const auto r = data.source_R->slice(k);
      for (std::size_t s = 0; s < source.size(); ++s) source[s] = f[s] * r[s];
    }
    auto next = field.snapshot(k + 1);
    step.advance(field.snapshot(k), in, source, next);
    for (double v : next) {
      if (!std::isfinite(v)) {
        throw DivergenceError(fmt::format("non-finite value after step {}", k + 1), k + 1);
      }
    }
  }
  return field;
}

AngularDensityField solve_linearized(const CoefficientField& f, const SourceFactor& R,
                                     const CoefficientField& sigma_t,
                                     const CoefficientField& sigma_s,
                                     const PhaseKernel& phase, const PhaseSpace& ps,
                                     double horizon, double dt,
                                     const SolverOptions& options, InflowFn inflow) {
  ProblemData data;
  data.initial = CoefficientField(ps.num_cells(), ps.num_ordinates(), FieldLabel::other);
  data.inflow = std::move(inflow);
  data.sigma_t = sigma_t;
  data.sigma_s = sigma_s;
  data.phase = phase;
  data.horizon = horizon;
  data.source_f = f;
  data.source_R = R;
  return solve_forward(data, ps, dt, options);
}

std::string_view to_string(TraceSide side) noexcept {
  switch (side) {
    case TraceSide::gamma_plus: return "gamma_plus";
    case TraceSide::gamma_minus: return "gamma_minus";
    case TraceSide::full: return "full";
  }
  return "full";
}

MeasurementTrace time_derivative_trace(const BoundaryTraces& traces,
                                       const PhaseSpace& ps, TraceSide side) {
  const std::size_t nt = traces.num_times();
  if (nt < 2) {
    throw InsufficientDataError(fmt::format(
        "time derivative needs at least 2 time levels (got {})", nt));
  }
  const auto& part = ps.partition();
  if (traces.num_out() != part.gamma_plus.size() ||
      traces.num_in() != part.gamma_minus.size()) {
    throw ConfigError("boundary traces do not match the boundary partition");
  }
  const auto& faces = ps.mesh().boundary_faces();
  const auto& w = ps.vset().weights;
  const double dt = traces.dt();

  MeasurementTrace m;
  m.side = side;
  m.dt = dt;
  m.num_times = nt;

  auto append = [&](const std::vector<BoundaryEntry>& entries, bool outflow) {
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& be = entries[e];
      m.entries.push_back({be.face, be.ordinate, be.nu_dot_v, faces[be.face].area,
                           w[be.ordinate]});
      auto value = [&](std::size_t k) {
        return outflow ? traces.out(k)[e] : traces.in(k)[e];
      };
      for (std::size_t k = 0; k < nt; ++k) {
        double d;
        if (k == 0) d = (value(1) - value(0)) / dt;
        else if (k + 1 == nt) d = (value(k) - value(k - 1)) / dt;
        else d = (value(k + 1) - value(k - 1)) / (2.0 * dt);
        m.derivative.push_back(d);
      }
    }
  };
  if (side != TraceSide::gamma_minus) append(part.gamma_plus, true);
  if (side != TraceSide::gamma_plus) append(part.gamma_minus, false);
  return m;
}

MeasurementTrace time_derivative_trace(const AngularDensityField& field,
                                       const PhaseSpace& ps, TraceSide side) {
  return time_derivative_trace(field.traces(), ps, side);
}

double boundary_integral(const MeasurementTrace& trace, bool weighted) {
  double sum = 0.0;
  for (std::size_t e = 0; e < trace.entries.size(); ++e) {
    const auto& entry = trace.entries[e];
    const double factor = (weighted ? entry.nu_dot_v : 1.0) * entry.area * entry.weight;
    double acc = 0.0;
    for (std::size_t k = 0; k < trace.num_times; ++k) {
      const double d = trace.at(e, k);
      acc += trapezoid_weight(k, trace.num_times, trace.dt) * d * d;
    }
    sum += factor * acc;
  }
  return sum;
}

}  // namespace rtstab
