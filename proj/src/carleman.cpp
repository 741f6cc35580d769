#include "rtstab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rtstab/errors.hpp"
#include "rtstab/transport.hpp"

namespace rtstab {

double weight_phi(Vec2 x, Vec2 v, double t, double beta) noexcept {
  return -beta * t + dot(v, x);
}

double weight_B(Vec2 v, double beta) {
  const double b = norm_sq(v) - beta;
  if (!(beta > 0.0) || !(b > 0.0)) {
    throw DomainError(fmt::format(
        "weight slope beta = {} must satisfy 0 < beta < |v|^2 = {}", beta, norm_sq(v)));
  }
  return b;
}

CarlemanConfig make_carleman_config(const SpatialMesh& mesh, const VelocitySet& vset,
                                    double horizon, double beta,
                                    std::optional<SRange> s_range) {
  const double t_min = min_observation_time(mesh, vset, beta);  // validates beta
  if (!(horizon > t_min)) {
    throw ObservationTimeError(fmt::format(
        "observation time T = {} is too short: need T > (max v.x - min v.x)/beta = {}",
        horizon, t_min));
  }
  const auto range = velocity_projection_range(mesh, vset);

  CarlemanConfig cfg;
  cfg.beta = beta;
  cfg.horizon = horizon;
  cfg.r_min = range.min;
  cfg.r_max = range.max;
  const double lower = range.max - beta * horizon;
  const double gap = range.min - lower;
  cfg.r0 = lower + gap / 3.0;
  cfg.r1 = range.min - gap / 3.0;
  cfg.mu = cfg.r1 - cfg.r0;
  cfg.delta = 0.9 * std::min({(cfg.r_min - cfg.r1) / beta,
                              (cfg.r0 - lower) / (2.0 * beta), horizon / 3.0});

  SRange sr;
  if (s_range) {
    sr = *s_range;
  } else {
    sr.s_min = 5.0 / (cfg.r_min - cfg.r0);
    sr.s_max = 4.0 * sr.s_min;
    sr.count = 8;
  }
  if (!(sr.s_min > 0.0) || sr.s_max < sr.s_min || sr.count < 1) {
    throw ConfigError(fmt::format("invalid s range [{}, {}] with {} points", sr.s_min,
                                  sr.s_max, sr.count));
  }
  cfg.s0 = sr.s_min;
  for (int k = 0; k < sr.count; ++k) {
    const double frac = sr.count == 1 ? 0.0 : static_cast<double>(k) / (sr.count - 1);
    cfg.s_grid.push_back(sr.s_min * std::pow(sr.s_max / sr.s_min, frac));
  }
  validate(cfg, vset);
  return cfg;
}

void validate(const CarlemanConfig& cfg, const VelocitySet& vset) {
  const double vmin_sq = vset.min_speed_sq();
  if (!(cfg.beta > 0.0) || !(cfg.beta < vmin_sq)) {
    throw ConfigError(fmt::format("beta = {} must satisfy 0 < beta < min|v|^2 = {}",
                                  cfg.beta, vmin_sq));
  }
  const double lower = cfg.r_max - cfg.beta * cfg.horizon;
  if (!(lower < cfg.r0 && cfg.r0 < cfg.r1 && cfg.r1 < cfg.r_min)) {
    throw ConfigError(fmt::format(
        "level ordering r_max - beta T < r0 < r1 < r_min fails: {} , {} , {} , {}", lower,
        cfg.r0, cfg.r1, cfg.r_min));
  }
  if (!(cfg.mu > 0.0)) throw ConfigError("mu = r1 - r0 must be positive");
  if (!(cfg.delta > 0.0) || !(2.0 * cfg.delta < cfg.horizon)) {
    throw ConfigError(fmt::format("delta = {} must satisfy 0 < 2 delta < T = {}",
                                  cfg.delta, cfg.horizon));
  }
  if (!(cfg.r_min - cfg.beta * cfg.delta > cfg.r1)) {
    throw ConfigError("cutoff: phi > r1 fails on [0, delta]");
  }
  if (!(cfg.r_max - cfg.beta * (cfg.horizon - 2.0 * cfg.delta) < cfg.r0)) {
    throw ConfigError("cutoff: phi < r0 fails on [T - 2 delta, T]");
  }
  if (cfg.s_grid.empty() ||
      !std::is_sorted(cfg.s_grid.begin(), cfg.s_grid.end()) || !(cfg.s_grid[0] > 0.0)) {
    throw ConfigError("s grid must be nonempty, positive and increasing");
  }
}

namespace {

double cutoff_tau(double t, const CarlemanConfig& cfg) {
  const double T = cfg.horizon;
  const double slack = 1e-9 * T;
  if (t < -slack || t > T + slack) {
    throw DomainError(fmt::format("cutoff evaluated at t = {} outside [0, {}]", t, T));
  }
  return (t - (T - 2.0 * cfg.delta)) / cfg.delta;
}

}  // namespace

double cutoff_chi(double t, const CarlemanConfig& cfg) {
  const double tau = cutoff_tau(t, cfg);
  if (tau <= 0.0) return 1.0;
  if (tau >= 1.0) return 0.0;
  return std::clamp(1.0 - tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau)), 0.0, 1.0);
}

double cutoff_chi_derivative(double t, const CarlemanConfig& cfg) {
  const double tau = cutoff_tau(t, cfg);
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  const double one_minus = 1.0 - tau;
  return -30.0 * tau * tau * one_minus * one_minus / cfg.delta;
}

WeightLevelScan scan_weight_levels(const PhaseSpace& ps, const CarlemanConfig& cfg,
                                   std::size_t time_samples) {
  std::vector<Vec2> points;
  for (std::size_t c = 0; c < ps.num_cells(); ++c) points.push_back(ps.mesh().cell_center(c));
  for (const auto& f : ps.mesh().boundary_faces()) points.push_back(f.center);
  for (const auto& corner : ps.mesh().corners()) points.push_back(corner);

  double p_min = std::numeric_limits<double>::infinity();
  double p_max = -p_min;
  for (const auto& v : ps.vset().ordinates) {
    for (const auto& x : points) {
      p_min = std::min(p_min, dot(v, x));
      p_max = std::max(p_max, dot(v, x));
    }
  }

  WeightLevelScan scan;
  scan.min_phi_early = std::numeric_limits<double>::infinity();
  scan.max_phi_late = -std::numeric_limits<double>::infinity();
  scan.min_phi_initial = p_min;
  const std::size_t n = std::max<std::size_t>(time_samples, 2);
  const double T = cfg.horizon;
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
    const double t_early = frac * cfg.delta;
    const double t_late = (T - 2.0 * cfg.delta) + frac * 2.0 * cfg.delta;
    scan.min_phi_early = std::min(scan.min_phi_early, p_min - cfg.beta * t_early);
    scan.max_phi_late = std::max(scan.max_phi_late, p_max - cfg.beta * t_late);
  }
  scan.early_ok = scan.min_phi_early > cfg.r1;
  scan.late_ok = scan.max_phi_late < cfg.r0;
  return scan;
}

AngularDensityField auxiliary_z(const AngularDensityField& field,
                                const CarlemanConfig& cfg) {
  const std::size_t nt = field.num_times();
  if (nt < 3) {
    throw InsufficientDataError(fmt::format(
        "auxiliary field needs at least 3 time levels (got {})", nt));
  }
  if (std::abs(field.final_time() - cfg.horizon) > 1e-9 * cfg.horizon) {
    throw ConfigError(fmt::format("field horizon {} differs from the weight horizon {}",
                                  field.final_time(), cfg.horizon));
  }
  const double dt = field.dt();
  const auto& traces = field.traces();
  AngularDensityField z(field.num_cells(), field.num_ordinates(), nt, dt,
                        traces.num_out(), traces.num_in());
  auto& zt = z.traces();
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    const double chi = cutoff_chi(field.time(k), cfg);
    const auto u0 = field.snapshot(k);
    const auto u1 = field.snapshot(k + 1);
    auto zk = z.snapshot(k);
    for (std::size_t s = 0; s < zk.size(); ++s) zk[s] = chi * (u1[s] - u0[s]) / dt;
    for (std::size_t e = 0; e < traces.num_out(); ++e) {
      zt.out(k)[e] = chi * (traces.out(k + 1)[e] - traces.out(k)[e]) / dt;
    }
    for (std::size_t e = 0; e < traces.num_in(); ++e) {
      zt.in(k)[e] = chi * (traces.in(k + 1)[e] - traces.in(k)[e]) / dt;
    }
  }
  return z;
}

std::optional<double> CarlemanReport::c_spread(double s_lo, double s_hi) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool any = false;
  for (const auto& t : terms) {
    if (t.s < s_lo * (1.0 - 1e-12) || t.s > s_hi * (1.0 + 1e-12)) continue;
    if (!t.c || !std::isfinite(*t.c) || !(*t.c > 0.0)) return std::nullopt;
    lo = std::min(lo, *t.c);
    hi = std::max(hi, *t.c);
    any = true;
  }
  if (!any) return std::nullopt;
  return hi / lo;
}

namespace {

CarlemanReport evaluate(const AngularDensityField& field, const CarlemanConfig& cfg,
                        const PhaseSpace& ps, const CoefficientField& sigma_t,
                        const CoefficientField* sigma_s, const PhaseKernel* kernel,
                        bool weighted_boundary, std::string lemma_id) {
  if (field.slice_size() != ps.slice_size()) {
    throw ConfigError("field does not match the phase space");
  }
  const std::size_t nt = field.num_times();
  if (nt < 2) throw InsufficientDataError("Carleman evaluation needs at least 2 time levels");
  if (std::abs(field.final_time() - cfg.horizon) > 1e-9 * cfg.horizon) {
    throw ConfigError(fmt::format("field horizon {} differs from the weight horizon {}",
                                  field.final_time(), cfg.horizon));
  }
  double terminal = 0.0;
  for (double v : field.snapshot(nt - 1)) terminal = std::max(terminal, std::abs(v));
  if (terminal > 1e-10) {
    throw PreconditionError(fmt::format(
        "the field must vanish at t = T (sup norm {} > 1e-10)", terminal));
  }

  const double dt = field.dt();
  const std::size_t n_slot = ps.slice_size();
  const std::size_t nord = ps.num_ordinates();
  const double vol = ps.mesh().cell_volume();
  const auto& w = ps.vset().weights;
  const auto& ords = ps.vset().ordinates;
  const auto& faces = ps.mesh().boundary_faces();
  const auto& gplus = ps.partition().gamma_plus;

  // v.x at cell centres and at outflow face centres.
  std::vector<double> proj(n_slot);
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    const Vec2 x = ps.mesh().cell_center(c);
    for (std::size_t j = 0; j < nord; ++j) proj[ps.slot(c, j)] = dot(ords[j], x);
  }
  std::vector<double> face_proj(gplus.size());
  for (std::size_t e = 0; e < gplus.size(); ++e) {
    face_proj[e] = dot(ords[gplus[e].ordinate], faces[gplus[e].face].center);
  }
  const double proj_max =
      std::max(*std::max_element(proj.begin(), proj.end()),
               face_proj.empty() ? -std::numeric_limits<double>::infinity()
                                 : *std::max_element(face_proj.begin(), face_proj.end()));

  // Squared residual of the discrete operator: (u^{n+1} - Step(u^n)) / dt.
  const TransportStep step(ps, sigma_t, sigma_s, kernel, dt);
  std::vector<double> residual_sq((nt - 1) * n_slot);
  std::vector<double> stepped(n_slot);
  for (std::size_t n = 0; n + 1 < nt; ++n) {
    step.advance(field.snapshot(n), field.traces().in(n), {}, stepped);
    const auto next = field.snapshot(n + 1);
    for (std::size_t s = 0; s < n_slot; ++s) {
      const double r = (next[s] - stepped[s]) / dt;
      residual_sq[n * n_slot + s] = r * r;
    }
  }

  CarlemanReport report;
  report.lemma_id = std::move(lemma_id);
  std::vector<double> ex(n_slot);
  std::vector<double> ex_face(gplus.size());
  for (double s : cfg.s_grid) {
    CarlemanTerms t;
    t.s = s;
    t.log_shift = 2.0 * s * proj_max;
    for (std::size_t i = 0; i < n_slot; ++i) {
      ex[i] = std::exp(2.0 * s * proj[i] - t.log_shift) * w[i % nord] * vol;
    }
    for (std::size_t e = 0; e < gplus.size(); ++e) {
      double factor = faces[gplus[e].face].area * w[gplus[e].ordinate];
      if (weighted_boundary) factor *= s * gplus[e].nu_dot_v;
      ex_face[e] = std::exp(2.0 * s * face_proj[e] - t.log_shift) * factor;
    }

    const auto u0 = field.snapshot(0);
    double initial = 0.0;
    for (std::size_t i = 0; i < n_slot; ++i) initial += u0[i] * u0[i] * ex[i];
    t.lhs_initial = s * initial;

    double bulk = 0.0;
    double source = 0.0;
    double boundary = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double decay = std::exp(-2.0 * s * cfg.beta * field.time(k));
      if (decay == 0.0) break;
      const auto u = field.snapshot(k);
      double acc = 0.0;
      for (std::size_t i = 0; i < n_slot; ++i) acc += u[i] * u[i] * ex[i];
      bulk += trapezoid_weight(k, nt, dt) * decay * acc;

      const auto out = field.traces().out(k);
      double bacc = 0.0;
      for (std::size_t e = 0; e < out.size(); ++e) bacc += out[e] * out[e] * ex_face[e];
      boundary += trapezoid_weight(k, nt, dt) * decay * bacc;

      if (k + 1 < nt) {
        const double* r2 = residual_sq.data() + k * n_slot;
        double racc = 0.0;
        for (std::size_t i = 0; i < n_slot; ++i) racc += r2[i] * ex[i];
        source += dt * decay * racc;
      }
    }
    t.lhs_bulk = s * s * bulk;
    t.rhs_source = source;
    t.rhs_boundary = boundary;
    const double lhs = t.lhs_initial + t.lhs_bulk;
    const double rhs = t.rhs_source + t.rhs_boundary;
    if (rhs > 0.0) t.c = lhs / rhs;
    report.terms.push_back(t);
  }
  return report;
}

}  // namespace

CarlemanReport evaluate_carleman_scattering(const AngularDensityField& field,
                                            const CarlemanConfig& cfg,
                                            const PhaseSpace& ps,
                                            const CoefficientField& sigma_t,
                                            const CoefficientField& sigma_s,
                                            const PhaseKernel& kernel) {
  return evaluate(field, cfg, ps, sigma_t, &sigma_s, &kernel, false,
                  "carleman_with_scattering");
}

CarlemanReport evaluate_carleman_streaming(const AngularDensityField& field,
                                           const CarlemanConfig& cfg,
                                           const PhaseSpace& ps,
                                           const CoefficientField& sigma_t) {
  return evaluate(field, cfg, ps, sigma_t, nullptr, nullptr, true,
                  "carleman_streaming");
}

std::pair<CarlemanReport, CarlemanReport> evaluate_carleman_pair(
    const AngularDensityField& field, const CarlemanConfig& cfg, const PhaseSpace& ps,
    const CoefficientField& sigma_t, const CoefficientField& sigma_s,
    const PhaseKernel& kernel) {
  return {evaluate_carleman_streaming(field, cfg, ps, sigma_t),
          evaluate_carleman_scattering(field, cfg, ps, sigma_t, sigma_s, kernel)};
}

}  // namespace rtstab
