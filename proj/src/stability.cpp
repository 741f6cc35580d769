#include "rtstab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "rtstab/errors.hpp"

namespace rtstab {

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::sigma_t: return "sigma_t";
    case ExperimentKind::sigma_s: return "sigma_s";
    case ExperimentKind::linearized: return "linearized";
  }
  return "linearized";
}

double measurement_norm(const MeasurementTrace& trace, bool weighted) {
  if (weighted && trace.side != TraceSide::gamma_plus) {
    throw DomainError(fmt::format(
        "the nu.v-weighted norm is defined on the outflow boundary only (side {})",
        to_string(trace.side)));
  }
  return std::sqrt(boundary_integral(trace, weighted));
}

namespace {

double sup_abs(const AngularDensityField& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

void require_bounded(const CoefficientField& f, const AdmissibilityBounds& bounds,
                     const char* name) {
  if (f.min_value() < 0.0) {
    throw HypothesisViolation(fmt::format("{} must be nonnegative (min {})", name,
                                          f.min_value()));
  }
  if (f.sup_norm() > bounds.M) {
    throw HypothesisViolation(fmt::format("{} exceeds the admissibility bound M = {} ({})",
                                          name, bounds.M, f.sup_norm()));
  }
}

void require_nonlinear_hypotheses(const ProblemData& base, const PhaseSpace& ps) {
  const double a_min = base.initial.min_value();
  if (!(a_min > 0.0)) {
    throw HypothesisViolation(fmt::format(
        "initial data must be strictly positive on the closed grid (min a = {})", a_min));
  }
  const double t_min = min_observation_time(ps.mesh(), ps.vset());
  if (!(base.horizon > t_min)) {
    throw ObservationTimeError(fmt::format(
        "observation time T = {} is too short: need T > (max v.x - min v.x)/min|v|^2 = {}",
        base.horizon, t_min));
  }
}

StabilityReport finish(StabilityReport r, const BoundaryTraces& diff,
                       const PhaseSpace& ps) {
  const auto trace = time_derivative_trace(diff, ps, r.side);
  r.measurement_norm = measurement_norm(trace, r.weighted);
  if (r.coefficient_diff_norm == 0.0) {
    r.degenerate = true;
    r.notes.emplace_back("zero coefficient difference: degenerate pair, no ratio");
  } else if (r.measurement_norm > 0.0) {
    r.ratio = r.coefficient_diff_norm / r.measurement_norm;
  } else {
    r.notes.emplace_back("vanishing measurement for a nonzero coefficient difference");
  }
  return r;
}

}  // namespace

StabilityReport run_sigma_t_experiment(const ProblemData& base,
                                       const CoefficientField& perturbation,
                                       const PhaseSpace& ps, double dt,
                                       const ExperimentOptions& options) {
  require_nonlinear_hypotheses(base, ps);
  ProblemData second = base;
  second.sigma_t = base.sigma_t + perturbation;
  require_bounded(base.sigma_t, options.bounds, "sigma_t (first)");
  require_bounded(second.sigma_t, options.bounds, "sigma_t (second)");
  require_bounded(base.sigma_s, options.bounds, "sigma_s");

  const auto u1 = solve_forward(base, ps, dt, options.solver);
  const auto u2 = solve_forward(second, ps, dt, options.solver);

  StabilityReport r;
  r.experiment_id = options.id;
  r.kind = ExperimentKind::sigma_t;
  r.side = TraceSide::gamma_plus;
  r.weighted = true;
  r.amplitude = options.amplitude;
  r.coefficient_diff_norm = perturbation.l2_norm(ps);
  r.solution_scale = std::max(sup_abs(u1), sup_abs(u2));
  return finish(std::move(r), u1.traces() - u2.traces(), ps);
}

StabilityReport run_sigma_s_experiment(const ProblemData& base,
                                       const CoefficientField& perturbation,
                                       const PhaseSpace& ps, double dt,
                                       const ExperimentOptions& options) {
  require_nonlinear_hypotheses(base, ps);
  ProblemData second = base;
  second.sigma_s = base.sigma_s + perturbation;
  require_bounded(base.sigma_t, options.bounds, "sigma_t");
  require_bounded(base.sigma_s, options.bounds, "sigma_s (first)");
  require_bounded(second.sigma_s, options.bounds, "sigma_s (second)");

  const auto u1 = solve_forward(base, ps, dt, options.solver);
  const auto u2 = solve_forward(second, ps, dt, options.solver);

  StabilityReport r;
  r.experiment_id = options.id;
  r.kind = ExperimentKind::sigma_s;
  r.side = TraceSide::gamma_plus;
  r.weighted = true;
  r.amplitude = options.amplitude;
  r.coefficient_diff_norm = perturbation.l2_norm(ps);
  r.solution_scale = std::max(sup_abs(u1), sup_abs(u2));
  return finish(std::move(r), u1.traces() - u2.traces(), ps);
}

StabilityReport run_linearized_experiment(const CoefficientField& f,
                                          const SourceFactor& R,
                                          const CoefficientField& sigma_t,
                                          const CoefficientField& sigma_s,
                                          const PhaseKernel& phase,
                                          const PhaseSpace& ps, double horizon,
                                          double dt, TraceSide side, double beta,
                                          const ExperimentOptions& options,
                                          InflowFn inflow) {
  if (side == TraceSide::gamma_minus) {
    throw ConfigError("linearised experiments measure on gamma_plus or the full boundary");
  }
  const double r_min = R.min_initial();
  if (!(r_min > 0.0)) {
    throw HypothesisViolation(fmt::format(
        "source factor must be strictly positive at t = 0 (min R(x, v, 0) = {})", r_min));
  }
  const double t_min = min_observation_time(ps.mesh(), ps.vset(), beta);
  if (!(horizon > t_min)) {
    throw ObservationTimeError(fmt::format(
        "observation time T = {} is too short: need T > (max v.x - min v.x)/beta = {}",
        horizon, t_min));
  }
  const bool weighted = side == TraceSide::gamma_plus;
  if (weighted && inflow) {
    const std::size_t n = step_count(horizon, dt);
    const double h = horizon / static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t e = 0; e < ps.partition().gamma_minus.size(); ++e) {
        if (inflow(e, static_cast<double>(k) * h) != 0.0) {
          throw ConfigError(
              "the weighted outflow estimate requires zero inflow on gamma_minus");
        }
      }
    }
  }
  const auto u = solve_linearized(f, R, sigma_t, sigma_s, phase, ps, horizon, dt,
                                  options.solver, std::move(inflow));

  StabilityReport r;
  r.experiment_id = options.id;
  r.kind = ExperimentKind::linearized;
  r.side = side;
  r.weighted = weighted;
  r.amplitude = options.amplitude;
  r.coefficient_diff_norm = f.l2_norm(ps);
  r.solution_scale = sup_abs(u);
  return finish(std::move(r), u.traces(), ps);
}

HolderFit fit_holder_exponent(std::span<const StabilityReport> reports) {
  if (reports.size() < 4) {
    throw InsufficientDataError(fmt::format(
        "Hoelder fit needs at least 4 reports (got {})", reports.size()));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : reports) {
    if (r.degenerate || !(r.coefficient_diff_norm > 0.0) || !(r.measurement_norm > 0.0)) {
      throw DomainError(fmt::format("report '{}' is degenerate and cannot enter the fit",
                                    r.experiment_id));
    }
    xs.push_back(2.0 * std::log(r.measurement_norm));
    ys.push_back(2.0 * std::log(r.coefficient_diff_norm));
  }
  std::vector<double> sorted = ys;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("Hoelder fit needs reports at distinct amplitudes");
  }
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  // two decades of the measurement norm = 4 ln(10) in log(norm^2)
  if (*hi - *lo < 4.0 * std::numbers::ln10 * (1.0 - 1e-9)) {
    throw InsufficientDataError(
        "Hoelder fit needs measurement norms spanning at least two decades");
  }

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  HolderFit fit;
  fit.count = xs.size();
  fit.theta = sxy / sxx;
  fit.intercept = my - fit.theta * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.theta * xs[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

EnsembleSummary verify_both_sided(std::span<const StabilityReport> reports,
                                  double spread_threshold) {
  EnsembleSummary s;
  s.threshold = spread_threshold;
  if (reports.empty()) {
    throw InsufficientDataError("ensemble is empty; need at least 5 nondegenerate reports");
  }
  s.kind = reports.front().kind;
  const TraceSide side = reports.front().side;
  s.rho_min = std::numeric_limits<double>::infinity();
  s.rho_max = 0.0;
  for (const auto& r : reports) {
    if (r.kind != s.kind || r.side != side) {
      throw ConfigError(
          "ensemble mixes experiment kinds or measurement sides; ratios are not comparable");
    }
    if (r.degenerate || !r.ratio || !std::isfinite(*r.ratio)) continue;
    ++s.count;
    s.rho_min = std::min(s.rho_min, *r.ratio);
    s.rho_max = std::max(s.rho_max, *r.ratio);
  }
  if (s.count < 5) {
    throw InsufficientDataError(fmt::format(
        "need at least 5 nondegenerate reports (got {})", s.count));
  }
  s.spread = s.rho_max / s.rho_min;
  s.pass = s.rho_min > 0.0 && std::isfinite(s.spread) && s.spread <= spread_threshold;
  return s;
}

namespace {

struct BumpDraw {
  Vec2 center;
  double width;
};

BumpDraw draw_bump(std::mt19937_64& rng, const PhaseSpace& ps) {
  std::uniform_real_distribution<double> pos(0.25, 0.75);
  std::uniform_real_distribution<double> wid(0.08, 0.15);
  const Vec2 o = ps.mesh().origin();
  const Vec2 e = ps.mesh().extents();
  BumpDraw b;
  b.center = {o.x + pos(rng) * e.x, o.y + pos(rng) * e.y};
  b.width = wid(rng) * std::min(e.x, e.y);
  return b;
}

}  // namespace

CoefficientField random_perturbation(std::mt19937_64& rng, const PhaseSpace& ps,
                                     double amplitude, FieldLabel label) {
  const auto b = draw_bump(rng, ps);
  return gaussian_bump(ps, 0.0, amplitude, b.center, b.width, label);
}

CoefficientField random_source(std::mt19937_64& rng, const PhaseSpace& ps) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CoefficientField f(ps.num_cells(), ps.num_ordinates(), FieldLabel::source);
  for (int k = 0; k < 2; ++k) {
    const auto b = draw_bump(rng, ps);
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double kappa = 0.5 * unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const double inv = 1.0 / (2.0 * b.width * b.width);
    f += CoefficientField::from_function(ps, FieldLabel::source, [&](Vec2 x, Vec2 v) {
      const double dx = x.x - b.center.x;
      const double dy = x.y - b.center.y;
      const double angle = std::atan2(v.y, v.x);
      return sign * std::exp(-(dx * dx + dy * dy) * inv) *
             (1.0 + kappa * std::cos(angle - phase));
    });
  }
  return f;
}

std::vector<StabilityReport> run_jobs(
    std::size_t count, int threads,
    const std::function<StabilityReport(std::size_t)>& job) {
  std::vector<StabilityReport> results(count);
  std::vector<std::exception_ptr> errors(count);
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            results[i] = job(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace rtstab
