// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rtstab/carleman.hpp"
#include "rtstab/config.hpp"
#include "rtstab/energy.hpp"
#include "rtstab/errors.hpp"
#include "rtstab/run.hpp"
#include "rtstab/stability.hpp"
#include "rtstab/transport.hpp"

using namespace rtstab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

PhaseSpace unit_square(int n, int n_angles = 8) {
  DomainSpec d;
  d.cells = {n, n};
  return PhaseSpace(SpatialMesh::build(d), build_velocity_set(1.0, 1.0, n_angles, 1));
}

double rel_change(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. Free streaming against the characteristics solution a(x - v t, v).
Verdict free_streaming_convergence() {
  const Vec2 c{0.5, 0.5};
  const double w = 0.1;
  const double T = 0.2;
  auto a = [&](Vec2 x) {
    const double dx = x.x - c.x, dy = x.y - c.y;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
  };
  std::vector<double> errors;
  for (int n : {32, 64, 128}) {
    const auto ps = unit_square(n);
    ProblemData p;
    p.initial = CoefficientField::from_function(ps, FieldLabel::other,
                                                [&](Vec2 x, Vec2) { return a(x); });
    p.sigma_t = CoefficientField::constant(ps, 0.0, FieldLabel::sigma_t);
    p.sigma_s = CoefficientField::constant(ps, 0.0, FieldLabel::sigma_s);
    p.phase = isotropic_phase(ps);
    p.horizon = T;
    const auto& faces = ps.mesh().boundary_faces();
    const auto& gm = ps.partition().gamma_minus;
    const auto& ords = ps.vset().ordinates;
    p.inflow = [&](std::size_t e, double t) {
      const Vec2 x = faces[gm[e].face].center;
      const Vec2 v = ords[gm[e].ordinate];
      return a({x.x - v.x * t, x.y - v.y * t});
    };
    const auto u = solve_forward(p, ps, max_stable_dt(ps), {});
    const std::size_t k = u.num_steps();
    const double t = u.time(k);
    double err = 0.0;
    for (std::size_t cell = 0; cell < ps.num_cells(); ++cell) {
      const Vec2 x = ps.mesh().cell_center(cell);
      for (std::size_t j = 0; j < ps.num_ordinates(); ++j) {
        const Vec2 v = ords[j];
        const double d = u.at(cell, j, k) - a({x.x - v.x * t, x.y - v.y * t});
        err += d * d * ps.vset().weights[j];
      }
    }
    errors.push_back(std::sqrt(err * ps.mesh().cell_volume()));
  }
  const double p1 = std::log2(errors[0] / errors[1]);
  const double p2 = std::log2(errors[1] / errors[2]);
  return {std::min(p1, p2) >= 0.8,
          fmt::format("L2 errors {:.3e} {:.3e} {:.3e}; orders {:.3f} {:.3f} (>= 0.8)",
                      errors[0], errors[1], errors[2], p1, p2)};
}

ProblemData gaussian_problem(const PhaseSpace& ps, double sigma_t, double T) {
  ProblemData p;
  p.initial = gaussian_bump(ps, 0.0, 1.0, {0.45, 0.55}, 0.15);
  p.sigma_t = CoefficientField::constant(ps, sigma_t, FieldLabel::sigma_t);
  p.sigma_s = CoefficientField::constant(ps, 0.0, FieldLabel::sigma_s);
  p.phase = isotropic_phase(ps);
  p.horizon = T;
  return p;
}

// 2. Constant absorption factors out of the free-streaming solution.
Verdict pure_absorption_exactness() {
  const auto ps = unit_square(32);
  const double c = 0.7;
  const double dt = max_stable_dt(ps);
  const auto free = solve_forward(gaussian_problem(ps, 0.0, 1.0), ps, dt);
  const auto absorbed = solve_forward(gaussian_problem(ps, c, 1.0), ps, dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < free.num_times(); ++k) {
    const double decay = std::exp(-c * free.time(k));
    const auto f = free.snapshot(k);
    const auto g = absorbed.snapshot(k);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double ref = f[i] * decay;
      worst = std::max(worst, std::abs(g[i] - ref) / std::max(std::abs(ref), 1e-300));
    }
  }
  return {worst <= 1e-10,
          fmt::format("max pointwise relative deviation {:.3e} over {} steps (<= 1e-10)",
                      worst, free.num_steps())};
}

// Smooth anisotropic kernel with spatial variation.
PhaseKernel anisotropic_kernel(const PhaseSpace& ps) {
  const std::size_t n = ps.num_ordinates();
  const auto& ords = ps.vset().ordinates;
  std::vector<double> raw(ps.num_cells() * n * n);
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    const Vec2 x = ps.mesh().cell_center(c);
    const double g = 0.6 * x.x + 0.2;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t jp = 0; jp < n; ++jp) {
        const double mu = dot(ords[j], ords[jp]) / (norm(ords[j]) * norm(ords[jp]));
        raw[(c * n + j) * n + jp] = (1.0 - g * g) / std::pow(1.0 + g * g - 2.0 * g * mu, 1.5);
      }
    }
  }
  return normalize_phase(raw, ps.num_cells(), ps.vset());
}

// 3. a = g = 1 with sigma_a = 0 is a fixed point for any normalised kernel.
Verdict scattering_fixed_point() {
  DomainSpec d;
  d.cells = {24, 24};
  const PhaseSpace ps(SpatialMesh::build(d), build_velocity_set(0.5, 1.5, 8, 2));
  ProblemData p;
  p.initial = CoefficientField::constant(ps, 1.0);
  p.inflow = constant_inflow(1.0);
  p.sigma_s = checkerboard(ps, 1.0, 0.5, 4, FieldLabel::sigma_s);
  p.sigma_t = p.sigma_s;
  p.sigma_t.set_label(FieldLabel::sigma_t);
  p.phase = anisotropic_kernel(ps);
  p.horizon = 2.0;
  const auto u = solve_forward(p, ps, max_stable_dt(ps));
  double worst = 0.0;
  for (double v : u.values()) worst = std::max(worst, std::abs(v - 1.0));
  return {worst <= 1e-12,
          fmt::format("max |u - 1| = {:.3e} over {} steps (<= 1e-12)", worst, u.num_steps())};
}

// 4. Row normalisation and idempotence of normalize_phase.
Verdict phase_normalization() {
  const auto ps = unit_square(6, 12);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 5.0);
  double worst_row = 0.0;
  double worst_idem = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> raw(ps.num_cells() * ps.num_ordinates() * ps.num_ordinates());
    for (double& r : raw) r = unit(rng);
    const auto k1 = normalize_phase(raw, ps.num_cells(), ps.vset());
    const auto k2 = normalize_phase(k1.values(), ps.num_cells(), ps.vset());
    worst_row = std::max(worst_row, k1.max_normalization_error());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      worst_idem = std::max(worst_idem, std::abs(k2.values()[i] - k1.values()[i]));
    }
  }
  const auto ka = anisotropic_kernel(ps);
  worst_row = std::max(worst_row, ka.max_normalization_error());
  worst_row = std::max(worst_row, isotropic_phase(ps).max_normalization_error());
  return {worst_row <= 1e-10 && worst_idem < 1e-14,
          fmt::format("max |row sum - 1| = {:.3e} (<= 1e-10); renormalisation change "
                      "{:.3e} (< 1e-14)",
                      worst_row, worst_idem)};
}

ProblemData nonlinear_base(const PhaseSpace& ps, double sigma_t, double sigma_s) {
  ProblemData p;
  p.initial = CoefficientField::constant(ps, 1.0);
  p.inflow = inflow_from_initial(p.initial, ps);
  p.sigma_t = CoefficientField::constant(ps, sigma_t, FieldLabel::sigma_t);
  p.sigma_s = CoefficientField::constant(ps, sigma_s, FieldLabel::sigma_s);
  p.phase = isotropic_phase(ps);
  p.horizon = 1.1 * min_observation_time(ps.mesh(), ps.vset());
  return p;
}

// 5. Identical coefficient pairs give no boundary signal.
Verdict uniqueness_direction() {
  const auto ps = unit_square(16);
  auto base = nonlinear_base(ps, 0.3, 0.1);
  base.initial = gaussian_bump(ps, 1.0, 0.5, {0.4, 0.6}, 0.1);
  base.inflow = inflow_from_initial(base.initial, ps);
  const auto zero = CoefficientField::constant(ps, 0.0);
  const double dt = max_stable_dt(ps);
  const auto rt = run_sigma_t_experiment(base, zero, ps, dt);
  const auto rs = run_sigma_s_experiment(base, zero, ps, dt);
  const double qt = rt.measurement_norm / rt.solution_scale;
  const double qs = rs.measurement_norm / rs.solution_scale;
  return {qt <= 1e-10 && qs <= 1e-10 && rt.degenerate && rs.degenerate,
          fmt::format("measurement / solution scale: sigma_t {:.3e}, sigma_s {:.3e} "
                      "(<= 1e-10)",
                      qt, qs)};
}

struct LinearizedSetup {
  PhaseSpace ps;
  CoefficientField sigma_t;
  CoefficientField sigma_s;
  PhaseKernel phase;
  SourceFactor R;
  double horizon;
  double dt;
};

LinearizedSetup linearized_setup(int n, double beta = 0.5) {
  auto ps = unit_square(n);
  LinearizedSetup s{ps,
                    CoefficientField::constant(ps, 0.3, FieldLabel::sigma_t),
                    CoefficientField::constant(ps, 0.1, FieldLabel::sigma_s),
                    isotropic_phase(ps),
                    SourceFactor::constant(ps, 1.0),
                    1.1 * min_observation_time(ps.mesh(), ps.vset(), beta),
                    max_stable_dt(ps)};
  return s;
}

EnsembleSummary linearized_ensemble(int n, std::uint64_t seed, int count) {
  const auto s = linearized_setup(n);
  std::mt19937_64 rng(seed);
  std::vector<StabilityReport> reports;
  for (int i = 0; i < count; ++i) {
    const auto f = random_source(rng, s.ps);
    ExperimentOptions o;
    o.id = fmt::format("lin_{}", i);
    reports.push_back(run_linearized_experiment(f, s.R, s.sigma_t, s.sigma_s, s.phase, s.ps,
                                                s.horizon, s.dt, TraceSide::gamma_plus, 0.5, o));
  }
  return verify_both_sided(reports, 50.0);
}

// 6. Both-sided estimate for the linearised problem.
Verdict linearized_both_sided() {
  const auto coarse = linearized_ensemble(32, 2024, 20);
  const auto fine = linearized_ensemble(64, 2024, 20);
  const double change = std::max(coarse.spread / fine.spread, fine.spread / coarse.spread);
  const bool ok = coarse.rho_min > 0.0 && std::isfinite(coarse.rho_max) &&
                  fine.rho_min > 0.0 && std::isfinite(fine.rho_max) && coarse.spread <= 50.0 &&
                  fine.spread <= 50.0 && change < 2.0 && coarse.count == 20 && fine.count == 20;
  return {ok, fmt::format("32^2: rho in [{:.4g}, {:.4g}], spread {:.4g}; 64^2: rho in "
                          "[{:.4g}, {:.4g}], spread {:.4g}; refinement factor {:.3f} (< 2)",
                          coarse.rho_min, coarse.rho_max, coarse.spread, fine.rho_min,
                          fine.rho_max, fine.spread, change)};
}

// 7. Nonlinear sigma_t and sigma_s ensembles, local linearity in amplitude.
Verdict nonlinear_stability() {
  const auto ps = unit_square(32);
  const double dt = max_stable_dt(ps);
  std::mt19937_64 rng(99);
  double worst_t = 0.0, worst_s = 0.0;
  bool finite = true;
  for (ExperimentKind kind : {ExperimentKind::sigma_t, ExperimentKind::sigma_s}) {
    const bool is_t = kind == ExperimentKind::sigma_t;
    const auto base = is_t ? nonlinear_base(ps, 0.3, 0.1) : nonlinear_base(ps, 0.5, 0.3);
    for (int i = 0; i < 10; ++i) {
      const auto shape = random_perturbation(rng, ps, 1.0);
      double rho[2] = {0.0, 0.0};
      for (int h = 0; h < 2; ++h) {
        const double amp = h == 0 ? 0.05 : 0.025;
        const auto r = is_t ? run_sigma_t_experiment(base, amp * shape, ps, dt)
                            : run_sigma_s_experiment(base, amp * shape, ps, dt);
        finite = finite && r.ratio && std::isfinite(*r.ratio) && *r.ratio > 0.0;
        rho[h] = r.ratio.value_or(0.0);
      }
      const double change = rel_change(rho[1], rho[0]);
      (is_t ? worst_t : worst_s) = std::max(is_t ? worst_t : worst_s, change);
    }
  }
  return {finite && worst_t < 0.15 && worst_s < 0.15,
          fmt::format("max rho change under amplitude halving: sigma_t {:.4f}, sigma_s "
                      "{:.4f} (< 0.15); all ratios finite: {}",
                      worst_t, worst_s, finite)};
}

// 8. Carleman estimate with scattering evaluated on z fields.
Verdict carleman_check() {
  const auto s = linearized_setup(32);
  const auto cfg = make_carleman_config(s.ps.mesh(), s.ps.vset(), s.horizon, 0.5);
  std::mt19937_64 rng(11);
  double worst_spread = 0.0;
  double worst_scale = 0.0;
  bool finite = true;
  for (int run = 0; run < 5; ++run) {
    const auto f = random_source(rng, s.ps);
    const auto u = solve_linearized(f, s.R, s.sigma_t, s.sigma_s, s.phase, s.ps, s.horizon,
                                    s.dt);
    const auto z = auxiliary_z(u, cfg);
    const auto rep =
        evaluate_carleman_scattering(z, cfg, s.ps, s.sigma_t, s.sigma_s, s.phase);
    for (const auto& t : rep.terms) finite = finite && t.c && std::isfinite(*t.c) && *t.c > 0.0;
    const auto spread = rep.c_spread(cfg.s_grid.front(), cfg.s_grid.back());
    worst_spread = std::max(worst_spread, spread.value_or(INFINITY));

    AngularDensityField z2 = z;
    for (std::size_t k = 0; k < z2.num_times(); ++k) {
      for (double& v : z2.snapshot(k)) v *= 2.0;
      for (double& v : z2.traces().out(k)) v *= 2.0;
      for (double& v : z2.traces().in(k)) v *= 2.0;
    }
    const auto rep2 =
        evaluate_carleman_scattering(z2, cfg, s.ps, s.sigma_t, s.sigma_s, s.phase);
    for (std::size_t i = 0; i < rep.terms.size(); ++i) {
      if (rep.terms[i].c && rep2.terms[i].c) {
        worst_scale = std::max(worst_scale, rel_change(*rep2.terms[i].c, *rep.terms[i].c));
      }
    }
  }
  return {finite && worst_spread < 10.0 && worst_scale <= 1e-12,
          fmt::format("s in [{:.4g}, {:.4g}]; max C spread {:.4g} (< 10); scaling change "
                      "{:.3e} (<= 1e-12); all C finite: {}",
                      cfg.s_grid.front(), cfg.s_grid.back(), worst_spread, worst_scale, finite)};
}

// 9. Weight geometry on the axis-aligned preset.
Verdict weight_geometry() {
  const auto ps = unit_square(16, 4);
  const auto cfg = make_carleman_config(ps.mesh(), ps.vset(), 6.0, 0.5);
  const auto scan = scan_weight_levels(ps, cfg);
  bool rejected = false;
  try {
    make_carleman_config(ps.mesh(), ps.vset(), 3.9, 0.5);
  } catch (const ObservationTimeError&) {
    rejected = true;
  }
  const bool ok = cfg.r_min == -1.0 && cfg.r_max == 1.0 && cfg.r0 == -5.0 / 3.0 &&
                  cfg.r1 == -4.0 / 3.0 && scan.early_ok && scan.late_ok &&
                  scan.min_phi_early > cfg.r1 && scan.max_phi_late < cfg.r0 && rejected;
  return {ok, fmt::format("r0 = {:.17g}, r1 = {:.17g}, delta = {:.6g}; min phi early {:.6g} > "
                          "r1, max phi late {:.6g} < r0; T = 3.9 rejected: {}",
                          cfg.r0, cfg.r1, cfg.delta, scan.min_phi_early, scan.max_phi_late,
                          rejected)};
}

// 10. Energy estimates.
Verdict energy_estimates() {
  // Gronwall constant on pure absorption runs, with and without inflow.
  double worst_c = 0.0;
  {
    const auto ps = unit_square(32);
    for (double c : {0.0, 0.4, 1.5}) {
      for (bool inflow : {false, true}) {
        auto p = gaussian_problem(ps, c, 1.5);
        if (inflow) p.inflow = constant_inflow(0.3);
        const auto u = solve_forward(p, ps, max_stable_dt(ps));
        const auto r = verify_gronwall_bound(u, p, ps);
        worst_c = std::max(worst_c, r.c_fit.value_or(INFINITY));
      }
    }
  }
  // Outflow bound under f -> 2f.
  double outflow_change = 0.0;
  {
    const auto s = linearized_setup(16);
    std::mt19937_64 rng(5);
    const auto f = random_source(rng, s.ps);
    const auto f2 = 2.0 * f;
    const auto u1 = solve_linearized(f, s.R, s.sigma_t, s.sigma_s, s.phase, s.ps, s.horizon, s.dt);
    const auto u2 = solve_linearized(f2, s.R, s.sigma_t, s.sigma_s, s.phase, s.ps, s.horizon, s.dt);
    const auto r1 = verify_outflow_bound(u1, s.ps, f.l2_norm(s.ps));
    const auto r2 = verify_outflow_bound(u2, s.ps, f2.l2_norm(s.ps));
    outflow_change = rel_change(r2.c_fit.value_or(0.0), r1.c_fit.value_or(1.0));
  }
  // Energy identity residual under dt halving (mesh refined with it).
  double residual[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    const auto ps = unit_square(level == 0 ? 32 : 64);
    ProblemData p = gaussian_problem(ps, 0.3, 0.5);
    p.sigma_s = CoefficientField::constant(ps, 0.1, FieldLabel::sigma_s);
    const auto u = solve_forward(p, ps, max_stable_dt(ps));
    residual[level] = std::abs(energy_identity_residual(u, p, ps).residual);
  }
  const double ratio = residual[1] / residual[0];
  const bool ok = worst_c <= 1.0 + 1e-8 && outflow_change <= 1e-12 && ratio >= 0.375 &&
                  ratio <= 0.625;
  return {ok, fmt::format("max Gronwall C {:.12g} (<= 1 + 1e-8); outflow C change under f -> 2f "
                          "{:.3e} (<= 1e-12); energy residual {:.4e} -> {:.4e}, ratio {:.4f} "
                          "(0.5 +/- 25%)",
                          worst_c, outflow_change, residual[0], residual[1], ratio)};
}

// 11. Hoelder fit on synthetic report families.
Verdict holder_fit() {
  auto family = [](double power) {
    std::vector<StabilityReport> reports;
    for (double f : {1.0, 0.5, 0.1, 0.03, 0.01, 0.003}) {
      StabilityReport r;
      r.coefficient_diff_norm = f;
      r.measurement_norm = 0.7 * std::pow(f, power);
      r.ratio = r.coefficient_diff_norm / r.measurement_norm;
      reports.push_back(r);
    }
    return fit_holder_exponent(reports);
  };
  const auto lip = family(1.0);
  const auto sq = family(2.0);
  return {std::abs(lip.theta - 1.0) <= 0.05 && std::abs(sq.theta - 0.5) <= 0.05,
          fmt::format("Lipschitz family theta = {:.6f}; square-law family theta = {:.6f} "
                      "(+/- 0.05)",
                      lip.theta, sq.theta)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 12. Same config and seed, byte-identical CSV output.
Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "rtstab_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"forward",
       "cells_x = 16\ncells_y = 16\ninitial = gaussian:1,0.5,0.4,0.6,0.1\n"
       "sigma_t = checkerboard:0.4,0.1,2\nsigma_s = constant:0.2\nT = 0.8\n"},
      {"stability-ensemble",
       "cells_x = 12\ncells_y = 12\nexperiment = linearized\nensemble_count = 6\n"
       "sigma_t = constant:0.3\nsigma_s = constant:0.1\nthreads = 3\nseed = 17\n"},
      {"stability-ensemble",
       "cells_x = 12\ncells_y = 12\nexperiment = sigma_t\nensemble_count = 5\n"
       "sigma_t = constant:0.3\nsigma_s = constant:0.1\nthreads = 2\nseed = 4\n"},
      {"carleman-check",
       "cells_x = 12\ncells_y = 12\nsigma_t = constant:0.3\nsigma_s = constant:0.1\n"
       "carleman_runs = 2\nseed = 3\n"}};
  std::size_t compared = 0;
  std::string failure;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      RunConfig cfg = parse_config_text(configs[i].second, configs[i].first);
      cfg.output_dir = root / fmt::format("cfg{}_run{}", i, rep);
      const auto result = run(cfg);
      if (result.exit_code != kExitOk) {
        failure = fmt::format("{} run failed: {}", configs[i].first, result.message);
      }
      dirs.push_back(cfg.output_dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(dirs[1] / entry.path().filename())) {
        failure = fmt::format("{} differs between runs", entry.path().filename().string());
      }
    }
  }
  fs::remove_all(root);
  return {failure.empty() && compared >= 6,
          failure.empty() ? fmt::format("{} CSV files byte-identical across repeated runs",
                                        compared)
                          : failure};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"free-streaming convergence", free_streaming_convergence},
      {"pure-absorption exactness", pure_absorption_exactness},
      {"scattering fixed point", scattering_fixed_point},
      {"phase normalisation and idempotence", phase_normalization},
      {"uniqueness direction", uniqueness_direction},
      {"linearised both-sided stability", linearized_both_sided},
      {"nonlinear stability", nonlinear_stability},
      {"Carleman estimate", carleman_check},
      {"Carleman weight geometry", weight_geometry},
      {"energy estimates", energy_estimates},
      {"Hoelder fit", holder_fit},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::cout << fmt::format("[{}] {:2d} {}: {} ({:.1f} s)", v.pass ? "PASS" : "FAIL", i + 1,
                             criteria[i].first, v.detail, secs)
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failed,
                           criteria.size())
            << std::endl;
  return failed == 0 ? 0 : 1;
}
