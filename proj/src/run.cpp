#include "rtstab/run.hpp"

#include <chrono>
#include <fstream>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "rtstab/carleman.hpp"
#include "rtstab/energy.hpp"
#include "rtstab/errors.hpp"
#include "rtstab/io.hpp"

namespace rtstab {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Setup {
  PhaseSpace ps;
  double horizon;
  double dt;
};

Setup make_setup(const RunConfig& cfg) {
  PhaseSpace ps(SpatialMesh::build(cfg.domain),
                build_velocity_set(cfg.v_min, cfg.v_max, cfg.n_angles, cfg.n_speeds));
  double horizon = 0.0;
  if (cfg.horizon) {
    horizon = *cfg.horizon;
  } else if (uses_beta(cfg)) {
    horizon = cfg.time_margin * min_observation_time(ps.mesh(), ps.vset(), cfg.beta);
  } else {
    horizon = cfg.time_margin * min_observation_time(ps.mesh(), ps.vset());
  }
  const double dt = cfg.dt ? *cfg.dt : max_stable_dt(ps, cfg.cfl_factor);
  return {std::move(ps), horizon, dt};
}

InflowFn make_inflow(const RunConfig& cfg, const CoefficientField& initial,
                     const PhaseSpace& ps) {
  switch (cfg.inflow.kind) {
    case InflowPreset::Kind::from_initial: return inflow_from_initial(initial, ps);
    case InflowPreset::Kind::zero: return zero_inflow();
    case InflowPreset::Kind::constant: return constant_inflow(cfg.inflow.value);
  }
  return zero_inflow();
}

// Linearised problems start from zero, so the extension of the initial
// data is the zero inflow.
InflowFn linearized_inflow(const RunConfig& cfg) {
  if (cfg.inflow.kind == InflowPreset::Kind::constant && cfg.inflow.value != 0.0) {
    return constant_inflow(cfg.inflow.value);
  }
  return {};
}

ProblemData make_problem(const RunConfig& cfg, const Setup& s) {
  ProblemData d;
  d.initial = build_field(cfg.initial, s.ps, FieldLabel::other);
  d.inflow = make_inflow(cfg, d.initial, s.ps);
  d.sigma_t = build_field(cfg.sigma_t, s.ps, FieldLabel::sigma_t);
  d.sigma_s = build_field(cfg.sigma_s, s.ps, FieldLabel::sigma_s);
  d.phase = build_phase(cfg.phase, s.ps);
  d.horizon = s.horizon;
  return d;
}

SourceFactor make_R(const RunConfig& cfg, const Setup& s) {
  return SourceFactor::time_independent(build_field(cfg.source_R, s.ps, FieldLabel::other));
}

CoefficientField make_f(const RunConfig& cfg, const Setup& s, std::mt19937_64& rng) {
  if (cfg.source_f) return build_field(*cfg.source_f, s.ps, FieldLabel::source);
  return random_source(rng, s.ps);
}

ExperimentOptions options_for(const RunConfig& cfg, std::string id, double amplitude) {
  ExperimentOptions o;
  o.id = std::move(id);
  o.amplitude = amplitude;
  o.bounds.M = cfg.admissibility_M;
  o.solver.cfl_factor = cfg.cfl_factor;
  return o;
}

void emit_field(const RunConfig& cfg, Manifest& m, const AngularDensityField& u,
                const PhaseSpace& ps) {
  write_traces_csv(m.add("traces.csv", "boundary traces"), u, ps);
  write_energy_csv(m.add("energy.csv", "energy trace"), energy(u, ps));
  if (cfg.dump_field) {
    write_field_dump(m.add("field.bin", "field dump"), u, ps);
    m.add("field.bin.json", "field dump sidecar");
  }
}

void run_forward(const RunConfig& cfg, const Setup& s, Manifest& m) {
  const ProblemData data = make_problem(cfg, s);
  write_partition_csv(m.add("partition.csv", "boundary partition"), s.ps);
  const auto u = solve_forward(data, s.ps, s.dt, {cfg.cfl_factor});
  emit_field(cfg, m, u, s.ps);
}

void run_linearized(const RunConfig& cfg, const Setup& s, Manifest& m,
                    std::mt19937_64& rng) {
  const auto f = make_f(cfg, s, rng);
  const auto R = make_R(cfg, s);
  const auto st = build_field(cfg.sigma_t, s.ps, FieldLabel::sigma_t);
  const auto ss = build_field(cfg.sigma_s, s.ps, FieldLabel::sigma_s);
  const auto phase = build_phase(cfg.phase, s.ps);
  const auto report =
      run_linearized_experiment(f, R, st, ss, phase, s.ps, s.horizon, s.dt, cfg.side,
                                cfg.beta, options_for(cfg, "linearized", 1.0),
                                linearized_inflow(cfg));
  const auto u = solve_linearized(f, R, st, ss, phase, s.ps, s.horizon, s.dt,
                                  {cfg.cfl_factor}, linearized_inflow(cfg));
  write_partition_csv(m.add("partition.csv", "boundary partition"), s.ps);
  emit_field(cfg, m, u, s.ps);
  write_json(m.add("stability_report.json", "stability report"), to_json(report));
  write_json(m.add("outflow_bound.json", "inequality report"),
             to_json(verify_outflow_bound(u, s.ps, f.l2_norm(s.ps))));
}

void run_energy_check(const RunConfig& cfg, const Setup& s, Manifest& m,
                      std::mt19937_64& rng) {
  ProblemData data = make_problem(cfg, s);
  if (cfg.source_f) {
    data.source_f = make_f(cfg, s, rng);
    data.source_R = make_R(cfg, s);
  }
  const auto u = solve_forward(data, s.ps, s.dt, {cfg.cfl_factor});
  emit_field(cfg, m, u, s.ps);
  write_json(m.add("gronwall.json", "inequality report"),
             to_json(verify_gronwall_bound(u, data, s.ps)));
  write_json(m.add("energy_balance.json", "energy balance"),
             to_json(energy_identity_residual(u, data, s.ps)));
  const double f_norm = data.source_f ? data.source_f->l2_norm(s.ps) : 0.0;
  write_json(m.add("outflow_bound.json", "inequality report"),
             to_json(verify_outflow_bound(u, s.ps, f_norm)));
}

void run_carleman(const RunConfig& cfg, const Setup& s, Manifest& m,
                  std::mt19937_64& rng) {
  std::optional<SRange> range;
  if (cfg.s_min) range = SRange{*cfg.s_min, *cfg.s_max, 8};
  const auto ccfg = make_carleman_config(s.ps.mesh(), s.ps.vset(), s.horizon, cfg.beta, range);
  validate(ccfg, s.ps.vset());
  const auto scan = scan_weight_levels(s.ps, ccfg);
  m.data()["carleman_constants"] = to_json(ccfg);
  m.data()["carleman_constants"]["scan"] = {{"min_phi_early", scan.min_phi_early},
                                            {"max_phi_late", scan.max_phi_late},
                                            {"early_ok", scan.early_ok},
                                            {"late_ok", scan.late_ok}};
  if (!scan.early_ok || !scan.late_ok) {
    throw HypothesisViolation("weight level sets do not separate t = 0 from t = T");
  }

  const auto R = make_R(cfg, s);
  const auto st = build_field(cfg.sigma_t, s.ps, FieldLabel::sigma_t);
  const auto ss = build_field(cfg.sigma_s, s.ps, FieldLabel::sigma_s);
  const auto phase = build_phase(cfg.phase, s.ps);
  if (!(R.min_initial() > 0.0)) {
    throw HypothesisViolation("source factor must be strictly positive at t = 0");
  }

  std::string csv = "run,lemma_id,s,C\n";
  json all = json::array();
  for (int i = 0; i < cfg.carleman_runs; ++i) {
    const auto f = make_f(cfg, s, rng);
    const auto u = solve_linearized(f, R, st, ss, phase, s.ps, s.horizon, s.dt,
                                    {cfg.cfl_factor}, linearized_inflow(cfg));
    const auto z = auxiliary_z(u, ccfg);
    const auto [with_scatter, streaming] = evaluate_carleman_pair(z, ccfg, s.ps, st, ss, phase);
    for (const auto* rep : {&with_scatter, &streaming}) {
      for (const auto& t : rep->terms) {
        csv += fmt::format("{},{},{},{}\n", i, rep->lemma_id, format_real(t.s),
                           t.c ? format_real(*t.c) : std::string("nan"));
      }
    }
    all.push_back({{"run", i},
                   {"reports", {to_json(with_scatter), to_json(streaming)}},
                   {"c_spread_scattering",
                    with_scatter.c_spread(ccfg.s_grid.front(), ccfg.s_grid.back())
                        .value_or(std::numeric_limits<double>::quiet_NaN())},
                   {"c_spread_streaming",
                    streaming.c_spread(ccfg.s_grid.front(), ccfg.s_grid.back())
                        .value_or(std::numeric_limits<double>::quiet_NaN())}});
  }
  {
    std::ofstream out(m.add("carleman.csv", "Carleman constants"));
    out << csv;
  }
  write_json(m.add("carleman.json", "Carleman reports"), all);
}

std::vector<StabilityReport> ensemble_reports(const RunConfig& cfg, const Setup& s,
                                              std::mt19937_64& rng, int count,
                                              const std::vector<double>& amplitudes) {
  const auto kind = cfg.experiment;
  const std::size_t n = static_cast<std::size_t>(count) * amplitudes.size();
  if (kind == ExperimentKind::linearized) {
    const auto R = make_R(cfg, s);
    const auto st = build_field(cfg.sigma_t, s.ps, FieldLabel::sigma_t);
    const auto ss = build_field(cfg.sigma_s, s.ps, FieldLabel::sigma_s);
    const auto phase = build_phase(cfg.phase, s.ps);
    std::vector<CoefficientField> fs;
    for (int i = 0; i < count; ++i) fs.push_back(make_f(cfg, s, rng));
    return run_jobs(n, cfg.threads, [&](std::size_t idx) {
      const std::size_t i = idx / amplitudes.size();
      const double a = amplitudes[idx % amplitudes.size()];
      return run_linearized_experiment(a * fs[i], R, st, ss, phase, s.ps, s.horizon, s.dt,
                                       cfg.side, cfg.beta,
                                       options_for(cfg, fmt::format("lin_{}_{}", i, idx % amplitudes.size()), a),
                                       linearized_inflow(cfg));
    });
  }
  if (cfg.side != TraceSide::gamma_plus) {
    throw ConfigError("side: nonlinear experiments measure on gamma_plus with the nu.v weight");
  }
  const ProblemData base = make_problem(cfg, s);
  const auto label = kind == ExperimentKind::sigma_t ? FieldLabel::sigma_t : FieldLabel::sigma_s;
  std::vector<CoefficientField> shapes;
  for (int i = 0; i < count; ++i) shapes.push_back(random_perturbation(rng, s.ps, 1.0, label));
  return run_jobs(n, cfg.threads, [&](std::size_t idx) {
    const std::size_t i = idx / amplitudes.size();
    const double a = amplitudes[idx % amplitudes.size()];
    const auto opts = options_for(
        cfg, fmt::format("{}_{}_{}", to_string(kind), i, idx % amplitudes.size()), a);
    const auto p = a * shapes[i];
    return kind == ExperimentKind::sigma_t ? run_sigma_t_experiment(base, p, s.ps, s.dt, opts)
                                           : run_sigma_s_experiment(base, p, s.ps, s.dt, opts);
  });
}

void run_ensemble(const RunConfig& cfg, const Setup& s, Manifest& m, std::mt19937_64& rng) {
  const auto reports =
      ensemble_reports(cfg, s, rng, cfg.ensemble_count, {cfg.perturbation_amplitude});
  write_ensemble_csv(m.add("ensemble.csv", "ensemble summary"), reports);
  json per = json::array();
  for (const auto& r : reports) per.push_back(to_json(r));
  write_json(m.add("reports.json", "stability reports"), per);
  const auto summary = verify_both_sided(reports, cfg.spread_threshold);
  write_json(m.add("summary.json", "ensemble verdict"), to_json(summary));
}

void run_holder(const RunConfig& cfg, const Setup& s, Manifest& m, std::mt19937_64& rng) {
  const auto reports = ensemble_reports(cfg, s, rng, 1, cfg.amplitudes);
  write_ensemble_csv(m.add("ensemble.csv", "amplitude sweep"), reports);
  write_json(m.add("holder_fit.json", "Hoelder fit"), to_json(fit_holder_exponent(reports)));
}

json config_echo(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.echo) j[k] = v;
  return j;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const HypothesisViolation*>(&e)) return kExitHypothesis;
  if (dynamic_cast<const InsufficientDataError*>(&e)) return kExitInsufficientData;
  return kExitFailure;
}

RunResult run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Manifest m(cfg.output_dir);
  m.data()["subcommand"] = cfg.subcommand;
  m.data()["version"] = kVersion;
  m.data()["seed"] = cfg.seed;
  m.data()["threads"] = cfg.threads;
  m.data()["config"] = config_echo(cfg);

  RunResult result;
  try {
    validate(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    const Setup s = make_setup(cfg);
    m.data()["resolved"] = {{"T", s.horizon},
                            {"dt_requested", s.dt},
                            {"steps", step_count(s.horizon, s.dt)},
                            {"cells", s.ps.num_cells()},
                            {"ordinates", s.ps.num_ordinates()}};
    std::mt19937_64 rng(cfg.seed);
    if (cfg.subcommand == "forward") {
      run_forward(cfg, s, m);
    } else if (cfg.subcommand == "linearized") {
      run_linearized(cfg, s, m, rng);
    } else if (cfg.subcommand == "energy-check") {
      run_energy_check(cfg, s, m, rng);
    } else if (cfg.subcommand == "carleman-check") {
      run_carleman(cfg, s, m, rng);
    } else if (cfg.subcommand == "stability-ensemble") {
      run_ensemble(cfg, s, m, rng);
    } else {
      run_holder(cfg, s, m, rng);
    }
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    result.message = e.what();
    m.data()["error"] = e.what();
  }

  const auto elapsed = std::chrono::steady_clock::now() - start;
  m.data()["wall_time_s"] = std::chrono::duration<double>(elapsed).count();
  try {
    m.write(result.exit_code == kExitOk ? "complete" : "incomplete");
  } catch (const std::exception& e) {
    if (result.exit_code == kExitOk) {
      result.exit_code = kExitFailure;
      result.message = e.what();
    }
  }
  return result;
}

}  // namespace rtstab
