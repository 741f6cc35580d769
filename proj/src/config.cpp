#include "rtstab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "rtstab/errors.hpp"

namespace rtstab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", key, why));
}

}  // namespace

FieldPreset parse_field_preset(const std::string& key, const std::string& value) {
  FieldPreset p;
  p.text = value;
  const auto colon = value.find(':');
  const std::string kind = trim(value.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : value.substr(colon + 1);
  if (kind == "csv") {
    require(!trim(args).empty(), key, "csv preset needs a path");
    p.kind = FieldPreset::Kind::csv;
    p.path = trim(args);
    p.params.clear();
    return p;
  }
  std::size_t arity = 0;
  if (kind == "constant") {
    p.kind = FieldPreset::Kind::constant;
    arity = 1;
  } else if (kind == "gaussian") {
    p.kind = FieldPreset::Kind::gaussian;
    arity = 5;
  } else if (kind == "checkerboard") {
    p.kind = FieldPreset::Kind::checkerboard;
    arity = 3;
  } else {
    throw ConfigError(fmt::format(
        "{}: unknown preset '{}' (constant, gaussian, checkerboard, csv)", key, kind));
  }
  p.params = parse_list(key, args);
  require(p.params.size() == arity, key,
          fmt::format("preset '{}' takes {} parameters, got {}", kind, arity,
                      p.params.size()));
  if (p.kind == FieldPreset::Kind::gaussian) {
    require(p.params[4] > 0.0, key, "gaussian width must be positive");
  }
  if (p.kind == FieldPreset::Kind::checkerboard) {
    require(p.params[2] >= 1.0 && std::floor(p.params[2]) == p.params[2], key,
            "checkerboard blocks must be a positive integer");
  }
  return p;
}

CoefficientField build_field(const FieldPreset& preset, const PhaseSpace& ps,
                             FieldLabel label) {
  const auto& a = preset.params;
  switch (preset.kind) {
    case FieldPreset::Kind::constant:
      return CoefficientField::constant(ps, a[0], label);
    case FieldPreset::Kind::gaussian:
      return gaussian_bump(ps, a[0], a[1], {a[2], a[3]}, a[4], label);
    case FieldPreset::Kind::checkerboard:
      return checkerboard(ps, a[0], a[1], static_cast<int>(a[2]), label);
    case FieldPreset::Kind::csv:
      return load_coefficient_csv(preset.path, ps, label);
  }
  return CoefficientField::constant(ps, 0.0, label);
}

PhaseKernel build_phase(const PhasePreset& preset, const PhaseSpace& ps) {
  if (preset.isotropic) return isotropic_phase(ps);
  // rows j_out,j_in,value; the kernel is spatially homogeneous
  std::ifstream in(preset.path);
  if (!in) throw ConfigError(fmt::format("phase: cannot open {}", preset.path.string()));
  const std::size_t n = ps.num_ordinates();
  std::vector<double> row(n * n, 0.0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find("j_out") != std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    long long jo = -1, ji = -1;
    double v = 0.0;
    if (!(ss >> jo >> ji >> v) || jo < 0 || ji < 0 || static_cast<std::size_t>(jo) >= n ||
        static_cast<std::size_t>(ji) >= n) {
      throw ConfigError(fmt::format("phase: {}:{}: expected j_out,j_in,value in range",
                                    preset.path.string(), line_no));
    }
    row[static_cast<std::size_t>(jo) * n + static_cast<std::size_t>(ji)] = v;
  }
  std::vector<double> raw;
  raw.reserve(ps.num_cells() * n * n);
  for (std::size_t c = 0; c < ps.num_cells(); ++c) raw.insert(raw.end(), row.begin(), row.end());
  return normalize_phase(raw, ps.num_cells(), ps.vset());
}

bool uses_beta(const RunConfig& cfg) {
  if (cfg.subcommand == "linearized" || cfg.subcommand == "carleman-check") return true;
  if (cfg.subcommand == "stability-ensemble" || cfg.subcommand == "holder-sweep") {
    return cfg.experiment == ExperimentKind::linearized;
  }
  return false;
}

void validate(const RunConfig& cfg) {
  require(std::find(std::begin(kSubcommands), std::end(kSubcommands), cfg.subcommand) !=
              std::end(kSubcommands),
          "subcommand", fmt::format("unknown subcommand '{}'", cfg.subcommand));
  require(cfg.domain.dimension == 2, "dimension", "only 2-D domains are supported");
  require(cfg.domain.extents.x > 0.0, "extent_x", "must be positive");
  require(cfg.domain.extents.y > 0.0, "extent_y", "must be positive");
  require(cfg.domain.cells[0] >= 1, "cells_x", "must be at least 1");
  require(cfg.domain.cells[1] >= 1, "cells_y", "must be at least 1");
  require(cfg.v_min > 0.0, "v_min",
          "speeds must be bounded away from zero (0 < v_min)");
  require(cfg.v_max >= cfg.v_min, "v_max", "must satisfy v_min <= v_max");
  require(cfg.n_angles >= 4, "n_angles", "must be at least 4");
  require(cfg.n_speeds >= 1, "n_speeds", "must be at least 1");
  if (cfg.horizon) require(*cfg.horizon > 0.0, "T", "must be positive");
  if (cfg.dt) require(*cfg.dt > 0.0, "dt", "must be positive");
  require(cfg.cfl_factor > 0.0 && cfg.cfl_factor <= 1.0, "cfl_factor",
          "must lie in (0, 1]");
  require(cfg.time_margin > 1.0, "time_margin",
          "must exceed 1 so that T is strictly above the observation-time bound");
  if (cfg.beta_given || uses_beta(cfg)) {
    const double vmin_sq = cfg.v_min * cfg.v_min;
    require(cfg.beta > 0.0 && cfg.beta < vmin_sq, "beta",
            fmt::format("beta = {} must satisfy 0 < beta < min|v|^2 = {} "
                        "(observation-time condition of the linearised problem)",
                        cfg.beta, vmin_sq));
  }
  if (cfg.s_min) require(*cfg.s_min > 0.0, "s_min", "must be positive");
  if (cfg.s_max) {
    require(cfg.s_min.has_value(), "s_max", "requires s_min");
    require(*cfg.s_max > *cfg.s_min, "s_max", "must exceed s_min");
  } else {
    require(!cfg.s_min, "s_min", "requires s_max");
  }
  require(cfg.admissibility_M > 0.0, "admissibility_M", "must be positive");
  require(cfg.ensemble_count >= 0, "ensemble_count", "must be nonnegative");
  require(cfg.perturbation_amplitude > 0.0, "perturbation_amplitude", "must be positive");
  require(cfg.spread_threshold >= 1.0, "spread_threshold", "must be at least 1");
  require(cfg.side != TraceSide::gamma_minus, "side",
          "measurements live on gamma_plus or the full boundary");
  require(!cfg.amplitudes.empty(), "amplitudes", "must not be empty");
  for (double a : cfg.amplitudes) require(a > 0.0, "amplitudes", "must all be positive");
  require(cfg.carleman_runs >= 1, "carleman_runs", "must be at least 1");
  require(cfg.threads >= 1, "threads", "must be at least 1");
  if (cfg.initial.kind == FieldPreset::Kind::constant) {
    require(cfg.initial.params[0] >= 0.0, "initial", "must be nonnegative");
  }
  for (const auto* p : {&cfg.sigma_t, &cfg.sigma_s}) {
    if (p->kind == FieldPreset::Kind::constant) {
      require(p->params[0] >= 0.0, p == &cfg.sigma_t ? "sigma_t" : "sigma_s",
              "cross sections must be nonnegative");
    }
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& subcommand) {
  RunConfig cfg;
  cfg.subcommand = subcommand;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> schema = {
      {"dimension", [&](auto& k, auto& v) { cfg.domain.dimension = static_cast<int>(parse_int(k, v)); }},
      {"origin_x", [&](auto& k, auto& v) { cfg.domain.origin.x = parse_double(k, v); }},
      {"origin_y", [&](auto& k, auto& v) { cfg.domain.origin.y = parse_double(k, v); }},
      {"extent_x", [&](auto& k, auto& v) { cfg.domain.extents.x = parse_double(k, v); }},
      {"extent_y", [&](auto& k, auto& v) { cfg.domain.extents.y = parse_double(k, v); }},
      {"cells_x", [&](auto& k, auto& v) { cfg.domain.cells[0] = static_cast<int>(parse_int(k, v)); }},
      {"cells_y", [&](auto& k, auto& v) { cfg.domain.cells[1] = static_cast<int>(parse_int(k, v)); }},
      {"v_min", [&](auto& k, auto& v) { cfg.v_min = parse_double(k, v); }},
      {"v_max", [&](auto& k, auto& v) { cfg.v_max = parse_double(k, v); }},
      {"n_angles", [&](auto& k, auto& v) { cfg.n_angles = static_cast<int>(parse_int(k, v)); }},
      {"n_speeds", [&](auto& k, auto& v) { cfg.n_speeds = static_cast<int>(parse_int(k, v)); }},
      {"sigma_t", [&](auto& k, auto& v) { cfg.sigma_t = parse_field_preset(k, v); }},
      {"sigma_s", [&](auto& k, auto& v) { cfg.sigma_s = parse_field_preset(k, v); }},
      {"initial", [&](auto& k, auto& v) { cfg.initial = parse_field_preset(k, v); }},
      {"inflow",
       [&](auto& k, auto& v) {
         cfg.inflow.text = v;
         if (v == "from_initial") {
           cfg.inflow.kind = InflowPreset::Kind::from_initial;
         } else if (v == "zero") {
           cfg.inflow.kind = InflowPreset::Kind::zero;
         } else if (v.rfind("constant:", 0) == 0) {
           cfg.inflow.kind = InflowPreset::Kind::constant;
           cfg.inflow.value = parse_double(k, v.substr(9));
         } else {
           throw ConfigError(fmt::format(
               "{}: '{}' is not one of from_initial, zero, constant:v", k, v));
         }
       }},
      {"phase",
       [&](auto& k, auto& v) {
         cfg.phase.text = v;
         if (v == "isotropic") {
           cfg.phase.isotropic = true;
         } else if (v.rfind("csv:", 0) == 0 && v.size() > 4) {
           cfg.phase.isotropic = false;
           cfg.phase.path = trim(v.substr(4));
         } else {
           throw ConfigError(fmt::format("{}: '{}' is not isotropic or csv:path", k, v));
         }
       }},
      {"T", [&](auto& k, auto& v) { cfg.horizon = parse_double(k, v); }},
      {"dt", [&](auto& k, auto& v) { cfg.dt = parse_double(k, v); }},
      {"cfl_factor", [&](auto& k, auto& v) { cfg.cfl_factor = parse_double(k, v); }},
      {"time_margin", [&](auto& k, auto& v) { cfg.time_margin = parse_double(k, v); }},
      {"beta",
       [&](auto& k, auto& v) {
         cfg.beta = parse_double(k, v);
         cfg.beta_given = true;
       }},
      {"s_min", [&](auto& k, auto& v) { cfg.s_min = parse_double(k, v); }},
      {"s_max", [&](auto& k, auto& v) { cfg.s_max = parse_double(k, v); }},
      {"source_f", [&](auto& k, auto& v) {
         if (v == "random") {
           cfg.source_f.reset();
         } else {
           cfg.source_f = parse_field_preset(k, v);
         }
       }},
      {"source_R", [&](auto& k, auto& v) { cfg.source_R = parse_field_preset(k, v); }},
      {"admissibility_M", [&](auto& k, auto& v) { cfg.admissibility_M = parse_double(k, v); }},
      {"ensemble_count", [&](auto& k, auto& v) { cfg.ensemble_count = static_cast<int>(parse_int(k, v)); }},
      {"perturbation_amplitude",
       [&](auto& k, auto& v) { cfg.perturbation_amplitude = parse_double(k, v); }},
      {"seed",
       [&](auto& k, auto& v) {
         const long long s = parse_int(k, v);
         require(s >= 0, k, "must be nonnegative");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"spread_threshold", [&](auto& k, auto& v) { cfg.spread_threshold = parse_double(k, v); }},
      {"side",
       [&](auto& k, auto& v) {
         if (v == "gamma_plus") {
           cfg.side = TraceSide::gamma_plus;
         } else if (v == "full") {
           cfg.side = TraceSide::full;
         } else {
           throw ConfigError(fmt::format("{}: '{}' is not gamma_plus or full", k, v));
         }
       }},
      {"experiment",
       [&](auto& k, auto& v) {
         if (v == "sigma_t") {
           cfg.experiment = ExperimentKind::sigma_t;
         } else if (v == "sigma_s") {
           cfg.experiment = ExperimentKind::sigma_s;
         } else if (v == "linearized") {
           cfg.experiment = ExperimentKind::linearized;
         } else {
           throw ConfigError(fmt::format(
               "{}: '{}' is not sigma_t, sigma_s or linearized", k, v));
         }
       }},
      {"amplitudes", [&](auto& k, auto& v) { cfg.amplitudes = parse_list(k, v); }},
      {"carleman_runs", [&](auto& k, auto& v) { cfg.carleman_runs = static_cast<int>(parse_int(k, v)); }},
      {"dump_field", [&](auto& k, auto& v) { cfg.dump_field = parse_bool(k, v); }},
      {"output_dir", [&](auto&, auto& v) { cfg.output_dir = v; }},
      {"threads", [&](auto& k, auto& v) { cfg.threads = static_cast<int>(parse_int(k, v)); }},
  };

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = schema.find(key);
    if (it == schema.end()) {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    if (std::any_of(cfg.echo.begin(), cfg.echo.end(),
                    [&](const auto& kv) { return kv.first == key; })) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    if (value.empty()) throw ConfigError(fmt::format("{}: missing value", key));
    it->second(key, value);
    cfg.echo.emplace_back(key, value);
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), subcommand);
}

}  // namespace rtstab
