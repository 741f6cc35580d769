#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtstab/coefficients.hpp"
#include "rtstab/mesh_velocity.hpp"
#include "rtstab/stability.hpp"
#include "rtstab/transport.hpp"

namespace rtstab {

/// Field preset from a config value:
///   constant:v | gaussian:base,amp,cx,cy,width | checkerboard:base,amp,blocks
///   | csv:path
struct FieldPreset {
  enum class Kind { constant, gaussian, checkerboard, csv };
  Kind kind = Kind::constant;
  std::vector<double> params{0.0};
  std::filesystem::path path;
  std::string text = "constant:0";
};

FieldPreset parse_field_preset(const std::string& key, const std::string& value);
CoefficientField build_field(const FieldPreset& preset, const PhaseSpace& ps,
                             FieldLabel label);

/// Inflow preset: from_initial | zero | constant:v
struct InflowPreset {
  enum class Kind { from_initial, zero, constant };
  Kind kind = Kind::from_initial;
  double value = 0.0;
  std::string text = "from_initial";
};

/// Phase preset: isotropic | csv:path (rows cell_id,j_out,j_in,value).
struct PhasePreset {
  bool isotropic = true;
  std::filesystem::path path;
  std::string text = "isotropic";
};

PhaseKernel build_phase(const PhasePreset& preset, const PhaseSpace& ps);

inline constexpr const char* kSubcommands[] = {
    "forward", "linearized", "carleman-check", "energy-check", "stability-ensemble",
    "holder-sweep"};

/// Validated run configuration. Optional members are derived at run time
/// (T from the observation-time condition, dt from the CFL bound).
struct RunConfig {
  std::string subcommand = "forward";

  DomainSpec domain;
  double v_min = 1.0;
  double v_max = 1.0;
  int n_angles = 8;
  int n_speeds = 1;

  FieldPreset sigma_t;
  FieldPreset sigma_s;
  FieldPreset initial{FieldPreset::Kind::constant, {1.0}, {}, "constant:1"};
  InflowPreset inflow;
  PhasePreset phase;

  std::optional<double> horizon;
  std::optional<double> dt;
  double cfl_factor = 0.9;
  double time_margin = 1.1;

  double beta = 0.5;
  bool beta_given = false;
  std::optional<double> s_min;
  std::optional<double> s_max;

  std::optional<FieldPreset> source_f;  // empty: random sources from the seed
  FieldPreset source_R{FieldPreset::Kind::constant, {1.0}, {}, "constant:1"};

  double admissibility_M = 10.0;
  int ensemble_count = 20;
  double perturbation_amplitude = 0.05;
  std::uint64_t seed = 1;
  double spread_threshold = 50.0;
  TraceSide side = TraceSide::gamma_plus;
  ExperimentKind experiment = ExperimentKind::linearized;
  std::vector<double> amplitudes{1.0, 0.3, 0.1, 0.03, 0.01};
  int carleman_runs = 5;
  bool dump_field = false;
  std::filesystem::path output_dir = "rtstab_out";
  int threads = 1;

  /// Keys and values exactly as read, in file order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys,
/// duplicate keys, malformed numbers and violated preconditions raise
/// ConfigError naming the key.
RunConfig parse_config_text(const std::string& text, const std::string& subcommand);
RunConfig parse_config(const std::filesystem::path& path, const std::string& subcommand);

/// The parameter checks that do not need a built mesh; parse_config calls
/// this, and the CLI calls it again after applying overrides.
void validate(const RunConfig& cfg);

/// Whether the subcommand relies on the linearised observation-time
/// condition and therefore on beta.
bool uses_beta(const RunConfig& cfg);

}  // namespace rtstab
