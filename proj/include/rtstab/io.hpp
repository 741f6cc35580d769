#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtstab/carleman.hpp"
#include "rtstab/energy.hpp"
#include "rtstab/field.hpp"
#include "rtstab/mesh_velocity.hpp"
#include "rtstab/stability.hpp"

namespace rtstab {

using json = nlohmann::ordered_json;

/// Round-trip formatting used by every CSV writer.
std::string format_real(double v);

/// face_id,ordinate_id,t,u,nu_dot_v for gamma_plus then gamma_minus
/// entries at every recorded time level.
void write_traces_csv(const std::filesystem::path& path, const AngularDensityField& field,
                      const PhaseSpace& ps);
void write_energy_csv(const std::filesystem::path& path, const EnergyTrace& e);
void write_partition_csv(const std::filesystem::path& path, const PhaseSpace& ps);
void write_ensemble_csv(const std::filesystem::path& path,
                        std::span<const StabilityReport> reports);

json to_json(const InequalityReport& r);
json to_json(const EnergyBalance& b);
/// One object per s value.
json to_json(const CarlemanReport& r);
json to_json(const CarlemanConfig& cfg);
json to_json(const StabilityReport& r);
json to_json(const EnsembleSummary& s);
json to_json(const HolderFit& f);

void write_json(const std::filesystem::path& path, const json& j);

/// Raw little-endian float64 array [time][cell][ordinate] in `bin`, plus
/// `bin` + ".json" describing shape, layout, dt and units.
void write_field_dump(const std::filesystem::path& bin, const AngularDensityField& field,
                      const PhaseSpace& ps);

/// Accumulates the run manifest; every written file goes through `add`.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path dir);

  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }
  /// Path for `name` inside the output directory, registered as an output.
  std::filesystem::path add(const std::string& name, const std::string& kind);
  json& data() noexcept { return data_; }
  void write(const std::string& status);

 private:
  std::filesystem::path dir_;
  json data_;
};

}  // namespace rtstab
