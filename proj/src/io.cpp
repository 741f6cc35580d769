#include "rtstab/io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include <fmt/format.h>

#include "rtstab/errors.hpp"

namespace rtstab {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  return out;
}

json optional_real(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_traces_csv(const fs::path& path, const AngularDensityField& field,
                      const PhaseSpace& ps) {
  auto out = open_out(path);
  const auto& part = ps.partition();
  const auto& tr = field.traces();
  std::string buf = "face_id,ordinate_id,t,u,nu_dot_v\n";
  for (std::size_t k = 0; k < field.num_times(); ++k) {
    const std::string t = format_real(field.time(k));
    const auto uo = tr.out(k);
    for (std::size_t i = 0; i < uo.size(); ++i) {
      const auto& e = part.gamma_plus[i];
      buf += fmt::format("{},{},{},{},{}\n", e.face, e.ordinate, t, format_real(uo[i]),
                         format_real(e.nu_dot_v));
    }
    const auto ui = tr.in(k);
    for (std::size_t i = 0; i < ui.size(); ++i) {
      const auto& e = part.gamma_minus[i];
      buf += fmt::format("{},{},{},{},{}\n", e.face, e.ordinate, t, format_real(ui[i]),
                         format_real(e.nu_dot_v));
    }
  }
  out << buf;
}

void write_energy_csv(const fs::path& path, const EnergyTrace& e) {
  auto out = open_out(path);
  out << "t,E\n";
  for (std::size_t k = 0; k < e.time.size(); ++k) {
    out << format_real(e.time[k]) << ',' << format_real(e.energy[k]) << '\n';
  }
}

void write_partition_csv(const fs::path& path, const PhaseSpace& ps) {
  auto out = open_out(path);
  out << "face_id,ordinate_id,nu_dot_v,side\n";
  for (const auto& e : ps.partition().gamma_plus) {
    out << e.face << ',' << e.ordinate << ',' << format_real(e.nu_dot_v) << ",gamma_plus\n";
  }
  for (const auto& e : ps.partition().gamma_minus) {
    out << e.face << ',' << e.ordinate << ',' << format_real(e.nu_dot_v) << ",gamma_minus\n";
  }
}

void write_ensemble_csv(const fs::path& path, std::span<const StabilityReport> reports) {
  auto out = open_out(path);
  out << "experiment_id,coeff_norm,meas_norm,ratio\n";
  for (const auto& r : reports) {
    out << r.experiment_id << ',' << format_real(r.coefficient_diff_norm) << ','
        << format_real(r.measurement_norm) << ','
        << (r.ratio ? format_real(*r.ratio) : std::string("nan")) << '\n';
  }
}

json to_json(const InequalityReport& r) {
  json rhs = json::object();
  for (const auto& [name, value] : r.rhs_components) rhs[name] = value;
  return {{"inequality_id", r.inequality_id}, {"C_fit", optional_real(r.c_fit)},
          {"lhs", r.lhs},                     {"rhs_components", rhs},
          {"argmax_t", r.argmax_t},           {"applicable", r.applicable},
          {"violation", r.violation},         {"notes", r.notes}};
}

json to_json(const EnergyBalance& b) {
  return {{"energy_initial", b.energy_initial},
          {"energy_final", b.energy_final},
          {"outflow_flux", b.outflow_flux},
          {"inflow_flux", b.inflow_flux},
          {"absorption", b.absorption},
          {"scattering", b.scattering},
          {"source", b.source},
          {"residual", b.residual},
          {"inflow_sign_consistent", b.inflow_sign_consistent}};
}

json to_json(const CarlemanReport& r) {
  json arr = json::array();
  for (const auto& t : r.terms) {
    arr.push_back({{"lemma_id", r.lemma_id},
                   {"s", t.s},
                   {"lhs_terms", {{"initial", t.lhs_initial}, {"bulk", t.lhs_bulk}}},
                   {"rhs_terms", {{"source", t.rhs_source}, {"boundary", t.rhs_boundary}}},
                   {"C", optional_real(t.c)},
                   {"log_shift", t.log_shift}});
  }
  return arr;
}

json to_json(const CarlemanConfig& c) {
  return {{"beta", c.beta}, {"T", c.horizon}, {"r_min", c.r_min}, {"r_max", c.r_max},
          {"r0", c.r0},     {"r1", c.r1},     {"delta", c.delta}, {"mu", c.mu},
          {"s0", c.s0},     {"s_grid", c.s_grid}};
}

json to_json(const StabilityReport& r) {
  return {{"experiment_id", r.experiment_id},
          {"kind", std::string(to_string(r.kind))},
          {"side", std::string(to_string(r.side))},
          {"weighted", r.weighted},
          {"amplitude", r.amplitude},
          {"coefficient_diff_norm", r.coefficient_diff_norm},
          {"measurement_norm", r.measurement_norm},
          {"ratio", optional_real(r.ratio)},
          {"degenerate", r.degenerate},
          {"solution_scale", r.solution_scale},
          {"notes", r.notes}};
}

json to_json(const EnsembleSummary& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"count", s.count},
          {"rho_min", s.rho_min},
          {"rho_max", s.rho_max},
          {"spread", s.spread},
          {"threshold", s.threshold},
          {"pass", s.pass}};
}

json to_json(const HolderFit& f) {
  return {{"theta", f.theta},
          {"intercept", f.intercept},
          {"residual", f.residual},
          {"count", f.count}};
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_field_dump(const fs::path& bin, const AngularDensityField& field,
                      const PhaseSpace& ps) {
  static_assert(std::endian::native == std::endian::little,
                "field dumps are written in native little-endian order");
  auto out = open_out(bin, std::ios::out | std::ios::binary);
  const auto v = field.values();
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));

  fs::path sidecar = bin;
  sidecar += ".json";
  write_json(sidecar, {{"dtype", "float64"},
                       {"byte_order", "little"},
                       {"shape", {field.num_times(), field.num_cells(), field.num_ordinates()}},
                       {"layout", "time, cell (ix + nx*iy), ordinate"},
                       {"nx", ps.mesh().nx()},
                       {"ny", ps.mesh().ny()},
                       {"dt", field.dt()},
                       {"units", {{"t", "nondimensional"}, {"u", "angular density"}}}});
}

Manifest::Manifest(fs::path dir) : dir_(std::move(dir)) {
  data_["outputs"] = json::array();
}

fs::path Manifest::add(const std::string& name, const std::string& kind) {
  data_["outputs"].push_back({{"file", name}, {"kind", kind}});
  return dir_ / name;
}

void Manifest::write(const std::string& status) {
  data_["status"] = status;
  write_json(dir_ / "manifest.json", data_);
}

}  // namespace rtstab
