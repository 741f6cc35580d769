#include "rtstab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "rtstab/errors.hpp"

namespace rtstab {

std::string_view to_string(FieldLabel label) noexcept {
  switch (label) {
    case FieldLabel::sigma_a: return "sigma_a";
    case FieldLabel::sigma_s: return "sigma_s";
    case FieldLabel::sigma_t: return "sigma_t";
    case FieldLabel::source: return "f";
    case FieldLabel::other: return "other";
  }
  return "other";
}

CoefficientField::CoefficientField(std::size_t num_cells, std::size_t num_ordinates,
                                   FieldLabel label, double fill)
    : num_cells_(num_cells),
      num_ordinates_(num_ordinates),
      label_(label),
      values_(num_cells * num_ordinates, fill) {}

CoefficientField CoefficientField::constant(const PhaseSpace& ps, double value,
                                            FieldLabel label) {
  return {ps.num_cells(), ps.num_ordinates(), label, value};
}

CoefficientField CoefficientField::from_function(
    const PhaseSpace& ps, FieldLabel label,
    const std::function<double(Vec2, Vec2)>& fn) {
  CoefficientField field(ps.num_cells(), ps.num_ordinates(), label);
  const auto& ords = ps.vset().ordinates;
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    const Vec2 x = ps.mesh().cell_center(c);
    for (std::size_t j = 0; j < ords.size(); ++j) field.at(c, j) = fn(x, ords[j]);
  }
  return field;
}

double CoefficientField::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CoefficientField::min_value() const noexcept {
  if (values_.empty()) return 0.0;
  return *std::min_element(values_.begin(), values_.end());
}

double CoefficientField::l2_norm(const PhaseSpace& ps) const {
  if (num_cells_ != ps.num_cells() || num_ordinates_ != ps.num_ordinates()) {
    throw ConfigError("coefficient field does not match the phase space");
  }
  const auto& w = ps.vset().weights;
  double sum = 0.0;
  for (std::size_t c = 0; c < num_cells_; ++c) {
    for (std::size_t j = 0; j < num_ordinates_; ++j) {
      const double v = at(c, j);
      sum += v * v * w[j];
    }
  }
  return std::sqrt(sum * ps.mesh().cell_volume());
}

bool CoefficientField::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void CoefficientField::check_shape(const CoefficientField& other) const {
  if (num_cells_ != other.num_cells_ || num_ordinates_ != other.num_ordinates_) {
    throw ConfigError("coefficient fields have different shapes");
  }
}

CoefficientField& CoefficientField::operator+=(const CoefficientField& other) {
  check_shape(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

CoefficientField& CoefficientField::operator-=(const CoefficientField& other) {
  check_shape(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

CoefficientField& CoefficientField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

CoefficientField operator+(CoefficientField a, const CoefficientField& b) {
  a += b;
  return a;
}

CoefficientField operator-(CoefficientField a, const CoefficientField& b) {
  a -= b;
  return a;
}

CoefficientField operator*(double s, CoefficientField a) {
  a *= s;
  return a;
}

CoefficientField gaussian_bump(const PhaseSpace& ps, double base, double amplitude,
                               Vec2 center, double width, FieldLabel label) {
  if (!(width > 0.0)) {
    throw ConfigError(fmt::format("gaussian width must be positive (got {})", width));
  }
  const double inv = 1.0 / (2.0 * width * width);
  return CoefficientField::from_function(ps, label, [&](Vec2 x, Vec2) {
    const double dx = x.x - center.x;
    const double dy = x.y - center.y;
    return base + amplitude * std::exp(-(dx * dx + dy * dy) * inv);
  });
}

CoefficientField checkerboard(const PhaseSpace& ps, double base, double amplitude,
                              int blocks, FieldLabel label) {
  if (blocks <= 0) {
    throw ConfigError(fmt::format("checkerboard blocks must be positive (got {})", blocks));
  }
  const Vec2 o = ps.mesh().origin();
  const Vec2 e = ps.mesh().extents();
  return CoefficientField::from_function(ps, label, [&](Vec2 x, Vec2) {
    const int bx = std::min(blocks - 1, static_cast<int>((x.x - o.x) / e.x * blocks));
    const int by = std::min(blocks - 1, static_cast<int>((x.y - o.y) / e.y * blocks));
    return ((bx + by) % 2 == 0) ? base + amplitude : base - amplitude;
  });
}

CoefficientField load_coefficient_csv(const std::filesystem::path& path,
                                      const PhaseSpace& ps, FieldLabel label) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open coefficient file {}", path.string()));

  CoefficientField field(ps.num_cells(), ps.num_ordinates(), label);
  std::vector<char> seen(ps.slice_size(), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find_first_of("0123456789") != 0 &&
        line.find("cell") != std::string::npos) {
      continue;  // header
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    long long cell = -1;
    long long ord = -1;
    double value = 0.0;
    if (!(row >> cell >> ord >> value)) {
      throw ConfigError(fmt::format("{}:{}: expected cell_id,ordinate_id,value",
                                    path.string(), line_no));
    }
    if (cell < 0 || ord < 0 || static_cast<std::size_t>(cell) >= ps.num_cells() ||
        static_cast<std::size_t>(ord) >= ps.num_ordinates()) {
      throw ConfigError(fmt::format("{}:{}: index ({}, {}) out of range",
                                    path.string(), line_no, cell, ord));
    }
    const auto c = static_cast<std::size_t>(cell);
    const auto j = static_cast<std::size_t>(ord);
    if (seen[ps.slot(c, j)]) {
      throw ConfigError(fmt::format("{}:{}: duplicate entry ({}, {})", path.string(),
                                    line_no, cell, ord));
    }
    seen[ps.slot(c, j)] = 1;
    field.at(c, j) = value;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ConfigError(fmt::format("{}: not every (cell, ordinate) pair is set",
                                  path.string()));
  }
  return field;
}

CoefficientField total_attenuation(const CoefficientField& sigma_a,
                                   const CoefficientField& sigma_s) {
  CoefficientField t = sigma_a + sigma_s;
  t.set_label(FieldLabel::sigma_t);
  return t;
}

double PhaseKernel::row_sum(std::size_t cell, std::size_t j_out) const {
  const auto r = row(cell, j_out);
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * weights_[k];
  return s;
}

double PhaseKernel::max_normalization_error() const {
  double err = 0.0;
  for (std::size_t c = 0; c < num_cells_; ++c) {
    for (std::size_t j = 0; j < num_ordinates_; ++j) {
      err = std::max(err, std::abs(row_sum(c, j) - 1.0));
    }
  }
  return err;
}

PhaseKernel normalize_phase(std::span<const double> raw, std::size_t num_cells,
                            const VelocitySet& vset) {
  const std::size_t n = vset.size();
  if (raw.size() != num_cells * n * n) {
    throw ConfigError(fmt::format("raw kernel has {} entries, expected {}", raw.size(),
                                  num_cells * n * n));
  }
  PhaseKernel k;
  k.num_cells_ = num_cells;
  k.num_ordinates_ = n;
  k.weights_ = vset.weights;
  k.values_.assign(raw.begin(), raw.end());
  for (std::size_t c = 0; c < num_cells; ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      double* row = k.values_.data() + (c * n + j) * n;
      double s = 0.0;
      for (std::size_t jp = 0; jp < n; ++jp) {
        if (row[jp] < 0.0 || !std::isfinite(row[jp])) {
          throw DomainError(fmt::format(
              "phase kernel entry ({}, {}, {}) = {} must be finite and >= 0", c, j,
              jp, row[jp]));
        }
        s += row[jp] * vset.weights[jp];
      }
      if (!(s > 0.0)) {
        throw DegenerateKernelError(fmt::format(
            "phase kernel row (cell {}, ordinate {}) has zero quadrature sum", c, j));
      }
      for (std::size_t jp = 0; jp < n; ++jp) row[jp] /= s;
    }
  }
  return k;
}

PhaseKernel isotropic_phase(const PhaseSpace& ps) {
  const std::size_t n = ps.num_ordinates();
  const std::vector<double> raw(ps.num_cells() * n * n, 1.0);
  return normalize_phase(raw, ps.num_cells(), ps.vset());
}

SourceFactor SourceFactor::constant(const PhaseSpace& ps, double value) {
  return time_independent(CoefficientField::constant(ps, value));
}

SourceFactor SourceFactor::time_independent(const CoefficientField& values) {
  SourceFactor r;
  r.num_cells_ = values.num_cells();
  r.num_ordinates_ = values.num_ordinates();
  r.num_times_ = 0;
  r.data_.assign(values.values().begin(), values.values().end());
  return r;
}

SourceFactor SourceFactor::from_history(const AngularDensityField& history,
                                        double scale) {
  std::vector<double> data(history.values().begin(), history.values().end());
  for (double& v : data) v *= scale;
  return from_levels(history.num_cells(), history.num_ordinates(), history.num_times(),
                     std::move(data));
}

SourceFactor SourceFactor::from_levels(std::size_t num_cells, std::size_t num_ordinates,
                                       std::size_t num_times, std::vector<double> data) {
  if (num_times == 0 || data.size() != num_cells * num_ordinates * num_times) {
    throw ConfigError("source factor data does not match its declared shape");
  }
  SourceFactor r;
  r.num_cells_ = num_cells;
  r.num_ordinates_ = num_ordinates;
  r.num_times_ = num_times;
  r.data_ = std::move(data);
  return r;
}

std::span<const double> SourceFactor::slice(std::size_t k) const {
  if (num_times_ == 0) return data_;
  if (k >= num_times_) {
    throw InsufficientDataError(fmt::format(
        "source factor has {} time levels, level {} requested", num_times_, k));
  }
  return {data_.data() + k * slice_size(), slice_size()};
}

double SourceFactor::min_initial() const {
  const auto s = slice(0);
  if (s.empty()) return 0.0;
  return *std::min_element(s.begin(), s.end());
}

AdmissibilityReport check_admissibility(const CoefficientField& field,
                                        const AdmissibilityBounds& bounds) {
  AdmissibilityReport r;
  r.is_coefficient = true;
  r.bound = bounds.M;
  r.sup_norm = field.sup_norm();
  r.total = r.sup_norm;
  r.pass = bounds.M > 0.0 && r.total <= bounds.M;
  return r;
}

namespace {

// Centred differences in the interior, one-sided next to the boundary.
void gradient(std::span<const double> u, const PhaseSpace& ps, std::vector<double>& gx,
              std::vector<double>& gy) {
  const auto& mesh = ps.mesh();
  const int nx = mesh.nx();
  const int ny = mesh.ny();
  const Vec2 h = mesh.cell_size();
  const std::size_t nord = ps.num_ordinates();
  gx.assign(u.size(), 0.0);
  gy.assign(u.size(), 0.0);
  auto val = [&](int ix, int iy, std::size_t j) { return u[ps.slot(mesh.index(ix, iy), j)]; };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t c = mesh.index(ix, iy);
      for (std::size_t j = 0; j < nord; ++j) {
        if (nx > 1) {
          const int lo = std::max(ix - 1, 0);
          const int hi = std::min(ix + 1, nx - 1);
          gx[ps.slot(c, j)] = (val(hi, iy, j) - val(lo, iy, j)) / ((hi - lo) * h.x);
        }
        if (ny > 1) {
          const int lo = std::max(iy - 1, 0);
          const int hi = std::min(iy + 1, ny - 1);
          gy[ps.slot(c, j)] = (val(ix, hi, j) - val(ix, lo, j)) / ((hi - lo) * h.y);
        }
      }
    }
  }
}

}  // namespace

AdmissibilityReport check_admissibility(const AngularDensityField& field,
                                        const PhaseSpace& ps,
                                        const AdmissibilityBounds& bounds) {
  if (field.slice_size() != ps.slice_size()) {
    throw ConfigError("field does not match the phase space");
  }
  AdmissibilityReport r;
  r.bound = bounds.M;
  const std::size_t nt = field.num_times();
  const double dt = field.dt();
  const double vol = ps.mesh().cell_volume();
  const auto& w = ps.vset().weights;
  const std::size_t nord = ps.num_ordinates();

  auto l2_sq = [&](std::span<const double> s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) sum += s[i] * s[i] * w[i % nord];
    return sum * vol;
  };
  auto sup = [](std::span<const double> s) {
    double m = 0.0;
    for (double v : s) m = std::max(m, std::abs(v));
    return m;
  };
  auto trap = [&](std::size_t k) {
    return (k == 0 || k + 1 == nt) ? 0.5 * dt : dt;
  };

  double u_linf_sq = 0.0, u_l2_sq = 0.0, grad_sq = 0.0;
  double dt_linf_sq = 0.0, dt_l2_sq = 0.0, dtt_l2_sq = 0.0, dt_grad_sq = 0.0;
  std::vector<double> diff(field.slice_size());
  std::vector<double> gx, gy, gx_prev, gy_prev;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto u = field.snapshot(k);
    const double s = sup(u);
    r.sup_norm = std::max(r.sup_norm, s);
    if (nt > 1) {
      u_linf_sq += trap(k) * s * s;
      u_l2_sq += trap(k) * l2_sq(u);
    }
    gradient(u, ps, gx, gy);
    if (nt > 1) grad_sq += trap(k) * (l2_sq(gx) + l2_sq(gy));
    if (k > 0) {
      const auto prev = field.snapshot(k - 1);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = (u[i] - prev[i]) / dt;
      const double ds = sup(diff);
      dt_linf_sq += dt * ds * ds;
      dt_l2_sq += dt * l2_sq(diff);
      for (std::size_t i = 0; i < diff.size(); ++i) {
        gx_prev[i] = (gx[i] - gx_prev[i]) / dt;
        gy_prev[i] = (gy[i] - gy_prev[i]) / dt;
      }
      dt_grad_sq += dt * (l2_sq(gx_prev) + l2_sq(gy_prev));
    }
    if (k > 0 && k + 1 < nt) {
      const auto prev = field.snapshot(k - 1);
      const auto next = field.snapshot(k + 1);
      for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = (next[i] - 2.0 * u[i] + prev[i]) / (dt * dt);
      }
      dtt_l2_sq += dt * l2_sq(diff);
    }
    gx_prev = gx;
    gy_prev = gy;
  }
  r.dt_l2_norm = std::sqrt(dt_l2_sq);
  r.h1_linf_norm = std::sqrt(u_linf_sq + dt_linf_sq);
  r.h2_l2_norm = std::sqrt(u_l2_sq + dt_l2_sq + dtt_l2_sq);
  r.grad_h1_l2_norm = std::sqrt(grad_sq + dt_grad_sq);
  r.total = r.h1_linf_norm + r.h2_l2_norm + r.grad_h1_l2_norm;
  r.pass = bounds.M > 0.0 && r.total <= bounds.M;
  return r;
}

}  // namespace rtstab
