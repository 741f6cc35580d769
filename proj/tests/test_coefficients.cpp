#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "rtstab/coefficients.hpp"
#include "rtstab/errors.hpp"

using namespace rtstab;
using doctest::Approx;

namespace {

PhaseSpace square(int n, double v0 = 1.0, double v1 = 1.0, int na = 8, int ns = 1) {
  DomainSpec d;
  d.cells = {n, n};
  return PhaseSpace(SpatialMesh::build(d), build_velocity_set(v0, v1, na, ns));
}

}  // namespace

TEST_CASE("isotropic kernel on the unit circle is 1 / (2 pi)") {
  const auto ps = square(3);
  const auto k = isotropic_phase(ps);
  for (double v : k.values()) CHECK(v == Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(k.max_normalization_error() < 1e-14);
}

TEST_CASE("isotropic kernel on the annulus [1, 2] is 1 / (3 pi)") {
  const auto ps = square(2, 1.0, 2.0, 8, 3);
  const auto k = isotropic_phase(ps);
  for (double v : k.values()) CHECK(v == Approx(1.0 / (3.0 * std::numbers::pi)));
}

TEST_CASE("a row with one nonzero entry normalises to 1 / w") {
  const auto ps = square(2, 1.0, 2.0, 4, 2);
  const std::size_t n = ps.num_ordinates();
  std::vector<double> raw(ps.num_cells() * n * n, 0.0);
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    for (std::size_t j = 0; j < n; ++j) raw[(c * n + j) * n + (j + 3) % n] = 7.5;
  }
  const auto k = normalize_phase(raw, ps.num_cells(), ps.vset());
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jp = (j + 3) % n;
      CHECK(k.at(c, j, jp) == Approx(1.0 / ps.vset().weights[jp]));
    }
  }
}

TEST_CASE("zero rows, negative entries and wrong sizes are rejected") {
  const auto ps = square(2);
  const std::size_t n = ps.num_ordinates();
  std::vector<double> raw(ps.num_cells() * n * n, 1.0);
  auto zero_row = raw;
  std::fill_n(zero_row.begin() + n, n, 0.0);
  CHECK_THROWS_AS(normalize_phase(zero_row, ps.num_cells(), ps.vset()), DegenerateKernelError);
  auto negative = raw;
  negative[5] = -0.1;
  CHECK_THROWS_AS(normalize_phase(negative, ps.num_cells(), ps.vset()), DomainError);
  raw.pop_back();
  CHECK_THROWS_AS(normalize_phase(raw, ps.num_cells(), ps.vset()), ConfigError);
}

TEST_CASE("normalisation is idempotent and invariant under scaling of the raw input") {
  const auto ps = square(3, 0.5, 1.5, 6, 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = ps.num_ordinates();
  std::vector<double> raw(ps.num_cells() * n * n);
  for (double& r : raw) r = u(rng);
  const auto k1 = normalize_phase(raw, ps.num_cells(), ps.vset());
  const auto k2 = normalize_phase(k1.values(), ps.num_cells(), ps.vset());
  auto scaled = raw;
  for (double& r : scaled) r *= 123.0;
  const auto k3 = normalize_phase(scaled, ps.num_cells(), ps.vset());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    CHECK(std::abs(k2.values()[i] - k1.values()[i]) < 1e-14);
    CHECK(k3.values()[i] == Approx(k1.values()[i]).epsilon(1e-14));
  }
  CHECK(k1.max_normalization_error() < 1e-10);
  for (std::size_t c = 0; c < ps.num_cells(); ++c) {
    for (std::size_t j = 0; j < n; ++j) CHECK(k1.row_sum(c, j) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("coefficient arithmetic and total attenuation") {
  const auto ps = square(4);
  const auto sa = checkerboard(ps, 0.5, 0.2, 2, FieldLabel::sigma_a);
  const auto ss = gaussian_bump(ps, 0.1, 0.4, {0.3, 0.7}, 0.2, FieldLabel::sigma_s);
  const auto st = total_attenuation(sa, ss);
  CHECK(st.label() == FieldLabel::sigma_t);
  for (std::size_t i = 0; i < st.values().size(); ++i) {
    CHECK(st.values()[i] >= std::max(sa.values()[i], ss.values()[i]));
    CHECK(st.values()[i] == Approx(sa.values()[i] + ss.values()[i]));
  }
  const auto diff = st - sa;
  for (std::size_t i = 0; i < diff.values().size(); ++i) {
    CHECK(diff.values()[i] == Approx(ss.values()[i]));
  }
  CHECK((2.0 * ss).sup_norm() == Approx(2.0 * ss.sup_norm()));
  CHECK(sa.min_value() == Approx(0.3));
  CHECK(sa.sup_norm() == Approx(0.7));
  CHECK_THROWS_AS(sa + CoefficientField::constant(square(2), 1.0), ConfigError);
  CHECK(CoefficientField::constant(ps, 0.0).is_zero());
}

TEST_CASE("L2 norm of a constant is |c| sqrt(|Omega| |V|)") {
  const auto ps = square(5, 1.0, 2.0, 8, 2);
  const auto f = CoefficientField::constant(ps, -3.0);
  CHECK(f.l2_norm(ps) == Approx(3.0 * std::sqrt(1.0 * 3.0 * std::numbers::pi)));
}

TEST_CASE("gaussian bump peaks at its centre and checkerboard alternates") {
  const auto ps = square(8);
  const auto g = gaussian_bump(ps, 1.0, 2.0, {0.5, 0.5}, 0.1);
  // cells 27, 28, 35, 36 touch the centre
  const double peak = g.at(ps.mesh().index(3, 3), 0);
  CHECK(peak == Approx(1.0 + 2.0 * std::exp(-(2 * 0.0625 * 0.0625) / 0.02)));
  CHECK(g.sup_norm() == Approx(peak));
  const auto cb = checkerboard(ps, 1.0, 0.5, 2);
  CHECK(cb.at(ps.mesh().index(0, 0), 0) != cb.at(ps.mesh().index(4, 0), 0));
  CHECK(cb.at(ps.mesh().index(0, 0), 0) == cb.at(ps.mesh().index(4, 4), 0));
  CHECK_THROWS_AS(gaussian_bump(ps, 0.0, 1.0, {0.5, 0.5}, 0.0), ConfigError);
  CHECK_THROWS_AS(checkerboard(ps, 0.0, 1.0, 0), ConfigError);
}

TEST_CASE("coefficient CSV round trip and validation") {
  namespace fs = std::filesystem;
  const auto ps = square(2, 1.0, 1.0, 4, 1);
  const fs::path dir = fs::temp_directory_path() / "rtstab_coeff_csv";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "ok.csv");
    out << "cell_id,ordinate_id,value\n";
    for (std::size_t c = 0; c < ps.num_cells(); ++c) {
      for (std::size_t j = 0; j < ps.num_ordinates(); ++j) out << c << ',' << j << ',' << c + 0.25 * j << '\n';
    }
  }
  const auto f = load_coefficient_csv(dir / "ok.csv", ps, FieldLabel::sigma_t);
  CHECK(f.at(3, 2) == Approx(3.5));
  {
    std::ofstream out(dir / "short.csv");
    out << "0,0,1\n";
  }
  CHECK_THROWS_AS(load_coefficient_csv(dir / "short.csv", ps, FieldLabel::other), ConfigError);
  {
    std::ofstream out(dir / "range.csv");
    out << "9,0,1\n";
  }
  CHECK_THROWS_AS(load_coefficient_csv(dir / "range.csv", ps, FieldLabel::other), ConfigError);
  CHECK_THROWS_AS(load_coefficient_csv(dir / "missing.csv", ps, FieldLabel::other), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("source factor slices") {
  const auto ps = square(2);
  const auto r = SourceFactor::constant(ps, 2.0);
  CHECK_FALSE(r.time_dependent());
  CHECK(r.min_initial() == 2.0);
  CHECK(r.at(1, 1, 50) == 2.0);
  std::vector<double> data(3 * ps.slice_size(), 1.0);
  data[0] = -1.0;
  const auto rt = SourceFactor::from_levels(ps.num_cells(), ps.num_ordinates(), 3, data);
  CHECK(rt.time_dependent());
  CHECK(rt.min_initial() == -1.0);
  CHECK_THROWS_AS(static_cast<void>(rt.slice(3)), InsufficientDataError);
  data.pop_back();
  CHECK_THROWS_AS(SourceFactor::from_levels(ps.num_cells(), ps.num_ordinates(), 3, data),
                  ConfigError);
}

TEST_CASE("admissibility of coefficient fields against M") {
  const auto ps = square(2);
  const AdmissibilityBounds m{1.0};
  const auto ok = check_admissibility(CoefficientField::constant(ps, 0.5), m);
  CHECK(ok.pass);
  CHECK(ok.sup_norm == 0.5);
  CHECK_FALSE(check_admissibility(CoefficientField::constant(ps, 2.0), m).pass);
}

TEST_CASE("admissibility of u = t: time-derivative norm is sqrt(T |Omega| |V|)") {
  const auto ps = square(4);
  const std::size_t nt = 41;
  const double dt = 0.05;  // T = 2
  AngularDensityField u(ps.num_cells(), ps.num_ordinates(), nt, dt, 0, 0);
  for (std::size_t k = 0; k < nt; ++k) {
    for (double& v : u.snapshot(k)) v = u.time(k);
  }
  const auto r = check_admissibility(u, ps, {1e6});
  CHECK(r.dt_l2_norm == Approx(std::sqrt(2.0 * 1.0 * 2.0 * std::numbers::pi)));
  CHECK(r.sup_norm == Approx(2.0));
  CHECK(r.grad_h1_l2_norm == Approx(0.0));
  CHECK(r.pass);
  CHECK_FALSE(check_admissibility(u, ps, {1.0}).pass);
}
