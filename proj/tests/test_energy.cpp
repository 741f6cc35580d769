#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rtstab/energy.hpp"
#include "rtstab/errors.hpp"
#include "rtstab/transport.hpp"

using namespace rtstab;
using doctest::Approx;

namespace {

PhaseSpace square(int n) {
  DomainSpec d;
  d.cells = {n, n};
  return PhaseSpace(SpatialMesh::build(d), build_velocity_set(1.0, 1.0, 8, 1));
}

ProblemData problem(const PhaseSpace& ps, double sigma_t, double sigma_s, double T) {
  ProblemData p;
  p.initial = gaussian_bump(ps, 0.0, 1.0, {0.5, 0.5}, 0.1);
  p.sigma_t = CoefficientField::constant(ps, sigma_t, FieldLabel::sigma_t);
  p.sigma_s = CoefficientField::constant(ps, sigma_s, FieldLabel::sigma_s);
  p.phase = isotropic_phase(ps);
  p.horizon = T;
  return p;
}

AngularDensityField linearized_run(const PhaseSpace& ps, const CoefficientField& f) {
  return solve_linearized(f, SourceFactor::constant(ps, 1.0), CoefficientField::constant(ps, 0.3),
                          CoefficientField::constant(ps, 0.1), isotropic_phase(ps), ps, 1.5,
                          max_stable_dt(ps));
}

}  // namespace

TEST_CASE("energy of zero and of one") {
  const auto ps = square(6);
  AngularDensityField u(ps.num_cells(), ps.num_ordinates(), 3, 0.1, 0, 0);
  for (double e : energy(u, ps).energy) CHECK(e == 0.0);
  for (std::size_t k = 0; k < 3; ++k) {
    for (double& v : u.snapshot(k)) v = 1.0;
  }
  for (double e : energy(u, ps).energy) CHECK(e == Approx(2.0 * std::numbers::pi));
}

TEST_CASE("free streaming of an interior bump keeps its energy within 2 percent") {
  const auto ps = square(128);
  const auto u = solve_forward(problem(ps, 0.0, 0.0, 0.1), ps, max_stable_dt(ps));
  const auto e = energy(u, ps);
  for (double v : e.energy) CHECK(v == Approx(e.energy.front()).epsilon(0.02));
}

TEST_CASE("gronwall bound: not applicable with zero data") {
  const auto ps = square(4);
  auto p = problem(ps, 0.3, 0.0, 0.5);
  p.initial = CoefficientField::constant(ps, 0.0);
  const auto u = solve_forward(p, ps, max_stable_dt(ps));
  const auto r = verify_gronwall_bound(u, p, ps);
  CHECK_FALSE(r.applicable);
  CHECK_FALSE(r.c_fit.has_value());
  CHECK_FALSE(r.violation);
}

TEST_CASE("gronwall bound: pure absorption gives C <= 1") {
  const auto ps = square(24);
  for (double c : {0.0, 0.5, 3.0}) {
    const auto p = problem(ps, c, 0.0, 1.0);
    const auto u = solve_forward(p, ps, max_stable_dt(ps));
    const auto r = verify_gronwall_bound(u, p, ps);
    REQUIRE(r.c_fit.has_value());
    CHECK(*r.c_fit <= 1.0 + 1e-8);
    CHECK(r.argmax_t == 0.0);
    CHECK(r.inequality_id == "gronwall_energy_bound");
  }
}

TEST_CASE("gronwall bound: scattering run with inflow and source is stable under refinement") {
  double c[2];
  for (int level = 0; level < 2; ++level) {
    const auto ps = square(level == 0 ? 16 : 32);
    auto p = problem(ps, 0.4, 0.3, 1.2);
    p.inflow = constant_inflow(0.5);
    p.source_f = gaussian_bump(ps, 0.0, 1.0, {0.3, 0.6}, 0.1);
    p.source_R = SourceFactor::constant(ps, 1.0);
    const auto u = solve_forward(p, ps, max_stable_dt(ps));
    const auto r = verify_gronwall_bound(u, p, ps);
    REQUIRE(r.c_fit.has_value());
    c[level] = *r.c_fit;
  }
  CHECK(std::isfinite(c[0]));
  CHECK(c[1] / c[0] < 2.0);
  CHECK(c[0] / c[1] < 2.0);
}

TEST_CASE("outflow bound: zero source is not applicable") {
  const auto ps = square(6);
  const auto u = linearized_run(ps, CoefficientField::constant(ps, 0.0));
  const auto r = verify_outflow_bound(u, ps, 0.0);
  CHECK_FALSE(r.applicable);
  CHECK_FALSE(r.c_fit.has_value());
}

TEST_CASE("outflow bound: single bump has finite C and no inflow term") {
  const auto ps = square(16);
  const auto f = gaussian_bump(ps, 0.0, 1.0, {0.4, 0.5}, 0.1);
  const auto u = linearized_run(ps, f);
  const auto r = verify_outflow_bound(u, ps, f.l2_norm(ps));
  REQUIRE(r.c_fit.has_value());
  CHECK(r.lhs > 0.0);
  CHECK(r.rhs_components[1].second == 0.0);
  CHECK(*r.c_fit == Approx(r.lhs / (f.l2_norm(ps) * f.l2_norm(ps))));

  const auto f2 = 2.0 * f;
  const auto r2 = verify_outflow_bound(linearized_run(ps, f2), ps, f2.l2_norm(ps));
  CHECK(*r2.c_fit == Approx(*r.c_fit).epsilon(1e-12));
  CHECK(r2.lhs == Approx(4.0 * r.lhs).epsilon(1e-12));
}

TEST_CASE("energy identity: closes to first order under refinement") {
  double res[3];
  for (int level = 0; level < 3; ++level) {
    const auto ps = square(16 << level);
    auto p = problem(ps, 0.3, 0.2, 0.5);
    p.inflow = constant_inflow(0.1);
    p.source_f = gaussian_bump(ps, 0.0, 0.5, {0.6, 0.4}, 0.1);
    p.source_R = SourceFactor::constant(ps, 1.0);
    const auto u = solve_forward(p, ps, max_stable_dt(ps));
    const auto b = energy_identity_residual(u, p, ps);
    CHECK(b.inflow_sign_consistent);
    CHECK(b.outflow_flux >= 0.0);
    CHECK(b.inflow_flux >= 0.0);
    CHECK(b.absorption >= 0.0);
    const auto e = energy(u, ps);
    CHECK(b.energy_final == Approx(e.energy.back()));
    res[level] = std::abs(b.residual);
  }
  CHECK(res[1] < res[0]);
  CHECK(res[2] < res[1]);
  CHECK(res[2] / res[1] == Approx(0.5).epsilon(0.25));
}

TEST_CASE("energy identity needs two time levels") {
  const auto ps = square(4);
  AngularDensityField u(ps.num_cells(), ps.num_ordinates(), 1, 0.1,
                        ps.partition().gamma_plus.size(), ps.partition().gamma_minus.size());
  CHECK_THROWS_AS(energy_identity_residual(u, problem(ps, 0.1, 0.0, 0.1), ps),
                  InsufficientDataError);
}
