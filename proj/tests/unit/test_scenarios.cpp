#include <doctest.h>

#include "helispec/diagnostics.hpp"
#include "helispec/scenarios.hpp"
#include "support.hpp"

#include <cmath>

using namespace helispec;
using namespace helispec::testing;

TEST_CASE("ABC flow invariants") {
  auto g = make_grid(16);
  const SpectralVector u = abc_field(AbcSpec{3}, g);
  CHECK(energy(u) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(helicity(u) == doctest::Approx(6.0 * 1.5).epsilon(1e-13));
  CHECK(max_divergence(u) < 1e-13);
  CHECK(is_hermitian(u, 1e-14));

  AbcSpec s{2, 1.0, 0.5, 0.0};
  s.energy_target = 0.25;
  s.phase = {0.3, 1.1, -0.4};
  const SpectralVector v = abc_field(s, g);
  CHECK(energy(v) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(helicity(v) == doctest::Approx(4.0 * 0.25).epsilon(1e-12));
}

TEST_CASE("staggered ABC samples are discretely divergence-free") {
  auto g = make_grid(16, DerivativeScheme::FD2Staggered);
  const SpectralVector u = abc_field(AbcSpec{3}, g);
  CHECK(divergence(u).coeffs.abs().maxCoeff() < 1e-13);
  // u_x depends on y and z only, so its face offset along x is immaterial
  CHECK(energy(u) == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("ABC validation") {
  auto g = make_grid(16);
  CHECK_THROWS_AS(abc_field(AbcSpec{0}, g), ValidationError);
  CHECK_THROWS_AS(abc_field(AbcSpec{8}, g), ValidationError);
  CHECK_THROWS_AS(abc_field(AbcSpec{2, 0.0, 0.0, 0.0}, g), ValidationError);
  CHECK_THROWS_AS(abc_superposition({}, g), ValidationError);
}

TEST_CASE("truncated-Euler initial state has relative helicity near 0.687") {
  const Scenario sc = preset("truncated_euler");
  auto g = Grid::create(sc.grid);
  const SpectralVector u = initial_state(sc, g, nullptr);
  // two equal-energy ABC flows: h / (2 k_max e) = (28 + 30) / (2 * 42)
  const Real r = relative_helicity(energy(u), helicity(u), 42);
  CHECK(r == doctest::Approx(58.0 / 84.0).epsilon(1e-12));
  CHECK(std::abs(r - 0.687) / 0.687 < 0.01);
}

TEST_CASE("random velocity is solenoidal and reproducible") {
  auto g = make_grid(8, DerivativeScheme::Spectral, DealiasPolicy::two_thirds());
  const SpectralVector a = random_velocity(g, 9), b = random_velocity(g, 9);
  CHECK((a - b).max_abs() == 0.0);
  CHECK(max_divergence(a) < 1e-13);
  CHECK(energy(a) > 0.0);
}

namespace {

// Galerkin-truncated rotational dynamics of the band computed on the main grid.
SpectralVector band_oracle(const SpectralVector& u, const ModeWeights& band) {
  const SpectralVector ub = apply_mask(u, band);
  return apply_mask(-project(nonlinear_term(ub, ConvectiveForm::Rotational)), band);
}

}  // namespace

TEST_CASE("Euler forcing evolves the band as a truncated inviscid system") {
  for (auto scheme : {DerivativeScheme::Spectral, DerivativeScheme::FD2Colocated}) {
    CAPTURE(to_token(scheme));
    auto g = make_grid(16, scheme);
    EulerForcing f(g, ForcingSpec{});
    const SpectralVector u = project(noise(g, 11));
    SpectralVector rhs(g);
    f.apply(u, rhs);
    const SpectralVector expect = band_oracle(u, f.forced_modes());
    CHECK((rhs - expect).max_abs() < 1e-13 * std::max(1.0, expect.max_abs()));
    CHECK(expect.max_abs() > 1e-3);

    // band energy and helicity are conserved by the band rhs
    const SpectralVector ub = apply_mask(u, f.forced_modes());
    const Real pe = inner(ub, rhs), ph = helicity_form(ub, rhs) + helicity_form(rhs, ub);
    CHECK(std::abs(pe) < 1e-13 * rhs.max_abs() * ub.max_abs() * 100);
    CHECK(std::abs(ph) < 1e-12 * rhs.max_abs() * ub.max_abs() * 100);
  }
}

TEST_CASE("forcing only overwrites the forced modes") {
  auto g = make_grid(16);
  auto f = std::make_shared<EulerForcing>(g, ForcingSpec{});
  const SpectralVector u = project(noise(g, 13));
  const SpectralVector free_rhs = evaluate(u, Dynamics{ConvectiveForm::Rotational, 0.01, nullptr}).f;
  const SpectralVector forced_rhs = evaluate(u, Dynamics{ConvectiveForm::Rotational, 0.01, f}).f;
  const ModeWeights outside = 1.0 - f->forced_modes();
  CHECK((apply_mask(free_rhs - forced_rhs, outside)).max_abs() == 0.0);
  // 2.5-ball: shells 1 and 2 plus |m|^2 = 5, 6 -> 6 + 12 + 8 + 24 + 24 = 74 points, 37 stored pairs
  int count = 0;
  for (Eigen::Index i = 0; i < f->forced_modes().size(); ++i) count += f->forced_modes()(i) > 0.0;
  int expect = 0;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      for (int z = -2; z <= 2; ++z) {
        const int r2 = x * x + y * y + z * z;
        if (r2 > 0 && r2 <= 6 && (z > 0 || (z == 0 && (y > 0 || (y == 0 && x > 0))))) ++expect;
      }
  // stored modes on the kz = 0 plane include both members of each pair
  int plane = 0;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      if (x * x + y * y > 0 && x * x + y * y <= 6) ++plane;
  CHECK(count == expect + plane / 2);
}

TEST_CASE("helical forced initial state") {
  // FD2 symbols shrink |k1| enough that 0.967 is out of reach below 64^3
  for (auto [scheme, n] : {std::pair{DerivativeScheme::Spectral, 16}, std::pair{DerivativeScheme::FD2Colocated, 64}}) {
    CAPTURE(to_token(scheme));
    auto g = make_grid(n, scheme);
    EulerForcing f(g, ForcingSpec{});
    const SpectralVector u = f.initial_state();
    CHECK(f.band_energy(u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(relative_helicity(f.band_energy(u), f.band_helicity(u), 2.5) == doctest::Approx(0.967).epsilon(1e-8));
    CHECK(rel_diff(energy(u), f.band_energy(u)) < 1e-13);
    CHECK(is_hermitian(u, 1e-14));
    CHECK(divergence(u).coeffs.abs().maxCoeff() < 1e-13);
    CHECK(f.max_relative_helicity() > 0.967);
  }
}

TEST_CASE("forcing validation") {
  auto g = make_grid(16);
  ForcingSpec s;
  s.h_rel = 0.999;
  CHECK_THROWS_AS(EulerForcing(g, s).initial_state(), ValidationError);
  s = ForcingSpec{};
  s.k_F = 9.0;
  CHECK_THROWS_AS(EulerForcing(g, s), ValidationError);
  s = ForcingSpec{};
  s.energy = -1.0;
  CHECK_THROWS_AS(EulerForcing(g, s), ValidationError);
  CHECK_THROWS_AS(EulerForcing(make_grid(16, DerivativeScheme::FD2Staggered), ForcingSpec{}), ValidationError);
  // (2,1,1) on 32^3 FD2: |k1| = 2.403, so the band cannot exceed 0.961
  EulerForcing fd(make_grid(32, DerivativeScheme::FD2Colocated), ForcingSpec{});
  CHECK(fd.max_relative_helicity() == doctest::Approx(std::sqrt(std::pow(std::sin(M_PI / 8), 2) + 2 * std::pow(std::sin(M_PI / 16), 2)) * 16 / M_PI / 2.5));
  CHECK_THROWS_AS(fd.initial_state(), ValidationError);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name));
  for (int a = 1; a <= 6; ++a) {
    const Scenario sc = preset("inviscid32", a);
    CHECK_NOTHROW(check_form(sc.form, *Grid::create(sc.grid)));
  }
  CHECK(preset("inviscid32", 6).grid.scheme == DerivativeScheme::FD2Staggered);
  CHECK_THROWS_AS(preset("inviscid32", 7), ValidationError);
  CHECK_THROWS_AS(preset("nope"), ValidationError);

  const Scenario sc = preset("inviscid32", 2);
  auto g = Grid::create(sc.grid);
  const SpectralVector u = initial_state(sc, g, nullptr);
  CHECK(energy(u) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(characteristic_time(sc, u, nullptr) == doctest::Approx(1.0 / (std::sqrt(3.0) * 4.0)).epsilon(1e-13));
}
