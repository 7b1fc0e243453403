#include <doctest.h>

#include "helispec/spectral_grid.hpp"
#include "support.hpp"

#include <cmath>

using namespace helispec;
using helispec::testing::make_grid;

namespace {

GridSpec spec(int n, DerivativeScheme s, DealiasPolicy d = DealiasPolicy::none()) {
  GridSpec g;
  g.n = n;
  g.scheme = s;
  g.dealias = d;
  return g;
}

}  // namespace

TEST_CASE("spectral tables are the identity, Nyquist derivative zeroed") {
  const auto t = build_wavenumbers(spec(16, DerivativeScheme::Spectral));
  for (int i = 0; i < 16; ++i) {
    const int m = i <= 8 ? i : i - 16;
    CHECK(t.k2_eff(i) == doctest::Approx(double(m) * m));
    if (i != 8) CHECK(t.k1_eff(i) == doctest::Approx(m));
  }
  CHECK(t.k1_eff(8) == 0.0);
}

TEST_CASE("fd2 colocated at Nyquist") {
  const auto g = spec(32, DerivativeScheme::FD2Colocated);
  const auto t = build_wavenumbers(g);
  const double h = g.spacing();
  CHECK(t.k1_eff(0) == 0.0);
  CHECK(t.k2_eff(0) == 0.0);
  CHECK(t.k1_eff(16) == 0.0);
  CHECK(t.k2_eff(16) == doctest::Approx(4.0 / (h * h)).epsilon(1e-14));
}

TEST_CASE("fd2 staggered at Nyquist") {
  const auto g = spec(32, DerivativeScheme::FD2Staggered);
  const auto t = build_wavenumbers(g);
  const double h = g.spacing();
  CHECK(t.k1_eff(16) == doctest::Approx(2.0 / h).epsilon(1e-14));
  CHECK(t.avg_factor(16) == 0.0);
}

TEST_CASE("parity, unit shifts and composite symbols") {
  for (auto s : {DerivativeScheme::Spectral, DerivativeScheme::FD2Colocated, DerivativeScheme::FD2Staggered}) {
    const int n = 24;
    const auto t = build_wavenumbers(spec(n, s));
    for (int i = 1; i < n; ++i) {
      const int j = (n - i) % n;
      CHECK(t.k2_eff(i) == doctest::Approx(t.k2_eff(j)));
      CHECK(t.k2_eff(i) >= 0.0);
      if (i != n / 2) CHECK(t.k1_eff(i) == doctest::Approx(-t.k1_eff(j)));
      CHECK(std::abs(t.stagger_shift(i)) == doctest::Approx(1.0));
      CHECK(std::abs(t.avg_factor(i)) <= 1.0);
      const Complex I(0, 1);
      CHECK(std::abs(t.d_forward(i) - t.stagger_shift(i) * I * t.k1_eff(i)) < 1e-12);
      CHECK(std::abs(t.d_backward(i) - std::conj(t.stagger_shift(i)) * I * t.k1_eff(i)) < 1e-12);
      CHECK(std::abs(t.interp_forward(i) - t.stagger_shift(i) * t.avg_factor(i)) < 1e-14);
    }
    CHECK(t.k1_eff(0) == 0.0);
  }
}

TEST_CASE("fd2 symbols converge to spectral at second order") {
  for (auto s : {DerivativeScheme::FD2Colocated, DerivativeScheme::FD2Staggered}) {
    double prev1 = 0, prev2 = 0;
    for (int n : {16, 32, 64}) {
      const auto t = build_wavenumbers(spec(n, s));
      const double e1 = std::abs(t.k1_eff(1) - 1.0);
      const double e2 = std::abs(t.k2_eff(1) - 1.0);
      if (prev1 > 0) {
        CHECK(prev1 / e1 == doctest::Approx(4.0).epsilon(0.02));
        CHECK(prev2 / e2 == doctest::Approx(4.0).epsilon(0.02));
      }
      prev1 = e1;
      prev2 = e2;
    }
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(build_wavenumbers(spec(15, DerivativeScheme::Spectral)), ValidationError);
  CHECK_THROWS_AS(build_wavenumbers(spec(2, DerivativeScheme::Spectral)), ValidationError);
  CHECK_THROWS_AS(build_wavenumbers(spec(16, DerivativeScheme::Spectral, DealiasPolicy::sphere(7.5))),
                  ValidationError);
  CHECK_NOTHROW(build_wavenumbers(spec(16, DerivativeScheme::Spectral, DealiasPolicy::sphere(7))));
  GridSpec bad = spec(16, DerivativeScheme::Spectral);
  bad.box_length = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(parse_scheme("fd4"), ValidationError);
}

TEST_CASE("two-thirds rule") {
  CHECK(effective_resolution(spec(192, DerivativeScheme::Spectral, DealiasPolicy::two_thirds())) == 128);
  CHECK(resolved_k_max(spec(96, DerivativeScheme::Spectral, DealiasPolicy::two_thirds())) == 32);

  const auto g = make_grid(24, DerivativeScheme::Spectral, DealiasPolicy::two_thirds());
  const auto mask = dealias_mask(*g);
  const ModeLayout& L = g->layout();
  long kept = 0;
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j)
      for (int k = 0; k < L.nz; ++k) {
        const bool expect = std::abs(L.wave(i)) <= 8 && std::abs(L.wave(j)) <= 8 && k <= 8;
        CHECK(mask(L.index(i, j, k)) == expect);
        kept += expect;
      }
  CHECK(kept == 17L * 17 * 9);
}

TEST_CASE("sphere truncation at k_max = 42") {
  const auto g = make_grid(88, DerivativeScheme::Spectral, DealiasPolicy::sphere(42));
  const auto mask = dealias_mask(*g);
  const ModeLayout& L = g->layout();
  CHECK(mask(L.index(42, 0, 0)));
  CHECK(!mask(L.index(30, 30, 0)));
  CHECK(mask(L.index(L.fft_index(-42), 0, 0)));
  CHECK(!mask(L.index(0, 30, 30)));
}

TEST_CASE("masks: none keeps everything, application is idempotent") {
  auto g = make_grid(12);
  CHECK(dealias_mask(*g).all());
  auto d = make_grid(12, DerivativeScheme::Spectral, DealiasPolicy::sphere(4));
  const ModeWeights m = d->dealias_multiplier();
  CHECK(((m * m) == m).all());
}

TEST_CASE("Parseval weights and shells") {
  auto g = make_grid(8);
  const ModeLayout& L = g->layout();
  CHECK(g->parseval_weight()(L.index(1, 2, 0)) == 1.0);
  CHECK(g->parseval_weight()(L.index(1, 2, 4)) == 1.0);
  CHECK(g->parseval_weight()(L.index(1, 2, 3)) == 2.0);
  CHECK(g->shell()(L.index(3, 0, 3)) == 4);  // |m| = 4.24
  // weights count every lattice point once
  CHECK(g->parseval_weight().sum() == doctest::Approx(512.0));
}
