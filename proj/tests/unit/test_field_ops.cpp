#include <doctest.h>

#include "helispec/field_ops.hpp"
#include "support.hpp"

#include <cmath>

using namespace helispec;
using namespace helispec::testing;

namespace {

const DerivativeScheme kSchemes[] = {DerivativeScheme::Spectral, DerivativeScheme::FD2Colocated,
                                     DerivativeScheme::FD2Staggered};

// A = B = C = 1 ABC flow at wavenumber k sampled at the grid nodes.
SpectralVector beltrami(const GridPtr& g, int k) {
  const int n = g->n();
  const double h = g->spec().spacing();
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) p[c].resize(g->point_count());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double x = i * h, y = j * h, z = l * h;
        const Eigen::Index idx = (Eigen::Index(i) * n + j) * n + l;
        p[0](idx) = std::sin(k * z) + std::cos(k * y);
        p[1](idx) = std::sin(k * x) + std::cos(k * z);
        p[2](idx) = std::sin(k * y) + std::cos(k * x);
      }
  return to_spectral(g, p);
}

Real max_abs(const ModeArray& a) { return a.size() ? a.abs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("transform round trip and Parseval") {
  for (auto s : kSchemes) {
    auto g = make_grid(8, s);
    const SpectralVector a = noise(g, 1), b = noise(g, 2);
    const PhysicalVector pa = to_physical(a), pb = to_physical(b);
    const SpectralVector back = to_spectral(g, pa);
    CHECK((back - a).max_abs() < 1e-15);
    CHECK(rel_diff(inner(a, b), physical_inner(pa, pb)) < 1e-12);
    CHECK(inner(a, a) > 0.0);
  }
  auto g = make_grid(8);
  CHECK(inner(SpectralVector(g), SpectralVector(g)) == 0.0);
}

TEST_CASE("curl is symmetric: <w, R u> = <R_dual w, u>") {
  for (auto s : kSchemes) {
    auto g = make_grid(8, s);
    for (unsigned seed = 0; seed < 100; ++seed) {
      const SpectralVector u = noise(g, 2 * seed), w = noise(g, 2 * seed + 1);
      const Real lhs = inner(w, curl(u)), rhs = inner(curl_dual(w), u);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("G^T = -M and D1 = 0") {
  for (auto s : kSchemes) {
    auto g = make_grid(8, s);
    const SpectralVector u = noise(g, 7);
    const SpectralScalar p = noise_scalar(g, 8);
    CHECK(std::abs(inner(u, gradient(p)) + inner(divergence(u), p)) < 1e-12);
    SpectralScalar one = SpectralScalar::zeros(g);
    one.coeffs(0) = 1.0;
    CHECK(gradient(one).max_abs() == 0.0);
  }
}

TEST_CASE("summation by parts for each axis derivative") {
  for (auto s : {DerivativeScheme::Spectral, DerivativeScheme::FD2Colocated}) {
    auto g = make_grid(8, s);
    const SpectralScalar a = noise_scalar(g, 3), b = noise_scalar(g, 4);
    const SpectralVector da = gradient(a), db = gradient(b);
    for (int c = 0; c < 3; ++c) {
      SpectralScalar dac{g, da[c]}, dbc{g, db[c]};
      CHECK(std::abs(inner(a, dbc) + inner(b, dac)) < 1e-12);
    }
  }
}

TEST_CASE("curl of gradient vanishes") {
  for (auto s : kSchemes) {
    auto g = make_grid(8, s);
    CHECK(curl(gradient(noise_scalar(g, 5))).max_abs() < 1e-13);
  }
}

TEST_CASE("spectral divergence of gradient is -|k|^2") {
  auto g = make_grid(8);
  const SpectralScalar p = noise_scalar(g, 9);
  const SpectralScalar lap = divergence(gradient(p));
  const auto& t = g->symbols();
  for_each_mode(*g, [&](Eigen::Index idx, int i, int j, int k) {
    const double k2 = t.k1_eff(i) * t.k1_eff(i) + t.k1_eff(j) * t.k1_eff(j) + t.k1_eff(k) * t.k1_eff(k);
    CHECK(std::abs(lap.coeffs(idx) + k2 * p.coeffs(idx)) < 1e-12);
  });
}

TEST_CASE("projection") {
  for (auto s : kSchemes) {
    auto g = make_grid(8, s);
    const SpectralVector u = noise(g, 11);
    const SpectralVector pu = project(u);
    CHECK(max_divergence(pu) < 1e-13);
    CHECK((project(pu) - pu).max_abs() < 1e-14);
    const SpectralVector gp = gradient(noise_scalar(g, 12));
    CHECK(project(gp).max_abs() < 1e-13);
    // pressure drops out of the energy balance
    CHECK(std::abs(inner(pu, gp)) < 1e-12);
    if (s != DerivativeScheme::FD2Staggered) CHECK(std::abs(inner(curl(pu), gp)) < 1e-12);
    CHECK(is_hermitian(pu, 1e-14));
  }
}

TEST_CASE("Beltrami identities under the spectral scheme") {
  auto g = make_grid(16);
  const SpectralVector u = beltrami(g, 4);
  CHECK((curl(u) - 4.0 * u).max_abs() < 1e-13);
  CHECK(energy(u) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(helicity(u) == doctest::Approx(8.0 * energy(u)).epsilon(1e-13));
  CHECK(max_divergence(u) < 1e-13);
  CHECK(energy(SpectralVector(g)) == 0.0);
  CHECK(helicity(SpectralVector(g)) == 0.0);
}

TEST_CASE("fd2 helicity differs from spectral helicity on the same samples") {
  auto gs = make_grid(16);
  auto gf = make_grid(16, DerivativeScheme::FD2Colocated);
  const Real hs = helicity(beltrami(gs, 4));
  const Real hf = helicity(beltrami(gf, 4));
  // colocated FD2 symbol for k = 4 on 16 points: sin(pi/2)/h = 16/(2 pi)
  CHECK(hf / hs == doctest::Approx(16.0 / (2.0 * M_PI) / 4.0).epsilon(1e-12));
}

TEST_CASE("staggered helicity: vertex and centre definitions agree with the spectral form") {
  auto g = make_grid(8, DerivativeScheme::FD2Staggered);
  const SpectralVector u = project(noise(g, 21));
  const StaggeredHelicity sh = staggered_helicity(u);
  CHECK(rel_diff(sh.center, helicity(u)) < 1e-12);
  CHECK(rel_diff(sh.vertex, sh.center) < 1e-12);
}

TEST_CASE("Hermitian symmetrisation") {
  auto g = make_grid(8);
  SpectralVector u = noise(g, 5);
  CHECK(is_hermitian(u, 1e-15));
  u[0](g->layout().index(1, 2, 0)) += Complex(0.0, 1.0);
  CHECK(!is_hermitian(u, 1e-12));
  hermitian_symmetrize(u[0], *g);
  CHECK(is_hermitian(u, 1e-15));
}

TEST_CASE("operands on different grids are rejected") {
  auto a = make_grid(8), b = make_grid(8, DerivativeScheme::FD2Colocated);
  CHECK_THROWS_AS(inner(noise(a, 1), noise(b, 1)), ValidationError);
  auto c = make_grid(8);
  CHECK_NOTHROW(inner(noise(a, 1), noise(c, 1)));
  CHECK(max_abs(ModeArray()) == 0.0);
}
