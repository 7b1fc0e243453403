#include <doctest.h>

#include "helispec/time_integration.hpp"
#include "support.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace helispec;
using namespace helispec::testing;

namespace {

SpectralVector shear_mode(const GridPtr& g) {
  // u = (0, sin x, 0): u . grad u = 0, so only viscosity acts
  const int n = g->n();
  const double h = g->spec().spacing();
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) p[c] = PointArray::Zero(g->point_count());
  for (int i = 0; i < n; ++i)
    p[1].segment(Eigen::Index(i) * n * n, Eigen::Index(n) * n).setConstant(std::sin(i * h));
  return to_spectral(g, p);
}

SpectralVector abc(const GridPtr& g, int k) {
  const int n = g->n();
  const double h = g->spec().spacing();
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) p[c].resize(g->point_count());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const Eigen::Index idx = (Eigen::Index(i) * n + j) * n + l;
        p[0](idx) = std::sin(k * l * h) + std::cos(k * j * h);
        p[1](idx) = std::sin(k * i * h) + std::cos(k * l * h);
        p[2](idx) = std::sin(k * j * h) + std::cos(k * i * h);
      }
  return to_spectral(g, p);
}

Eigen::MatrixXd random_skew(int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = nd(rng);
  return a - a.transpose();
}

}  // namespace

TEST_CASE("symplecticity defect of the built-in tableaux") {
  CHECK(max_symplecticity_defect(ButcherTableau::builtin("gauss1")) == 0.0);
  const auto ge = symplecticity_defect(ButcherTableau::builtin("euler"));
  CHECK(ge(0, 0) == -1.0);
  const auto rk4 = ButcherTableau::builtin("rk4");
  // largest entries are b2 a21 - b1 b2 = 1/6 - 1/18 and its relatives
  CHECK(max_symplecticity_defect(rk4) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(symplecticity_defect(rk4)(0, 0) == doctest::Approx(-1.0 / 36.0));
  CHECK(rk4.kind == ButcherTableau::Kind::Explicit);
  CHECK(ButcherTableau::builtin("gauss1").kind == ButcherTableau::Kind::Implicit);
}

TEST_CASE("tableau parsing") {
  std::istringstream ok("# two-stage Gauss\n2\n1/4  1/4-0.2886751345948129\n0.25+0 1/4\n1/2 1/2\n");
  CHECK_THROWS_AS(parse_tableau(ok, "x"), ValidationError);  // expressions are not tokens

  const double r = std::sqrt(3.0) / 6.0;
  std::ostringstream text;
  text.precision(17);
  text << "2\n1/4 " << 0.25 - r << "\n" << 0.25 + r << " 1/4\n\n1/2 1/2\n";
  std::istringstream g2(text.str());
  const auto t = parse_tableau(g2, "gauss2");
  CHECK(t.s == 2);
  CHECK(t.kind == ButcherTableau::Kind::Implicit);
  CHECK(max_symplecticity_defect(t) < 1e-15);

  std::istringstream bad_sum("1\n0\n0.9\n");
  try {
    parse_tableau(bad_sum, "bad");
    FAIL("expected failure");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream bad_tok("2\n0 0\n1 x\n0.5 0.5\n");
  try {
    parse_tableau(bad_tok, "bad");
    FAIL("expected failure");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_tableau("/nonexistent/tableau.txt"), ValidationError);
  CHECK(load_tableau("rk4").s == 4);
}

TEST_CASE("quadratic invariants of a skew linear system") {
  const Eigen::MatrixXd S = random_skew(6, 42);
  Eigen::VectorXd y0 = Eigen::VectorXd::LinSpaced(6, 1.0, 2.0);
  const auto gauss = ButcherTableau::builtin("gauss1");
  const auto rk4 = ButcherTableau::builtin("rk4");
  Eigen::VectorXd yg = y0, yr = y0;
  const double dt = 0.01;
  double prev = y0.squaredNorm();
  for (int s = 0; s < 500; ++s) {
    yg = step_linear(S, yg, gauss, dt);
    yr = step_linear(S, yr, rk4, dt);
    CHECK(std::abs(yg.squaredNorm() - y0.squaredNorm()) < 1e-12 * y0.squaredNorm());
    CHECK(yr.squaredNorm() < prev);
    prev = yr.squaredNorm();
  }
}

TEST_CASE("Beltrami field is a steady Euler solution under the rotational form") {
  auto g = make_grid(16);
  const SpectralVector u = abc(g, 3);
  Dynamics dyn;
  dyn.form = ConvectiveForm::Rotational;
  CHECK(rhs(u, dyn).max_abs() < 1e-13);
}

TEST_CASE("rhs is divergence free") {
  auto g = make_grid(8, DerivativeScheme::FD2Colocated);
  Dynamics dyn;
  dyn.form = ConvectiveForm::Advective;
  dyn.nu = 0.1;
  CHECK(max_divergence(rhs(noise(g, 1), dyn)) < 1e-13);
}

TEST_CASE("rk4 local error on the viscous decay of a shear mode") {
  auto g = make_grid(8);
  const SpectralVector u0 = shear_mode(g);
  Dynamics dyn;
  dyn.form = ConvectiveForm::Advective;
  dyn.nu = 1.0;
  const auto rk4 = ButcherTableau::builtin("rk4");
  auto err = [&](double dt) {
    const SpectralVector u1 = step_explicit(u0, rk4, dt, dyn).u;
    return (u1 - std::exp(-dt) * u0).max_abs();
  };
  const double ratio = err(0.2) / err(0.1);
  CHECK(ratio == doctest::Approx(32.0).epsilon(0.1));
}

TEST_CASE("momentum is invariant and the energy/helicity attribution closes") {
  auto g = make_grid(8);
  SpectralVector u = project(noise(g, 3));
  u[0](0) = 0.3;
  u[2](0) = -0.1;
  Dynamics dyn;
  dyn.form = ConvectiveForm::SkewSymmetric;
  dyn.nu = 0.01;
  for (const char* tok : {"rk4", "euler"}) {
    const auto r = step_explicit(u, ButcherTableau::builtin(tok), 0.01, dyn).report;
    CHECK(r.delta_momentum.norm() < 1e-15);
    CHECK(std::abs(r.closure_e) < 1e-12 * std::abs(r.e_before));
    CHECK(std::abs(r.closure_h) < 1e-12 * std::max(1.0, std::abs(r.h_before)));
    CHECK(std::abs(r.nonlinear_e) < 1e-13);
  }
}

TEST_CASE("Gauss midpoint: energy and helicity conserved by the rotational form") {
  auto g = make_grid(16);
  SpectralVector u = project(abc(g, 2) + 0.5 * abc(g, 3) + 0.05 * project(noise(g, 5)));
  Dynamics dyn;
  dyn.form = ConvectiveForm::Rotational;
  const Real e0 = energy(u), h0 = helicity(u);
  const Real dt = cfl_dt(u, 0.5, 1.0);
  for (int s = 0; s < 5; ++s) {
    const auto res = step_implicit_gauss(u, dt, dyn, 1e-13, 200);
    CHECK(res.report.iterations > 1);
    u = res.u;
  }
  CHECK(std::abs(energy(u) - e0) < 1e-11 * e0);
  CHECK(std::abs(helicity(u) - h0) < 1e-11 * std::abs(h0));
  CHECK_THROWS_AS(step_implicit_gauss(u, dt, dyn, 1e-13, 2), ConvergenceError);
}

TEST_CASE("cfl time step") {
  auto g = make_grid(8);
  const SpectralVector u = noise(g, 9);
  CHECK(cfl_dt(SpectralVector(g), 0.5, 0.125) == 0.125);
  CHECK(cfl_dt(2.0 * u, 0.5, 10.0) == doctest::Approx(0.5 * cfl_dt(u, 0.5, 10.0)));
  CHECK_THROWS_AS(cfl_dt(u, 0.0, 1.0), ValidationError);
}
