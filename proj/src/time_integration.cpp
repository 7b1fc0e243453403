#include "helispec/time_integration.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace helispec {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw ValidationError("tableau line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, int line) {
  const auto slash = tok.find('/');
  auto full = [&](const std::string& s) {
    if (s.empty()) parse_fail(line, "malformed number '" + tok + "'");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) parse_fail(line, "malformed number '" + tok + "'");
    return v;
  };
  if (slash == std::string::npos) return full(tok);
  const double p = full(tok.substr(0, slash));
  const double q = full(tok.substr(slash + 1));
  if (q == 0.0) parse_fail(line, "zero denominator in '" + tok + "'");
  return p / q;
}

Real hel_sym(const SpectralVector& a, const SpectralVector& b) {
  // the colocated curl is symmetric, so both terms agree
  if (a.g().mode_symbols().colocated) return 2.0 * helicity_form(a, b);
  return helicity_form(a, b) + helicity_form(b, a);
}

void check_finite(const SpectralVector& v, const char* where) {
  if (!v.all_finite()) throw NumericalBlowup(std::string("non-finite values in ") + where);
}

// u0 + dt sum_j a_ij f_j
SpectralVector stage_value(const SpectralVelocity& u0, const ButcherTableau& t, int i, Real dt,
                           const std::vector<SpectralVector>& f) {
  SpectralVector ui(u0);
  for (int j = 0; j < t.s; ++j)
    if (t.a(i, j) != 0.0 && f[j].grid()) ui.add_scaled(dt * t.a(i, j), f[j]);
  return ui;
}

StepResult combine(const SpectralVelocity& u0, const ButcherTableau& t, Real dt,
                   const std::vector<SpectralVector>& f, const std::vector<SpectralVector>& pn,
                   const std::vector<SpectralVector>& stages, const StepOptions& opt, int iterations,
                   Real residual) {
  StepResult r;
  r.u = u0;
  for (int i = 0; i < t.s; ++i) r.u.add_scaled(dt * t.b(i), f[i]);
  r.u = project(r.u);
  check_finite(r.u, "step result");

  StepReport& rep = r.report;
  rep.dt = dt;
  rep.iterations = iterations;
  rep.residual = residual;
  rep.e_before = energy(u0);
  rep.e_after = energy(r.u);
  rep.h_before = helicity(u0);
  rep.h_after = helicity(r.u);
  rep.delta_e = rep.e_after - rep.e_before;
  rep.delta_h = rep.h_after - rep.h_before;
  rep.delta_momentum = mean_momentum(r.u) - mean_momentum(u0);

  for (int i = 0; i < t.s; ++i) {
    const SpectralVector& ui = stages[i];
    const Real re = -inner(ui, pn[i]);
    const Real rh = -hel_sym(ui, pn[i]);
    rep.nonlinear_e += dt * t.b(i) * re;
    rep.nonlinear_h += dt * t.b(i) * rh;
    rep.max_rate_e = std::max(rep.max_rate_e, std::abs(re));
    rep.max_rate_h = std::max(rep.max_rate_h, std::abs(rh));
    if (opt.attribution) {
      rep.spatial_e += dt * t.b(i) * inner(ui, f[i]);
      rep.spatial_h += dt * t.b(i) * hel_sym(ui, f[i]);
    }
  }
  if (opt.attribution) {
    const Eigen::MatrixXd g = symplecticity_defect(t);
    for (int i = 0; i < t.s; ++i)
      for (int j = i; j < t.s; ++j) {
        const Real w = (i == j ? 1.0 : 2.0) * g(i, j);
        if (w == 0.0) continue;
        rep.temporal_e += -0.5 * dt * dt * w * inner(f[i], f[j]);
        rep.temporal_h += -0.5 * dt * dt * w * hel_sym(f[i], f[j]);
      }
    rep.closure_e = rep.delta_e - rep.spatial_e - rep.temporal_e;
    rep.closure_h = rep.delta_h - rep.spatial_h - rep.temporal_h;
  }
  return r;
}

}  // namespace

ButcherTableau ButcherTableau::builtin(std::string_view token) {
  ButcherTableau t;
  t.label = std::string(token);
  if (token == "rk4") {
    t.s = 4;
    t.a = Eigen::MatrixXd::Zero(4, 4);
    t.a(1, 0) = 0.5;
    t.a(2, 1) = 0.5;
    t.a(3, 2) = 1.0;
    t.b.resize(4);
    t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  } else if (token == "gauss1") {
    t.s = 1;
    t.a = Eigen::MatrixXd::Constant(1, 1, 0.5);
    t.b = Eigen::VectorXd::Ones(1);
  } else if (token == "euler") {
    t.s = 1;
    t.a = Eigen::MatrixXd::Zero(1, 1);
    t.b = Eigen::VectorXd::Ones(1);
  } else {
    throw ValidationError("unknown built-in tableau '" + std::string(token) + "'");
  }
  t.finalize();
  return t;
}

bool ButcherTableau::is_builtin(std::string_view token) {
  return token == "rk4" || token == "gauss1" || token == "euler";
}

void ButcherTableau::finalize() {
  if (s < 1) throw ValidationError("tableau needs at least one stage");
  if (a.rows() != s || a.cols() != s || b.size() != s) throw ValidationError("tableau dimensions inconsistent");
  if (std::abs(b.sum() - 1.0) > 1e-12)
    throw ValidationError("tableau weights must sum to 1 (got " + std::to_string(b.sum()) + ")");
  kind = Kind::Explicit;
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      if (a(i, j) != 0.0) kind = Kind::Implicit;
}

ButcherTableau parse_tableau(std::istream& in, std::string label) {
  std::vector<std::pair<int, std::vector<double>>> rows;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) vals.push_back(parse_number(tok, line));
    if (!vals.empty()) rows.emplace_back(line, std::move(vals));
  }
  if (rows.empty()) parse_fail(line, "empty tableau");
  const auto& head = rows.front();
  if (head.second.size() != 1 || head.second[0] < 1 || head.second[0] != std::floor(head.second[0]))
    parse_fail(head.first, "first line must be the stage count");
  const int s = static_cast<int>(head.second[0]);
  if (static_cast<int>(rows.size()) != s + 2)
    parse_fail(rows.back().first, "expected " + std::to_string(s) + " rows of a followed by b");

  ButcherTableau t;
  t.label = std::move(label);
  t.s = s;
  t.a.resize(s, s);
  t.b.resize(s);
  for (int i = 0; i < s; ++i) {
    const auto& [ln, vals] = rows[i + 1];
    if (static_cast<int>(vals.size()) != s) parse_fail(ln, "row of a must have " + std::to_string(s) + " entries");
    for (int j = 0; j < s; ++j) t.a(i, j) = vals[j];
  }
  const auto& [bl, bv] = rows.back();
  if (static_cast<int>(bv.size()) != s) parse_fail(bl, "b must have " + std::to_string(s) + " entries");
  for (int j = 0; j < s; ++j) t.b(j) = bv[j];
  try {
    t.finalize();
  } catch (const ValidationError& e) {
    parse_fail(bl, e.what());
  }
  return t;
}

ButcherTableau load_tableau(std::string_view source) {
  if (ButcherTableau::is_builtin(source)) return ButcherTableau::builtin(source);
  std::ifstream f{std::string(source)};
  if (!f) throw ValidationError("cannot open tableau file '" + std::string(source) + "'");
  return parse_tableau(f, std::string(source));
}

Eigen::MatrixXd symplecticity_defect(const ButcherTableau& t) {
  Eigen::MatrixXd g(t.s, t.s);
  for (int i = 0; i < t.s; ++i)
    for (int j = 0; j < t.s; ++j) g(i, j) = t.b(i) * t.a(i, j) + t.b(j) * t.a(j, i) - t.b(i) * t.b(j);
  return g;
}

Real max_symplecticity_defect(const ButcherTableau& t) { return symplecticity_defect(t).cwiseAbs().maxCoeff(); }

StageEval evaluate(const SpectralVelocity& u, const Dynamics& dyn) {
  StageEval ev;
  ev.pn = project(nonlinear_term(u, dyn.form));
  ev.f = -ev.pn;
  if (dyn.nu != 0.0) ev.f.add_scaled(dyn.nu, project(laplacian(u)));
  if (dyn.forcing) dyn.forcing->apply(u, ev.f);
  return ev;
}

SpectralVector rhs(const SpectralVelocity& u, const Dynamics& dyn) { return evaluate(u, dyn).f; }

StepResult step_explicit(const SpectralVelocity& u, const ButcherTableau& t, Real dt, const Dynamics& dyn,
                         const StepOptions& opt) {
  if (t.kind != ButcherTableau::Kind::Explicit) throw ValidationError("step_explicit needs an explicit tableau");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  std::vector<SpectralVector> f(t.s), pn(t.s), us(t.s);
  for (int i = 0; i < t.s; ++i) {
    us[i] = project(stage_value(u, t, i, dt, f));
    check_finite(us[i], "stage value");
    StageEval ev = evaluate(us[i], dyn);
    f[i] = std::move(ev.f);
    pn[i] = std::move(ev.pn);
  }
  return combine(u, t, dt, f, pn, us, opt, 0, 0.0);
}

namespace {

Eigen::VectorXd pack(const std::vector<SpectralVector>& x) {
  const Eigen::Index m = x[0].g().mode_count();
  Eigen::VectorXd v(2 * 3 * m * static_cast<Eigen::Index>(x.size()));
  Eigen::Index off = 0;
  for (const auto& s : x)
    for (int c = 0; c < 3; ++c) {
      v.segment(off, m) = s[c].real();
      v.segment(off + m, m) = s[c].imag();
      off += 2 * m;
    }
  return v;
}

void unpack(const Eigen::VectorXd& v, std::vector<SpectralVector>& x) {
  const Eigen::Index m = x[0].g().mode_count();
  Eigen::Index off = 0;
  for (auto& s : x)
    for (int c = 0; c < 3; ++c) {
      s[c].real() = v.segment(off, m);
      s[c].imag() = v.segment(off + m, m);
      off += 2 * m;
    }
}

}  // namespace

StepResult step_implicit(const SpectralVelocity& u, const ButcherTableau& t, Real dt, const Dynamics& dyn,
                         const StepOptions& opt) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (!(opt.implicit_tol > 0.0)) throw ValidationError("implicit tolerance must be positive");
  if (opt.anderson_depth < 0) throw ValidationError("Anderson depth must be >= 0");
  const Real scale = std::max(u.max_abs(), std::numeric_limits<Real>::min());
  std::vector<SpectralVector> f(t.s), pn(t.s), x(t.s, u), gx(t.s, u);

  // Anderson history: differences of residuals and of images
  std::vector<Eigen::VectorXd> df, dg;
  Eigen::VectorXd r_prev, g_prev;
  Eigen::MatrixXd gram;

  Real residual = std::numeric_limits<Real>::infinity();
  int it = 0;
  while (it < opt.max_iter) {
    ++it;
    for (int i = 0; i < t.s; ++i) {
      StageEval ev = evaluate(x[i], dyn);
      f[i] = std::move(ev.f);
      pn[i] = std::move(ev.pn);
    }
    residual = 0.0;
    for (int i = 0; i < t.s; ++i) {
      gx[i] = stage_value(u, t, i, dt, f);
      residual = std::max(residual, (gx[i] - x[i]).max_abs() / scale);
    }
    if (!std::isfinite(residual)) throw NumericalBlowup("non-finite values in implicit stage");
    if (residual < opt.implicit_tol) break;
    if (opt.anderson_depth == 0) {
      x = gx;
      continue;
    }
    const Eigen::VectorXd g = pack(gx);
    const Eigen::VectorXd r = g - pack(x);
    if (r_prev.size()) {
      df.push_back(r - r_prev);
      dg.push_back(g - g_prev);
      if (static_cast<int>(df.size()) > opt.anderson_depth) {
        df.erase(df.begin());
        dg.erase(dg.begin());
      }
    }
    r_prev = r;
    g_prev = g;
    const int m = static_cast<int>(df.size());
    Eigen::VectorXd next = g;
    if (m > 0) {
      gram.resize(m, m);
      Eigen::VectorXd rhs_ls(m);
      for (int a = 0; a < m; ++a) {
        rhs_ls(a) = df[a].dot(r);
        for (int b = 0; b <= a; ++b) gram(a, b) = gram(b, a) = df[a].dot(df[b]);
      }
      gram.diagonal() *= 1.0 + 1e-12;
      const Eigen::VectorXd gamma = gram.ldlt().solve(rhs_ls);
      if (gamma.allFinite())
        for (int a = 0; a < m; ++a) next -= gamma(a) * dg[a];
    }
    unpack(next, x);
  }
  if (!(residual < opt.implicit_tol))
    throw ConvergenceError("implicit stage iteration did not converge", residual, it);
  return combine(u, t, dt, f, pn, gx, opt, it, residual);
}

StepResult step_implicit_gauss(const SpectralVelocity& u, Real dt, const Dynamics& dyn, Real tol, int max_iter) {
  StepOptions opt;
  opt.implicit_tol = tol;
  opt.max_iter = max_iter;
  return step_implicit(u, ButcherTableau::builtin("gauss1"), dt, dyn, opt);
}

StepResult step(const SpectralVelocity& u, const ButcherTableau& t, Real dt, const Dynamics& dyn,
                const StepOptions& opt) {
  return t.kind == ButcherTableau::Kind::Explicit ? step_explicit(u, t, dt, dyn, opt)
                                                  : step_implicit(u, t, dt, dyn, opt);
}

Eigen::VectorXd step_linear(const Eigen::MatrixXd& S, const Eigen::VectorXd& y, const ButcherTableau& t, Real dt) {
  const Eigen::Index d = y.size();
  // stage slopes K solve (I - dt A (x) S) K = (1 (x) S) y
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(t.s * d, t.s * d);
  Eigen::VectorXd rhs(t.s * d);
  const Eigen::VectorXd sy = S * y;
  for (int i = 0; i < t.s; ++i) {
    rhs.segment(i * d, d) = sy;
    for (int j = 0; j < t.s; ++j) big.block(i * d, j * d, d, d) -= dt * t.a(i, j) * S;
  }
  const Eigen::VectorXd k = big.partialPivLu().solve(rhs);
  Eigen::VectorXd out = y;
  for (int i = 0; i < t.s; ++i) out += dt * t.b(i) * k.segment(i * d, d);
  return out;
}

Real cfl_dt(const SpectralVelocity& u, Real cfl, Real dt_max) {
  if (!(cfl > 0.0)) throw ValidationError("CFL number must be positive");
  const PhysicalVector p = to_physical(u);
  Real umax = 0.0;
  for (int c = 0; c < 3; ++c) umax = std::max(umax, p[c].abs().maxCoeff());
  const Real h = u.g().spec().spacing();
  if (!(umax > 0.0)) return dt_max;
  return std::min(cfl * h / umax, dt_max);
}

}  // namespace helispec
