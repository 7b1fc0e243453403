#include "helispec/operator_verify.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace helispec {

namespace {

using Vec = Eigen::VectorXd;

Vec stack(const PhysicalVector& p) {
  const Eigen::Index N = p[0].size();
  Vec x(3 * N);
  for (int c = 0; c < 3; ++c) x.segment(c * N, N) = p[c].matrix();
  return x;
}

PhysicalVector unstack(const Vec& x) {
  const Eigen::Index N = x.size() / 3;
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) p[c] = x.segment(c * N, N).array();
  return p;
}

SpectralVector spectral(const GridPtr& g, const Vec& x) { return to_spectral(g, unstack(x)); }
Vec physical(const SpectralVector& v) { return stack(to_physical(v)); }

template <typename F>
DenseMatrix vector_columns(const GridPtr& g, F&& op) {
  const Eigen::Index n3 = 3 * g->point_count();
  DenseMatrix A(n3, n3);
  for (Eigen::Index j = 0; j < n3; ++j) A.col(j) = physical(op(spectral(g, Vec::Unit(n3, j))));
  return A;
}

SpectralVector white_noise(const GridPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) {
    p[c].resize(g->point_count());
    for (auto& x : p[c]) x = nd(rng);
  }
  return to_spectral(g, p);
}

Real max_abs(const DenseMatrix& A) { return A.cwiseAbs().maxCoeff(); }
Real safe(Real x) { return std::max(x, 1e-300); }

// Circulant two- or three-point stencil along one axis.
DenseMatrix stencil(int n, int axis, const std::vector<std::pair<int, Real>>& taps) {
  const int N = n * n * n;
  DenseMatrix S = DenseMatrix::Zero(N, N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int p[3] = {i, j, k};
        for (auto [off, w] : taps) {
          int q[3] = {p[0], p[1], p[2]};
          q[axis] = ((q[axis] + off) % n + n) % n;
          S((i * n + j) * n + k, (q[0] * n + q[1]) * n + q[2]) += w;
        }
      }
  return S;
}

std::vector<ConvectiveForm> forms_of(DerivativeScheme s) {
  if (s == DerivativeScheme::FD2Staggered) return {ConvectiveForm::HWStaggered};
  return {ConvectiveForm::Advective, ConvectiveForm::Divergence, ConvectiveForm::SkewSymmetric,
          ConvectiveForm::Rotational};
}

std::string label_of(const GridSpec& s) {
  return std::string(to_token(s.scheme)) + "/" + std::string(to_token(s.dealias.kind)) + "/" + std::to_string(s.n);
}

}  // namespace

DenseMatrix cross_matrix(const PhysicalVector& w) {
  const Eigen::Index N = w[0].size();
  DenseMatrix V = DenseMatrix::Zero(3 * N, 3 * N);
  for (Eigen::Index p = 0; p < N; ++p) {
    // (w x v)_a = w_b v_c - w_c v_b for cyclic (a, b, c)
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      V(a * N + p, c * N + p) = w[b](p);
      V(a * N + p, b * N + p) = -w[c](p);
    }
  }
  return V;
}

PhysicalVector hw_literal(const PhysicalVector& a, const PhysicalVector& v, int n, Real h) {
  auto at = [n](std::array<int, 3> q) {
    for (auto& x : q) x = ((x % n) + n) % n;
    return (Eigen::Index(q[0]) * n + q[1]) * n + q[2];
  };
  auto shift = [](std::array<int, 3> q, int axis, int d) {
    q[axis] += d;
    return q;
  };
  PhysicalVector out;
  for (int c = 0; c < 3; ++c) out[c] = PointArray::Zero(a[c].size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::array<int, 3> p{i, j, k};
        for (int c = 0; c < 3; ++c) {
          // normal flux at the cell centres either side of face c
          auto centre = [&](std::array<int, 3> q) {
            const auto qm = shift(q, c, -1);
            return 0.25 * (a[c](at(qm)) + a[c](at(q))) * (v[c](at(qm)) + v[c](at(q)));
          };
          Real acc = (centre(shift(p, c, 1)) - centre(p)) / h;
          for (int d = 0; d < 3; ++d) {
            if (d == c) continue;
            // transverse flux on the edge at (c+1/2, d+1/2) of node q
            auto edge = [&](std::array<int, 3> q) {
              const Real adv = 0.5 * (a[d](at(q)) + a[d](at(shift(q, c, 1))));
              const Real tr = 0.5 * (v[c](at(q)) + v[c](at(shift(q, d, 1))));
              return adv * tr;
            };
            acc += (edge(p) - edge(shift(p, d, -1))) / h;
          }
          out[c](at(p)) = acc;
        }
      }
  return out;
}

OperatorSet assemble(const GridPtr& g, const SpectralVelocity& u) {
  if (g->n() > 8) throw ValidationError("dense operator assembly is limited to n <= 8");
  require_same_grid(u.g(), *g);
  const Eigen::Index N = g->point_count();
  OperatorSet o;
  o.grid = g;
  o.u = u;

  o.G.resize(3 * N, N);
  o.M.resize(N, 3 * N);
  for (Eigen::Index j = 0; j < N; ++j) {
    PointArray e = PointArray::Zero(N);
    e(j) = 1.0;
    o.G.col(j) = physical(gradient(to_spectral(g, e)));
  }
  for (int c = 0; c < 3; ++c) {
    o.D[c] = o.G.block(c * N, 0, N, N);
    o.Db[c].resize(N, N);
  }
  for (Eigen::Index j = 0; j < 3 * N; ++j) {
    const Vec col = to_physical(divergence(spectral(g, Vec::Unit(3 * N, j)))).matrix();
    o.M.col(j) = col;
    o.Db[j / N].col(j % N) = col;
  }
  o.R = vector_columns(g, [](const SpectralVector& v) { return curl(v); });
  o.Rd = vector_columns(g, [](const SpectralVector& v) { return curl_dual(v); });
  o.L = vector_columns(g, [](const SpectralVector& v) { return laplacian(v); });
  o.Pi = vector_columns(g, [](const SpectralVector& v) { return dealias(v); });
  o.V = cross_matrix(to_physical(curl(u)));
  for (ConvectiveForm f : forms_of(g->spec().scheme))
    o.C[f] = vector_columns(g, [&](const SpectralVector& v) { return convective_operator(u, v, f); });
  return o;
}

bool CertificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return !checks.empty();
}

CertificationReport certify_tables(const OperatorSet& o, unsigned seed) {
  const GridPtr& g = o.grid;
  const GridSpec& spec = g->spec();
  const int n = spec.n;
  const Real h = spec.spacing();
  const Eigen::Index N = o.points();
  const bool staggered = spec.scheme == DerivativeScheme::FD2Staggered;
  const bool dealiased_spectral = spec.scheme == DerivativeScheme::Spectral && g->has_dealias();
  std::mt19937_64 rng(seed);

  CertificationReport r;
  r.label = label_of(spec);
  auto add = [&](std::string name, Real residual, Real tol, bool expected = true) {
    r.checks.push_back({std::move(name), expected, residual <= tol, residual, tol});
  };

  Real sbp = 0.0, cons = 0.0, dscale = 0.0;
  for (int c = 0; c < 3; ++c) {
    dscale = std::max(dscale, max_abs(o.D[c]));
    sbp = std::max(sbp, max_abs(o.D[c] + o.Db[c].transpose()));
    cons = std::max({cons, (o.D[c] * Vec::Ones(N)).cwiseAbs().maxCoeff(), (o.Db[c] * Vec::Ones(N)).cwiseAbs().maxCoeff()});
  }
  add("sbp_D_plus_Dt", sbp / dscale, 1e-13);
  add("consistency_D1", cons / dscale, 1e-13);

  if (spec.scheme == DerivativeScheme::FD2Colocated || staggered) {
    Real dev = 0.0;
    for (int c = 0; c < 3; ++c) {
      const DenseMatrix S = staggered ? stencil(n, c, {{1, 1.0 / h}, {0, -1.0 / h}})
                                      : stencil(n, c, {{1, 0.5 / h}, {-1, -0.5 / h}});
      dev = std::max(dev, max_abs(o.D[c] - S) / max_abs(S));
    }
    add("fd2_stencil", dev, 1e-13);
  } else {
    // sin(x) is resolved on every n >= 4: D_x sin = cos
    Vec s(N), cs(N);
    for (Eigen::Index p = 0; p < N; ++p) {
      const Real x = (p / (n * n)) * h * spec.wavenumber_unit();
      s(p) = std::sin(x);
      cs(p) = spec.wavenumber_unit() * std::cos(x);
    }
    add("spectral_exact_derivative", (o.D[0] * s - cs).cwiseAbs().maxCoeff(), 1e-13);
  }

  add("curl_symmetric", max_abs(o.Rd - o.R.transpose()) / max_abs(o.R), 1e-13);
  add("curl_grad_zero", max_abs(o.R * o.G) / (max_abs(o.R) * max_abs(o.G)), 1e-13);
  add("grad_div_adjoint", max_abs(o.G.transpose() + o.M) / max_abs(o.M), 1e-13);
  add("laplacian_symmetric", max_abs(o.L - o.L.transpose()) / max_abs(o.L), 1e-13);
  add("cross_skew", max_abs(o.V + o.V.transpose()) / safe(max_abs(o.V)), 0.0);

  // product rule: D Pi(ab) = Pi(a D b) + Pi(b D a) for band-limited scalars
  {
    const DenseMatrix Ps = o.Pi.topLeftCorner(N, N);
    std::normal_distribution<double> nd;
    Vec a(N), b(N);
    for (auto& x : a) x = nd(rng);
    for (auto& x : b) x = nd(rng);
    a = Ps * a;
    b = Ps * b;
    Real defect = 0.0;
    for (int c = 0; c < 3; ++c) {
      const Vec lhs = o.D[c] * (Ps * a.cwiseProduct(b));
      const Vec rhs = Ps * (a.cwiseProduct(o.D[c] * b) + b.cwiseProduct(o.D[c] * a));
      defect = std::max(defect, (lhs - rhs).cwiseAbs().maxCoeff() / safe(lhs.cwiseAbs().maxCoeff()));
    }
    add("product_rule", defect, 1e-12, dealiased_spectral);
  }

  // 20 random u: u^T R V(u) R u = 0
  {
    Real worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Vec x = physical(white_noise(g, rng));
      const Vec rx = o.R * x;
      const DenseMatrix Vx = cross_matrix(unstack(x));
      worst = std::max(worst, std::abs(rx.dot(Vx * rx)) / safe(rx.squaredNorm() * x.cwiseAbs().maxCoeff()));
    }
    add("rvr_quadratic_form", worst, 1e-13);
  }

  const ConvectiveForm cons_form = staggered ? ConvectiveForm::HWStaggered : ConvectiveForm::SkewSymmetric;
  const DenseMatrix& Ck = o.C.at(cons_form);
  const DenseMatrix& Cd = o.C.at(staggered ? ConvectiveForm::HWStaggered : ConvectiveForm::Divergence);
  const Real div_u = max_divergence(o.u);
  if (div_u > 1e-12) throw ValidationError("certify_tables needs a projected u");

  // bilinear skew-symmetry of C on band-limited fields
  {
    Real worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Vec x = o.Pi * physical(white_noise(g, rng));
      const Vec y = o.Pi * physical(white_noise(g, rng));
      worst = std::max(worst, std::abs(y.dot(Ck * x) + x.dot(Ck * y)) /
                                  safe(x.norm() * (Ck * y).norm() + y.norm() * (Ck * x).norm()));
    }
    add(std::string("skew_C_") + std::string(to_token(cons_form)), worst, 1e-13);
  }

  // a-priori mean momentum: mode-0 rows of the divergence-form operator
  {
    const Vec colsum = (Vec::Ones(N).transpose() * Cd.topRows(N)).transpose();
    Real worst = colsum.cwiseAbs().maxCoeff();
    for (int c = 1; c < 3; ++c)
      worst = std::max(worst, (Vec::Ones(N).transpose() * Cd.middleRows(c * N, N)).cwiseAbs().maxCoeff());
    add("momentum_div_rows", worst / (N * safe(max_abs(Cd))), 1e-14);
  }

  if (!staggered) {
    const DenseMatrix& Cr = o.C.at(ConvectiveForm::Rotational);
    add("rot_is_masked_cross", max_abs(Cr - o.Pi * o.V) / safe(max_abs(o.V)), 1e-13);
    // rotational quadratic forms for arbitrary (non-solenoidal) band-limited w
    Real we = 0.0, wh = 0.0, wm = 0.0;
    for (int t = 0; t < 5; ++t) {
      const SpectralVector w = dealias(white_noise(g, rng));
      const Vec x = physical(w);
      const Vec cx = o.Pi * (cross_matrix(to_physical(curl(w))) * x);
      const Vec rx = o.R * x;
      we = std::max(we, std::abs(x.dot(cx)) / safe(x.norm() * cx.norm()));
      wh = std::max(wh, std::abs(rx.dot(cx)) / safe(rx.norm() * cx.norm()));
      const Vec module = physical(nonlinear_term(w, ConvectiveForm::Rotational));
      wm = std::max(wm, (module - cx).cwiseAbs().maxCoeff() / safe(cx.cwiseAbs().maxCoeff()));
    }
    add("rot_module_matches_matrix", wm, 1e-12);
    add("rot_energy_apriori", we, 1e-13);
    add("rot_helicity_apriori", wh, 1e-13);
  }

  // dual route: dense quadratic forms against the convection module
  {
    const Vec x = physical(o.u);
    Real worst = 0.0;
    for (const auto& [f, C] : o.C) {
      const SpectralVector nl = nonlinear_term(o.u, f);
      const Vec cx = C * x;
      const Real scale = safe(x.norm() * cx.norm() / N);
      worst = std::max(worst, std::abs(x.dot(cx) / N - inner(o.u, nl)) / scale);
      if (!staggered) {
        const Real hm = 2.0 * (o.R * x).dot(cx) / N;
        const Real hf = helicity_form(o.u, nl) + helicity_form(nl, o.u);
        worst = std::max(worst, std::abs(hm - hf) / safe((o.R * x).norm() * cx.norm() / N));
      }
      worst = std::max(worst, (physical(nl) - cx).cwiseAbs().maxCoeff() / safe(cx.cwiseAbs().maxCoeff()));
    }
    add("dual_route", worst, 1e-11);
  }

  if (staggered) {
    const SpectralVector a = o.u;
    const SpectralVector v = white_noise(g, rng);
    const Vec lit = stack(hw_literal(to_physical(a), to_physical(v), n, h));
    const Vec mat = o.C.at(ConvectiveForm::HWStaggered) * physical(v);
    add("hw_literal_stencil", (lit - mat).cwiseAbs().maxCoeff() / safe(lit.cwiseAbs().maxCoeff()), 1e-12);
  }
  return r;
}

CertificationReport certify_grid(const GridSpec& spec, unsigned seed) {
  auto g = Grid::create(spec);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const SpectralVelocity u = dealias(project(white_noise(g, rng)));
  return certify_tables(assemble(g, u), seed);
}

void write_report_text(std::ostream& os, const CertificationReport& r) {
  os << "certification " << r.label << (r.all_pass() ? "  PASS" : "  FAIL") << '\n';
  for (const auto& c : r.checks) {
    os << "  " << std::left << std::setw(28) << c.name << (c.pass() ? "pass" : "FAIL") << "  holds="
       << (c.holds ? "yes" : "no ") << " expected=" << (c.expected ? "yes" : "no ") << "  residual=" << std::scientific
       << std::setprecision(3) << c.residual << " tol=" << c.tol << std::defaultfloat << '\n';
  }
}

void write_report_csv(std::ostream& os, const std::vector<CertificationReport>& reports) {
  os << "grid,check,expected,holds,pass,residual,tol\n";
  const auto old = os.precision(6);
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      os << r.label << ',' << c.name << ',' << c.expected << ',' << c.holds << ',' << c.pass() << ','
         << std::scientific << c.residual << ',' << c.tol << std::defaultfloat << '\n';
  os.precision(old);
}

char to_symbol(Mark m) {
  switch (m) {
    case Mark::Apriori: return '+';
    case Mark::Conditional: return 'o';
    case Mark::None: return 'x';
  }
  return '?';
}

std::vector<ConservationRow> conservation_matrix(int n, unsigned seed, Real zero_tol, Real nonzero_tol) {
  using F = ConvectiveForm;
  using M = Mark;
  struct Def {
    F form;
    const char* tableau;
    std::array<Mark, 3> mark;
  };
  const Def defs[6] = {
      {F::Rotational, "gauss1", {M::Conditional, M::Conditional, M::Apriori}},
      {F::Rotational, "rk4", {M::Conditional, M::Conditional, M::Apriori}},
      {F::SkewSymmetric, "gauss1", {M::Conditional, M::Conditional, M::None}},
      {F::SkewSymmetric, "rk4", {M::Conditional, M::Conditional, M::None}},
      {F::Divergence, "rk4", {M::Apriori, M::None, M::None}},
      {F::HWStaggered, "rk4", {M::Apriori, M::Conditional, M::None}},
  };
  std::vector<ConservationRow> rows;
  for (int a = 0; a < 6; ++a) {
    ConservationRow row;
    row.algorithm = a + 1;
    row.form = defs[a].form;
    row.tableau = defs[a].tableau;
    row.mark = defs[a].mark;
    row.scheme = row.form == F::HWStaggered ? DerivativeScheme::FD2Staggered : DerivativeScheme::Spectral;
    GridSpec spec;
    spec.n = n;
    spec.scheme = row.scheme;
    auto g = Grid::create(spec);
    std::mt19937_64 rng(seed);
    SpectralVelocity raw = white_noise(g, rng);
    raw *= 1.0 / std::sqrt(energy(raw));
    SpectralVelocity pu = project(raw);
    pu *= 1.0 / std::sqrt(energy(pu));
    auto measure = [&](const SpectralVelocity& u) {
      const SpectralVector nl = nonlinear_term(u, row.form);
      return std::array<Real, 3>{mean_momentum(nl).cwiseAbs().maxCoeff(), std::abs(inner(u, nl)),
                                 std::abs(helicity_form(u, nl) + helicity_form(nl, u))};
    };
    row.raw = measure(raw);
    row.projected = measure(pu);
    for (int q = 0; q < 3; ++q) {
      switch (row.mark[q]) {
        case M::Apriori: row.pass[q] = row.raw[q] <= zero_tol && row.projected[q] <= zero_tol; break;
        case M::Conditional: row.pass[q] = row.projected[q] <= zero_tol; break;
        case M::None: row.pass[q] = row.projected[q] >= nonzero_tol; break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace helispec
