#include "helispec/diagnostics.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

namespace helispec {

namespace {

ModeWeights hel_sym_density(const SpectralVector& a, const SpectralVector& b) {
  return helicity_density(a, b) + helicity_density(b, a);
}

struct ShellSums {
  Real se = 0.0, sh = 0.0;
};

// Per-shell mode weights for the chosen density: list of (shell, |m|^2, count).
struct ModeClass {
  int shell;
  Real m2;
  Real count;
};

std::vector<ModeClass> mode_classes(int k_max, ModeDensity density) {
  std::vector<ModeClass> out;
  if (density == ModeDensity::Continuum) {
    for (int k = 1; k <= k_max; ++k) out.push_back({k, Real(k) * k, 4.0 * std::numbers::pi * k * k});
    return out;
  }
  std::map<long, long> counts;
  const long K2 = long(k_max) * k_max;
  for (int x = -k_max; x <= k_max; ++x)
    for (int y = -k_max; y <= k_max; ++y)
      for (int z = -k_max; z <= k_max; ++z) {
        const long r2 = long(x) * x + long(y) * y + long(z) * z;
        if (r2 > 0 && r2 <= K2) ++counts[r2];
      }
  for (auto [r2, c] : counts)
    out.push_back({static_cast<int>(std::lround(std::sqrt(double(r2)))), Real(r2), Real(c)});
  return out;
}

ShellSums sums(const std::vector<ModeClass>& cls, Real x, int k_max) {
  ShellSums s;
  const Real q = x * x / (Real(k_max) * k_max);
  for (const auto& c : cls) {
    const Real d = 1.0 - q * c.m2;
    s.se += c.count / d;
    s.sh += c.count * c.m2 / d;
  }
  return s;
}

}  // namespace

SpectrumSeries SpectrumSeries::zeros(int shells) {
  SpectrumSeries s;
  for (auto* a : {&s.E, &s.H, &s.Te, &s.Th, &s.De, &s.Dh, &s.Fe, &s.Fh}) *a = Eigen::ArrayXd::Zero(shells);
  return s;
}

void SpectrumSeries::accumulate(const SpectrumSeries& o) {
  if (samples == 0 && E.size() == 0) *this = zeros(o.size());
  if (o.size() != size()) throw ValidationError("spectrum sizes differ");
  E += o.E;
  H += o.H;
  Te += o.Te;
  Th += o.Th;
  De += o.De;
  Dh += o.Dh;
  Fe += o.Fe;
  Fh += o.Fh;
  samples += std::max(o.samples, 1);
}

SpectrumSeries SpectrumSeries::mean() const {
  SpectrumSeries m = *this;
  if (samples <= 1) return m;
  const Real inv = 1.0 / samples;
  for (auto* a : {&m.E, &m.H, &m.Te, &m.Th, &m.De, &m.Dh, &m.Fe, &m.Fh}) *a *= inv;
  m.samples = 1;
  return m;
}

Eigen::ArrayXd bin_shells(const Grid& grid, const ModeWeights& per_mode) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid.shell_count());
  const Eigen::ArrayXi& sh = grid.shell();
  for (Eigen::Index i = 0; i < per_mode.size(); ++i) out(sh(i)) += per_mode(i);
  return out;
}

ShellSpectra shell_spectra(const SpectralVelocity& u) {
  const Grid& g = u.g();
  return {bin_shells(g, 0.5 * inner_density(u, u)), bin_shells(g, helicity_density(u, u))};
}

TransferSpectra transfer_spectra(const SpectralVelocity& u, ConvectiveForm form) {
  const Grid& g = u.g();
  const SpectralVector pn = project(nonlinear_term(u, form));
  return {bin_shells(g, -inner_density(u, pn)), bin_shells(g, -hel_sym_density(u, pn))};
}

SpectrumSeries measure_spectra(const SpectralVelocity& u, const Dynamics& dyn) {
  const Grid& g = u.g();
  const StageEval ev = evaluate(u, dyn);
  SpectrumSeries s;
  s.samples = 1;
  s.E = bin_shells(g, 0.5 * inner_density(u, u));
  s.H = bin_shells(g, helicity_density(u, u));

  const ModeWeights te = -inner_density(u, ev.pn);
  const ModeWeights th = -hel_sym_density(u, ev.pn);
  ModeWeights de = ModeWeights::Zero(g.mode_count()), dh = de;
  if (dyn.nu != 0.0) {
    const SpectralVector visc = dyn.nu * project(laplacian(u));
    de = -inner_density(u, visc);
    dh = -hel_sym_density(u, visc);
    if (dyn.forcing) {
      const ModeWeights free = 1.0 - dyn.forcing->forced_modes();
      de *= free;
      dh *= free;
    }
  }
  const ModeWeights fe = inner_density(u, ev.f) - te + de;
  const ModeWeights fh = hel_sym_density(u, ev.f) - th + dh;
  s.Te = bin_shells(g, te);
  s.Th = bin_shells(g, th);
  s.De = bin_shells(g, de);
  s.Dh = bin_shells(g, dh);
  s.Fe = bin_shells(g, fe);
  s.Fh = bin_shells(g, fh);
  return s;
}

Equilibrium absolute_equilibrium(Real e, Real h, int k_max, ModeDensity density) {
  if (!(e > 0.0)) throw ValidationError("absolute equilibrium needs positive energy");
  if (k_max < 1) throw ValidationError("absolute equilibrium needs k_max >= 1");
  const Real target = h / (2.0 * e);
  if (!(std::abs(target) < k_max)) throw ValidationError("helicity exceeds the realizable maximum 2 k_max e");

  const auto cls = mode_classes(k_max, density);
  auto F = [&](Real x) {
    const ShellSums s = sums(cls, x, k_max);
    return x * s.sh / (k_max * s.se);
  };
  // F is odd and increasing on (-1, 1), spanning (-k_max, k_max)
  Real lo = -1.0, hi = 1.0;
  Real x = 0.0;
  if (h != 0.0) {
    for (int it = 0; it < 200; ++it) {
      x = 0.5 * (lo + hi);
      if (x == lo || x == hi) break;
      (F(x) < target ? lo : hi) = x;
    }
  }
  const ShellSums s = sums(cls, x, k_max);
  Equilibrium eq;
  eq.x = x;
  eq.alpha = s.se / e;
  eq.beta = x * eq.alpha / k_max;
  if (std::abs(F(x) - target) > 1e-9 * std::max(1.0, std::abs(target)))
    throw ConvergenceError("absolute equilibrium root not found", std::abs(F(x) - target), 200);

  eq.E = Eigen::ArrayXd::Zero(k_max + 1);
  eq.H = Eigen::ArrayXd::Zero(k_max + 1);
  const Real q = x * x / (Real(k_max) * k_max);
  for (const auto& c : cls) {
    const Real d = 1.0 - q * c.m2;
    eq.E(c.shell) += c.count / (eq.alpha * d);
    eq.H(c.shell) += c.count * 2.0 * eq.beta * c.m2 / (eq.alpha * eq.alpha * d);
  }
  return eq;
}

Real relative_helicity(Real e, Real h, Real k_ref) {
  if (!(e > 0.0) || !(k_ref > 0.0)) throw ValidationError("relative helicity needs e > 0 and k_ref > 0");
  return h / (2.0 * k_ref * e);
}

Real realizability_excess(const Eigen::ArrayXd& E, const Eigen::ArrayXd& H) {
  Real worst = 0.0;
  for (Eigen::Index k = 0; k < E.size(); ++k) {
    const Real bound = 2.0 * (k + 0.5) * E(k);
    const Real excess = std::abs(H(k)) - bound;
    if (excess > 0.0) worst = std::max(worst, excess / std::max(bound, 1e-300));
  }
  return worst;
}

StationaryResidual stationary_residual(const SpectrumSeries& avg, Real k_F, int k_last) {
  StationaryResidual r;
  const int n = avg.size();
  r.re = Eigen::ArrayXd::Zero(n);
  r.rh = Eigen::ArrayXd::Zero(n);
  int count = 0;
  for (int k = 0; k < n && k <= k_last; ++k) {
    if (k <= k_F) continue;
    r.re(k) = avg.Te(k) - avg.De(k);
    r.rh(k) = avg.Th(k) - avg.Dh(k);
    r.rms_re += r.re(k) * r.re(k);
    r.rms_rh += r.rh(k) * r.rh(k);
    r.rms_de += avg.De(k) * avg.De(k);
    r.rms_dh += avg.Dh(k) * avg.Dh(k);
    ++count;
  }
  if (count > 0)
    for (Real* v : {&r.rms_re, &r.rms_rh, &r.rms_de, &r.rms_dh}) *v = std::sqrt(*v / count);
  return r;
}

Budget budget(const SpectrumSeries& avg, int k_last, Real ke, Real kh) {
  Budget b;
  const int last = std::min(k_last, avg.size() - 1);
  b.e = avg.E.head(last + 1).sum();
  b.h = avg.H.head(last + 1).sum();
  b.sum_te = avg.Te.head(last + 1).sum();
  b.sum_th = avg.Th.head(last + 1).sum();
  b.eps_e = avg.De.sum();
  b.eps_h = avg.Dh.sum();
  b.e_over_ke = ke != 0.0 ? b.e / ke : 0.0;
  b.h_over_kh = kh != 0.0 ? b.h / kh : 0.0;
  b.te_over_eps = b.eps_e != 0.0 ? b.sum_te / b.eps_e : 0.0;
  b.th_over_eps = b.eps_h != 0.0 ? b.sum_th / b.eps_h : 0.0;
  return b;
}

void write_spectra_csv(std::ostream& os, const SpectrumSeries& s, const Equilibrium* eq,
                       const StationaryResidual* res) {
  const auto old = os.precision(17);
  os << "k,E,H,Te,Th,E_eq,H_eq,r_e,r_h\n";
  for (int k = 0; k < s.size(); ++k) {
    const bool in_eq = eq && k < eq->E.size();
    const bool in_res = res && k < res->re.size();
    os << k << ',' << s.E(k) << ',' << s.H(k) << ',' << s.Te(k) << ',' << s.Th(k) << ','
       << (in_eq ? eq->E(k) : 0.0) << ',' << (in_eq ? eq->H(k) : 0.0) << ','
       << (in_res ? res->re(k) : 0.0) << ',' << (in_res ? res->rh(k) : 0.0) << '\n';
  }
  os.precision(old);
}

void write_timeseries_header(std::ostream& os) { os << "t,e,h,eps_e,eps_h,dt,implicit_iters\n"; }

void write_timeseries_row(std::ostream& os, Real t, Real e, Real h, Real eps_e, Real eps_h, Real dt, int iters) {
  const auto old = os.precision(17);
  os << t << ',' << e << ',' << h << ',' << eps_e << ',' << eps_h << ',' << dt << ',' << iters << '\n';
  os.precision(old);
}

}  // namespace helispec
