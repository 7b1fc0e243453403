#include "helispec/scenarios.hpp"

#include "helispec/diagnostics.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace helispec {

namespace {

Eigen::Vector3d axis_k1(const WavenumberTable& t, int i, int j, int k) {
  return {t.k1_eff(i), t.k1_eff(j), t.k1_eff(k)};
}

// Unit positive-helicity eigenvector of i k x.
Eigen::Vector3cd helical_vector(const Eigen::Vector3d& k) {
  const Eigen::Vector3d kh = k.normalized();
  const Eigen::Vector3d ref = std::abs(kh.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = kh.cross(ref).normalized();
  const Eigen::Vector3d e2 = kh.cross(e1);
  return (e1.cast<Complex>() + Complex(0.0, 1.0) * e2.cast<Complex>()) / std::sqrt(2.0);
}

AbcSpec abc(int k) {
  AbcSpec a;
  a.k = k;
  return a;
}

}  // namespace

void AbcSpec::validate(int n) const {
  if (k < 1 || k > n / 2 - 1) throw ValidationError("ABC wavenumber must lie in [1, n/2 - 1]");
  if (A == 0.0 && B == 0.0 && C == 0.0) throw ValidationError("ABC amplitudes are all zero");
  if (energy_target && !(*energy_target > 0.0)) throw ValidationError("ABC energy target must be positive");
}

SpectralVelocity abc_field(const AbcSpec& spec, const GridPtr& grid) {
  const int n = grid->n();
  spec.validate(n);
  const double h = grid->spec().spacing();
  const bool staggered = grid->spec().scheme == DerivativeScheme::FD2Staggered;
  const double k = spec.k * grid->spec().wavenumber_unit();
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) {
    p[c].resize(grid->point_count());
    // component c sits half a cell along its own axis on the staggered layout
    double off[3] = {0.0, 0.0, 0.0};
    if (staggered) off[c] = 0.5;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const double ax = k * (i + off[0]) * h + spec.phase[0];
          const double ay = k * (j + off[1]) * h + spec.phase[1];
          const double az = k * (l + off[2]) * h + spec.phase[2];
          double v = 0.0;
          switch (c) {
            case 0: v = spec.A * std::sin(az) + spec.C * std::cos(ay); break;
            case 1: v = spec.B * std::sin(ax) + spec.A * std::cos(az); break;
            case 2: v = spec.C * std::sin(ay) + spec.B * std::cos(ax); break;
          }
          p[c]((Eigen::Index(i) * n + j) * n + l) = v;
        }
  }
  SpectralVelocity u = to_spectral(grid, p);
  if (spec.energy_target) u *= std::sqrt(*spec.energy_target / energy(u));
  return u;
}

SpectralVelocity abc_superposition(const std::vector<AbcSpec>& specs, const GridPtr& grid) {
  if (specs.empty()) throw ValidationError("no ABC components given");
  SpectralVelocity u(grid);
  for (const auto& s : specs) u += abc_field(s, grid);
  return u;
}

SpectralVelocity random_velocity(const GridPtr& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) {
    p[c].resize(grid->point_count());
    for (auto& x : p[c]) x = nd(rng);
  }
  return dealias(project(to_spectral(grid, p)));
}

void ForcingSpec::validate(const GridSpec& grid) const {
  if (!(k_F >= 1.0)) throw ValidationError("forcing cutoff k_F must be >= 1");
  if (!(k_F < resolved_k_max(grid))) throw ValidationError("forcing cutoff must lie below the dealias cutoff");
  if (!(h_rel > 0.0 && h_rel < 1.0)) throw ValidationError("forcing relative helicity must lie in (0, 1)");
  if (!(energy > 0.0)) throw ValidationError("forcing energy must be positive");
  if (grid.scheme == DerivativeScheme::FD2Staggered)
    throw ValidationError("Euler forcing is only available on colocated schemes");
}

EulerForcing::EulerForcing(GridPtr main, ForcingSpec spec) : main_(std::move(main)), spec_(spec) {
  spec_.validate(main_->spec());
  const int kc = static_cast<int>(std::floor(spec_.k_F));
  // smallest even size with products of band modes alias-free in the band
  int na = 2 * (kc + 1);
  while (na <= 3 * kc) na += 2;
  na = std::max(na, 4);

  GridSpec aspec = main_->spec();
  aspec.n = na;
  aspec.dealias = DealiasPolicy::sphere(spec_.k_F);
  const WavenumberTable& mt = main_->symbols();
  WavenumberTable at = build_wavenumbers(aspec);
  const ModeLayout& ml = main_->layout();
  for (int i = 0; i < na; ++i) {
    const int m = i <= na / 2 ? i : i - na;
    const int src = ml.fft_index(m);
    at.k_exact(i) = m;
    at.k1_eff(i) = mt.k1_eff(src);
    at.k2_eff(i) = mt.k2_eff(src);
    at.avg_factor(i) = mt.avg_factor(src);
    at.stagger_shift(i) = mt.stagger_shift(src);
    at.d_forward(i) = mt.d_forward(src);
    at.d_backward(i) = mt.d_backward(src);
    at.interp_forward(i) = mt.interp_forward(src);
    at.interp_backward(i) = mt.interp_backward(src);
  }
  aux_ = Grid::create_with_symbols(aspec, std::move(at), Grid::Options{});

  const Real r2max = spec_.k_F * spec_.k_F;
  mask_ = ModeWeights::Zero(main_->mode_count());
  const ModeLayout& al = aux_->layout();
  for (int mx = -kc; mx <= kc; ++mx)
    for (int my = -kc; my <= kc; ++my)
      for (int mz = 0; mz <= kc; ++mz) {
        const Real r2 = Real(mx) * mx + Real(my) * my + Real(mz) * mz;
        if (r2 == 0.0 || r2 > r2max) continue;
        const Eigen::Index mi = ml.index(ml.fft_index(mx), ml.fft_index(my), mz);
        const Eigen::Index ai = al.index(al.fft_index(mx), al.fft_index(my), mz);
        mask_(mi) = 1.0;
        map_.emplace_back(mi, ai);
      }
}

SpectralVelocity EulerForcing::restrict_to_aux(const SpectralVelocity& u) const {
  SpectralVelocity a(aux_);
  for (int c = 0; c < 3; ++c)
    for (auto [mi, ai] : map_) a[c](ai) = u[c](mi);
  return a;
}

void EulerForcing::apply(const SpectralVelocity& u, SpectralVector& rhs) const {
  require_same_grid(u.g(), *main_);
  const SpectralVelocity a = restrict_to_aux(u);
  const SpectralVector fa = -project(nonlinear_term(a, ConvectiveForm::Rotational));
  for (int c = 0; c < 3; ++c)
    for (auto [mi, ai] : map_) rhs[c](mi) = fa[c](ai);
}

Real EulerForcing::band_energy(const SpectralVelocity& u) const {
  return 0.5 * (inner_density(u, u) * mask_).sum();
}

Real EulerForcing::band_helicity(const SpectralVelocity& u) const {
  return (helicity_density(u, u) * mask_).sum();
}

Real EulerForcing::max_relative_helicity() const {
  const WavenumberTable& t = main_->symbols();
  Real best = 0.0;
  for_each_mode(*main_, [&](Eigen::Index idx, int i, int j, int k) {
    if (mask_(idx) > 0.0) best = std::max(best, axis_k1(t, i, j, k).norm());
  });
  return best / spec_.k_F;
}

SpectralVelocity EulerForcing::helical_state(Real power) const {
  const Grid& g = *main_;
  const ModeLayout& L = g.layout();
  const WavenumberTable& t = g.symbols();
  std::mt19937_64 rng(spec_.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SpectralVelocity u(main_);
  for_each_mode(g, [&](Eigen::Index idx, int i, int j, int k) {
    if (mask_(idx) == 0.0) return;
    const double ph = phase(rng);  // drawn for every band mode so the sequence is fixed
    Eigen::Index partner = idx;
    if (k == 0) {
      partner = L.index((L.n - i) % L.n, (L.n - j) % L.n, 0);
      if (partner < idx) return;
    }
    const Eigen::Vector3d kv = axis_k1(t, i, j, k);
    const Real amp = std::pow(g.lattice_norm2()(idx), 0.25 * power);
    const Eigen::Vector3cd c = amp * std::polar(1.0, ph) * helical_vector(kv);
    for (int d = 0; d < 3; ++d) {
      u[d](idx) = c(d);
      if (partner != idx) u[d](partner) = std::conj(c(d));
    }
  });
  return u;
}

SpectralVelocity EulerForcing::initial_state() const {
  const Real target = spec_.h_rel;
  auto hrel = [&](Real p) {
    const SpectralVelocity u = helical_state(p);
    return relative_helicity(band_energy(u), band_helicity(u), spec_.k_F);
  };
  Real lo = -20.0, hi = 80.0;
  if (target < hrel(lo) || target > hrel(hi))
    throw ValidationError("forced-band relative helicity " + std::to_string(target) +
                          " is not reachable (max " + std::to_string(max_relative_helicity()) + ")");
  for (int it = 0; it < 100; ++it) {
    const Real mid = 0.5 * (lo + hi);
    (hrel(mid) < target ? lo : hi) = mid;
  }
  SpectralVelocity u = helical_state(0.5 * (lo + hi));
  u *= std::sqrt(spec_.energy / band_energy(u));
  return u;
}

Scenario preset(std::string_view name, int algorithm) {
  Scenario sc;
  sc.name = std::string(name);
  if (name == "inviscid32") {
    sc.grid.n = 32;
    sc.abc = {abc(4), abc(6)};
    sc.t_end = 10.0;
    switch (algorithm) {
      case 1: sc.form = ConvectiveForm::Rotational; sc.tableau = "gauss1"; break;
      case 2: sc.form = ConvectiveForm::Rotational; sc.tableau = "rk4"; break;
      case 3: sc.form = ConvectiveForm::SkewSymmetric; sc.tableau = "gauss1"; break;
      case 4: sc.form = ConvectiveForm::SkewSymmetric; sc.tableau = "rk4"; break;
      case 5: sc.form = ConvectiveForm::Divergence; sc.tableau = "rk4"; break;
      case 6:
        sc.form = ConvectiveForm::HWStaggered;
        sc.tableau = "rk4";
        sc.grid.scheme = DerivativeScheme::FD2Staggered;
        break;
      default: throw ValidationError("inviscid32 algorithm must be 1..6");
    }
    sc.name += "/" + std::to_string(algorithm);
    return sc;
  }
  if (name == "truncated_euler") {
    sc.grid.n = 96;
    sc.grid.dealias = DealiasPolicy::sphere(42);
    sc.abc = {abc(28), abc(30)};
    sc.form = ConvectiveForm::Rotational;
    sc.tableau = "gauss1";
    sc.t_end = 20.0;
    return sc;
  }
  if (name == "truncated_euler_small") {
    sc.grid.n = 48;
    sc.grid.dealias = DealiasPolicy::sphere(15);
    sc.abc = {abc(10), abc(11)};
    sc.form = ConvectiveForm::Rotational;
    sc.tableau = "gauss1";
    sc.t_end = 40.0;
    return sc;
  }
  if (name == "forced_helical") {
    sc.grid.n = 64;
    sc.grid.scheme = DerivativeScheme::FD2Colocated;
    sc.form = ConvectiveForm::Rotational;
    sc.tableau = "rk4";
    sc.nu = 0.015;
    sc.forcing = ForcingSpec{};
    sc.t_end = 70.0;
    return sc;
  }
  if (name == "forced_reference") {
    sc.grid.n = 96;
    sc.grid.dealias = DealiasPolicy::two_thirds();
    sc.form = ConvectiveForm::Rotational;
    sc.tableau = "rk4";
    sc.nu = 0.015;
    sc.forcing = ForcingSpec{};
    sc.t_end = 70.0;
    return sc;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"inviscid32", "truncated_euler", "truncated_euler_small", "forced_helical", "forced_reference"};
}

SpectralVelocity initial_state(const Scenario& sc, const GridPtr& grid, std::shared_ptr<EulerForcing>* forcing) {
  if (sc.forcing) {
    auto f = std::make_shared<EulerForcing>(grid, *sc.forcing);
    SpectralVelocity u = f->initial_state();
    if (forcing) *forcing = std::move(f);
    return u;
  }
  if (sc.abc.empty()) throw ValidationError("scenario has neither ABC components nor forcing");
  return dealias(abc_superposition(sc.abc, grid));
}

Real characteristic_time(const Scenario& sc, const SpectralVelocity& u, const EulerForcing* forcing) {
  if (forcing) return std::exp(-0.5 * std::log(forcing->band_energy(u))) / 1.0;
  int k1 = std::numeric_limits<int>::max();
  for (const auto& a : sc.abc) k1 = std::min(k1, a.k);
  if (sc.abc.empty()) throw ValidationError("cannot infer the characteristic wavenumber");
  return 1.0 / (std::sqrt(energy(u)) * k1 * sc.grid.wavenumber_unit());
}

}  // namespace helispec
