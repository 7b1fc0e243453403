#include "helispec/spectral_grid.hpp"

#include <cmath>

namespace helispec {

namespace {

// cos/sin of pi*p/q with exact values at multiples of pi/2.
std::pair<double, double> cos_sin_pi_fraction(long p, long q) {
  const long two_q = 2 * q;
  long r = ((2 * p) % (2 * two_q) + 2 * two_q) % (2 * two_q);  // 2p mod 4q
  if (r % q == 0) {
    switch (r / q) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
    }
  }
  const double angle = std::numbers::pi * static_cast<double>(p) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::string_view to_token(DerivativeScheme s) {
  switch (s) {
    case DerivativeScheme::Spectral: return "spectral";
    case DerivativeScheme::FD2Colocated: return "fd2";
    case DerivativeScheme::FD2Staggered: return "fd2_staggered";
  }
  return "?";
}

DerivativeScheme parse_scheme(std::string_view token) {
  if (token == "spectral") return DerivativeScheme::Spectral;
  if (token == "fd2" || token == "fd2_colocated") return DerivativeScheme::FD2Colocated;
  if (token == "fd2_staggered" || token == "staggered") return DerivativeScheme::FD2Staggered;
  throw ValidationError("unknown derivative scheme '" + std::string(token) + "'");
}

std::string_view to_token(DealiasPolicy::Kind k) {
  switch (k) {
    case DealiasPolicy::Kind::None: return "none";
    case DealiasPolicy::Kind::TwoThirds: return "two_thirds";
    case DealiasPolicy::Kind::Sphere: return "sphere";
  }
  return "?";
}

DealiasPolicy::Kind parse_dealias(std::string_view token) {
  if (token == "none") return DealiasPolicy::Kind::None;
  if (token == "two_thirds" || token == "2/3") return DealiasPolicy::Kind::TwoThirds;
  if (token == "sphere") return DealiasPolicy::Kind::Sphere;
  throw ValidationError("unknown dealias policy '" + std::string(token) + "'");
}

void GridSpec::validate() const {
  if (n < 4 || n % 2 != 0)
    throw ValidationError("grid size n must be even and >= 4 (got " + std::to_string(n) + ")");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ValidationError("box length must be positive");
  if (dealias.kind == DealiasPolicy::Kind::Sphere) {
    if (!(dealias.k_max > 0.0) || dealias.k_max > n / 2 - 1)
      throw ValidationError("sphere truncation k_max must lie in (0, n/2 - 1]");
  }
}

WavenumberTable build_wavenumbers(const GridSpec& grid) {
  grid.validate();
  const int n = grid.n;
  const double h = grid.spacing();
  const double unit = grid.wavenumber_unit();

  WavenumberTable t;
  t.scheme = grid.scheme;
  t.n = n;
  t.h = h;
  t.k_exact.resize(n);
  t.k1_eff.resize(n);
  t.k2_eff.resize(n);
  t.stagger_shift.resize(n);
  t.avg_factor.resize(n);
  t.d_forward.resize(n);
  t.d_backward.resize(n);
  t.interp_forward.resize(n);
  t.interp_backward.resize(n);

  const Complex I(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : i - n;
    t.k_exact(i) = m;
    // kh = 2*pi*m/n
    const auto [c_full, s_full] = cos_sin_pi_fraction(2L * m, n);
    const auto [c_half, s_half] = cos_sin_pi_fraction(m, n);
    switch (grid.scheme) {
      case DerivativeScheme::Spectral: {
        const double k = unit * m;
        t.k1_eff(i) = (m == n / 2) ? 0.0 : k;
        t.k2_eff(i) = k * k;
        t.stagger_shift(i) = 1.0;
        t.avg_factor(i) = 1.0;
        break;
      }
      case DerivativeScheme::FD2Colocated:
        t.k1_eff(i) = s_full / h;
        t.k2_eff(i) = 2.0 * (1.0 - c_full) / (h * h);
        t.stagger_shift(i) = 1.0;
        t.avg_factor(i) = 1.0;
        break;
      case DerivativeScheme::FD2Staggered:
        t.k1_eff(i) = 2.0 * s_half / h;
        t.k2_eff(i) = 2.0 * (1.0 - c_full) / (h * h);
        t.stagger_shift(i) = Complex(c_half, s_half);
        t.avg_factor(i) = c_half;
        break;
    }
    if (grid.scheme == DerivativeScheme::FD2Staggered) {
      const Complex e_full(c_full, s_full);
      t.d_forward(i) = (e_full - 1.0) / h;
      t.d_backward(i) = (1.0 - std::conj(e_full)) / h;
      t.interp_forward(i) = 0.5 * (1.0 + e_full);
      t.interp_backward(i) = 0.5 * (1.0 + std::conj(e_full));
    } else {
      t.d_forward(i) = I * t.k1_eff(i);
      t.d_backward(i) = I * t.k1_eff(i);
      t.interp_forward(i) = 1.0;
      t.interp_backward(i) = 1.0;
    }
  }
  return t;
}

int effective_resolution(const GridSpec& grid) {
  switch (grid.dealias.kind) {
    case DealiasPolicy::Kind::None: return grid.n;
    case DealiasPolicy::Kind::TwoThirds: return 2 * (grid.n / 3);
    case DealiasPolicy::Kind::Sphere: return 2 * static_cast<int>(std::floor(grid.dealias.k_max));
  }
  return grid.n;
}

int resolved_k_max(const GridSpec& grid) { return effective_resolution(grid) / 2; }

GridPtr Grid::create(const GridSpec& spec) { return create(spec, Options{}); }

GridPtr Grid::create(const GridSpec& spec, Options options) {
  return create_with_symbols(spec, build_wavenumbers(spec), options);
}

GridPtr Grid::create_with_symbols(const GridSpec& spec, WavenumberTable table, Options options) {
  spec.validate();
  if (table.n != spec.n || table.k1_eff.size() != spec.n)
    throw ValidationError("wavenumber table does not match grid size");
  return GridPtr(new Grid(spec, std::move(table), options));
}

Grid::Grid(const GridSpec& spec, WavenumberTable table, Options options)
    : spec_(spec), table_(std::move(table)) {
  const int n = spec_.n;
  layout_.n = n;
  layout_.nz = n / 2 + 1;
  fft_ = std::make_unique<FftEngine>(n, options.planner, options.threads);

  const Eigen::Index m = layout_.size();
  weight_.resize(m);
  norm2_.resize(m);
  k2_total_.resize(m);
  shell_.resize(m);
  mask_.resize(m);
  auto& ms = modes_;
  for (int c = 0; c < 3; ++c) {
    ms.d_forward[c].resize(m);
    ms.d_backward[c].resize(m);
    ms.interp_forward[c].resize(m);
    ms.interp_backward[c].resize(m);
  }
  ms.inverse_div_grad.resize(m);
  ms.colocated = spec_.scheme != DerivativeScheme::FD2Staggered;
  const Real tiny = 1e-24 / (table_.h * table_.h);

  int max_shell = 0;
  for (int i = 0; i < n; ++i) {
    const int mx = layout_.wave(i);
    for (int j = 0; j < n; ++j) {
      const int my = layout_.wave(j);
      for (int k = 0; k < layout_.nz; ++k) {
        const int mz = k;
        const Eigen::Index idx = layout_.index(i, j, k);
        weight_(idx) = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        const double r2 = double(mx) * mx + double(my) * my + double(mz) * mz;
        norm2_(idx) = r2;
        k2_total_(idx) = table_.k2_eff(i) + table_.k2_eff(j) + table_.k2_eff(k);
        const int s = static_cast<int>(std::lround(std::sqrt(r2)));
        shell_(idx) = s;
        max_shell = std::max(max_shell, s);
        bool keep = true;
        switch (spec_.dealias.kind) {
          case DealiasPolicy::Kind::None: break;
          case DealiasPolicy::Kind::TwoThirds:
            keep = 3 * std::abs(mx) <= n && 3 * std::abs(my) <= n && 3 * mz <= n;
            break;
          case DealiasPolicy::Kind::Sphere:
            keep = r2 <= spec_.dealias.k_max * spec_.dealias.k_max;
            break;
        }
        mask_(idx) = keep ? 1.0 : 0.0;

        const int ax[3] = {i, j, k};
        Complex dd = 0.0;
        for (int c = 0; c < 3; ++c) {
          ms.d_forward[c](idx) = table_.d_forward(ax[c]);
          ms.d_backward[c](idx) = table_.d_backward(ax[c]);
          ms.interp_forward[c](idx) = table_.interp_forward(ax[c]);
          ms.interp_backward[c](idx) = table_.interp_backward(ax[c]);
          dd += table_.d_backward(ax[c]) * table_.d_forward(ax[c]);
        }
        ms.inverse_div_grad(idx) = std::abs(dd) <= tiny ? Complex(0.0) : 1.0 / dd;
      }
    }
  }
  shell_count_ = max_shell + 1;
}

Eigen::Array<bool, Eigen::Dynamic, 1> dealias_mask(const Grid& grid) {
  return grid.dealias_multiplier() > 0.5;
}

ModeWeights sphere_multiplier(const Grid& grid, double radius) {
  return (grid.lattice_norm2() <= radius * radius).cast<Real>();
}

}  // namespace helispec
