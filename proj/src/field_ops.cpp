#include "helispec/field_ops.hpp"

#include <array>
#include <cmath>

namespace helispec {

namespace {

bool same_spec(const GridSpec& a, const GridSpec& b) {
  return a.n == b.n && a.box_length == b.box_length && a.scheme == b.scheme &&
         a.dealias.kind == b.dealias.kind && a.dealias.k_max == b.dealias.k_max;
}

SpectralVector curl_with(const SpectralVector& u, const std::array<ModeArray, 3>& D) {
  SpectralVector w = SpectralVector::uninitialized(u.grid());
  w[0] = D[1] * u[2] - D[2] * u[1];
  w[1] = D[2] * u[0] - D[0] * u[2];
  w[2] = D[0] * u[1] - D[1] * u[0];
  return w;
}

// Two-point periodic average along one axis of a row-major n^3 array:
// dir > 0 gives (f[i] + f[i+1])/2, dir < 0 gives (f[i-1] + f[i])/2.
PointArray average_axis(const PointArray& f, int n, int axis, int dir) {
  PointArray out(f.size());
  const Eigen::Index stride = axis == 0 ? Eigen::Index(n) * n : axis == 1 ? n : 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Eigen::Index idx = (Eigen::Index(i) * n + j) * n + k;
        const int pos = axis == 0 ? i : axis == 1 ? j : k;
        const int nb = ((pos + (dir > 0 ? 1 : -1)) % n + n) % n;
        const Eigen::Index nidx = idx + (nb - pos) * stride;
        out(idx) = 0.5 * (f(idx) + f(nidx));
      }
  return out;
}

}  // namespace

SpectralScalar SpectralScalar::zeros(GridPtr g) {
  SpectralScalar s;
  s.coeffs = ModeArray::Zero(g->mode_count());
  s.grid = std::move(g);
  return s;
}

SpectralVector::SpectralVector(GridPtr g) : grid_(std::move(g)) {
  for (auto& c : comp_) c = ModeArray::Zero(grid_->mode_count());
}

SpectralVector SpectralVector::uninitialized(GridPtr g) {
  SpectralVector v;
  for (auto& c : v.comp_) c.resize(g->mode_count());
  v.grid_ = std::move(g);
  return v;
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& o) {
  require_same_grid(g(), o.g());
  for (int c = 0; c < 3; ++c) comp_[c] += o.comp_[c];
  return *this;
}

SpectralVector& SpectralVector::operator-=(const SpectralVector& o) {
  require_same_grid(g(), o.g());
  for (int c = 0; c < 3; ++c) comp_[c] -= o.comp_[c];
  return *this;
}

SpectralVector& SpectralVector::operator*=(Real s) {
  for (auto& c : comp_) c *= s;
  return *this;
}

SpectralVector& SpectralVector::add_scaled(Real s, const SpectralVector& o) {
  require_same_grid(g(), o.g());
  for (int c = 0; c < 3; ++c) comp_[c] += s * o.comp_[c];
  return *this;
}

Real SpectralVector::max_abs() const {
  Real m = 0.0;
  for (const auto& c : comp_)
    if (c.size() > 0) m = std::max(m, c.abs().maxCoeff());
  return m;
}

bool SpectralVector::all_finite() const {
  for (const auto& c : comp_)
    if (!c.real().allFinite() || !c.imag().allFinite()) return false;
  return true;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a == &b) return;
  if (!same_spec(a.spec(), b.spec())) throw ValidationError("fields live on different grids");
}

PointArray to_physical(const SpectralScalar& s) {
  PointArray p;
  s.grid->fft().inverse(s.coeffs, p);
  return p;
}

PhysicalVector to_physical(const SpectralVector& v) {
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) v.g().fft().inverse(v[c], p[c]);
  return p;
}

SpectralScalar to_spectral(const GridPtr& grid, const PointArray& p) {
  SpectralScalar s;
  s.grid = grid;
  grid->fft().forward(p, s.coeffs);
  return s;
}

SpectralVector to_spectral(const GridPtr& grid, const PhysicalVector& p) {
  SpectralVector v = SpectralVector::uninitialized(grid);
  for (int c = 0; c < 3; ++c) grid->fft().forward(p[c], v[c]);
  return v;
}

SpectralVorticity curl(const SpectralVelocity& u) { return curl_with(u, u.g().mode_symbols().d_forward); }

SpectralVector curl_dual(const SpectralVector& w) { return curl_with(w, w.g().mode_symbols().d_backward); }

SpectralScalar divergence(const SpectralVelocity& u) {
  const auto& D = u.g().mode_symbols().d_backward;
  SpectralScalar s;
  s.grid = u.grid();
  s.coeffs = D[0] * u[0] + D[1] * u[1] + D[2] * u[2];
  return s;
}

SpectralVelocity gradient(const SpectralScalar& p) {
  const auto& D = p.grid->mode_symbols().d_forward;
  SpectralVector g = SpectralVector::uninitialized(p.grid);
  for (int c = 0; c < 3; ++c) g[c] = D[c] * p.coeffs;
  return g;
}

SpectralVector laplacian(const SpectralVector& u) {
  SpectralVector out(u);
  const ModeWeights& k2 = u.g().laplacian_symbol();
  for (int c = 0; c < 3; ++c) out[c] *= -k2;
  return out;
}

SpectralVelocity project(const SpectralVelocity& u) {
  const ModeSymbols& ms = u.g().mode_symbols();
  const ModeArray phi =
      (ms.d_backward[0] * u[0] + ms.d_backward[1] * u[1] + ms.d_backward[2] * u[2]) * ms.inverse_div_grad;
  SpectralVector out = SpectralVector::uninitialized(u.grid());
  for (int c = 0; c < 3; ++c) out[c] = u[c] - ms.d_forward[c] * phi;
  return out;
}

SpectralVector apply_mask(const SpectralVector& v, const ModeWeights& mask) {
  SpectralVector out(v);
  for (int c = 0; c < 3; ++c) out[c] *= mask;
  return out;
}

SpectralVector dealias(const SpectralVector& v) {
  if (!v.g().has_dealias()) return v;
  return apply_mask(v, v.g().dealias_multiplier());
}

ModeWeights inner_density(const SpectralVector& a, const SpectralVector& b) {
  require_same_grid(a.g(), b.g());
  ModeWeights d = ModeWeights::Zero(a.g().mode_count());
  for (int c = 0; c < 3; ++c) d += (a[c].conjugate() * b[c]).real();
  return d * a.g().parseval_weight();
}

Real inner(const SpectralVector& a, const SpectralVector& b) { return inner_density(a, b).sum(); }

Real inner(const SpectralScalar& a, const SpectralScalar& b) {
  require_same_grid(*a.grid, *b.grid);
  return ((a.coeffs.conjugate() * b.coeffs).real() * a.grid->parseval_weight()).sum();
}

Real physical_inner(const PhysicalVector& a, const PhysicalVector& b) {
  Real s = 0.0;
  for (int c = 0; c < 3; ++c) s += (a[c] * b[c]).sum();
  return s / static_cast<Real>(a[0].size());
}

ModeWeights helicity_density(const SpectralVector& a, const SpectralVector& b) {
  require_same_grid(a.g(), b.g());
  const Grid& g = a.g();
  const ModeSymbols& ms = g.mode_symbols();
  const SpectralVector w = curl(b);
  ModeWeights d = ModeWeights::Zero(g.mode_count());
  if (ms.colocated) {
    for (int c = 0; c < 3; ++c) d += (a[c].conjugate() * w[c]).real();
  } else {
    // a_c moves to the cell centre, w_c (on the edge normal to c) along the other two axes
    const auto& I = ms.interp_backward;
    for (int c = 0; c < 3; ++c) {
      const int p = (c + 1) % 3, q = (c + 2) % 3;
      d += ((I[c] * a[c]).conjugate() * (I[p] * I[q] * w[c])).real();
    }
  }
  return d * g.parseval_weight();
}

Real helicity_form(const SpectralVector& a, const SpectralVector& b) { return helicity_density(a, b).sum(); }

Real energy(const SpectralVelocity& u) { return 0.5 * inner(u, u); }

Real helicity(const SpectralVelocity& u) { return helicity_form(u, u); }

StaggeredHelicity staggered_helicity(const SpectralVelocity& u) {
  const Grid& g = u.g();
  if (g.spec().scheme != DerivativeScheme::FD2Staggered) {
    const Real h = helicity(u);
    return {h, h};
  }
  const int n = g.n();
  const PhysicalVector up = to_physical(u);
  const PhysicalVector wp = to_physical(curl(u));
  StaggeredHelicity out;
  const Real npts = static_cast<Real>(g.point_count());
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    // vertex: u_c moved across the two transverse axes, w_c along its own axis
    const PointArray uv = average_axis(average_axis(up[c], n, a, +1), n, b, +1);
    const PointArray wv = average_axis(wp[c], n, c, +1);
    out.vertex += (uv * wv).sum() / npts;
    // centre: u_c back along its own axis, w_c back across the transverse axes
    const PointArray uc = average_axis(up[c], n, c, -1);
    const PointArray wc = average_axis(average_axis(wp[c], n, a, -1), n, b, -1);
    out.center += (uc * wc).sum() / npts;
  }
  return out;
}

Real max_divergence(const SpectralVelocity& u) {
  const PointArray d = to_physical(divergence(u));
  return d.abs().maxCoeff();
}

Eigen::Vector3d mean_momentum(const SpectralVector& u) {
  return {u[0](0).real(), u[1](0).real(), u[2](0).real()};
}

bool is_hermitian(const SpectralVector& u, Real tol) {
  const ModeLayout& L = u.g().layout();
  for (int c = 0; c < 3; ++c)
    for (int k : {0, L.n / 2})
      for (int i = 0; i < L.n; ++i)
        for (int j = 0; j < L.n; ++j) {
          const Complex a = u[c](L.index(i, j, k));
          const Complex b = u[c](L.index((L.n - i) % L.n, (L.n - j) % L.n, k));
          if (std::abs(a - std::conj(b)) > tol) return false;
        }
  return true;
}

void hermitian_symmetrize(ModeArray& c, const Grid& grid) {
  const ModeLayout& L = grid.layout();
  for (int k : {0, L.n / 2})
    for (int i = 0; i < L.n; ++i)
      for (int j = 0; j < L.n; ++j) {
        const Eigen::Index a = L.index(i, j, k);
        const Eigen::Index b = L.index((L.n - i) % L.n, (L.n - j) % L.n, k);
        if (b < a) continue;
        const Complex avg = 0.5 * (c(a) + std::conj(c(b)));
        c(a) = avg;
        c(b) = std::conj(avg);
      }
}

}  // namespace helispec
