#include "helispec/convection.hpp"

namespace helispec {

namespace {

ModeArray along(const ModeArray& c, const std::array<ModeArray, 3>& sym, int axis) { return sym[axis] * c; }

PointArray synth(const Grid& g, const ModeArray& c) {
  PointArray p;
  g.fft().inverse(c, p);
  return p;
}

ModeArray analyze_masked(const Grid& g, const PointArray& p) {
  ModeArray c;
  if (g.has_dealias())
    g.fft().forward(p, c, g.dealias_multiplier());
  else
    g.fft().forward(p, c);
  return c;
}

// sum_j A_j D_j v_i
SpectralVector advective_part(const PhysicalVector& ap, const SpectralVector& v) {
  const Grid& g = v.g();
  const auto& D = g.mode_symbols().d_forward;
  SpectralVector out = SpectralVector::uninitialized(v.grid());
  for (int i = 0; i < 3; ++i) {
    PointArray acc = PointArray::Zero(g.point_count());
    for (int j = 0; j < 3; ++j) acc += ap[j] * synth(g, along(v[i], D, j));
    out[i] = analyze_masked(g, acc);
  }
  return out;
}

// sum_j D_j (A_j v_i); `symmetric` when a == v so each flux is formed once.
SpectralVector divergence_part(const PhysicalVector& ap, const PhysicalVector& vp,
                               const GridPtr& grid, bool symmetric) {
  const Grid& g = *grid;
  const auto& D = g.mode_symbols().d_forward;
  SpectralVector out(grid);
  std::array<std::array<ModeArray, 3>, 3> flux;  // flux[j][i] = F(A_j v_i)
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      if (symmetric && i < j) {
        flux[j][i] = flux[i][j];
        continue;
      }
      flux[j][i] = analyze_masked(g, ap[j] * vp[i]);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += along(flux[j][i], D, j);
  return out;
}

SpectralVector cross_product(const PhysicalVector& w, const PhysicalVector& v, const GridPtr& grid) {
  const Grid& g = *grid;
  SpectralVector out = SpectralVector::uninitialized(grid);
  out[0] = analyze_masked(g, w[1] * v[2] - w[2] * v[1]);
  out[1] = analyze_masked(g, w[2] * v[0] - w[0] * v[2]);
  out[2] = analyze_masked(g, w[0] * v[1] - w[1] * v[0]);
  return out;
}

SpectralVector harlow_welch(const SpectralVector& a, const SpectralVector& v, bool symmetric) {
  const Grid& g = a.g();
  const ModeSymbols& t = g.mode_symbols();
  SpectralVector out(a.grid());
  // diagonal fluxes at cell centres
  for (int i = 0; i < 3; ++i) {
    const PointArray ai = synth(g, along(a[i], t.interp_backward, i));
    const PointArray vi = symmetric ? ai : synth(g, along(v[i], t.interp_backward, i));
    out[i] += along(analyze_masked(g, ai * vi), t.d_forward, i);
  }
  // off-diagonal fluxes at edges: (I+_i a_j)(I+_j v_i), derivative along j
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      if (symmetric && j < i) continue;
      const PointArray aj = synth(g, along(a[j], t.interp_forward, i));
      const PointArray vi = synth(g, along(v[i], t.interp_forward, j));
      const ModeArray f = analyze_masked(g, aj * vi);
      out[i] += along(f, t.d_backward, j);
      if (symmetric) out[j] += along(f, t.d_backward, i);
    }
  return out;
}

}  // namespace

std::string_view to_token(ConvectiveForm f) {
  switch (f) {
    case ConvectiveForm::Advective: return "adv";
    case ConvectiveForm::Divergence: return "div";
    case ConvectiveForm::SkewSymmetric: return "skew";
    case ConvectiveForm::Rotational: return "rot";
    case ConvectiveForm::HWStaggered: return "hw";
  }
  return "?";
}

ConvectiveForm parse_form(std::string_view token) {
  if (token == "adv") return ConvectiveForm::Advective;
  if (token == "div") return ConvectiveForm::Divergence;
  if (token == "skew") return ConvectiveForm::SkewSymmetric;
  if (token == "rot") return ConvectiveForm::Rotational;
  if (token == "hw") return ConvectiveForm::HWStaggered;
  throw ValidationError("unknown convective form '" + std::string(token) + "'");
}

void check_form(ConvectiveForm form, const Grid& grid) {
  const bool staggered = grid.spec().scheme == DerivativeScheme::FD2Staggered;
  if (form == ConvectiveForm::HWStaggered && !staggered)
    throw ValidationError("form 'hw' requires the fd2_staggered scheme");
  if (form != ConvectiveForm::HWStaggered && staggered)
    throw ValidationError("the fd2_staggered scheme only supports form 'hw'");
}

SpectralVector convective_operator(const SpectralVector& a, const SpectralVector& v, ConvectiveForm form) {
  require_same_grid(a.g(), v.g());
  check_form(form, a.g());
  const bool same = &a == &v;
  switch (form) {
    case ConvectiveForm::Advective:
      return advective_part(to_physical(a), v);
    case ConvectiveForm::Divergence: {
      const PhysicalVector ap = to_physical(a);
      return divergence_part(ap, same ? ap : to_physical(v), a.grid(), same);
    }
    case ConvectiveForm::SkewSymmetric: {
      const PhysicalVector ap = to_physical(a);
      const PhysicalVector vp = same ? ap : to_physical(v);
      SpectralVector out = advective_part(ap, v);
      out += divergence_part(ap, vp, a.grid(), same);
      return out *= 0.5;
    }
    case ConvectiveForm::Rotational:
      return cross_product(to_physical(curl(a)), to_physical(v), a.grid());
    case ConvectiveForm::HWStaggered:
      return harlow_welch(a, v, same);
  }
  return SpectralVector(a.grid());
}

SpectralVector nonlinear_term(const SpectralVelocity& u, ConvectiveForm form) {
  return convective_operator(u, u, form);
}

Productions productions(const SpectralVelocity& u, const SpectralVector& n) {
  const SpectralVector pn = project(n);
  Productions p;
  p.momentum = -mean_momentum(n);
  p.energy = -inner(u, pn);
  p.helicity = -(helicity_form(u, pn) + helicity_form(pn, u));
  return p;
}

Productions productions(const SpectralVelocity& u, ConvectiveForm form) {
  return productions(u, nonlinear_term(u, form));
}

Real energy_production(const SpectralVelocity& u, ConvectiveForm form) {
  return -inner(u, project(nonlinear_term(u, form)));
}

Real helicity_production(const SpectralVelocity& u, ConvectiveForm form) {
  const SpectralVector pn = project(nonlinear_term(u, form));
  return -(helicity_form(u, pn) + helicity_form(pn, u));
}

}  // namespace helispec
