#pragma once

#include "helispec/field_ops.hpp"

#include <random>

namespace helispec::testing {

inline GridPtr make_grid(int n, DerivativeScheme scheme = DerivativeScheme::Spectral,
                         DealiasPolicy dealias = DealiasPolicy::none()) {
  GridSpec s;
  s.n = n;
  s.scheme = scheme;
  s.dealias = dealias;
  return Grid::create(s);
}

// White-noise physical field; Hermitian by construction.
inline SpectralVector noise(const GridPtr& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PhysicalVector p;
  for (int c = 0; c < 3; ++c) {
    p[c].resize(g->point_count());
    for (auto& x : p[c]) x = nd(rng);
  }
  return to_spectral(g, p);
}

inline SpectralScalar noise_scalar(const GridPtr& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PointArray p(g->point_count());
  for (auto& x : p) x = nd(rng);
  return to_spectral(g, p);
}

inline Real rel_diff(Real a, Real b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace helispec::testing
