#pragma once

#include "helispec/field_ops.hpp"

namespace helispec {

enum class ConvectiveForm { Advective, Divergence, SkewSymmetric, Rotational, HWStaggered };

std::string_view to_token(ConvectiveForm f);
ConvectiveForm parse_form(std::string_view token);

/// Throws ValidationError if the form cannot run on the grid's scheme. The
/// staggered layout only supports HWStaggered and HWStaggered needs it.
void check_form(ConvectiveForm form, const Grid& grid);

/// Convective operator C(a) applied to v, with `a` the advecting field:
///   adv:  sum_j A_j D_j v_i
///   div:  sum_j D_j (A_j v_i)
///   skew: half-sum of the two
///   rot:  (R a) x v
///   hw:   d+_i[(I-_i a_i)(I-_i v_i)] + sum_{j!=i} d-_j[(I+_i a_j)(I+_j v_i)]
/// Every pointwise product is masked by the grid's dealias policy. The result
/// is not projected.
SpectralVector convective_operator(const SpectralVector& a, const SpectralVector& v, ConvectiveForm form);

/// N(u) = C(u) u.
SpectralVector nonlinear_term(const SpectralVelocity& u, ConvectiveForm form);

/// Instantaneous rates contributed by -P N(u) to the global balances.
struct Productions {
  Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
  Real energy = 0.0;
  Real helicity = 0.0;
};

/// Rates for a precomputed nonlinear term.
Productions productions(const SpectralVelocity& u, const SpectralVector& n);
Productions productions(const SpectralVelocity& u, ConvectiveForm form);

/// -inner(u, P N(u)).
Real energy_production(const SpectralVelocity& u, ConvectiveForm form);
/// -[hel(u, P N) + hel(P N, u)]; for colocated schemes and projected u this is
/// -2 inner(curl u, N).
Real helicity_production(const SpectralVelocity& u, ConvectiveForm form);

}  // namespace helispec
