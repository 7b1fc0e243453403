#pragma once

#include "helispec/convection.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace helispec {

using DenseMatrix = Eigen::MatrixXd;

/// Discrete operators of a small grid as dense matrices acting on grid values.
/// Vector fields are stacked component-major: [u_x; u_y; u_z], each block in
/// point order (i*n + j)*n + k. Every column is the field_ops operator applied
/// to a unit basis field.
struct OperatorSet {
  GridPtr grid;
  SpectralVelocity u;                ///< advecting field of C and V
  std::array<DenseMatrix, 3> D;      ///< forward derivative per axis (N x N)
  std::array<DenseMatrix, 3> Db;     ///< backward derivative per axis
  DenseMatrix M, G;                  ///< divergence (N x 3N), gradient (3N x N)
  DenseMatrix R, Rd;                 ///< curl and dual curl (3N x 3N)
  DenseMatrix L;                     ///< vector Laplacian
  DenseMatrix Pi;                    ///< vector dealias mask
  DenseMatrix V;                     ///< pointwise w x (.) with w = R u
  std::map<ConvectiveForm, DenseMatrix> C;  ///< C(u) for every form the scheme supports

  int points() const { return static_cast<int>(D[0].rows()); }
};

/// Throws ValidationError for n > 8.
OperatorSet assemble(const GridPtr& grid, const SpectralVelocity& u);

/// Pointwise cross-product matrix: V(w) v = w x v. Skew-symmetric.
DenseMatrix cross_matrix(const PhysicalVector& w);

/// Harlow-Welch convection C(a) v computed with explicit index arithmetic on
/// the staggered arrays (no Fourier symbols).
PhysicalVector hw_literal(const PhysicalVector& a, const PhysicalVector& v, int n, Real h);

struct PropertyCheck {
  std::string name;
  bool expected = true;  ///< whether the property should hold on this scheme
  bool holds = false;
  Real residual = 0.0;
  Real tol = 0.0;
  bool pass() const { return holds == expected; }
};

struct CertificationReport {
  std::string label;  ///< e.g. "spectral/two_thirds/8"
  std::vector<PropertyCheck> checks;
  bool all_pass() const;
};

/// Table-1/2/3 property checks on an assembled set. Random states are drawn
/// from `seed`; the set's own u must be projected.
CertificationReport certify_tables(const OperatorSet& ops, unsigned seed = 1);

/// Assemble and certify the grid with a seeded projected random u.
CertificationReport certify_grid(const GridSpec& spec, unsigned seed = 1);

void write_report_text(std::ostream& os, const CertificationReport& r);
void write_report_csv(std::ostream& os, const std::vector<CertificationReport>& reports);

/// Conservation marks of the spatial discretisation.
enum class Mark {
  Apriori,      ///< conservative for any u
  Conditional,  ///< conservative when u is discretely solenoidal
  None,         ///< not conservative
};
char to_symbol(Mark m);

struct ConservationRow {
  int algorithm = 0;
  ConvectiveForm form = ConvectiveForm::Rotational;
  DerivativeScheme scheme = DerivativeScheme::Spectral;
  std::string tableau;
  std::array<Mark, 3> mark{};        ///< momentum, energy, helicity
  std::array<Real, 3> raw{};         ///< |production| for an unprojected state
  std::array<Real, 3> projected{};   ///< |production| for the projected state
  std::array<bool, 3> pass{};
};

/// Measured spatial conservation of the six algorithm rows on an aliased n^3
/// grid (the HW row on the staggered layout). Conservative cells must stay
/// below `zero_tol`, non-conservative ones above `nonzero_tol`.
std::vector<ConservationRow> conservation_matrix(int n, unsigned seed, Real zero_tol = 1e-11,
                                                 Real nonzero_tol = 1e-6);

}  // namespace helispec
