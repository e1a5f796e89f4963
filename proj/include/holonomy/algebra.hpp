#pragma once

#include <memory>
#include <vector>

#include "holonomy/common.hpp"

namespace holonomy::algebra {

/// Rank-3 real tensor over generator indices 0..n-1, stored flat.
class Rank3 {
 public:
  Rank3() = default;
  explicit Rank3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

  int extent() const { return n_; }
  double operator()(int j, int k, int l) const { return data_[index(j, k, l)]; }
  double& operator()(int j, int k, int l) { return data_[index(j, k, l)]; }

 private:
  size_t index(int j, int k, int l) const {
    return (static_cast<size_t>(j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct StructureConstants {
  Rank3 f;  // antisymmetric
  Rank3 d;  // symmetric
};

/// Generalized Gell-Mann basis of U(D).
///
/// Index 0 is the identity. The traceless generators follow in a fixed
/// order: symmetric off-diagonal pairs (j,k), j<k, in lexicographic order;
/// then the antisymmetric pairs in the same order; then the D-1 diagonal
/// generators. For D = 2 this reproduces {1, sigma_1, sigma_2, sigma_3}.
/// Structure constants with any zero index are 0.
class GeneratorBasis {
 public:
  explicit GeneratorBasis(int dimension);

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(generators_.size()); }
  const CMatrix& generator(int j) const { return generators_[j]; }
  const std::vector<CMatrix>& generators() const { return generators_; }

  double f(int j, int k, int l) const { return constants_.f(j, k, l); }
  double d(int j, int k, int l) const { return constants_.d(j, k, l); }
  const StructureConstants& constants() const { return constants_; }

  /// delta_{0j}(D-2) + 2, i.e. Tr(chi_j chi_j).
  double normalization(int j) const { return j == 0 ? dimension_ : 2.0; }

  /// Generators that are imaginary antisymmetric; these span so(D).
  bool is_antisymmetric(int j) const { return antisymmetric_[j]; }

  /// Generator indices spanning the Lie algebra of the restricted group.
  std::vector<int> indices(Group group) const;

 private:
  int dimension_;
  std::vector<CMatrix> generators_;
  std::vector<bool> antisymmetric_;
  StructureConstants constants_;
};

/// Process-wide immutable basis instances, built on first use.
std::shared_ptr<const GeneratorBasis> shared_basis(int dimension);

/// f_klm = Tr([chi_k, chi_l] chi_m) / 4i, d_kln = Tr({chi_k, chi_l} chi_n) / 4.
StructureConstants structure_constants(const GeneratorBasis& basis);

/// Complex expansion coefficients U_j of a unitary, U = sum_j U_j chi_j.
struct UnitaryCoefficients {
  int dimension = 0;
  CVector values;
};

/// Coefficients Tr(X chi_j) / [delta_0j (D-2) + 2] of an arbitrary operator.
CVector operator_coefficients(const CMatrix& op, const GeneratorBasis& basis);

UnitaryCoefficients expand_unitary(const CMatrix& unitary, const GeneratorBasis& basis);
CMatrix reconstruct(const CVector& coefficients, const GeneratorBasis& basis);
inline CMatrix reconstruct(const UnitaryCoefficients& c, const GeneratorBasis& basis) {
  return reconstruct(c.values, basis);
}

/// |U_0|^2 + (2/D) sum |U_j|^2 - 1.
double norm_constraint_residual(const CVector& coefficients, const GeneratorBasis& basis);
/// max over l >= 1 of |sum_jk U_j U_k^* [d_jkl + i f_jkl + delta_j0 delta_kl + delta_k0 delta_jl]|.
double product_constraint_residual(const CVector& coefficients, const GeneratorBasis& basis);

/// R_jk = Tr(U chi_k U^dagger chi_j) / [(D-2) delta_j0 + 2].
RMatrix adjoint_rotation(const CMatrix& unitary, const GeneratorBasis& basis);

// Linear-algebra helpers shared by the other modules.

double unitarity_residual(const CMatrix& u);
void require_unitary(const CMatrix& u, double tol, const char* what);
void require_square(const CMatrix& m, int dimension, const char* what);

/// exp(iH) for Hermitian H via its eigendecomposition.
CMatrix exp_i_hermitian(const CMatrix& h);
/// exp(i sum_j theta_j chi_j).
CMatrix exp_generators(const RVector& theta, const GeneratorBasis& basis);
/// Real coefficients theta_j = Tr(H chi_j) / n_j of a Hermitian operator.
RVector hermitian_coefficients(const CMatrix& h, const GeneratorBasis& basis);
CMatrix hermitian_from(const RVector& theta, const GeneratorBasis& basis);

/// Nearest unitary in Frobenius norm (polar factor).
CMatrix nearest_unitary(const CMatrix& m);

/// min over phi of || V - e^{i phi} 1 ||_F for unitary V.
double phase_identity_distance(const CMatrix& v);
double commutator_norm(const CMatrix& a, const CMatrix& b);

}  // namespace holonomy::algebra
