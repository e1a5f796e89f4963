#pragma once

#include "holonomy/algebra.hpp"
#include "holonomy/common.hpp"

namespace holonomy::states {

/// Bipartite density matrix on C^{d_a} (x) C^{d_b}, A-major ordering.
class DensityMatrix {
 public:
  /// Validates Hermiticity and unit trace to 1e-12 and eigenvalues to
  /// -psd_tolerance.
  static DensityMatrix from_matrix(int d_a, int d_b, const CMatrix& matrix,
                                   double psd_tolerance = kNumericTol);
  static DensityMatrix from_vector(int d_a, int d_b, const CVector& psi);

  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  const CMatrix& matrix() const { return matrix_; }

  CMatrix reduced_a() const;
  CMatrix reduced_b() const;
  double purity() const;

 private:
  DensityMatrix(int d_a, int d_b, CMatrix matrix)
      : d_a_(d_a), d_b_(d_b), matrix_(std::move(matrix)) {}

  int d_a_;
  int d_b_;
  CMatrix matrix_;
};

/// Real d_a^2 x d_b^2 tensor S_jk = Tr(rho chi_j^A (x) chi_k^B).
///
/// Row 0 is the Stokes vector of rho^B, column 0 that of rho^A; the
/// remaining block is the correlation matrix M, exposed only as a view.
class StokesTensor {
 public:
  StokesTensor(int d_a, int d_b, RMatrix s);

  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  const RMatrix& matrix() const { return s_; }
  double operator()(int j, int k) const { return s_(j, k); }

  Eigen::Block<const RMatrix> correlation() const {
    return s_.bottomRightCorner(s_.rows() - 1, s_.cols() - 1);
  }
  RVector local_a() const { return s_.col(0); }
  RVector local_b() const { return s_.row(0).transpose(); }

 private:
  int d_a_;
  int d_b_;
  RMatrix s_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace_a(const CMatrix& rho, int d_a, int d_b);
CMatrix partial_trace_b(const CMatrix& rho, int d_a, int d_b);

/// Single-system Stokes vector s_j = Tr(rho chi_j).
RVector single_stokes(const CMatrix& rho, const algebra::GeneratorBasis& basis);

StokesTensor density_to_stokes(const DensityMatrix& rho, const algebra::GeneratorBasis& basis_a,
                               const algebra::GeneratorBasis& basis_b);
StokesTensor density_to_stokes(const DensityMatrix& rho);

DensityMatrix stokes_to_density(const StokesTensor& s, const algebra::GeneratorBasis& basis_a,
                                const algebra::GeneratorBasis& basis_b);
DensityMatrix stokes_to_density(const StokesTensor& s);

/// a|00> + b|11>, a, b >= 0, a^2 + b^2 = 1.
CVector schmidt_vector(double a, double b);
DensityMatrix schmidt_state(double a, double b);

/// (|00> + |11>) / sqrt(2).
CVector bell_vector();

/// p |psi><psi| + (1-p)/4 1, psi maximally entangled.
DensityMatrix werner_state(double p, const CVector& psi = bell_vector());

/// 2 |alpha delta - beta gamma| for a normalized two-qubit vector.
double concurrence_pure(const CVector& psi);
double concurrence_pure(const DensityMatrix& rho);

/// Mixed-state two-qubit concurrence max(0, l1 - l2 - l3 - l4), l_i the
/// decreasing square roots of the eigenvalues of rho (sy sy) rho^* (sy sy).
double wootters_concurrence(const DensityMatrix& rho);

/// |det M| of a two-qubit Stokes tensor.
double abs_det_correlation(const StokesTensor& s);

/// Tr(sigma_2 (x) sigma_2 rho) for a two-qubit state.
double rebit_concurrence(const DensityMatrix& rho);

/// (U (x) V) rho (U (x) V)^dagger.
DensityMatrix apply_local(const DensityMatrix& rho, const CMatrix& u, const CMatrix& v);

}  // namespace holonomy::states
