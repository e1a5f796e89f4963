#include "holonomy/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace holonomy::states {

using algebra::GeneratorBasis;

DensityMatrix DensityMatrix::from_matrix(int d_a, int d_b, const CMatrix& matrix,
                                         double psd_tolerance) {
  if (d_a < 1 || d_b < 1) {
    throw Error(ErrorCode::InvalidDimension, "subsystem dimensions must be positive");
  }
  const int dim = d_a * d_b;
  algebra::require_square(matrix, dim, "density matrix");
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kExactTol) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (deviation " << herm << ")";
    throw Error(ErrorCode::ConstraintViolation, msg.str());
  }
  const Complex tr = matrix.trace();
  if (std::abs(tr - 1.0) > kExactTol) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr.real() << "+" << tr.imag() << "i, expected 1";
    throw Error(ErrorCode::Unnormalized, msg.str());
  }
  CMatrix sym = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < -psd_tolerance) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << lowest;
    throw Error(ErrorCode::UnphysicalTensor, msg.str());
  }
  return DensityMatrix(d_a, d_b, std::move(sym));
}

DensityMatrix DensityMatrix::from_vector(int d_a, int d_b, const CVector& psi) {
  if (psi.size() != d_a * d_b) {
    throw Error(ErrorCode::DimensionMismatch, "state vector length does not match d_a * d_b");
  }
  if (std::abs(psi.squaredNorm() - 1.0) > kExactTol) {
    throw Error(ErrorCode::Unnormalized, "state vector is not normalized");
  }
  return from_matrix(d_a, d_b, psi * psi.adjoint());
}

CMatrix DensityMatrix::reduced_a() const { return partial_trace_b(matrix_, d_a_, d_b_); }
CMatrix DensityMatrix::reduced_b() const { return partial_trace_a(matrix_, d_a_, d_b_); }
double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

StokesTensor::StokesTensor(int d_a, int d_b, RMatrix s) : d_a_(d_a), d_b_(d_b), s_(std::move(s)) {
  if (s_.rows() != d_a * d_a || s_.cols() != d_b * d_b) {
    throw Error(ErrorCode::DimensionMismatch, "Stokes tensor shape must be d_a^2 x d_b^2");
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_trace_a(const CMatrix& rho, int d_a, int d_b) {
  CMatrix out = CMatrix::Zero(d_b, d_b);
  for (int i = 0; i < d_a; ++i) out += rho.block(i * d_b, i * d_b, d_b, d_b);
  return out;
}

CMatrix partial_trace_b(const CMatrix& rho, int d_a, int d_b) {
  CMatrix out(d_a, d_a);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_a; ++j) out(i, j) = rho.block(i * d_b, j * d_b, d_b, d_b).trace();
  return out;
}

RVector single_stokes(const CMatrix& rho, const GeneratorBasis& basis) {
  RVector out(basis.size());
  for (int j = 0; j < basis.size(); ++j) out(j) = (rho * basis.generator(j)).trace().real();
  return out;
}

StokesTensor density_to_stokes(const DensityMatrix& rho, const GeneratorBasis& basis_a,
                               const GeneratorBasis& basis_b) {
  const int d_a = rho.d_a();
  const int d_b = rho.d_b();
  if (basis_a.dimension() != d_a || basis_b.dimension() != d_b) {
    throw Error(ErrorCode::DimensionMismatch, "basis dimensions do not match the state");
  }
  // Tr(rho chi_j (x) chi_k) = sum_{ab} (chi_j)_{ba} Tr_B(rho_{ab} chi_k), rho_{ab} the B blocks.
  const CMatrix& m = rho.matrix();
  RMatrix s(basis_a.size(), basis_b.size());
  std::vector<CVector> block_traces(static_cast<size_t>(d_a) * d_a);
  for (int a = 0; a < d_a; ++a) {
    for (int b = 0; b < d_a; ++b) {
      const CMatrix blk = m.block(a * d_b, b * d_b, d_b, d_b);
      CVector t(basis_b.size());
      for (int k = 0; k < basis_b.size(); ++k) t(k) = (blk * basis_b.generator(k)).trace();
      block_traces[static_cast<size_t>(a) * d_a + b] = std::move(t);
    }
  }
  double worst_imag = 0.0;
  for (int j = 0; j < basis_a.size(); ++j) {
    const CMatrix& chi = basis_a.generator(j);
    for (int k = 0; k < basis_b.size(); ++k) {
      Complex acc = 0.0;
      for (int a = 0; a < d_a; ++a)
        for (int b = 0; b < d_a; ++b) {
          if (chi(b, a) == Complex(0.0)) continue;
          acc += chi(b, a) * block_traces[static_cast<size_t>(a) * d_a + b](k);
        }
      worst_imag = std::max(worst_imag, std::abs(acc.imag()));
      s(j, k) = acc.real();
    }
  }
  if (worst_imag > kNumericTol) {
    std::ostringstream msg;
    msg << "Stokes tensor has imaginary residue " << worst_imag;
    throw Error(ErrorCode::InternalConsistency, msg.str());
  }
  return StokesTensor(d_a, d_b, std::move(s));
}

StokesTensor density_to_stokes(const DensityMatrix& rho) {
  return density_to_stokes(rho, *algebra::shared_basis(rho.d_a()),
                           *algebra::shared_basis(rho.d_b()));
}

DensityMatrix stokes_to_density(const StokesTensor& s, const GeneratorBasis& basis_a,
                                const GeneratorBasis& basis_b) {
  if (basis_a.dimension() != s.d_a() || basis_b.dimension() != s.d_b()) {
    throw Error(ErrorCode::DimensionMismatch, "basis dimensions do not match the tensor");
  }
  if (std::abs(s(0, 0) - 1.0) > kExactTol) {
    throw Error(ErrorCode::Unnormalized, "Stokes tensor must have S_00 = 1");
  }
  const int dim = s.d_a() * s.d_b();
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (int j = 0; j < basis_a.size(); ++j) {
    CMatrix b_part = CMatrix::Zero(s.d_b(), s.d_b());
    for (int k = 0; k < basis_b.size(); ++k) {
      b_part += (s(j, k) / basis_b.normalization(k)) * basis_b.generator(k);
    }
    rho += kron(basis_a.generator(j) / basis_a.normalization(j), b_part);
  }
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix::from_matrix(s.d_a(), s.d_b(), rho, 1e-8);
}

DensityMatrix stokes_to_density(const StokesTensor& s) {
  return stokes_to_density(s, *algebra::shared_basis(s.d_a()), *algebra::shared_basis(s.d_b()));
}

CVector schmidt_vector(double a, double b) {
  if (a < 0.0 || b < 0.0) {
    throw Error(ErrorCode::Precondition, "Schmidt coefficients must be non-negative");
  }
  if (std::abs(a * a + b * b - 1.0) > kExactTol) {
    throw Error(ErrorCode::Unnormalized, "Schmidt coefficients must satisfy a^2 + b^2 = 1");
  }
  CVector psi = CVector::Zero(4);
  psi(0) = a;
  psi(3) = b;
  return psi;
}

DensityMatrix schmidt_state(double a, double b) {
  return DensityMatrix::from_vector(2, 2, schmidt_vector(a, b));
}

CVector bell_vector() { return schmidt_vector(std::sqrt(0.5), std::sqrt(0.5)); }

DensityMatrix werner_state(double p, const CVector& psi) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "Werner parameter p must lie in [0, 1]");
  }
  const DensityMatrix pure = DensityMatrix::from_vector(2, 2, psi);
  const double det = abs_det_correlation(density_to_stokes(pure));
  if (std::abs(det - 1.0) > kNumericTol) {
    throw Error(ErrorCode::NotMaximallyEntangled,
                "Werner state requires a maximally entangled psi (|det M| = 1)");
  }
  const CMatrix rho = p * pure.matrix() + (1.0 - p) / 4.0 * CMatrix::Identity(4, 4);
  return DensityMatrix::from_matrix(2, 2, rho);
}

double concurrence_pure(const CVector& psi) {
  if (psi.size() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "pure-state concurrence needs a two-qubit vector");
  }
  if (std::abs(psi.squaredNorm() - 1.0) > kNumericTol) {
    throw Error(ErrorCode::Unnormalized, "state vector is not normalized");
  }
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

double concurrence_pure(const DensityMatrix& rho) {
  if (rho.d_a() != 2 || rho.d_b() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "pure-state concurrence needs a two-qubit state");
  }
  if (std::abs(rho.purity() - 1.0) > kNumericTol) {
    throw Error(ErrorCode::NotPure, "concurrence_pure requires Tr(rho^2) = 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.matrix());
  const CVector psi = eig.eigenvectors().col(3);
  return concurrence_pure(CVector(psi / psi.norm()));
}

double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.d_a() != 2 || rho.d_b() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "concurrence needs a two-qubit state");
  }
  const auto& basis = *algebra::shared_basis(2);
  const CMatrix yy = kron(basis.generator(2), basis.generator(2));
  const CMatrix flipped = yy * rho.matrix().conjugate() * yy;
  Eigen::ComplexEigenSolver<CMatrix> eig(rho.matrix() * flipped, false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < 4; ++i) roots.push_back(std::sqrt(std::max(eig.eigenvalues()(i).real(), 0.0)));
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

double abs_det_correlation(const StokesTensor& s) {
  if (s.d_a() != 2 || s.d_b() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "|det M| is defined here for two qubits only");
  }
  return std::abs(RMatrix(s.correlation()).determinant());
}

double rebit_concurrence(const DensityMatrix& rho) {
  if (rho.d_a() != 2 || rho.d_b() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "rebit concurrence needs a two-qubit state");
  }
  const auto& basis = *algebra::shared_basis(2);
  return (kron(basis.generator(2), basis.generator(2)) * rho.matrix()).trace().real();
}

DensityMatrix apply_local(const DensityMatrix& rho, const CMatrix& u, const CMatrix& v) {
  algebra::require_square(u, rho.d_a(), "local unitary on A");
  algebra::require_square(v, rho.d_b(), "local unitary on B");
  algebra::require_unitary(u, kNumericTol, "apply_local (A)");
  algebra::require_unitary(v, kNumericTol, "apply_local (B)");
  const CMatrix w = kron(u, v);
  CMatrix out = w * rho.matrix() * w.adjoint();
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix::from_matrix(rho.d_a(), rho.d_b(), out);
}

}  // namespace holonomy::states
