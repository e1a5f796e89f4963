#include "holonomy/algebra.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace holonomy {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::ConstraintViolation: return "constraint-violation";
    case ErrorCode::InternalConsistency: return "internal-consistency";
    case ErrorCode::UnphysicalTensor: return "unphysical-tensor";
    case ErrorCode::Unnormalized: return "unnormalized";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::NotMaximallyEntangled: return "not-maximally-entangled";
    case ErrorCode::NotPure: return "not-pure";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::SingularB: return "singular-b";
    case ErrorCode::OpenLoop: return "open-loop";
    case ErrorCode::DegenerateDirection: return "degenerate-direction";
    case ErrorCode::Schema: return "schema";
  }
  return "unknown";
}

const char* to_string(Group group) {
  switch (group) {
    case Group::Unitary: return "u";
    case Group::Special: return "su";
    case Group::Orthogonal: return "so";
  }
  return "u";
}

Group group_from_string(const std::string& name) {
  if (name == "u") return Group::Unitary;
  if (name == "su") return Group::Special;
  if (name == "so") return Group::Orthogonal;
  throw Error(ErrorCode::Schema, "unknown group restriction '" + name + "' (expected u|su|so)");
}

}  // namespace holonomy

namespace holonomy::algebra {

namespace {

CMatrix unit(int dim, int row, int col) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

}  // namespace

GeneratorBasis::GeneratorBasis(int dimension) : dimension_(dimension) {
  if (dimension < 2) {
    throw Error(ErrorCode::InvalidDimension,
                "generator basis needs D >= 2, got " + std::to_string(dimension));
  }
  const int dim = dimension;
  generators_.reserve(static_cast<size_t>(dim) * dim);
  generators_.push_back(CMatrix::Identity(dim, dim));
  antisymmetric_.push_back(false);

  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      generators_.push_back(unit(dim, j, k) + unit(dim, k, j));
      antisymmetric_.push_back(false);
    }
  }
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      generators_.push_back(-kI * unit(dim, j, k) + kI * unit(dim, k, j));
      antisymmetric_.push_back(true);
    }
  }
  for (int l = 1; l < dim; ++l) {
    CMatrix m = CMatrix::Zero(dim, dim);
    for (int m_idx = 0; m_idx < l; ++m_idx) m(m_idx, m_idx) = 1.0;
    m(l, l) = -static_cast<double>(l);
    generators_.push_back(std::sqrt(2.0 / (l * (l + 1.0))) * m);
    antisymmetric_.push_back(false);
  }
  constants_ = structure_constants(*this);
}

std::vector<int> GeneratorBasis::indices(Group group) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    switch (group) {
      case Group::Unitary: out.push_back(j); break;
      case Group::Special:
        if (j > 0) out.push_back(j);
        break;
      case Group::Orthogonal:
        if (antisymmetric_[j]) out.push_back(j);
        break;
    }
  }
  return out;
}

std::shared_ptr<const GeneratorBasis> shared_basis(int dimension) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GeneratorBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(dimension);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const GeneratorBasis>(dimension);
  cache.emplace(dimension, basis);
  return basis;
}

StructureConstants structure_constants(const GeneratorBasis& basis) {
  const int n = basis.size();
  StructureConstants out{Rank3(n), Rank3(n)};
  for (int k = 1; k < n; ++k) {
    for (int l = 1; l < n; ++l) {
      const CMatrix& a = basis.generator(k);
      const CMatrix& b = basis.generator(l);
      const CMatrix comm = a * b - b * a;
      const CMatrix anti = a * b + b * a;
      for (int m = 1; m < n; ++m) {
        const CMatrix& c = basis.generator(m);
        out.f(k, l, m) = ((comm * c).trace() / (4.0 * kI)).real();
        out.d(k, l, m) = ((anti * c).trace() / 4.0).real();
      }
    }
  }
  return out;
}

CVector operator_coefficients(const CMatrix& op, const GeneratorBasis& basis) {
  require_square(op, basis.dimension(), "operator");
  CVector out(basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    out(j) = (op * basis.generator(j)).trace() / basis.normalization(j);
  }
  return out;
}

UnitaryCoefficients expand_unitary(const CMatrix& unitary, const GeneratorBasis& basis) {
  require_square(unitary, basis.dimension(), "unitary");
  require_unitary(unitary, kNumericTol, "expand_unitary");
  return {basis.dimension(), operator_coefficients(unitary, basis)};
}

CMatrix reconstruct(const CVector& coefficients, const GeneratorBasis& basis) {
  if (coefficients.size() != basis.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector length does not match basis");
  }
  CMatrix out = CMatrix::Zero(basis.dimension(), basis.dimension());
  for (int j = 0; j < basis.size(); ++j) out += coefficients(j) * basis.generator(j);
  return out;
}

double norm_constraint_residual(const CVector& c, const GeneratorBasis& basis) {
  double sum = std::norm(c(0));
  for (int j = 1; j < basis.size(); ++j) sum += 2.0 / basis.dimension() * std::norm(c(j));
  return sum - 1.0;
}

double product_constraint_residual(const CVector& c, const GeneratorBasis& basis) {
  const int n = basis.size();
  double worst = 0.0;
  for (int l = 1; l < n; ++l) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Complex t = Complex(basis.d(j, k, l), basis.f(j, k, l));
        if (j == 0 && k == l) t += 1.0;
        if (k == 0 && j == l) t += 1.0;
        acc += c(j) * std::conj(c(k)) * t;
      }
    }
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

RMatrix adjoint_rotation(const CMatrix& unitary, const GeneratorBasis& basis) {
  require_square(unitary, basis.dimension(), "unitary");
  require_unitary(unitary, kNumericTol, "adjoint_rotation");
  const int n = basis.size();
  RMatrix r(n, n);
  const CMatrix adj = unitary.adjoint();
  for (int k = 0; k < n; ++k) {
    const CMatrix rotated = unitary * basis.generator(k) * adj;
    for (int j = 0; j < n; ++j) {
      r(j, k) = (rotated * basis.generator(j)).trace().real() / basis.normalization(j);
    }
  }
  return r;
}

double unitarity_residual(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

void require_unitary(const CMatrix& u, double tol, const char* what) {
  const double residual = unitarity_residual(u);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << what << ": operator is not unitary (max |U^dagger U - 1| = " << residual << ")";
    throw Error(ErrorCode::ConstraintViolation, msg.str());
  }
}

void require_square(const CMatrix& m, int dimension, const char* what) {
  if (m.rows() != dimension || m.cols() != dimension) {
    std::ostringstream msg;
    msg << what << ": expected " << dimension << "x" << dimension << ", got " << m.rows() << "x"
        << m.cols();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

CMatrix exp_i_hermitian(const CMatrix& h) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  const RVector& w = eig.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(kI * w(i));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

CMatrix hermitian_from(const RVector& theta, const GeneratorBasis& basis) {
  if (theta.size() != basis.size()) {
    throw Error(ErrorCode::DimensionMismatch, "generator coefficient length does not match basis");
  }
  CMatrix h = CMatrix::Zero(basis.dimension(), basis.dimension());
  for (int j = 0; j < basis.size(); ++j) h += theta(j) * basis.generator(j);
  return h;
}

CMatrix exp_generators(const RVector& theta, const GeneratorBasis& basis) {
  return exp_i_hermitian(hermitian_from(theta, basis));
}

RVector hermitian_coefficients(const CMatrix& h, const GeneratorBasis& basis) {
  return operator_coefficients(h, basis).real();
}

CMatrix nearest_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double phase_identity_distance(const CMatrix& v) {
  const double gap = 2.0 * v.rows() - 2.0 * std::abs(v.trace());
  return std::sqrt(std::max(gap, 0.0));
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
  return (a * b - b * a).norm();
}

}  // namespace holonomy::algebra
