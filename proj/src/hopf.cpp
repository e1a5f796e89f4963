#include "holonomy/hopf.hpp"

#include <cmath>

namespace holonomy::hopf {

double Quaternion::norm() const { return std::sqrt(norm2()); }

Quaternion Quaternion::inverse() const {
  const double n2 = norm2();
  if (n2 == 0.0) throw Error(ErrorCode::Precondition, "zero quaternion has no inverse");
  return (1.0 / n2) * conj();
}

Quaternion operator*(const Quaternion& x, const Quaternion& y) {
  return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
          x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
          x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
          x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

Quaternion operator+(const Quaternion& x, const Quaternion& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

Quaternion operator-(const Quaternion& x, const Quaternion& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

Quaternion operator*(double s, const Quaternion& q) { return {s * q.a, s * q.b, s * q.c, s * q.d}; }

namespace {

// z + w j for complex z, w.
Quaternion pair(Complex z, Complex w) { return {z.real(), z.imag(), w.real(), w.imag()}; }
Complex complex_part(const Quaternion& q) { return {q.a, q.b}; }
Complex j_part(const Quaternion& q) { return {q.c, q.d}; }

void require_two_qubit_vector(const CVector& psi) {
  if (psi.size() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "expected a two-qubit state vector");
  }
  if (std::abs(psi.squaredNorm() - 1.0) > kExactTol) {
    throw Error(ErrorCode::Unnormalized, "state vector is not normalized");
  }
}

}  // namespace

QuaternionicSpinor to_quaternionic(const CVector& psi) {
  require_two_qubit_vector(psi);
  return {pair(psi(0), psi(1)), pair(psi(2), psi(3))};
}

CVector from_quaternionic(const QuaternionicSpinor& spinor) {
  CVector psi(4);
  psi << complex_part(spinor.p), j_part(spinor.p), complex_part(spinor.q), j_part(spinor.q);
  return psi;
}

Quaternion quaternionic_inner(const QuaternionicSpinor& psi, const QuaternionicSpinor& phi) {
  return psi.q.conj() * phi.q + psi.p.conj() * phi.p;
}

Eigen::Vector4d su2_coefficients(const CMatrix& u) {
  algebra::require_square(u, 2, "SU(2) element");
  algebra::require_unitary(u, kNumericTol, "SU(2) element");
  if (std::abs(u.determinant() - 1.0) > kNumericTol) {
    throw Error(ErrorCode::ConstraintViolation, "SU(2) element must have unit determinant");
  }
  const auto& basis = *algebra::shared_basis(2);
  Eigen::Vector4d c;
  c(0) = 0.5 * u.trace().real();
  for (int k = 1; k < 4; ++k) c(k) = ((u * basis.generator(k)).trace() / (2.0 * kI)).real();
  return c;
}

CMatrix su2_matrix(const Eigen::Vector4d& c) {
  const auto& basis = *algebra::shared_basis(2);
  CMatrix u = c(0) * basis.generator(0);
  for (int k = 1; k < 4; ++k) u += kI * c(k) * basis.generator(k);
  return u;
}

Quaternion phase_quaternion(const Eigen::Vector4d& v) { return {v(0), v(3), -v(2), v(1)}; }

Eigen::Vector4d from_phase_quaternion(const Quaternion& q) { return {q.a, q.d, -q.c, q.b}; }

QuaternionicSpinor left_action(const CMatrix& u, const QuaternionicSpinor& s) {
  algebra::require_square(u, 2, "single-qubit operator");
  const Quaternion u00 = Quaternion::from_complex(u(0, 0));
  const Quaternion u01 = Quaternion::from_complex(u(0, 1));
  const Quaternion u10 = Quaternion::from_complex(u(1, 0));
  const Quaternion u11 = Quaternion::from_complex(u(1, 1));
  return {u00 * s.p + u01 * s.q, u10 * s.p + u11 * s.q};
}

QuaternionicSpinor su2_pair_action(const QuaternionicSpinor& spinor, const CMatrix& u,
                                   const CMatrix& v) {
  su2_coefficients(u);
  const Quaternion qv = phase_quaternion(su2_coefficients(v));
  const QuaternionicSpinor moved = left_action(u, spinor);
  return {moved.p * qv, moved.q * qv};
}

Quaternion quaternionic_amplitude(const QuaternionicSpinor& spinor, const CMatrix& u) {
  su2_coefficients(u);
  return quaternionic_inner(spinor, left_action(u, spinor));
}

Quaternion amplitude_from_correlation(const Eigen::Matrix3d& m, const Eigen::Vector4d& u) {
  const Eigen::Vector3d mu = m.transpose() * u.tail<3>();
  return {u(0), mu(2), -mu(1), mu(0)};
}

double quaternionic_mz_intensity(const QuaternionicSpinor& spinor, const CMatrix& u,
                                 const CMatrix& v) {
  const Quaternion qv = phase_quaternion(su2_coefficients(v));
  return 0.5 + 0.5 * (quaternionic_amplitude(spinor, u) * qv).a;
}

Eigen::Matrix3d correlation_from_spinor(const QuaternionicSpinor& spinor) {
  const auto& basis = *algebra::shared_basis(2);
  Eigen::Matrix3d m;
  for (int j = 1; j < 4; ++j) {
    const CMatrix g = kI * basis.generator(j);
    const Quaternion amp = quaternionic_inner(spinor, left_action(g, spinor));
    m(j - 1, 0) = amp.d;
    m(j - 1, 1) = -amp.c;
    m(j - 1, 2) = amp.b;
  }
  return m;
}

Quaternion projective_coordinate(const QuaternionicSpinor& spinor) {
  return spinor.p * spinor.q.inverse();
}

LevayParallel levay_parallel_v(const Eigen::Matrix3d& m, const Eigen::Vector4d& u) {
  Eigen::Vector4d v;
  v(0) = u(0);
  v.tail<3>() = -(m.transpose() * u.tail<3>());
  const double lambda = v.norm();
  if (lambda <= kExactTol) {
    throw Error(ErrorCode::DegenerateDirection, "parallel direction undefined (lambda = 0)");
  }
  return {v / lambda, lambda};
}

Eigen::Vector3d levay_connection(const Eigen::Matrix3d& m, const Eigen::Vector3d& duu_dagger) {
  return -(m.transpose() * duu_dagger);
}

CMatrix levay_path_holonomy(const CVector& psi0, const transport::SmoothPath& path, int n_steps) {
  if (path.dimension() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "quaternionic transport needs a qubit path");
  }
  if (n_steps < 1) throw Error(ErrorCode::OutOfRange, "n_steps must be positive");
  const QuaternionicSpinor start = to_quaternionic(psi0);
  const auto& basis = *algebra::shared_basis(2);
  const double dt = 1.0 / n_steps;
  Quaternion total{1.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n_steps; ++i) {
    const double t = i * dt;
    const QuaternionicSpinor moved = left_action(path.unitary(t), start);
    const QuaternionicSpinor current{moved.p * total, moved.q * total};
    const CMatrix g = path.generator(t);
    Eigen::Vector3d a;
    for (int k = 1; k < 4; ++k) a(k - 1) = 0.5 * (g * basis.generator(k)).trace().imag();
    const Eigen::Vector3d b = levay_connection(correlation_from_spinor(current), a);
    const double angle = b.norm() * dt;
    Eigen::Vector4d step(1.0, 0.0, 0.0, 0.0);
    if (angle > 0.0) {
      step(0) = std::cos(angle);
      step.tail<3>() = std::sin(angle) * b / b.norm();
    }
    total = total * phase_quaternion(step);
    total = (1.0 / total.norm()) * total;
  }
  return su2_matrix(from_phase_quaternion(total));
}

}  // namespace holonomy::hopf
