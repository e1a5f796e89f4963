#pragma once

#include "holonomy/transport.hpp"

namespace holonomy::hopf {

/// q = a + b i + c j + d k.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static Quaternion from_complex(Complex z) { return {z.real(), z.imag(), 0.0, 0.0}; }

  Quaternion conj() const { return {a, -b, -c, -d}; }
  double norm2() const { return a * a + b * b + c * c + d * d; }
  double norm() const;
  Quaternion inverse() const;
  Eigen::Vector4d vec() const { return {a, b, c, d}; }
};

Quaternion operator*(const Quaternion& x, const Quaternion& y);
Quaternion operator+(const Quaternion& x, const Quaternion& y);
Quaternion operator-(const Quaternion& x, const Quaternion& y);
Quaternion operator*(double s, const Quaternion& q);

/// p |0> + q |1> with quaternionic amplitudes.
struct QuaternionicSpinor {
  Quaternion p;
  Quaternion q;
};

/// (alpha, beta, gamma, delta) -> p = alpha + beta j, q = gamma + delta j.
QuaternionicSpinor to_quaternionic(const CVector& psi);
CVector from_quaternionic(const QuaternionicSpinor& spinor);

/// <Psi|Phi> = q_1^* q_2 + p_1^* p_2.
Quaternion quaternionic_inner(const QuaternionicSpinor& psi, const QuaternionicSpinor& phi);

/// Real coefficients (U_0, U_1, U_2, U_3) of U = U_0 1 + i sum U_k sigma_k in SU(2).
Eigen::Vector4d su2_coefficients(const CMatrix& u);
CMatrix su2_matrix(const Eigen::Vector4d& coefficients);

/// q_V = V_0 + V_3 i - V_2 j + V_1 k; V -> q_V reverses products.
Quaternion phase_quaternion(const Eigen::Vector4d& v);
Eigen::Vector4d from_phase_quaternion(const Quaternion& q);

/// Complex 2x2 matrix acting on the quaternionic spinor from the left.
QuaternionicSpinor left_action(const CMatrix& u, const QuaternionicSpinor& spinor);

/// U Psi q_V: U on the first qubit, V on the second.
QuaternionicSpinor su2_pair_action(const QuaternionicSpinor& spinor, const CMatrix& u,
                                   const CMatrix& v);

/// <Psi | U Psi> in the quaternionic inner product.
Quaternion quaternionic_amplitude(const QuaternionicSpinor& spinor, const CMatrix& u);

/// U_0 + sum U_j M_j3 i - sum U_j M_j2 j + sum U_j M_j1 k.
Quaternion amplitude_from_correlation(const Eigen::Matrix3d& m, const Eigen::Vector4d& u);

/// 1/2 + 1/2 Re(<Psi|U Psi> q_V).
double quaternionic_mz_intensity(const QuaternionicSpinor& spinor, const CMatrix& u,
                                 const CMatrix& v);

/// Correlation matrix of a pure state read off the amplitudes of i sigma_j.
Eigen::Matrix3d correlation_from_spinor(const QuaternionicSpinor& spinor);

/// p q^{-1}, the coordinate of the quaternionic ray when q != 0.
Quaternion projective_coordinate(const QuaternionicSpinor& spinor);

struct LevayParallel {
  Eigen::Vector4d v;
  double lambda = 0.0;
};

/// V_0 = U_0 / lambda, V_j = -sum_k U_k M_kj / lambda, lambda > 0 the normalizer.
LevayParallel levay_parallel_v(const Eigen::Matrix3d& m, const Eigen::Vector4d& u);

/// (dV V^dagger)_j = -sum_k (dU U^dagger)_k M_kj.
Eigen::Vector3d levay_connection(const Eigen::Matrix3d& m, const Eigen::Vector3d& duu_dagger);

/// First-order integration of the quaternionic transport rule along an
/// SU(2) path: the phase quaternion is right-multiplied each step.
CMatrix levay_path_holonomy(const CVector& psi0, const transport::SmoothPath& path, int n_steps);

}  // namespace holonomy::hopf
