#pragma once

#include <cstdint>

#include "holonomy/algebra.hpp"
#include "holonomy/states.hpp"

namespace holonomy::interferometer {

using states::DensityMatrix;
using states::StokesTensor;

/// Franson coincidence intensity, evaluated both from the density matrix
/// and from the Stokes tensor.
struct IntensityResult {
  double value = 0.0;               // 1/2 + 1/2 Re Tr(U (x) V rho0)
  double stokes_value = 0.0;        // 1/2 + 1/2 sum Re(V_j U_k) S_kj
  double interference_term = 0.0;   // stokes_value - 1/2
};

IntensityResult coincidence_intensity(const DensityMatrix& rho0, const CMatrix& u,
                                      const CMatrix& v);

/// W = Tr_A[(U (x) 1) rho0], so that Re Tr(U (x) V rho0) = Re Tr(V W).
CMatrix interference_operator(const DensityMatrix& rho0, const CMatrix& u);

enum class Status { UniqueMax, Degenerate, ZeroInterference };
const char* to_string(Status status);

struct MaximizationOutcome {
  algebra::UnitaryCoefficients coefficients;
  CMatrix v;
  double intensity = 0.0;
  double lagrange_lambda = 0.0;
  RVector lagrange_mu;
  /// Stationarity violation: the U(D) Lagrange system for the unrestricted
  /// group, the tangent gradient of the restricted group otherwise.
  double residual = 0.0;
  Status status = Status::UniqueMax;
  Group group = Group::Unitary;
  bool certified = true;
  int iterations = 0;
};

struct MaximizerOptions {
  int restarts = 8;
  int certificate_samples = 64;
  double gradient_tolerance = 1e-13;
  int max_iterations = 200000;
  std::uint64_t seed = 0x5eedULL;
};

/// Maximizes the coincidence intensity over V in the restricted group by
/// gradient ascent along one-parameter subgroups, with seeded restarts.
///
/// Restart 0 starts from V = 1, the others from Haar-random group elements.
/// For the unrestricted group a rank-deficient W leaves a face of maximizers;
/// the returned V is the one selected by vanishing depolarizing noise on B,
/// and the outcome is flagged Degenerate.
MaximizationOutcome maximize_general(const DensityMatrix& rho0, const CMatrix& u, Group group,
                                     const MaximizerOptions& options = {});

/// Closed-form maximizer when one applies; maximize_general otherwise.
MaximizationOutcome maximize(const DensityMatrix& rho0, const CMatrix& u, Group group,
                             const MaximizerOptions& options = {});

/// Schmidt state a|00> + b|11> with U = U_1 sigma_1 + U_2 sigma_2:
/// V = U_1^* sigma_1 - U_2^* sigma_2, lambda = C, mu = 0.
MaximizationOutcome maximize_qudit_qubit_special(const DensityMatrix& rho0, const CMatrix& u);

/// Qubit V restricted to SU(2), V = V_0 1 + i sum V_k sigma_k with real V.
MaximizationOutcome maximize_su2(const DensityMatrix& rho0, const CMatrix& u);

/// Two-rebit state with U, V in SO(2).
MaximizationOutcome maximize_so2_rebit(const DensityMatrix& rho0, const CMatrix& u);

/// B(lambda, mu) of the qubit Lagrange system and its closed-form inverse.
struct QubitBMatrix {
  CMatrix b;
  CMatrix inverse;
};
QubitBMatrix b_matrix_qubit(double lambda, const Eigen::Vector3d& mu);

/// B_km = lambda c_k delta_km + sum_j mu_j (delta_jk delta_m0 + delta_jm delta_k0
///        + d_mkj + i f_mkj), c_0 = 1 and c_k = 2/D otherwise.
CMatrix b_matrix(double lambda, const RVector& mu, const algebra::GeneratorBasis& basis_b);

/// V_l = sum B^{-1}_lk S^T_kj U_j^*.
CVector formal_solution(const CMatrix& b_inverse, const StokesTensor& s, const CVector& u);

/// Least-squares Lagrange multipliers of the U(D_B) stationarity system
/// B(lambda, mu) v = S^T u^*; residual is the max-norm violation.
struct LagrangeFit {
  double lambda = 0.0;
  RVector mu;
  double residual = 0.0;
};
LagrangeFit lagrange_fit(const StokesTensor& s, const CVector& u, const CVector& v,
                         const algebra::GeneratorBasis& basis_b);
double lagrange_residual(const StokesTensor& s, const CVector& u, const CVector& v, double lambda,
                         const RVector& mu, const algebra::GeneratorBasis& basis_b);

/// Max-norm of dI/dphi_j at V for generators of the restricted group.
double tangent_gradient_norm(const DensityMatrix& rho0, const CMatrix& u, const CMatrix& v,
                             Group group);

}  // namespace holonomy::interferometer
