#include <gtest/gtest.h>

#include "holonomy/hopf.hpp"
#include "holonomy/interferometer.hpp"
#include "holonomy/random.hpp"

using namespace holonomy;
using namespace holonomy::hopf;

namespace {

Quaternion random_quaternion(Rng& rng) { return {rng.normal(), rng.normal(), rng.normal(), rng.normal()}; }

double distance(const Quaternion& x, const Quaternion& y) { return (x - y).vec().norm(); }

double distance(const QuaternionicSpinor& x, const QuaternionicSpinor& y) {
  return std::hypot(distance(x.p, y.p), distance(x.q, y.q));
}

}  // namespace

TEST(Quaternion, UnitRelations) {
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1}, minus_one{-1, 0, 0, 0};
  EXPECT_EQ((i * i).vec(), minus_one.vec());
  EXPECT_EQ((j * j).vec(), minus_one.vec());
  EXPECT_EQ((k * k).vec(), minus_one.vec());
  EXPECT_EQ((i * j * k).vec(), minus_one.vec());
  EXPECT_EQ((i * j).vec(), k.vec());
  EXPECT_EQ((j * i).vec(), (-1.0 * k).vec());
}

TEST(Quaternion, AlgebraProperties) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Quaternion x = random_quaternion(rng), y = random_quaternion(rng), z = random_quaternion(rng);
    EXPECT_LT(distance((x * y) * z, x * (y * z)), 1e-12);
    EXPECT_NEAR((x * y).norm(), x.norm() * y.norm(), 1e-12);
    EXPECT_LT(distance((x * y).conj(), y.conj() * x.conj()), 1e-12);
    EXPECT_LT(distance(x * x.inverse(), Quaternion{1, 0, 0, 0}), 1e-12);
    EXPECT_LT(distance(x * (y + z), x * y + x * z), 1e-12);
  }
}

TEST(Quaternion, SpinorRoundTripAndInnerProduct) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi = rng.pure_vector(4);
    const CVector phi = rng.pure_vector(4);
    EXPECT_LT((from_quaternionic(to_quaternionic(psi)) - psi).norm(), 1e-15);
    const Quaternion inner = quaternionic_inner(to_quaternionic(psi), to_quaternionic(phi));
    EXPECT_NEAR(inner.a, psi.dot(phi).real(), 1e-14);
    // Hermitian and right-linear.
    const Quaternion swapped = quaternionic_inner(to_quaternionic(phi), to_quaternionic(psi));
    EXPECT_LT(distance(swapped, inner.conj()), 1e-14);
    const Quaternion q = random_quaternion(rng);
    const auto spinor = to_quaternionic(phi);
    EXPECT_LT(distance(quaternionic_inner(to_quaternionic(psi), {spinor.p * q, spinor.q * q}), inner * q), 1e-13);
    EXPECT_NEAR(quaternionic_inner(to_quaternionic(psi), to_quaternionic(psi)).a, 1.0, 1e-14);
  }
}

TEST(Hopf, Su2CoefficientRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = rng.special_unitary(2);
    const Eigen::Vector4d c = su2_coefficients(u);
    EXPECT_NEAR(c.norm(), 1.0, 1e-14);
    EXPECT_LT((su2_matrix(c) - u).norm(), 1e-14);
    EXPECT_LT((from_phase_quaternion(phase_quaternion(c)) - c).norm(), 1e-15);
  }
  EXPECT_THROW(su2_coefficients(Complex(0, 1) * CMatrix::Identity(2, 2)), Error);
}

TEST(Hopf, PhaseQuaternionReversesProducts) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix v = rng.special_unitary(2);
    const CMatrix w = rng.special_unitary(2);
    const Quaternion product = phase_quaternion(su2_coefficients(v * w));
    const Quaternion reversed = phase_quaternion(su2_coefficients(w)) * phase_quaternion(su2_coefficients(v));
    EXPECT_LT(distance(product, reversed), 1e-13);
  }
}

TEST(Hopf, PairActionMatchesTensorProduct) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi = rng.pure_vector(4);
    const CMatrix u = rng.special_unitary(2);
    const CMatrix v = rng.special_unitary(2);
    const CVector direct = states::kron(u, v) * psi;
    EXPECT_LT((from_quaternionic(su2_pair_action(to_quaternionic(psi), u, v)) - direct).norm(), 1e-13);
    const CVector left = states::kron(u, CMatrix::Identity(2, 2)) * psi;
    EXPECT_LT((from_quaternionic(left_action(u, to_quaternionic(psi))) - left).norm(), 1e-13);
  }
}

TEST(Hopf, IntensityAndAmplitudeForms) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi = rng.pure_vector(4);
    const CMatrix u = rng.special_unitary(2);
    const CMatrix v = rng.special_unitary(2);
    const auto rho = states::DensityMatrix::from_vector(2, 2, psi);
    const auto spinor = to_quaternionic(psi);
    EXPECT_NEAR(quaternionic_mz_intensity(spinor, u, v), interferometer::coincidence_intensity(rho, u, v).value,
                1e-13);
    const Eigen::Matrix3d m = states::density_to_stokes(rho).correlation();
    EXPECT_LT((correlation_from_spinor(spinor) - m).norm(), 1e-13);
    EXPECT_LT(distance(quaternionic_amplitude(spinor, u), amplitude_from_correlation(m, su2_coefficients(u))),
              1e-13);
  }
}

TEST(Hopf, FiberInvariance) {
  // Right multiplication by a unit quaternion moves along the fiber: the
  // projective coordinate and the state of the first qubit stay fixed.
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi = rng.pure_vector(4);
    const auto spinor = to_quaternionic(psi);
    const CMatrix v = rng.special_unitary(2);
    const auto moved = su2_pair_action(spinor, CMatrix::Identity(2, 2), v);
    const Quaternion qv = phase_quaternion(su2_coefficients(v));
    EXPECT_LT(distance(moved, QuaternionicSpinor{spinor.p * qv, spinor.q * qv}), 1e-13);
    EXPECT_LT(distance(projective_coordinate(moved), projective_coordinate(spinor)), 1e-12);
    const auto rho = states::DensityMatrix::from_vector(2, 2, psi);
    const auto rho_moved = states::DensityMatrix::from_vector(2, 2, from_quaternionic(moved));
    EXPECT_LT((rho_moved.reduced_a() - rho.reduced_a()).norm(), 1e-13);
  }
}

TEST(Hopf, EquivarianceUnderFirstQubit) {
  // U on the first qubit rotates the correlation matrix by the adjoint of U.
  Rng rng(8);
  const auto& basis = *algebra::shared_basis(2);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector psi = rng.pure_vector(4);
    const CMatrix u = rng.special_unitary(2);
    const Eigen::Matrix3d m = correlation_from_spinor(to_quaternionic(psi));
    const Eigen::Matrix3d moved = correlation_from_spinor(left_action(u, to_quaternionic(psi)));
    const Eigen::Matrix3d r = algebra::adjoint_rotation(u, basis).bottomRightCorner(3, 3);
    EXPECT_LT((moved - r * m).norm(), 1e-13);
  }
}

TEST(Levay, ParallelMatchesClosedForm) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const CVector psi = rng.pure_vector(4);
    const CMatrix u = rng.special_unitary(2);
    const auto rho = states::DensityMatrix::from_vector(2, 2, psi);
    const Eigen::Matrix3d m = states::density_to_stokes(rho).correlation();
    const auto levay = levay_parallel_v(m, su2_coefficients(u));
    const auto closed = interferometer::maximize_su2(rho, u);
    EXPECT_LT((su2_matrix(levay.v) - closed.v).norm(), 1e-12);
    EXPECT_NEAR(levay.v.norm(), 1.0, 1e-14);
    // The transported spinor overlaps the original with a positive real amplitude.
    const auto spinor = to_quaternionic(psi);
    const Quaternion inner = quaternionic_inner(spinor, su2_pair_action(spinor, u, closed.v));
    EXPECT_LT(inner.vec().tail<3>().norm(), 1e-12);
    EXPECT_NEAR(inner.a, levay.lambda, 1e-12);
  }
}

TEST(Levay, DegenerateDirectionThrows) {
  // A product state with U = i sigma_1 has U_0 = 0 and M^T u = 0.
  const auto rho = states::schmidt_state(1.0, 0.0);
  const Eigen::Matrix3d m = states::density_to_stokes(rho).correlation();
  try {
    levay_parallel_v(m, Eigen::Vector4d(0, 1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDirection);
  }
}

TEST(Levay, ConnectionIntegratorMatchesPathOrdered) {
  const CVector psi = states::schmidt_vector(0.8, 0.6);
  const transport::SmoothPath loop(2, {{1, 0.0, {-0.6}, {0.5}}, {2, 0.0, {0.3}, {0.2}}});
  const auto rho = states::DensityMatrix::from_vector(2, 2, psi);
  const CMatrix quaternionic = levay_path_holonomy(psi, loop, 400);
  const CMatrix ordered = transport::path_ordered_holonomy(rho, loop, 400, Group::Special).v;
  EXPECT_LT((quaternionic - ordered).norm(), 1e-10);
  // dV V^dagger from the correlation matrix equals the general connection.
  const CMatrix x = loop.generator(0.3);
  Eigen::Vector3d du;
  for (int k = 0; k < 3; ++k) du(k) = (x * algebra::shared_basis(2)->generator(k + 1)).trace().imag() / 2.0;
  const Eigen::Vector3d dv = levay_connection(states::density_to_stokes(rho).correlation(), du);
  const auto a = transport::connection_one_form(states::density_to_stokes(rho), x, *algebra::shared_basis(2),
                                                *algebra::shared_basis(2), Group::Special);
  Eigen::Vector3d from_general;
  for (int k = 0; k < 3; ++k) from_general(k) = (a.a_hat * algebra::shared_basis(2)->generator(k + 1)).trace().imag() / 2.0;
  EXPECT_LT((dv - from_general).norm(), 1e-12);
}
