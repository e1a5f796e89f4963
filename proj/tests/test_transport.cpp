#include <gtest/gtest.h>

#include <cmath>

#include "holonomy/random.hpp"
#include "holonomy/transport.hpp"

using namespace holonomy;
using namespace holonomy::transport;

namespace {

SmoothPath qubit_loop() {
  return SmoothPath(2, {{1, 0.0, {-0.6}, {0.5}}, {2, 0.0, {0.3, -0.3}, {0.2}}, {3, 0.0, {0.0}, {0.7}}});
}

DensityMatrix in_phase_state(Rng& rng, int d_a, int d_b) {
  return DensityMatrix::from_matrix(d_a, d_b, rng.mixed_density(d_a, d_b));
}

}  // namespace

TEST(SmoothPath, StartsAtIdentityAndCloses) {
  const SmoothPath loop = qubit_loop();
  EXPECT_LT((loop.unitary(0.0) - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT(loop.closure_residual(), 1e-13);
  const SmoothPath open(2, {{1, 0.4, {}, {0.2}}});
  EXPECT_GT(open.closure_residual(), 0.1);
}

TEST(SmoothPath, GeneratorMatchesFiniteDifference) {
  const SmoothPath loop = qubit_loop();
  const double h = 1e-6;
  for (double t : {0.1, 0.37, 0.8}) {
    const CMatrix fd = (loop.unitary(t + h) - loop.unitary(t - h)) / (2 * h) * loop.unitary(t).adjoint();
    EXPECT_LT((loop.generator(t) - fd).norm(), 1e-8);
    EXPECT_LT((loop.generator(t) + loop.generator(t).adjoint()).norm(), 1e-13);
  }
}

TEST(SmoothPath, DiscretizationComposesToEndpoint) {
  const SmoothPath path(3, {{2, 0.3, {}, {0.4}}, {8, 0.0, {0.2}, {}}});
  const auto steps = path.discretize(40);
  ASSERT_EQ(steps.size(), 40u);
  CMatrix total = CMatrix::Identity(3, 3);
  for (const auto& s : steps) total = s * total;
  EXPECT_LT((total - path.unitary(1.0)).norm(), 1e-12);
  EXPECT_NEAR(closure_residual(steps, 3), path.closure_residual(), 1e-12);
}

TEST(Transport, SequenceIsConsistent) {
  Rng rng(1);
  const auto rho = in_phase_state(rng, 3, 2);
  const SmoothPath path(3, {{2, 0.3, {}, {0.4}}, {8, 0.0, {0.2}, {}}});
  const auto record = transport_sequence(rho, path.discretize(30), Group::Unitary);
  ASSERT_EQ(record.steps.size(), 30u);
  EXPECT_LT(record.intensity_consistency, 1e-12);
  CMatrix cu = CMatrix::Identity(3, 3);
  CMatrix cv = CMatrix::Identity(2, 2);
  auto state = rho;
  for (size_t n = 0; n < record.steps.size(); ++n) {
    const auto& step = record.steps[n];
    // The chosen V beats the identity and random group elements.
    EXPECT_GE(step.intensity + 1e-12,
              interferometer::coincidence_intensity(state, step.u, CMatrix::Identity(2, 2)).value);
    EXPECT_GE(step.intensity + 1e-12, interferometer::coincidence_intensity(state, step.u, rng.haar_unitary(2)).value);
    EXPECT_NEAR(cumulative_intensity(record, n), step.intensity, 1e-12);
    cu = step.u * cu;
    cv = step.v * cv;
    state = step.state;
  }
  EXPECT_LT((record.cumulative_u - cu).norm(), 1e-13);
  EXPECT_LT((record.cumulative_v - cv).norm(), 1e-13);
}

TEST(Transport, OpenLoopRejected) {
  Rng rng(2);
  const auto rho = in_phase_state(rng, 2, 2);
  const SmoothPath open(2, {{1, 0.4, {}, {0.2}}});
  try {
    holonomy_from_loop(rho, open.discretize(20), Group::Special);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OpenLoop);
  }
}

TEST(Transport, TrivialLoopHasTrivialHolonomy) {
  Rng rng(3);
  const auto rho = in_phase_state(rng, 2, 2);
  const auto& basis = *algebra::shared_basis(2);
  // Out along sigma_1 and straight back.
  const CMatrix step = algebra::exp_i_hermitian(0.05 * basis.generator(1));
  DiscretePath path(10, step);
  path.insert(path.end(), 10, step.adjoint());
  const auto h = holonomy_from_loop(rho, path, Group::Unitary);
  EXPECT_LT(algebra::phase_identity_distance(h.v), 1e-10);
}

TEST(Connection, BMatrixFormsAgree) {
  Rng rng(4);
  for (int d_b : {2, 3}) {
    const auto rho = in_phase_state(rng, 2, d_b);
    const auto s = states::density_to_stokes(rho);
    const auto& basis_b = *algebra::shared_basis(d_b);
    EXPECT_LT((b_matrix_trace_form(rho.reduced_b(), basis_b) - b_matrix_stokes_form(s, basis_b)).norm(), 1e-13);
    const auto report = b_matrix_infinitesimal(s, basis_b, Group::Special);
    EXPECT_EQ(static_cast<int>(report.indices.size()), d_b * d_b - 1);
    EXPECT_GT(report.sigma_min, 1e-3);
  }
}

TEST(Connection, SingularBThrows) {
  const auto rho = states::schmidt_state(1.0, 0.0);
  try {
    b_matrix_infinitesimal(states::density_to_stokes(rho), *algebra::shared_basis(2), Group::Unitary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularB);
  }
}

TEST(Connection, MatchesFiniteDifferenceOfTransportStep) {
  Rng rng(5);
  for (Group g : {Group::Unitary, Group::Special}) {
    for (int d_b : {2, 3}) {
      const auto rho = in_phase_state(rng, 2, d_b);
      const CMatrix x = Complex(0, 1) * rng.hermitian(2);
      const double eps = 1e-5;
      const CMatrix vp = transport_step(rho, algebra::exp_i_hermitian(Complex(0, -eps) * x), g).v;
      const CMatrix vm = transport_step(rho, algebra::exp_i_hermitian(Complex(0, eps) * x), g).v;
      const CMatrix fd = (vp - vm) / (2 * eps);
      const auto a = connection_one_form(states::density_to_stokes(rho), x, *algebra::shared_basis(2),
                                         *algebra::shared_basis(d_b), g);
      EXPECT_LT((a.a_hat - fd).norm(), 1e-6) << to_string(g) << " d_b=" << d_b;
      const CMatrix motion = connection_from_motion(rho, states::kron(x, CMatrix::Identity(d_b, d_b)), g);
      EXPECT_LT((motion - a.a_hat).norm(), 1e-12);
    }
  }
}

TEST(Connection, ConvergenceOrderOfIntegrators) {
  Rng rng(6);
  const auto rho = in_phase_state(rng, 2, 2);
  const SmoothPath loop = qubit_loop();
  const CMatrix reference = path_ordered_holonomy(rho, loop, 3200, Group::Special, Integrator::Midpoint).v;
  auto error = [&](int n, Integrator integrator) {
    return (path_ordered_holonomy(rho, loop, n, Group::Special, integrator).v - reference).norm();
  };
  const double m1 = error(50, Integrator::Midpoint);
  const double m2 = error(100, Integrator::Midpoint);
  const double f1 = error(100, Integrator::FirstOrder);
  const double f2 = error(200, Integrator::FirstOrder);
  EXPECT_NEAR(m1 / m2, 4.0, 0.5);
  EXPECT_NEAR(f1 / f2, 2.0, 0.3);
  // The discrete maximizer sequence converges to the same element.
  const double d1 = (holonomy_from_loop(rho, loop.discretize(100), Group::Special).v - reference).norm();
  const double d2 = (holonomy_from_loop(rho, loop.discretize(400), Group::Special).v - reference).norm();
  EXPECT_LT(d2, d1 / 2.5);
}

TEST(Connection, GaugeCovariance) {
  Rng rng(7);
  const auto rho = in_phase_state(rng, 2, 3);
  const CMatrix k = rng.hermitian(3);
  const GaugePath gauge = [&](double t) { return algebra::exp_i_hermitian(t * k); };
  const SmoothPath path(2, {{1, 0.7, {}, {0.3}}, {3, -0.4, {0.2}, {}}});
  const auto report = gauge_transform_check(rho, path, gauge, {0.15, 0.5, 0.85}, 1e-5, Group::Unitary);
  EXPECT_EQ(report.residuals.size(), 3u);
  EXPECT_LT(report.max_residual, 1e-6);
  EXPECT_LT(report.max_anti_hermiticity, 1e-12);
}
