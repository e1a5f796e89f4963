#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "holonomy/algebra.hpp"
#include "holonomy/random.hpp"

using namespace holonomy;
using namespace holonomy::algebra;

namespace {

Complex trace_product(const CMatrix& a, const CMatrix& b) { return (a * b).trace(); }

}  // namespace

class BasisTest : public ::testing::TestWithParam<int> {};

TEST_P(BasisTest, TraceOrthogonality) {
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  ASSERT_EQ(basis.size(), dim * dim);
  for (int j = 0; j < basis.size(); ++j) {
    EXPECT_LT((basis.generator(j) - basis.generator(j).adjoint()).norm(), 1e-15);
    for (int k = 0; k < basis.size(); ++k) {
      const double expected = j == k ? basis.normalization(j) : 0.0;
      EXPECT_NEAR(std::abs(trace_product(basis.generator(j), basis.generator(k)) - expected), 0.0, 1e-13);
    }
  }
}

TEST_P(BasisTest, StructureConstantsReproduceProducts) {
  // chi_j chi_k = (2/D) delta_jk 1 + sum_l (d_jkl + i f_jkl) chi_l for traceless j, k.
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  for (int j = 1; j < basis.size(); ++j) {
    for (int k = 1; k < basis.size(); ++k) {
      CMatrix rhs = CMatrix::Zero(dim, dim);
      if (j == k) rhs += (2.0 / dim) * CMatrix::Identity(dim, dim);
      for (int l = 1; l < basis.size(); ++l) {
        rhs += Complex(basis.d(j, k, l), basis.f(j, k, l)) * basis.generator(l);
      }
      EXPECT_LT((basis.generator(j) * basis.generator(k) - rhs).norm(), 1e-13) << j << "," << k;
    }
  }
}

TEST_P(BasisTest, SymmetryOfStructureConstants) {
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  const int n = basis.size();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        EXPECT_NEAR(basis.f(j, k, l), -basis.f(k, j, l), 1e-14);
        EXPECT_NEAR(basis.f(j, k, l), basis.f(k, l, j), 1e-14);
        EXPECT_NEAR(basis.d(j, k, l), basis.d(k, j, l), 1e-14);
        EXPECT_NEAR(basis.d(j, k, l), basis.d(l, k, j), 1e-14);
      }
}

TEST_P(BasisTest, UnitaryCoefficientConstraints) {
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  Rng rng(101 + dim);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = rng.haar_unitary(dim);
    const auto c = expand_unitary(u, basis);
    EXPECT_LT((reconstruct(c, basis) - u).norm(), 1e-13);
    EXPECT_LT(std::abs(norm_constraint_residual(c.values, basis)), 1e-13);
    EXPECT_LT(product_constraint_residual(c.values, basis), 1e-13);
  }
}

TEST_P(BasisTest, NonUnitaryViolatesConstraints) {
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  CMatrix m = CMatrix::Identity(dim, dim);
  m(0, 0) = 1.5;
  const CVector c = operator_coefficients(m, basis);
  EXPECT_GT(std::abs(norm_constraint_residual(c, basis)) + product_constraint_residual(c, basis), 0.1);
}

TEST_P(BasisTest, AdjointRotationIsOrthogonal) {
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  Rng rng(7 * dim);
  const CMatrix u = rng.haar_unitary(dim);
  const RMatrix r = adjoint_rotation(u, basis);
  EXPECT_LT((r.transpose() * r - RMatrix::Identity(r.rows(), r.cols())).norm(), 1e-12);
  EXPECT_NEAR(r(0, 0), 1.0, 1e-13);
}

TEST_P(BasisTest, GroupIndexSets) {
  const int dim = GetParam();
  const auto& basis = *shared_basis(dim);
  EXPECT_EQ(static_cast<int>(basis.indices(Group::Unitary).size()), dim * dim);
  EXPECT_EQ(static_cast<int>(basis.indices(Group::Special).size()), dim * dim - 1);
  const auto so = basis.indices(Group::Orthogonal);
  EXPECT_EQ(static_cast<int>(so.size()), dim * (dim - 1) / 2);
  for (int j : so) {
    EXPECT_TRUE(basis.is_antisymmetric(j));
    EXPECT_LT(basis.generator(j).real().norm(), 1e-15);
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, BasisTest, ::testing::Values(2, 3, 4));

TEST(Algebra, PauliOrdering) {
  const auto& basis = *shared_basis(2);
  CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, Complex(0, -1), Complex(0, 1), 0;
  s3 << 1, 0, 0, -1;
  EXPECT_LT((basis.generator(1) - s1).norm(), 1e-15);
  EXPECT_LT((basis.generator(2) - s2).norm(), 1e-15);
  EXPECT_LT((basis.generator(3) - s3).norm(), 1e-15);
  EXPECT_NEAR(basis.f(1, 2, 3), 1.0, 1e-15);
}

TEST(Algebra, ExponentialMatchesHermitianRoundTrip) {
  Rng rng(3);
  const auto& basis = *shared_basis(3);
  const CMatrix h = rng.hermitian(3);
  const RVector theta = hermitian_coefficients(h, basis);
  EXPECT_LT((hermitian_from(theta, basis) - h).norm(), 1e-13);
  const CMatrix u = exp_generators(theta, basis);
  EXPECT_LT(unitarity_residual(u), 1e-13);
  EXPECT_LT((u - exp_i_hermitian(h)).norm(), 1e-13);
  // exp(iH) commutes with H.
  EXPECT_LT(commutator_norm(u, h), 1e-12);
}

TEST(Algebra, NearestUnitaryMatchesSvdPolarFactor) {
  Rng rng(5);
  for (int dim : {2, 3, 5}) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix polar = svd.matrixU() * svd.matrixV().adjoint();
    EXPECT_LT((nearest_unitary(m) - polar).norm(), 1e-12);
  }
}

TEST(Algebra, PhaseIdentityDistance) {
  const CMatrix one = CMatrix::Identity(3, 3);
  EXPECT_NEAR(phase_identity_distance(std::polar(1.0, 0.7) * one), 0.0, 1e-14);
  CMatrix d = one;
  d(2, 2) = -1.0;
  // min_phi ||diag(1,1,-1) - e^{i phi}||^2 = 6 - 2|Tr| = 4.
  EXPECT_NEAR(phase_identity_distance(d), 2.0, 1e-12);
}

TEST(Algebra, RequireUnitaryThrows) {
  CMatrix m = CMatrix::Identity(2, 2) * 1.01;
  try {
    require_unitary(m, 1e-10, "u");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConstraintViolation);
  }
  EXPECT_THROW(require_square(CMatrix::Identity(2, 2), 3, "u"), Error);
}
