#include "holonomy/random.hpp"

#include <cmath>

namespace holonomy {

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

double Rng::normal() { return normal_(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

CMatrix Rng::haar_unitary(int dim) {
  CMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const Complex diag = rmat(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

CMatrix Rng::special_unitary(int dim) {
  CMatrix u = haar_unitary(dim);
  const Complex det = u.determinant();
  return u * std::pow(det, -1.0 / dim);
}

CMatrix Rng::special_orthogonal(int dim) {
  RMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = normal();
  Eigen::HouseholderQR<RMatrix> qr(g);
  RMatrix q = qr.householderQ();
  const RMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    if (rmat(c, c) < 0.0) q.col(c) *= -1.0;
  }
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q.cast<Complex>();
}

CMatrix Rng::group_element(Group group, int dim) {
  switch (group) {
    case Group::Unitary: return haar_unitary(dim);
    case Group::Special: return special_unitary(dim);
    case Group::Orthogonal: return special_orthogonal(dim);
  }
  return haar_unitary(dim);
}

CMatrix Rng::hermitian(int dim) {
  CMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = complex_normal();
  return 0.5 * (g + g.adjoint());
}

CVector Rng::pure_vector(int dim) {
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_normal();
  return v / v.norm();
}

CMatrix Rng::pure_density(int d_a, int d_b) {
  const CVector v = pure_vector(d_a * d_b);
  return v * v.adjoint();
}

CMatrix Rng::mixed_density(int d_a, int d_b) {
  const int dim = d_a * d_b;
  CMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = complex_normal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

CMatrix Rng::product_density(int d_a, int d_b) {
  const CMatrix a = mixed_density(d_a, 1);
  const CMatrix b = mixed_density(d_b, 1);
  CMatrix out(d_a * d_b, d_a * d_b);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_a; ++j) out.block(i * d_b, j * d_b, d_b, d_b) = a(i, j) * b;
  return out;
}

CMatrix Rng::rebit_density() {
  RMatrix g(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = normal();
  RMatrix rho = g * g.transpose();
  rho /= rho.trace();
  return rho.cast<Complex>();
}

}  // namespace holonomy
