#include "holonomy/interferometer.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "holonomy/random.hpp"

namespace holonomy::interferometer {

using algebra::GeneratorBasis;

const char* to_string(Status status) {
  switch (status) {
    case Status::UniqueMax: return "unique-max";
    case Status::Degenerate: return "degenerate";
    case Status::ZeroInterference: return "zero-interference";
  }
  return "unique-max";
}

namespace {

// Tr(A B) without forming the product.
Complex trace_product(const CMatrix& a, const CMatrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

void check_pair(const DensityMatrix& rho0, const CMatrix& u, const CMatrix& v) {
  algebra::require_square(u, rho0.d_a(), "unitary on A");
  algebra::require_square(v, rho0.d_b(), "unitary on B");
  algebra::require_unitary(u, kNumericTol, "unitary on A");
  algebra::require_unitary(v, kNumericTol, "unitary on B");
}

RVector restricted_gradient(const CMatrix& vw, const GeneratorBasis& basis,
                            const std::vector<int>& idx) {
  RVector g(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) {
    g(static_cast<Eigen::Index>(i)) = -0.5 * trace_product(basis.generator(idx[i]), vw).imag();
  }
  return g;
}

CMatrix project_to_group(const CMatrix& v, Group group) {
  if (group == Group::Orthogonal) {
    return algebra::nearest_unitary(CMatrix(v.real().cast<Complex>()));
  }
  CMatrix out = algebra::nearest_unitary(v);
  if (group == Group::Special) {
    const double phase = std::arg(out.determinant()) / static_cast<double>(out.rows());
    out *= std::exp(-kI * phase);
  }
  return out;
}

struct Ascent {
  CMatrix v;
  double value = 0.0;  // Re Tr(V W)
  int iterations = 0;
};

// Gradient ascent of Re Tr(V W) along V -> exp(i alpha G) V with G the
// gradient generator. Armijo backtracking from a Barzilai-Borwein trial step.
Ascent ascend(const CMatrix& w, CMatrix v, const GeneratorBasis& basis,
              const std::vector<int>& idx, Group group, const MaximizerOptions& options) {
  RVector prev_g;
  double prev_step = 0.0;
  double step = 1.0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const CMatrix vw = v * w;
    const RVector g = restricted_gradient(vw, basis, idx);
    if (g.cwiseAbs().maxCoeff() < options.gradient_tolerance) break;
    if (prev_g.size() > 0) {
      const RVector s = prev_step * prev_g;
      const RVector y = prev_g - g;
      const double sy = s.dot(y);
      step = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * prev_step;
      step = std::clamp(step, 1e-6, 1e6);
    }
    CMatrix h = CMatrix::Zero(v.rows(), v.cols());
    for (size_t i = 0; i < idx.size(); ++i) {
      h += g(static_cast<Eigen::Index>(i)) * basis.generator(idx[i]);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
    const CMatrix& q = eig.eigenvectors();
    const RVector& lam = eig.eigenvalues();
    const CVector c = (q.adjoint() * vw * q).diagonal();
    const double slope = g.squaredNorm();

    double alpha = step;
    bool accepted = false;
    while (alpha > 1e-20) {
      // 1/2 Re sum_k (e^{i alpha lam_k} - 1) c_k with e^{ix} - 1 = -2 sin^2(x/2) + i sin x.
      double delta = 0.0;
      for (Eigen::Index k = 0; k < lam.size(); ++k) {
        const double x = alpha * lam(k);
        const double sh = std::sin(0.5 * x);
        delta += 0.5 * (Complex(-2.0 * sh * sh, std::sin(x)) * c(k)).real();
      }
      if (delta >= 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    CVector phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(kI * (alpha * lam(k)));
    v = q * phases.asDiagonal() * q.adjoint() * v;
    if ((it + 1) % 32 == 0) v = project_to_group(v, group);
    prev_g = g;
    prev_step = alpha;
  }
  v = project_to_group(v, group);
  return {v, (v * w).trace().real(), it};
}

// Among the maximizers of Re Tr(V W) over U(D) pick the one that survives
// weak depolarizing noise on B: W -> (1-e) W + e (Tr W / D) 1.
CMatrix resolve_kernel(const CMatrix& w, const CMatrix& v, bool* rank_deficient) {
  const int dim = static_cast<int>(w.rows());
  Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sigma = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sigma(0));
  int rank = 0;
  while (rank < dim && sigma(rank) > cutoff) ++rank;
  *rank_deficient = rank < dim;
  if (rank == dim) return v;
  const CMatrix& x = svd.matrixU();
  const CMatrix& y = svd.matrixV();
  const int k = dim - rank;
  const CMatrix xr = x.leftCols(rank);
  const CMatrix xk = x.rightCols(k);
  const CMatrix yk = y.rightCols(k);
  const Complex tau = w.trace() / static_cast<double>(dim);
  CMatrix c = xk.adjoint() * yk;
  if (std::abs(tau) > 1e-12) c *= tau;
  Eigen::JacobiSVD<CMatrix> csvd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix z = csvd.matrixV() * csvd.matrixU().adjoint();
  const CMatrix out = v * xr * xr.adjoint() + yk * z * xk.adjoint();
  return algebra::nearest_unitary(out);
}

bool lexicographically_less(const CMatrix& a, const CMatrix& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex x = a.data()[i];
    const Complex y = b.data()[i];
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

MaximizationOutcome finish(const DensityMatrix& rho0, const CMatrix& u, CMatrix v, Group group,
                           Status status) {
  const auto& basis_b = *algebra::shared_basis(rho0.d_b());
  MaximizationOutcome out;
  out.group = group;
  out.status = status;
  out.coefficients = {rho0.d_b(), algebra::operator_coefficients(v, basis_b)};
  out.intensity = coincidence_intensity(rho0, u, v).value;
  out.v = std::move(v);
  return out;
}

bool is_schmidt_form(const DensityMatrix& rho0) {
  if (rho0.d_a() != 2 || rho0.d_b() != 2) return false;
  const CMatrix& m = rho0.matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool allowed = (i == 0 || i == 3) && (j == 0 || j == 3);
      if (!allowed && std::abs(m(i, j)) > kExactTol) return false;
    }
  const double a2 = m(0, 0).real();
  const double b2 = m(3, 3).real();
  const Complex ab = m(0, 3);
  return std::abs(ab.imag()) <= kExactTol && ab.real() >= -kExactTol &&
         std::abs(ab.real() - std::sqrt(std::max(a2, 0.0) * std::max(b2, 0.0))) <= 1e-10;
}

bool is_off_diagonal_qubit(const CMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) return false;
  const auto& basis = *algebra::shared_basis(2);
  const CVector c = algebra::operator_coefficients(u, basis);
  return std::abs(c(0)) <= kNumericTol && std::abs(c(3)) <= kNumericTol;
}

bool is_real(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() <= kExactTol; }

bool is_so2(const CMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !is_real(u)) return false;
  if (algebra::unitarity_residual(u) > kNumericTol) return false;
  return std::abs(u.determinant() - 1.0) <= kNumericTol;
}

}  // namespace

IntensityResult coincidence_intensity(const DensityMatrix& rho0, const CMatrix& u,
                                      const CMatrix& v) {
  check_pair(rho0, u, v);
  const CMatrix w = interference_operator(rho0, u);
  IntensityResult out;
  out.value = 0.5 + 0.5 * (v * w).trace().real();

  const auto& basis_a = *algebra::shared_basis(rho0.d_a());
  const auto& basis_b = *algebra::shared_basis(rho0.d_b());
  const StokesTensor s = states::density_to_stokes(rho0, basis_a, basis_b);
  const CVector uc = algebra::operator_coefficients(u, basis_a);
  const CVector vc = algebra::operator_coefficients(v, basis_b);
  double term = 0.0;
  for (int k = 0; k < basis_a.size(); ++k)
    for (int j = 0; j < basis_b.size(); ++j) term += (vc(j) * uc(k)).real() * s(k, j);
  out.interference_term = 0.5 * term;
  out.stokes_value = 0.5 + out.interference_term;
  assert(std::abs(out.value - out.stokes_value) < 1e-10);
  return out;
}

CMatrix interference_operator(const DensityMatrix& rho0, const CMatrix& u) {
  algebra::require_square(u, rho0.d_a(), "unitary on A");
  const int d_a = rho0.d_a();
  const int d_b = rho0.d_b();
  const CMatrix& m = rho0.matrix();
  CMatrix w = CMatrix::Zero(d_b, d_b);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_a; ++j) {
      if (u(i, j) == Complex(0.0)) continue;
      w += u(i, j) * m.block(j * d_b, i * d_b, d_b, d_b);
    }
  return w;
}

double tangent_gradient_norm(const DensityMatrix& rho0, const CMatrix& u, const CMatrix& v,
                             Group group) {
  check_pair(rho0, u, v);
  const auto& basis_b = *algebra::shared_basis(rho0.d_b());
  const CMatrix vw = v * interference_operator(rho0, u);
  return restricted_gradient(vw, basis_b, basis_b.indices(group)).cwiseAbs().maxCoeff();
}

CMatrix b_matrix(double lambda, const RVector& mu, const GeneratorBasis& basis_b) {
  const int n = basis_b.size();
  if (mu.size() != n - 1) {
    throw Error(ErrorCode::DimensionMismatch, "mu must have D_B^2 - 1 components");
  }
  const double dim = basis_b.dimension();
  CMatrix b = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) b(k, k) = lambda * (k == 0 ? 1.0 : 2.0 / dim);
  for (int j = 1; j < n; ++j) {
    const double m = mu(j - 1);
    b(j, 0) += m;
    b(0, j) += m;
    for (int k = 1; k < n; ++k)
      for (int l = 1; l < n; ++l) b(k, l) += m * Complex(basis_b.d(l, k, j), basis_b.f(l, k, j));
  }
  return b;
}

QubitBMatrix b_matrix_qubit(double lambda, const Eigen::Vector3d& mu) {
  const double gap = mu.squaredNorm() - lambda * lambda;
  if (std::abs(gap) <= kExactTol * std::max(1.0, lambda * lambda)) {
    throw Error(ErrorCode::SingularB, "B is singular: lambda^2 = mu.mu");
  }
  const auto& basis = *algebra::shared_basis(2);
  const CMatrix b = b_matrix(lambda, RVector(mu), basis);
  const CMatrix h = b - lambda * CMatrix::Identity(4, 4);
  const double h2 = (h * h - mu.squaredNorm() * CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff();
  if (h2 > kExactTol * std::max(1.0, mu.squaredNorm())) {
    throw Error(ErrorCode::InternalConsistency, "B - lambda 1 does not square to |mu|^2 1");
  }
  // (lambda + H)(-lambda + H) = (mu.mu - lambda^2) 1.
  const CMatrix inverse = (h - lambda * CMatrix::Identity(4, 4)) / gap;
  return {b, inverse};
}

CVector formal_solution(const CMatrix& b_inverse, const StokesTensor& s, const CVector& u) {
  if (u.size() != s.matrix().rows() || b_inverse.rows() != s.matrix().cols()) {
    throw Error(ErrorCode::DimensionMismatch, "formal_solution: incompatible shapes");
  }
  const CVector rhs = s.matrix().transpose().cast<Complex>() * u.conjugate();
  return b_inverse * rhs;
}

namespace {

CMatrix lagrange_operator(const CVector& v, const GeneratorBasis& basis_b) {
  const int n = basis_b.size();
  const double dim = basis_b.dimension();
  CMatrix a = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) a(k, 0) = (k == 0 ? 1.0 : 2.0 / dim) * v(k);
  for (int l = 1; l < n; ++l) {
    a(l, l) += v(0);
    a(0, l) += v(l);
    for (int k = 0; k < n; ++k)
      for (int j = 1; j < n; ++j) a(k, l) += v(j) * Complex(basis_b.d(j, k, l), basis_b.f(j, k, l));
  }
  return a;
}

CVector lagrange_rhs(const StokesTensor& s, const CVector& u) {
  return s.matrix().transpose().cast<Complex>() * u.conjugate();
}

void check_lagrange_shapes(const StokesTensor& s, const CVector& u, const CVector& v,
                           const GeneratorBasis& basis_b) {
  if (u.size() != s.matrix().rows() || v.size() != s.matrix().cols() ||
      basis_b.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "Lagrange system: incompatible shapes");
  }
}

}  // namespace

LagrangeFit lagrange_fit(const StokesTensor& s, const CVector& u, const CVector& v,
                         const GeneratorBasis& basis_b) {
  check_lagrange_shapes(s, u, v, basis_b);
  const CMatrix a = lagrange_operator(v, basis_b);
  const CVector r = lagrange_rhs(s, u);
  const Eigen::Index n = a.rows();
  RMatrix stacked(2 * n, n);
  stacked << a.real(), a.imag();
  RVector target(2 * n);
  target << r.real(), r.imag();
  const RVector x = stacked.colPivHouseholderQr().solve(target);
  LagrangeFit fit;
  fit.lambda = x(0);
  fit.mu = x.tail(n - 1);
  fit.residual = (a * x.cast<Complex>() - r).cwiseAbs().maxCoeff();
  return fit;
}

double lagrange_residual(const StokesTensor& s, const CVector& u, const CVector& v, double lambda,
                         const RVector& mu, const GeneratorBasis& basis_b) {
  check_lagrange_shapes(s, u, v, basis_b);
  if (mu.size() != v.size() - 1) {
    throw Error(ErrorCode::DimensionMismatch, "mu must have D_B^2 - 1 components");
  }
  RVector x(v.size());
  x << lambda, mu;
  return (lagrange_operator(v, basis_b) * x.cast<Complex>() - lagrange_rhs(s, u))
      .cwiseAbs()
      .maxCoeff();
}

MaximizationOutcome maximize_general(const DensityMatrix& rho0, const CMatrix& u, Group group,
                                     const MaximizerOptions& options) {
  algebra::require_square(u, rho0.d_a(), "unitary on A");
  algebra::require_unitary(u, kNumericTol, "maximize_general");
  const auto& basis_a = *algebra::shared_basis(rho0.d_a());
  const auto& basis_b = *algebra::shared_basis(rho0.d_b());
  const int d_b = rho0.d_b();
  const CMatrix w = interference_operator(rho0, u);
  const std::vector<int> idx = basis_b.indices(group);

  // Tr(chi_j W) = sum_k U_k S_kj; all vanish iff W = 0.
  if (w.cwiseAbs().maxCoeff() <= kExactTol) {
    return finish(rho0, u, CMatrix::Identity(d_b, d_b), group, Status::ZeroInterference);
  }

  Rng rng(options.seed);
  std::vector<Ascent> runs;
  const int restarts = std::max(1, options.restarts);
  bool rank_deficient = false;
  int iterations = 0;
  for (int r = 0; r < restarts; ++r) {
    const CMatrix start = r == 0 ? CMatrix::Identity(d_b, d_b) : rng.group_element(group, d_b);
    Ascent run = ascend(w, start, basis_b, idx, group, options);
    iterations += run.iterations;
    if (group == Group::Unitary) {
      run.v = resolve_kernel(w, run.v, &rank_deficient);
      run.value = (run.v * w).trace().real();
    }
    runs.push_back(std::move(run));
  }
  std::sort(runs.begin(), runs.end(), [](const Ascent& a, const Ascent& b) {
    if (a.value != b.value) return a.value > b.value;
    return lexicographically_less(a.v, b.v);
  });
  const Ascent& best = runs.front();

  bool degenerate = rank_deficient;
  double largest = std::abs(best.value);
  for (size_t i = 1; i < runs.size(); ++i) {
    largest = std::max(largest, std::abs(runs[i].value));
    if (best.value - runs[i].value <= 1e-9 && (runs[i].v - best.v).norm() > 1e-6) {
      degenerate = true;
    }
  }

  Rng cert_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  bool certified = true;
  for (int i = 0; i < options.certificate_samples; ++i) {
    const double value = (cert_rng.group_element(group, d_b) * w).trace().real();
    largest = std::max(largest, std::abs(value));
    if (value > best.value + 1e-12) certified = false;
  }
  if (largest <= kExactTol) {
    return finish(rho0, u, CMatrix::Identity(d_b, d_b), group, Status::ZeroInterference);
  }

  MaximizationOutcome out =
      finish(rho0, u, best.v, group, degenerate ? Status::Degenerate : Status::UniqueMax);
  out.certified = certified;
  out.iterations = iterations;
  if (group == Group::Unitary) {
    const StokesTensor s = states::density_to_stokes(rho0, basis_a, basis_b);
    const LagrangeFit fit = lagrange_fit(s, algebra::operator_coefficients(u, basis_a),
                                         out.coefficients.values, basis_b);
    out.lagrange_lambda = fit.lambda;
    out.lagrange_mu = fit.mu;
    out.residual = fit.residual;
  } else {
    out.residual = tangent_gradient_norm(rho0, u, out.v, group);
    out.lagrange_lambda = 2.0 * (out.intensity - 0.5);
  }
  return out;
}

MaximizationOutcome maximize_qudit_qubit_special(const DensityMatrix& rho0, const CMatrix& u) {
  if (!is_schmidt_form(rho0)) {
    throw Error(ErrorCode::Precondition, "state must be a|00> + b|11> with a, b >= 0");
  }
  algebra::require_square(u, 2, "unitary on A");
  algebra::require_unitary(u, kNumericTol, "maximize_qudit_qubit_special");
  if (!is_off_diagonal_qubit(u)) {
    throw Error(ErrorCode::Precondition, "U must be U_1 sigma_1 + U_2 sigma_2");
  }
  const auto& basis = *algebra::shared_basis(2);
  const CVector uc = algebra::operator_coefficients(u, basis);
  const CMatrix v = std::conj(uc(1)) * basis.generator(1) - std::conj(uc(2)) * basis.generator(2);
  const double c = 2.0 * std::abs(rho0.matrix()(0, 3));

  MaximizationOutcome out = finish(rho0, u, v, Group::Unitary, Status::UniqueMax);
  out.lagrange_lambda = c;
  out.lagrange_mu = RVector::Zero(3);
  const StokesTensor s = states::density_to_stokes(rho0, basis, basis);
  out.residual = lagrange_residual(s, uc, out.coefficients.values, c, out.lagrange_mu, basis);
  if (c <= kExactTol) {
    out.status = Status::ZeroInterference;
    out.v = CMatrix::Identity(2, 2);
    out.coefficients = {2, algebra::operator_coefficients(out.v, basis)};
    out.intensity = coincidence_intensity(rho0, u, out.v).value;
  }
  return out;
}

MaximizationOutcome maximize_su2(const DensityMatrix& rho0, const CMatrix& u) {
  if (rho0.d_b() != 2) {
    throw Error(ErrorCode::Precondition, "maximize_su2 needs D_B = 2");
  }
  algebra::require_square(u, rho0.d_a(), "unitary on A");
  algebra::require_unitary(u, kNumericTol, "maximize_su2");
  const auto& basis = *algebra::shared_basis(2);
  const CMatrix w = interference_operator(rho0, u);
  // Re Tr(V W) = V_0 g_0 + sum_k V_k g_k for V = V_0 1 + i sum V_k sigma_k.
  Eigen::Vector4d g;
  g(0) = w.trace().real();
  for (int k = 1; k < 4; ++k) g(k) = -trace_product(basis.generator(k), w).imag();
  const double lambda = g.norm();
  if (lambda <= kExactTol) {
    return finish(rho0, u, CMatrix::Identity(2, 2), Group::Special, Status::ZeroInterference);
  }
  const Eigen::Vector4d vc = g / lambda;
  CMatrix v = vc(0) * basis.generator(0);
  for (int k = 1; k < 4; ++k) v += kI * vc(k) * basis.generator(k);
  MaximizationOutcome out = finish(rho0, u, v, Group::Special, Status::UniqueMax);
  out.lagrange_lambda = lambda;
  out.residual = tangent_gradient_norm(rho0, u, out.v, Group::Special);
  return out;
}

MaximizationOutcome maximize_so2_rebit(const DensityMatrix& rho0, const CMatrix& u) {
  if (rho0.d_a() != 2 || rho0.d_b() != 2) {
    throw Error(ErrorCode::Precondition, "maximize_so2_rebit needs a two-rebit state");
  }
  if (!is_real(rho0.matrix())) {
    throw Error(ErrorCode::Precondition, "rebit state must be real in the computational basis");
  }
  if (!is_so2(u)) {
    throw Error(ErrorCode::Precondition, "U must be a real rotation in SO(2)");
  }
  const auto& basis = *algebra::shared_basis(2);
  const double u0 = 0.5 * u.trace().real();
  // U = U_0 1 + i U_2 sigma_2 with real U_2.
  const double u2 = (trace_product(u, basis.generator(2)) / (2.0 * kI)).real();
  const double c_r = states::rebit_concurrence(rho0);
  const double lambda = std::hypot(u0, c_r * u2);
  if (lambda <= kExactTol) {
    return finish(rho0, u, CMatrix::Identity(2, 2), Group::Orthogonal, Status::ZeroInterference);
  }
  const CMatrix v = (u0 * basis.generator(0) - kI * (c_r * u2) * basis.generator(2)) / lambda;
  MaximizationOutcome out =
      finish(rho0, u, CMatrix(v.real().cast<Complex>()), Group::Orthogonal, Status::UniqueMax);
  out.lagrange_lambda = lambda;
  out.residual = tangent_gradient_norm(rho0, u, out.v, Group::Orthogonal);
  return out;
}

MaximizationOutcome maximize(const DensityMatrix& rho0, const CMatrix& u, Group group,
                             const MaximizerOptions& options) {
  switch (group) {
    case Group::Special:
      if (rho0.d_b() == 2) return maximize_su2(rho0, u);
      break;
    case Group::Orthogonal:
      if (rho0.d_a() == 2 && rho0.d_b() == 2 && is_real(rho0.matrix()) && is_so2(u)) {
        return maximize_so2_rebit(rho0, u);
      }
      break;
    case Group::Unitary:
      if (is_schmidt_form(rho0) && is_off_diagonal_qubit(u) &&
          algebra::unitarity_residual(u) <= kNumericTol) {
        return maximize_qudit_qubit_special(rho0, u);
      }
      break;
  }
  return maximize_general(rho0, u, group, options);
}

}  // namespace holonomy::interferometer
