#include "holonomy/transport.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace holonomy::transport {

using algebra::GeneratorBasis;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMatrix identity(int dim) { return CMatrix::Identity(dim, dim); }

double anti_hermiticity(const CMatrix& a) { return (a + a.adjoint()).norm(); }

CMatrix anti_hermitian_part(const CMatrix& a) { return 0.5 * (a - a.adjoint()); }

// Solves the restricted B system for x and returns i sum phi_m chi_m.
CMatrix assemble_connection(const RVector& x, const BMatrixReport& b,
                            const GeneratorBasis& basis_b) {
  const RVector phi = b.restricted.ldlt().solve(x);
  CMatrix a = CMatrix::Zero(basis_b.dimension(), basis_b.dimension());
  for (size_t i = 0; i < b.indices.size(); ++i) {
    a += kI * phi(static_cast<Eigen::Index>(i)) * basis_b.generator(b.indices[i]);
  }
  return anti_hermitian_part(a);
}

BMatrixReport restrict_b(RMatrix full, Group group, const GeneratorBasis& basis_b) {
  BMatrixReport out;
  out.indices = basis_b.indices(group);
  const auto n = static_cast<Eigen::Index>(out.indices.size());
  out.restricted.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.restricted(i, j) = full(out.indices[i], out.indices[j]);
  out.full = std::move(full);
  Eigen::JacobiSVD<RMatrix> svd(out.restricted);
  out.sigma_min = svd.singularValues()(n - 1);
  if (out.sigma_min < 1e-10) {
    std::ostringstream msg;
    msg << "B matrix is singular (sigma_min = " << out.sigma_min << ")";
    throw Error(ErrorCode::SingularB, msg.str());
  }
  return out;
}

}  // namespace

SmoothPath::SmoothPath(int dimension, std::vector<FourierComponent> components)
    : dimension_(dimension), components_(std::move(components)) {
  const int n = algebra::shared_basis(dimension)->size();
  for (const auto& c : components_) {
    if (c.generator < 0 || c.generator >= n) {
      throw Error(ErrorCode::OutOfRange,
                  "path generator index " + std::to_string(c.generator) + " out of range");
    }
  }
}

RVector SmoothPath::theta(double t) const {
  RVector th = RVector::Zero(algebra::shared_basis(dimension_)->size());
  for (const auto& c : components_) {
    double value = c.slope * t;
    for (size_t m = 0; m < c.cosine.size(); ++m) {
      value += c.cosine[m] * (std::cos(kTwoPi * (m + 1) * t) - 1.0);
    }
    for (size_t m = 0; m < c.sine.size(); ++m) value += c.sine[m] * std::sin(kTwoPi * (m + 1) * t);
    th(c.generator) += value;
  }
  return th;
}

RVector SmoothPath::theta_dot(double t) const {
  RVector th = RVector::Zero(algebra::shared_basis(dimension_)->size());
  for (const auto& c : components_) {
    double value = c.slope;
    for (size_t m = 0; m < c.cosine.size(); ++m) {
      const double w = kTwoPi * (m + 1);
      value -= c.cosine[m] * w * std::sin(w * t);
    }
    for (size_t m = 0; m < c.sine.size(); ++m) {
      const double w = kTwoPi * (m + 1);
      value += c.sine[m] * w * std::cos(w * t);
    }
    th(c.generator) += value;
  }
  return th;
}

CMatrix SmoothPath::unitary(double t) const {
  return algebra::exp_generators(theta(t), *algebra::shared_basis(dimension_));
}

CMatrix SmoothPath::generator(double t) const {
  const auto& basis = *algebra::shared_basis(dimension_);
  const int d = dimension_;
  // exp([[X, X'], [0, X]]) carries d/dt exp(X) in its upper-right block.
  CMatrix block = CMatrix::Zero(2 * d, 2 * d);
  const CMatrix x = kI * algebra::hermitian_from(theta(t), basis);
  block.topLeftCorner(d, d) = x;
  block.bottomRightCorner(d, d) = x;
  block.topRightCorner(d, d) = kI * algebra::hermitian_from(theta_dot(t), basis);
  const CMatrix e = block.exp();
  const CMatrix du = e.topRightCorner(d, d);
  const CMatrix u = e.topLeftCorner(d, d);
  return anti_hermitian_part(du * u.adjoint());
}

std::vector<CMatrix> SmoothPath::discretize(int n_steps) const {
  if (n_steps < 1) throw Error(ErrorCode::OutOfRange, "n_steps must be positive");
  std::vector<CMatrix> steps;
  steps.reserve(static_cast<size_t>(n_steps));
  CMatrix prev = unitary(0.0);
  for (int k = 1; k <= n_steps; ++k) {
    const CMatrix next = unitary(static_cast<double>(k) / n_steps);
    steps.push_back(next * prev.adjoint());
    prev = next;
  }
  return steps;
}

double SmoothPath::closure_residual() const {
  return (unitary(1.0) - identity(dimension_)).norm();
}

StepResult transport_step(const DensityMatrix& state, const CMatrix& u, Group group,
                          const MaximizerOptions& options) {
  const auto outcome = interferometer::maximize(state, u, group, options);
  return {outcome.v, states::apply_local(state, u, outcome.v), outcome.intensity, outcome.status};
}

TransportRecord transport_sequence(const DensityMatrix& rho0, const DiscretePath& path,
                                   Group group, const MaximizerOptions& options) {
  if (path.empty()) throw Error(ErrorCode::Precondition, "transport path is empty");
  TransportRecord record{rho0, group, {}, identity(rho0.d_a()), identity(rho0.d_b()), 0.0, 0.0};
  DensityMatrix state = rho0;
  for (const CMatrix& u : path) {
    algebra::require_square(u, rho0.d_a(), "path step");
    algebra::require_unitary(u, kNumericTol, "path step");
    StepResult step = transport_step(state, u, group, options);
    record.cumulative_u = u * record.cumulative_u;
    record.cumulative_v = step.v * record.cumulative_v;
    record.steps.push_back({u, step.v, step.intensity, step.status, step.next_state});
    state = std::move(step.next_state);
  }
  for (size_t n = 0; n < record.steps.size(); ++n) {
    record.intensity_consistency = std::max(
        record.intensity_consistency,
        std::abs(cumulative_intensity(record, n) - record.steps[n].intensity));
  }
  record.closure_residual = (record.cumulative_u - identity(rho0.d_a())).norm();
  return record;
}

double cumulative_intensity(const TransportRecord& record, size_t n) {
  if (n >= record.steps.size()) throw Error(ErrorCode::OutOfRange, "step index out of range");
  CMatrix cu = identity(record.initial.d_a());
  CMatrix cv = identity(record.initial.d_b());
  for (size_t k = 0; k < n; ++k) {
    cu = record.steps[k].u * cu;
    cv = record.steps[k].v * cv;
  }
  const CMatrix w = states::kron(cu, cv);
  const CMatrix step = states::kron(record.steps[n].u, record.steps[n].v);
  const CMatrix rho = w * record.initial.matrix() * w.adjoint();
  return 0.5 + 0.5 * (step * rho).trace().real();
}

double closure_residual(const DiscretePath& path, int dimension) {
  CMatrix total = identity(dimension);
  for (const CMatrix& u : path) {
    algebra::require_square(u, dimension, "path step");
    total = u * total;
  }
  return (total - identity(dimension)).norm();
}

HolonomyElement holonomy_from_loop(const DensityMatrix& rho0, const DiscretePath& path,
                                   Group group, double closure_tol,
                                   const MaximizerOptions& options) {
  const double residual = closure_residual(path, rho0.d_a());
  if (!(residual <= closure_tol)) {
    std::ostringstream msg;
    msg << "loop does not close: ||U(n) - 1|| = " << residual << " > " << closure_tol;
    throw Error(ErrorCode::OpenLoop, msg.str());
  }
  const TransportRecord record = transport_sequence(rho0, path, group, options);
  return {record.cumulative_v, residual};
}

RMatrix b_matrix_trace_form(const CMatrix& rho_b, const GeneratorBasis& basis_b) {
  algebra::require_square(rho_b, basis_b.dimension(), "reduced state of B");
  const int n = basis_b.size();
  RMatrix b(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      b(j, k) = (basis_b.generator(j) * basis_b.generator(k) * rho_b).trace().real();
  return b;
}

RMatrix b_matrix_stokes_form(const StokesTensor& s, const GeneratorBasis& basis_b) {
  if (s.d_b() != basis_b.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "basis does not match the Stokes tensor");
  }
  const int n = basis_b.size();
  const double dim = basis_b.dimension();
  RMatrix b = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) b(j, j) = 2.0 / dim;
  b(0, 0) = 1.0;
  for (int l = 1; l < n; ++l) {
    const double s0l = s(0, l);
    b(0, l) += s0l;
    b(l, 0) += s0l;
    for (int j = 1; j < n; ++j)
      for (int k = 1; k < n; ++k) b(j, k) += s0l * basis_b.d(j, k, l);
  }
  return b;
}

BMatrixReport b_matrix_infinitesimal(const StokesTensor& s, const GeneratorBasis& basis_b,
                                     Group group) {
  RMatrix stokes_form = b_matrix_stokes_form(s, basis_b);
  CMatrix rho_b = CMatrix::Zero(basis_b.dimension(), basis_b.dimension());
  for (int k = 0; k < basis_b.size(); ++k) {
    rho_b += (s(0, k) / basis_b.normalization(k)) * basis_b.generator(k);
  }
  const double gap = (b_matrix_trace_form(rho_b, basis_b) - stokes_form).cwiseAbs().maxCoeff();
  if (gap > kExactTol) {
    std::ostringstream msg;
    msg << "B matrix trace and Stokes forms disagree by " << gap;
    throw Error(ErrorCode::InternalConsistency, msg.str());
  }
  return restrict_b(std::move(stokes_form), group, basis_b);
}

ConnectionSample connection_one_form(const StokesTensor& s, const CMatrix& duu_dagger,
                                     const GeneratorBasis& basis_a, const GeneratorBasis& basis_b,
                                     Group group, double t) {
  if (s.d_a() != basis_a.dimension() || s.d_b() != basis_b.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "bases do not match the Stokes tensor");
  }
  algebra::require_square(duu_dagger, basis_a.dimension(), "dU U^dagger");
  if (anti_hermiticity(duu_dagger) > kNumericTol) {
    throw Error(ErrorCode::ConstraintViolation, "dU U^dagger must be anti-Hermitian");
  }
  const BMatrixReport b = b_matrix_infinitesimal(s, basis_b, group);
  // dU U^dagger = i sum a_k chi_k.
  const RVector a = algebra::hermitian_coefficients(CMatrix(-kI * duu_dagger), basis_a);
  RVector x(static_cast<Eigen::Index>(b.indices.size()));
  for (size_t i = 0; i < b.indices.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < basis_a.size(); ++k) acc -= a(k) * s(k, b.indices[i]);
    x(static_cast<Eigen::Index>(i)) = acc;
  }
  return {t, assemble_connection(x, b, basis_b)};
}

CMatrix connection_from_motion(const DensityMatrix& rho, const CMatrix& omega, Group group) {
  const int dim = rho.d_a() * rho.d_b();
  algebra::require_square(omega, dim, "local motion generator");
  const auto& basis_b = *algebra::shared_basis(rho.d_b());
  const BMatrixReport b =
      restrict_b(b_matrix_trace_form(rho.reduced_b(), basis_b), group, basis_b);
  const CMatrix omega_rho = omega * rho.matrix();
  const CMatrix id_a = identity(rho.d_a());
  RVector x(static_cast<Eigen::Index>(b.indices.size()));
  for (size_t i = 0; i < b.indices.size(); ++i) {
    const CMatrix probe = states::kron(id_a, kI * basis_b.generator(b.indices[i]));
    x(static_cast<Eigen::Index>(i)) = (probe * omega_rho).trace().real();
  }
  return assemble_connection(x, b, basis_b);
}

namespace {

CMatrix connection_at(const DensityMatrix& rho0, const SmoothPath& path, const CMatrix& v,
                      double t, Group group) {
  const auto& basis_a = *algebra::shared_basis(rho0.d_a());
  const auto& basis_b = *algebra::shared_basis(rho0.d_b());
  const DensityMatrix rho = states::apply_local(rho0, path.unitary(t), v);
  try {
    return connection_one_form(states::density_to_stokes(rho, basis_a, basis_b),
                               path.generator(t), basis_a, basis_b, group, t)
        .a_hat;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularB) throw;
    std::ostringstream msg;
    msg << e.what() << " at t = " << t;
    throw Error(ErrorCode::SingularB, msg.str());
  }
}

CMatrix propagate(const CMatrix& a_hat, double dt) {
  // exp(A dt) with A = i H.
  return algebra::exp_i_hermitian(CMatrix(-kI * a_hat * dt));
}

}  // namespace

HolonomyElement path_ordered_holonomy(const DensityMatrix& rho0, const SmoothPath& path,
                                      int n_steps, Group group, Integrator integrator,
                                      double closure_tol) {
  if (path.dimension() != rho0.d_a()) {
    throw Error(ErrorCode::DimensionMismatch, "path dimension does not match subsystem A");
  }
  if (n_steps < 1) throw Error(ErrorCode::OutOfRange, "n_steps must be positive");
  const double residual = path.closure_residual();
  if (!(residual <= closure_tol)) {
    std::ostringstream msg;
    msg << "path does not close: ||U(1) - 1|| = " << residual << " > " << closure_tol;
    throw Error(ErrorCode::OpenLoop, msg.str());
  }
  const double dt = 1.0 / n_steps;
  CMatrix v = identity(rho0.d_b());
  for (int i = 0; i < n_steps; ++i) {
    const double t = i * dt;
    const CMatrix a0 = connection_at(rho0, path, v, t, group);
    if (integrator == Integrator::FirstOrder) {
      v = propagate(a0, dt) * v;
    } else {
      const CMatrix half = propagate(a0, 0.5 * dt) * v;
      v = propagate(connection_at(rho0, path, half, t + 0.5 * dt, group), dt) * v;
    }
    if ((i + 1) % 256 == 0) v = algebra::nearest_unitary(v);
  }
  return {algebra::nearest_unitary(v), residual};
}

GaugeReport gauge_transform_check(const DensityMatrix& rho0, const SmoothPath& path,
                                  const GaugePath& gauge, const std::vector<double>& times,
                                  double h, Group group) {
  if (path.dimension() != rho0.d_a()) {
    throw Error(ErrorCode::DimensionMismatch, "path dimension does not match subsystem A");
  }
  const auto& basis_a = *algebra::shared_basis(rho0.d_a());
  const auto& basis_b = *algebra::shared_basis(rho0.d_b());
  const CMatrix id_b = identity(rho0.d_b());
  GaugeReport report;
  for (const double t : times) {
    const CMatrix u = path.unitary(t);
    const CMatrix du = (path.unitary(t + h) - path.unitary(t - h)) / (2.0 * h);
    const CMatrix omega_a = anti_hermitian_part(du * u.adjoint());

    const DensityMatrix rho = states::apply_local(rho0, u, id_b);
    const CMatrix a_hat =
        connection_one_form(states::density_to_stokes(rho, basis_a, basis_b), omega_a, basis_a,
                            basis_b, group, t)
            .a_hat;

    const CMatrix g = gauge(t);
    const CMatrix dg = (gauge(t + h) - gauge(t - h)) / (2.0 * h);
    const CMatrix w = states::kron(u, g);
    const CMatrix dw = (states::kron(path.unitary(t + h), gauge(t + h)) -
                        states::kron(path.unitary(t - h), gauge(t - h))) /
                       (2.0 * h);
    const DensityMatrix rho_g = states::apply_local(rho0, u, g);
    const CMatrix a_prime = connection_from_motion(rho_g, anti_hermitian_part(dw * w.adjoint()), group);
    const CMatrix expected = g * dg.adjoint() + g * a_hat * g.adjoint();

    const double residual = (a_prime - expected).norm();
    report.residuals.push_back(residual);
    report.max_residual = std::max(report.max_residual, residual);
    report.max_anti_hermiticity =
        std::max({report.max_anti_hermiticity, anti_hermiticity(a_hat), anti_hermiticity(a_prime)});
  }
  return report;
}

}  // namespace holonomy::transport
