#pragma once

#include <functional>
#include <vector>

#include "holonomy/interferometer.hpp"

namespace holonomy::transport {

using interferometer::MaximizerOptions;
using interferometer::Status;
using states::DensityMatrix;
using states::StokesTensor;

/// Fourier coefficients of one generator angle:
/// theta_j(t) = s t + sum_m [a_m (cos(2 pi m t) - 1) + b_m sin(2 pi m t)].
struct FourierComponent {
  int generator = 0;
  double slope = 0.0;
  std::vector<double> cosine;
  std::vector<double> sine;
};

/// Smooth path t in [0,1] -> U(t) = exp(i sum_j theta_j(t) chi_j) on A.
/// U(0) = 1; the path is closed unless a slope is present.
class SmoothPath {
 public:
  SmoothPath(int dimension, std::vector<FourierComponent> components);

  int dimension() const { return dimension_; }
  const std::vector<FourierComponent>& components() const { return components_; }

  RVector theta(double t) const;
  RVector theta_dot(double t) const;
  CMatrix unitary(double t) const;
  /// dU/dt U^dagger, anti-Hermitian, differentiated exactly.
  CMatrix generator(double t) const;
  /// Step unitaries U(t_k) U(t_{k-1})^dagger on a uniform grid of n steps.
  std::vector<CMatrix> discretize(int n_steps) const;
  /// || U(1) - 1 ||_F.
  double closure_residual() const;

 private:
  int dimension_;
  std::vector<FourierComponent> components_;
};

using DiscretePath = std::vector<CMatrix>;

struct TransportStep {
  CMatrix u;
  CMatrix v;
  double intensity = 0.0;
  Status status = Status::UniqueMax;
  DensityMatrix state;  // after applying U_n (x) V_n
};

struct TransportRecord {
  DensityMatrix initial;
  Group group = Group::Unitary;
  std::vector<TransportStep> steps;
  CMatrix cumulative_u;
  CMatrix cumulative_v;
  /// max |I^(n+1) from cumulative operators on rho0 - stepwise I^(n+1)|.
  double intensity_consistency = 0.0;
  double closure_residual = 0.0;
};

struct StepResult {
  CMatrix v;
  DensityMatrix next_state;
  double intensity = 0.0;
  Status status = Status::UniqueMax;
};

struct HolonomyElement {
  CMatrix v;
  double loop_closure_residual = 0.0;
};

struct ConnectionSample {
  double t = 0.0;
  CMatrix a_hat;
};

StepResult transport_step(const DensityMatrix& state, const CMatrix& u, Group group,
                          const MaximizerOptions& options = {});

TransportRecord transport_sequence(const DensityMatrix& rho0, const DiscretePath& path,
                                   Group group, const MaximizerOptions& options = {});

/// Intensity of step n (0-based) recomputed from rho0 and the cumulative
/// operators of the preceding steps.
double cumulative_intensity(const TransportRecord& record, size_t n);

double closure_residual(const DiscretePath& path, int dimension);

inline constexpr double kDefaultClosureTol = 1e-8;

HolonomyElement holonomy_from_loop(const DensityMatrix& rho0, const DiscretePath& path,
                                   Group group, double closure_tol = kDefaultClosureTol,
                                   const MaximizerOptions& options = {});

/// B_jk = Re Tr(chi_j chi_k rho^B).
RMatrix b_matrix_trace_form(const CMatrix& rho_b, const algebra::GeneratorBasis& basis_b);
RMatrix b_matrix_stokes_form(const StokesTensor& s, const algebra::GeneratorBasis& basis_b);

struct BMatrixReport {
  RMatrix full;        // all D_B^2 generator indices
  RMatrix restricted;  // rows/columns of the group's generators
  std::vector<int> indices;
  double sigma_min = 0.0;
};

/// Builds B in both forms, checks they agree, and throws SingularB when the
/// restricted block has sigma_min < 1e-10.
BMatrixReport b_matrix_infinitesimal(const StokesTensor& s, const algebra::GeneratorBasis& basis_b,
                                     Group group = Group::Unitary);

/// A = -sum (dUU^dagger)_k S_kl B^{-1}_ml chi_m, restricted to the group's generators.
ConnectionSample connection_one_form(const StokesTensor& s, const CMatrix& duu_dagger,
                                     const algebra::GeneratorBasis& basis_a,
                                     const algebra::GeneratorBasis& basis_b,
                                     Group group = Group::Unitary, double t = 0.0);

/// Connection for an arbitrary local motion d(W)W^dagger = omega of the
/// bipartite state, omega anti-Hermitian on A (x) B.
CMatrix connection_from_motion(const DensityMatrix& rho, const CMatrix& omega, Group group);

enum class Integrator { FirstOrder, Midpoint };

HolonomyElement path_ordered_holonomy(const DensityMatrix& rho0, const SmoothPath& path,
                                      int n_steps, Group group = Group::Unitary,
                                      Integrator integrator = Integrator::FirstOrder,
                                      double closure_tol = kDefaultClosureTol);

using GaugePath = std::function<CMatrix(double)>;

struct GaugeReport {
  std::vector<double> residuals;
  double max_residual = 0.0;
  double max_anti_hermiticity = 0.0;
};

/// Compares the connection of the gauge-transformed state (U(t) (x) G(t))
/// rho0 (...)^dagger with G dG^dagger + G A G^dagger at the sample times,
/// derivatives by central differences with step h.
GaugeReport gauge_transform_check(const DensityMatrix& rho0, const SmoothPath& path,
                                  const GaugePath& gauge, const std::vector<double>& times,
                                  double h = 1e-5, Group group = Group::Unitary);

}  // namespace holonomy::transport
