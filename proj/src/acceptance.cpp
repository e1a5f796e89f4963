#include "holonomy/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "holonomy/hopf.hpp"
#include "holonomy/random.hpp"
#include "holonomy/serialization.hpp"

namespace holonomy::acceptance {

namespace {

using interferometer::coincidence_intensity;
using states::DensityMatrix;
using transport::FourierComponent;
using transport::SmoothPath;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

CMatrix pauli(int k) { return algebra::shared_basis(2)->generator(k); }

DensityMatrix mixed(Rng& rng, int d_a, int d_b) {
  return DensityMatrix::from_matrix(d_a, d_b, rng.mixed_density(d_a, d_b));
}

// Per-criterion seeds keep each check reproducible on its own.
std::uint64_t derive(std::uint64_t seed, int id) {
  return seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(id) * 0xbf58476d1ce4e5b9ULL;
}

CriterionResult schmidt_correlation() {
  double worst = 0.0;
  for (const double a : {0.6, 0.8, std::sqrt(0.5)}) {
    const double b = std::sqrt(1.0 - a * a);
    const auto s = states::density_to_stokes(states::schmidt_state(a, b));
    Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
    expected.diagonal() << 2 * a * b, -2 * a * b, 1.0;
    worst = std::max(worst, (RMatrix(s.correlation()) - RMatrix(expected)).cwiseAbs().maxCoeff());
  }
  return {1, "schmidt-correlation", worst < 1e-12, "max |M - diag(2ab,-2ab,1)| = " + sci(worst),
          {{"max_deviation", worst}}};
}

CriterionResult concurrence_determinant(std::uint64_t seed) {
  Rng rng(derive(seed, 2));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CVector psi = rng.pure_vector(4);
    const auto s = states::density_to_stokes(DensityMatrix::from_vector(2, 2, psi));
    const double c = states::concurrence_pure(psi);
    worst = std::max(worst, std::abs(states::abs_det_correlation(s) - c * c));
  }
  return {2, "concurrence-determinant", worst < 1e-9, "max ||det M| - C^2| over 1000 states = " + sci(worst),
          {{"max_deviation", worst}, {"samples", 1000}}};
}

CriterionResult werner_determinant() {
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const auto s = states::density_to_stokes(states::werner_state(p));
    worst = std::max(worst, std::abs(states::abs_det_correlation(s) - p * p * p));
  }
  const auto third = states::werner_state(1.0 / 3.0);
  const double det_third = states::abs_det_correlation(states::density_to_stokes(third));
  const double formula = std::max((3.0 * (1.0 / 3.0) - 1.0) / 2.0, 0.0);
  const double wootters = states::wootters_concurrence(third);
  const bool passed = worst < 1e-12 && std::abs(det_third - 1.0 / 27.0) < 1e-12 && det_third > 0.0 &&
                      formula == 0.0 && wootters < 1e-7;
  return {3, "werner-determinant", passed,
          "max ||det M| - p^3| = " + sci(worst) + "; p=1/3: |det M| = " + sci(det_third) +
              ", concurrence " + sci(formula) + " (Wootters " + sci(wootters) + ")",
          {{"max_deviation", worst}, {"det_at_one_third", det_third}, {"concurrence_formula", formula},
           {"concurrence_wootters", wootters}}};
}

CriterionResult example_one(std::uint64_t seed) {
  Rng rng(derive(seed, 4));
  double v_gap = 0.0;
  double i_gap = 0.0;
  for (const double a : {0.6, 0.8}) {
    const double b = std::sqrt(1.0 - a * a);
    const auto rho = states::schmidt_state(a, b);
    const double target = 0.5 * (1.0 + 2.0 * a * b);
    for (int i = 0; i < 20; ++i) {
      // U_1 U_2^* real keeps U_1 sigma_1 + U_2 sigma_2 unitary.
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Complex phase = std::exp(kI * rng.uniform(0.0, 2.0 * std::numbers::pi));
      const CMatrix u = phase * (std::cos(theta) * pauli(1) + std::sin(theta) * pauli(2));
      const auto general = interferometer::maximize_general(rho, u, Group::Unitary);
      const auto special = interferometer::maximize_qudit_qubit_special(rho, u);
      v_gap = std::max(v_gap, (general.v - special.v).norm());
      i_gap = std::max({i_gap, std::abs(general.intensity - target), std::abs(special.intensity - target)});
    }
  }
  return {4, "example-one", v_gap < 1e-6 && i_gap < 1e-8,
          "max ||V_general - V_closed|| = " + sci(v_gap) + ", max |I - (1+C)/2| = " + sci(i_gap),
          {{"max_v_gap", v_gap}, {"max_intensity_gap", i_gap}}};
}

CriterionResult product_maximizer(std::uint64_t seed) {
  Rng rng(derive(seed, 5));
  double v_gap = 0.0;
  double i_gap = 0.0;
  double comm = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int d_a = 2 + i % 2;
    const auto rho = DensityMatrix::from_matrix(d_a, 2, rng.product_density(d_a, 2));
    const CMatrix u = rng.haar_unitary(d_a);
    const Complex t = (u * rho.reduced_a()).trace();
    const auto unrestricted = interferometer::maximize(rho, u, Group::Unitary);
    const CMatrix expected = std::exp(-kI * std::arg(t)) * CMatrix::Identity(2, 2);
    v_gap = std::max(v_gap, (unrestricted.v - expected).norm());
    i_gap = std::max(i_gap, std::abs(unrestricted.intensity - 0.5 * (1.0 + std::abs(t))));
    const auto special = interferometer::maximize(rho, u, Group::Special);
    comm = std::max(comm, algebra::commutator_norm(special.v, rho.reduced_b()));
  }
  return {5, "product-maximizer", v_gap < 1e-6 && comm < 1e-9,
          "max ||V - e^{-i arg Tr(U rho_A)} 1|| = " + sci(v_gap) + ", max ||[V_SU, rho_B]|| = " + sci(comm),
          {{"max_v_gap", v_gap}, {"max_intensity_gap", i_gap}, {"max_commutator", comm}}};
}

CriterionResult trivial_phase(std::uint64_t seed) {
  Rng rng(derive(seed, 6));
  std::vector<DensityMatrix> pool;
  pool.push_back(mixed(rng, 2, 2));
  pool.push_back(mixed(rng, 3, 2));
  pool.push_back(mixed(rng, 2, 3));
  pool.push_back(mixed(rng, 3, 3));
  pool.push_back(DensityMatrix::from_matrix(2, 2, rng.pure_density(2, 2)));
  pool.push_back(states::schmidt_state(0.8, 0.6));
  pool.push_back(states::werner_state(0.5));
  pool.push_back(states::schmidt_state(1.0, 0.0));
  double worst = 0.0;
  for (const double phi : {0.3, 1.2, -2.0}) {
    for (const auto& rho : pool) {
      const CMatrix u = std::exp(kI * phi) * CMatrix::Identity(rho.d_a(), rho.d_a());
      const auto out = interferometer::maximize_general(rho, u, Group::Unitary);
      const CMatrix expected = std::exp(-kI * phi) * CMatrix::Identity(rho.d_b(), rho.d_b());
      worst = std::max(worst, (out.v - expected).norm());
    }
  }
  return {6, "trivial-phase", worst < 1e-10, "max ||V - e^{-i phi} 1|| over " +
                                                 std::to_string(3 * pool.size()) + " cases = " + sci(worst),
          {{"max_v_gap", worst}}};
}

CriterionResult rebit_closed_form(std::uint64_t seed) {
  Rng rng(derive(seed, 7));
  double worst = 0.0;
  bool never_below = true;
  const double step = 1e-4;
  const int n_grid = static_cast<int>(std::ceil(2.0 * std::numbers::pi / step));
  for (int i = 0; i < 50; ++i) {
    const auto rho = DensityMatrix::from_matrix(2, 2, rng.rebit_density());
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    CMatrix u(2, 2);
    u << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const auto closed = interferometer::maximize_so2_rebit(rho, u);
    double best = -1.0;
    for (int g = 0; g < n_grid; ++g) {
      const double x = g * step;
      CMatrix v(2, 2);
      v << std::cos(x), -std::sin(x), std::sin(x), std::cos(x);
      best = std::max(best, 0.5 + 0.5 * (states::kron(u, v) * rho.matrix()).trace().real());
    }
    worst = std::max(worst, std::abs(closed.intensity - best));
    never_below = never_below && closed.intensity >= best - 1e-12;
  }
  return {7, "rebit-closed-form", worst < 1e-3 && never_below,
          "max |I_closed - I_grid| over 50 states = " + sci(worst),
          {{"max_intensity_gap", worst}, {"grid_step", step}}};
}

SmoothPath linear_path(const CMatrix& h) {
  const auto& basis = *algebra::shared_basis(static_cast<int>(h.rows()));
  const RVector theta = algebra::hermitian_coefficients(h, basis);
  std::vector<FourierComponent> components;
  for (int j = 0; j < basis.size(); ++j) components.push_back({j, theta(j), {}, {}});
  return SmoothPath(static_cast<int>(h.rows()), std::move(components));
}

CriterionResult gauge_covariance(std::uint64_t seed) {
  Rng rng(derive(seed, 8));
  double anti = 0.0;
  double residual = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d_a = 2 + i % 2;
    const int d_b = 2 + (i / 2) % 2;
    const auto rho = mixed(rng, d_a, d_b);
    const SmoothPath path = linear_path(rng.hermitian(d_a));
    const CMatrix k = rng.hermitian(d_b);
    const auto gauge = [k](double t) { return algebra::exp_i_hermitian(CMatrix(k * t)); };
    const double t = rng.uniform(0.0, 1.0);
    const auto report = transport::gauge_transform_check(rho, path, gauge, {t}, 1e-5);
    anti = std::max(anti, report.max_anti_hermiticity);
    residual = std::max(residual, report.max_residual);
  }
  return {8, "gauge-covariance", anti < 1e-10 && residual < 1e-7,
          "max ||A + A^dagger|| = " + sci(anti) + ", max gauge residual = " + sci(residual),
          {{"max_anti_hermiticity", anti}, {"max_gauge_residual", residual}}};
}

CriterionResult levay_reduction(std::uint64_t seed) {
  Rng rng(derive(seed, 9));
  const auto& basis = *algebra::shared_basis(2);
  double conn = 0.0;
  double mz = 0.0;
  for (int i = 0; i < 500; ++i) {
    const CVector psi = rng.pure_vector(4);
    const auto s = states::density_to_stokes(DensityMatrix::from_vector(2, 2, psi));
    Eigen::Vector3d a(rng.normal(), rng.normal(), rng.normal());
    CMatrix duu = CMatrix::Zero(2, 2);
    for (int k = 0; k < 3; ++k) duu += kI * a(k) * basis.generator(k + 1);
    const auto sample = transport::connection_one_form(s, duu, basis, basis, Group::Special);
    const RVector phi = algebra::hermitian_coefficients(CMatrix(-kI * sample.a_hat), basis);
    const Eigen::Vector3d levay = hopf::levay_connection(Eigen::Matrix3d(s.correlation()), a);
    conn = std::max({conn, (phi.tail(3) - levay).cwiseAbs().maxCoeff(), std::abs(phi(0))});
  }
  for (int i = 0; i < 500; ++i) {
    const CVector psi = rng.pure_vector(4);
    const CMatrix u = rng.special_unitary(2);
    const CMatrix v = rng.special_unitary(2);
    const double quaternionic = hopf::quaternionic_mz_intensity(hopf::to_quaternionic(psi), u, v);
    const double franson = coincidence_intensity(DensityMatrix::from_vector(2, 2, psi), u, v).value;
    mz = std::max(mz, std::abs(quaternionic - franson));
  }
  return {9, "levay-reduction", conn < 1e-10 && mz < 1e-12,
          "max connection coefficient gap = " + sci(conn) + ", max |I_quaternionic - I_Franson| = " + sci(mz),
          {{"max_connection_gap", conn}, {"max_intensity_gap", mz}}};
}

SmoothPath convergence_loop() {
  return SmoothPath(2, {{1, 0.0, {-0.6}, {0.5}}, {2, 0.0, {0.3, -0.3}, {0.2}}, {3, 0.0, {0.0}, {0.7}}});
}

CriterionResult discrete_continuum() {
  const auto rho = states::schmidt_state(0.8, 0.6);
  const SmoothPath loop = convergence_loop();
  std::vector<double> deviations;
  std::vector<double> ratios;
  bool passed = true;
  for (const int n : {250, 500, 1000, 2000}) {
    const auto discrete = transport::holonomy_from_loop(rho, loop.discretize(n), Group::Special);
    const auto continuum = transport::path_ordered_holonomy(rho, loop, n, Group::Special);
    deviations.push_back((discrete.v - continuum.v).norm());
    if (deviations.size() > 1) {
      const double r = deviations[deviations.size() - 2] / deviations.back();
      ratios.push_back(r);
      passed = passed && r >= 1.7 && r <= 2.3;
    }
  }
  std::string detail = "deviation ratios";
  for (const double r : ratios) detail += " " + sci(r);
  return {10, "discrete-continuum", passed, detail, {{"deviations", deviations}, {"ratios", ratios}}};
}

std::pair<SmoothPath, SmoothPath> witness_loops() {
  return {SmoothPath(2, {{1, 0.0, {-0.9}, {0.8}}, {3, 0.0, {}, {1.1}}}),
          SmoothPath(2, {{2, 0.0, {0.7, -0.4}, {-1.0}}, {1, 0.0, {}, {0.5}}})};
}

CriterionResult non_abelian_witness() {
  const auto [first, second] = witness_loops();
  const int n = 200;
  const auto bell = DensityMatrix::from_vector(2, 2, states::bell_vector());
  const auto h1 = transport::holonomy_from_loop(bell, first.discretize(n), Group::Unitary);
  const auto h2 = transport::holonomy_from_loop(bell, second.discretize(n), Group::Unitary);
  const double comm = algebra::commutator_norm(h1.v, h2.v);
  const auto zero = states::schmidt_state(1.0, 0.0);
  const auto p1 = transport::holonomy_from_loop(zero, first.discretize(n), Group::Unitary);
  const auto p2 = transport::holonomy_from_loop(zero, second.discretize(n), Group::Unitary);
  const double dist = std::max(algebra::phase_identity_distance(p1.v),
                               algebra::phase_identity_distance(p2.v));
  return {11, "non-abelian-witness", comm > 0.1 && dist < 1e-6,
          "Bell commutator = " + sci(comm) + " (needs > 0.1); |00> max phase-identity distance = " + sci(dist),
          {{"bell_commutator", comm}, {"product_phase_distance", dist}}};
}

}  // namespace

std::vector<CriterionResult> run_criteria(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  const std::vector<std::function<CriterionResult()>> checks = {
      [] { return schmidt_correlation(); },
      [seed] { return concurrence_determinant(seed); },
      [] { return werner_determinant(); },
      [seed] { return example_one(seed); },
      [seed] { return product_maximizer(seed); },
      [seed] { return trivial_phase(seed); },
      [seed] { return rebit_closed_form(seed); },
      [seed] { return gauge_covariance(seed); },
      [seed] { return levay_reduction(seed); },
      [] { return discrete_continuum(); },
      [] { return non_abelian_witness(); },
  };
  for (size_t i = 0; i < checks.size(); ++i) {
    try {
      out.push_back(checks[i]());
    } catch (const Error& e) {
      out.push_back({static_cast<int>(i) + 1, "criterion-" + std::to_string(i + 1), false,
                     std::string("error ") + to_string(e.code()) + ": " + e.what(), nlohmann::json::object()});
    }
  }
  return out;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> first = run_criteria(seed);
  const std::vector<CriterionResult> second = run_criteria(seed);
  const bool same = io::dump(to_json(first)) == io::dump(to_json(second));
  first.push_back({12, "determinism", same,
                   same ? "two runs serialize identically" : "two runs differ",
                   {{"identical", same}}});
  return first;
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                   {"metrics", r.metrics}});
  }
  return arr;
}

std::string format_line(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d ", r.passed ? "PASS" : "FAIL", r.id);
  return std::string(head) + r.name + ": " + r.detail;
}

}  // namespace holonomy::acceptance
