#include "holonomy/cli/commands.hpp"

#include <cstdio>

#include "holonomy/acceptance.hpp"
#include "holonomy/hopf.hpp"
#include "holonomy/random.hpp"
#include "holonomy/serialization.hpp"

namespace holonomy::cli {

using nlohmann::json;

namespace {

const states::DensityMatrix& need_state(const Scenario& s) {
  if (!s.state) throw Error(ErrorCode::Schema, "state: missing");
  return *s.state;
}

CMatrix unitary_or_identity(const std::optional<CMatrix>& u, int dim) {
  return u ? *u : CMatrix::Identity(dim, dim);
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(io::complex_to_json(v(i)));
  return out;
}

json real_vector_to_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json outcome_to_json(const interferometer::MaximizationOutcome& o) {
  return {{"v", io::matrix_to_json(o.v)},
          {"coefficients", vector_to_json(o.coefficients.values)},
          {"intensity", o.intensity},
          {"lambda", o.lagrange_lambda},
          {"mu", real_vector_to_json(o.lagrange_mu)},
          {"residual", o.residual},
          {"status", interferometer::to_string(o.status)},
          {"group", to_string(o.group)},
          {"certified", o.certified}};
}

json header(const char* command, const Scenario& s) {
  return {{"command", command}, {"seed", s.seed}, {"group", to_string(s.group)}};
}

}  // namespace

json cmd_intensity(const Scenario& s) {
  const auto& rho = need_state(s);
  const CMatrix u = unitary_or_identity(s.u, rho.d_a());
  const CMatrix v = unitary_or_identity(s.v, rho.d_b());
  const auto r = interferometer::coincidence_intensity(rho, u, v);
  json out = header("intensity", s);
  out["intensity"] = r.value;
  out["intensity_stokes"] = r.stokes_value;
  out["interference_term"] = r.interference_term;
  out["dual_formula_delta"] = std::abs(r.value - r.stokes_value);
  out["u"] = io::matrix_to_json(u);
  out["v"] = io::matrix_to_json(v);
  return out;
}

json cmd_maximize(const Scenario& s) {
  const auto& rho = need_state(s);
  const CMatrix u = unitary_or_identity(s.u, rho.d_a());
  interferometer::MaximizerOptions options;
  options.seed = s.seed;
  json out = header("maximize", s);
  out["u"] = io::matrix_to_json(u);
  out["result"] = outcome_to_json(interferometer::maximize(rho, u, s.group, options));
  return out;
}

json cmd_transport(const Scenario& s) {
  const auto& rho = need_state(s);
  if (s.paths.empty()) throw Error(ErrorCode::Schema, "path: missing");
  interferometer::MaximizerOptions options;
  options.seed = s.seed;
  const auto record = transport::transport_sequence(rho, s.paths.front().steps, s.group, options);
  json out = header("transport", s);
  json rec = io::to_json(record);
  CMatrix cu = CMatrix::Identity(rho.d_a(), rho.d_a());
  double worst_unitarity = 0.0;
  for (size_t n = 0; n < record.steps.size(); ++n) {
    cu = record.steps[n].u * cu;
    rec["steps"][n]["closure_residual"] = (cu - CMatrix::Identity(rho.d_a(), rho.d_a())).norm();
    worst_unitarity = std::max(worst_unitarity, algebra::unitarity_residual(record.steps[n].v));
  }
  out["record"] = std::move(rec);
  out["max_unitarity_residual"] = worst_unitarity;
  return out;
}

json cmd_holonomy(const Scenario& s) {
  const auto& rho = need_state(s);
  if (s.paths.empty()) throw Error(ErrorCode::Schema, "loops: missing");
  interferometer::MaximizerOptions options;
  options.seed = s.seed;
  json loops = json::array();
  std::vector<CMatrix> elements;
  for (size_t i = 0; i < s.paths.size(); ++i) {
    const PathSpec& path = s.paths[i];
    const auto h = transport::holonomy_from_loop(rho, path.steps, s.group, s.closure_tol, options);
    elements.push_back(h.v);
    json entry = {{"index", i},
                  {"name", path.name},
                  {"n_steps", path.n_steps},
                  {"v", io::matrix_to_json(h.v)},
                  {"closure_residual", h.loop_closure_residual},
                  {"phase_identity_distance", algebra::phase_identity_distance(h.v)}};
    if (path.smooth) {
      try {
        const auto po = transport::path_ordered_holonomy(rho, *path.smooth, path.n_steps, s.group,
                                                         transport::Integrator::FirstOrder, s.closure_tol);
        entry["path_ordered"] = {{"v", io::matrix_to_json(po.v)}, {"deviation", (po.v - h.v).norm()}};
      } catch (const Error& e) {
        entry["path_ordered"] = {{"error", to_string(e.code())}, {"message", e.what()}};
      }
    }
    loops.push_back(std::move(entry));
  }
  json commutators = json::array();
  for (size_t i = 0; i < elements.size(); ++i)
    for (size_t j = i + 1; j < elements.size(); ++j) {
      commutators.push_back({{"i", i}, {"j", j}, {"norm", algebra::commutator_norm(elements[i], elements[j])}});
    }
  json out = header("holonomy", s);
  out["loops"] = std::move(loops);
  out["commutators"] = std::move(commutators);
  return out;
}

json cmd_levay_compare(const Scenario& s) {
  const auto& rho = need_state(s);
  if (rho.d_a() != 2 || rho.d_b() != 2 || !s.pure_vector || s.group != Group::Special) {
    throw Error(ErrorCode::Precondition, "levay-compare needs a pure two-qubit state vector and group su");
  }
  double v_delta = 0.0;
  double i_delta = 0.0;
  double lambda_delta = 0.0;
  double inner_imag = 0.0;
  double inner_real_min = 1.0;
  auto compare = [&](const CVector& psi, const CMatrix& u) {
    const auto state = states::DensityMatrix::from_vector(2, 2, psi);
    const Eigen::Matrix3d m = states::density_to_stokes(state).correlation();
    const Eigen::Vector4d uc = hopf::su2_coefficients(u);
    const auto levay = hopf::levay_parallel_v(m, uc);
    const auto closed = interferometer::maximize_su2(state, u);
    const CMatrix v = hopf::su2_matrix(levay.v);
    v_delta = std::max(v_delta, (v - closed.v).norm());
    i_delta = std::max(i_delta, std::abs(interferometer::coincidence_intensity(state, u, v).value - closed.intensity));
    const double lambda_formula = std::sqrt(uc(0) * uc(0) + (m.transpose() * uc.tail<3>()).squaredNorm());
    lambda_delta = std::max(lambda_delta, std::abs(lambda_formula - levay.lambda));
    const auto spinor = hopf::to_quaternionic(psi);
    const auto inner = hopf::quaternionic_inner(spinor, hopf::su2_pair_action(spinor, u, v));
    inner_imag = std::max({inner_imag, std::abs(inner.b), std::abs(inner.c), std::abs(inner.d)});
    inner_real_min = std::min(inner_real_min, inner.a);
  };
  int compared = 0;
  if (s.u) {
    compare(*s.pure_vector, *s.u);
    ++compared;
  }
  Rng rng(s.seed ^ 0x6c65766179ULL);
  for (int i = 0; i < s.samples; ++i) {
    compare(rng.pure_vector(4), rng.special_unitary(2));
    ++compared;
  }
  json out = header("levay-compare", s);
  out["compared"] = compared;
  out["max_v_delta"] = v_delta;
  out["max_intensity_delta"] = i_delta;
  out["max_lambda_formula_delta"] = lambda_delta;
  out["max_inner_product_imaginary"] = inner_imag;
  out["min_inner_product_real"] = inner_real_min;
  return out;
}

json cmd_selftest(std::uint64_t seed) {
  const auto results = acceptance::run_all(seed);
  int passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  return {{"command", "selftest"},
          {"seed", seed},
          {"criteria", acceptance::to_json(results)},
          {"passed", passed},
          {"failed", static_cast<int>(results.size()) - passed}};
}

std::string transport_csv(const json& report) {
  std::string out = "step,intensity,closure_residual\n";
  char buf[128];
  for (const auto& step : report.at("record").at("steps")) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", step.at("step").get<int>(),
                  step.at("intensity").get<double>(), step.at("closure_residual").get<double>());
    out += buf;
  }
  return out;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularB:
    case ErrorCode::OpenLoop:
    case ErrorCode::DegenerateDirection:
    case ErrorCode::InternalConsistency:
      return 3;
    default:
      return 2;
  }
}

}  // namespace holonomy::cli
