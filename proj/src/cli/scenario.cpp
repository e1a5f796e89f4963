#include "holonomy/cli/scenario.hpp"

#include <cmath>
#include <set>

#include "holonomy/random.hpp"
#include "holonomy/serialization.hpp"

namespace holonomy::cli {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::Schema, field + ": " + msg);
}

void allow_keys(const json& obj, const std::string& field, std::set<std::string> keys) {
  if (!obj.is_object()) schema(field, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!keys.count(it.key())) schema(field + "." + it.key(), "unknown field");
  }
}

double get_number(const json& obj, const char* key, const std::string& field) {
  const json& v = obj.at(key);
  if (!v.is_number()) schema(field + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, const std::string& field) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) schema(field + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<double> get_reals(const json& obj, const char* key, const std::string& field) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) schema(field + "." + key, "expected an array of numbers");
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema(field + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

CVector get_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) schema(field, "expected a non-empty array of [re, im]");
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = io::complex_from_json(v[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

struct Dims {
  std::optional<int> d_a;
  std::optional<int> d_b;
};

int require_dim(const std::optional<int>& d, const std::string& field) {
  if (!d) schema(field, "dimension required (set d_a/d_b)");
  return *d;
}

Group parse_group(const json& doc) {
  if (!doc.contains("group")) return Group::Unitary;
  if (!doc["group"].is_string()) schema("group", "expected one of u|su|so");
  return group_from_string(doc["group"].get<std::string>());
}

states::DensityMatrix parse_state(const json& spec, const Dims& dims, Rng& rng,
                                  std::optional<CVector>* pure) {
  const std::string field = "state";
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    schema(field + ".kind", "expected schmidt|werner|product|custom|bell|random");
  }
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "schmidt") {
    allow_keys(spec, field, {"kind", "a", "b"});
    if (!spec.contains("a")) schema(field + ".a", "missing");
    const double a = get_number(spec, "a", field);
    const double b = spec.contains("b") ? get_number(spec, "b", field) : std::sqrt(std::max(0.0, 1.0 - a * a));
    *pure = states::schmidt_vector(a, b);
    return states::DensityMatrix::from_vector(2, 2, **pure);
  }
  if (kind == "bell") {
    allow_keys(spec, field, {"kind"});
    *pure = states::bell_vector();
    return states::DensityMatrix::from_vector(2, 2, **pure);
  }
  if (kind == "werner") {
    allow_keys(spec, field, {"kind", "p", "psi"});
    if (!spec.contains("p")) schema(field + ".p", "missing");
    const double p = get_number(spec, "p", field);
    if (spec.contains("psi")) return states::werner_state(p, get_vector(spec["psi"], field + ".psi"));
    return states::werner_state(p);
  }
  if (kind == "product") {
    allow_keys(spec, field, {"kind", "rho_a", "rho_b", "psi_a", "psi_b"});
    if (spec.contains("psi_a") && spec.contains("psi_b")) {
      const CVector a = get_vector(spec["psi_a"], field + ".psi_a");
      const CVector b = get_vector(spec["psi_b"], field + ".psi_b");
      CVector psi(a.size() * b.size());
      for (Eigen::Index i = 0; i < a.size(); ++i) psi.segment(i * b.size(), b.size()) = a(i) * b;
      *pure = psi;
      return states::DensityMatrix::from_vector(static_cast<int>(a.size()), static_cast<int>(b.size()), psi);
    }
    if (spec.contains("rho_a") && spec.contains("rho_b")) {
      const CMatrix a = io::matrix_from_json(spec["rho_a"], field + ".rho_a");
      const CMatrix b = io::matrix_from_json(spec["rho_b"], field + ".rho_b");
      return states::DensityMatrix::from_matrix(static_cast<int>(a.rows()), static_cast<int>(b.rows()),
                                                states::kron(a, b));
    }
    const int d_a = require_dim(dims.d_a, "d_a");
    const int d_b = require_dim(dims.d_b, "d_b");
    return states::DensityMatrix::from_matrix(d_a, d_b, rng.product_density(d_a, d_b));
  }
  if (kind == "custom") {
    allow_keys(spec, field, {"kind", "matrix", "vector", "d_a", "d_b"});
    Dims local = dims;
    if (spec.contains("d_a")) local.d_a = get_int(spec, "d_a", field);
    if (spec.contains("d_b")) local.d_b = get_int(spec, "d_b", field);
    const int d_a = require_dim(local.d_a, "d_a");
    const int d_b = require_dim(local.d_b, "d_b");
    if (spec.contains("vector")) {
      *pure = get_vector(spec["vector"], field + ".vector");
      return states::DensityMatrix::from_vector(d_a, d_b, **pure);
    }
    if (!spec.contains("matrix")) schema(field, "custom state needs 'matrix' or 'vector'");
    return states::DensityMatrix::from_matrix(d_a, d_b, io::matrix_from_json(spec["matrix"], field + ".matrix"));
  }
  if (kind == "random") {
    allow_keys(spec, field, {"kind", "pure"});
    const int d_a = require_dim(dims.d_a, "d_a");
    const int d_b = require_dim(dims.d_b, "d_b");
    const bool is_pure = spec.contains("pure") && spec["pure"].is_boolean() && spec["pure"].get<bool>();
    if (is_pure) {
      *pure = rng.pure_vector(d_a * d_b);
      return states::DensityMatrix::from_vector(d_a, d_b, **pure);
    }
    return states::DensityMatrix::from_matrix(d_a, d_b, rng.mixed_density(d_a, d_b));
  }
  schema(field + ".kind", "unknown state kind '" + kind + "'");
}

CMatrix parse_unitary(const json& spec, int dim, Rng& rng, const std::string& field) {
  const auto& basis = *algebra::shared_basis(dim);
  CMatrix u;
  if (spec.is_string()) {
    if (spec.get<std::string>() != "identity") schema(field, "expected \"identity\" or an object");
    return CMatrix::Identity(dim, dim);
  }
  if (!spec.is_object() || spec.size() != 1) {
    schema(field, "expected one of identity|matrix|coefficients|exp|phase|random");
  }
  const std::string key = spec.begin().key();
  const json& value = spec.begin().value();
  if (key == "matrix") {
    u = io::matrix_from_json(value, field + ".matrix");
  } else if (key == "coefficients") {
    const CVector c = get_vector(value, field + ".coefficients");
    if (c.size() != basis.size()) schema(field + ".coefficients", "expected D^2 entries");
    u = algebra::reconstruct(c, basis);
  } else if (key == "exp") {
    const std::vector<double> theta = get_reals(spec, "exp", field);
    if (static_cast<int>(theta.size()) != basis.size()) schema(field + ".exp", "expected D^2 angles");
    u = algebra::exp_generators(Eigen::Map<const RVector>(theta.data(), basis.size()), basis);
  } else if (key == "phase") {
    if (!value.is_number()) schema(field + ".phase", "expected a number");
    u = std::exp(kI * value.get<double>()) * CMatrix::Identity(dim, dim);
  } else if (key == "random") {
    if (!value.is_string()) schema(field + ".random", "expected u|su|so");
    u = rng.group_element(group_from_string(value.get<std::string>()), dim);
  } else {
    schema(field + "." + key, "unknown unitary form");
  }
  if (u.rows() != dim || u.cols() != dim) {
    schema(field, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " unitary");
  }
  if (algebra::unitarity_residual(u) > kNumericTol) schema(field, "operator is not unitary");
  return u;
}

PathSpec parse_path(const json& spec, int dim, Rng& rng, const std::string& field,
                    const std::optional<int>& steps_override) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    schema(field + ".kind", "expected discrete|fourier");
  }
  PathSpec out;
  if (spec.contains("name")) {
    if (!spec["name"].is_string()) schema(field + ".name", "expected a string");
    out.name = spec["name"].get<std::string>();
  }
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "discrete") {
    allow_keys(spec, field, {"kind", "name", "steps", "close"});
    if (!spec.contains("steps") || !spec["steps"].is_array() || spec["steps"].empty()) {
      schema(field + ".steps", "expected a non-empty array of unitaries");
    }
    CMatrix total = CMatrix::Identity(dim, dim);
    for (size_t i = 0; i < spec["steps"].size(); ++i) {
      out.steps.push_back(parse_unitary(spec["steps"][i], dim, rng, field + ".steps[" + std::to_string(i) + "]"));
      total = out.steps.back() * total;
    }
    if (spec.contains("close")) {
      if (!spec["close"].is_boolean()) schema(field + ".close", "expected a boolean");
      if (spec["close"].get<bool>()) out.steps.push_back(total.adjoint());
    }
    out.n_steps = static_cast<int>(out.steps.size());
    return out;
  }
  if (kind == "fourier") {
    allow_keys(spec, field, {"kind", "name", "components", "n_steps"});
    if (!spec.contains("components") || !spec["components"].is_array()) {
      schema(field + ".components", "expected an array");
    }
    std::vector<transport::FourierComponent> components;
    for (size_t i = 0; i < spec["components"].size(); ++i) {
      const json& c = spec["components"][i];
      const std::string cf = field + ".components[" + std::to_string(i) + "]";
      allow_keys(c, cf, {"generator", "slope", "cos", "sin"});
      if (!c.contains("generator")) schema(cf + ".generator", "missing");
      transport::FourierComponent comp;
      comp.generator = get_int(c, "generator", cf);
      comp.slope = c.contains("slope") ? get_number(c, "slope", cf) : 0.0;
      comp.cosine = get_reals(c, "cos", cf);
      comp.sine = get_reals(c, "sin", cf);
      components.push_back(std::move(comp));
    }
    out.n_steps = spec.contains("n_steps") ? get_int(spec, "n_steps", field) : 200;
    if (steps_override) out.n_steps = *steps_override;
    if (out.n_steps < 1) schema(field + ".n_steps", "must be positive");
    out.smooth.emplace(dim, std::move(components));
    out.steps = out.smooth->discretize(out.n_steps);
    return out;
  }
  schema(field + ".kind", "unknown path kind '" + kind + "'");
}

}  // namespace

Scenario parse_scenario(const json& doc, const Overrides& overrides) {
  allow_keys(doc, "scenario",
             {"schema_version", "seed", "d_a", "d_b", "group", "state", "u", "v", "path", "loops",
              "closure_tol", "samples", "outputs"});
  if (!doc.contains("schema_version")) schema("schema_version", "missing");
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion) {
    schema("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  Scenario out;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) schema("seed", "expected an integer");
    out.seed = doc["seed"].get<std::uint64_t>();
  }
  if (overrides.seed) out.seed = *overrides.seed;
  out.group = parse_group(doc);

  Dims dims;
  if (doc.contains("d_a")) dims.d_a = get_int(doc, "d_a", "scenario");
  if (doc.contains("d_b")) dims.d_b = get_int(doc, "d_b", "scenario");

  Rng rng(out.seed);
  if (doc.contains("state")) {
    out.state.emplace(parse_state(doc["state"], dims, rng, &out.pure_vector));
    if ((dims.d_a && *dims.d_a != out.state->d_a()) || (dims.d_b && *dims.d_b != out.state->d_b())) {
      schema("state", "dimensions disagree with d_a/d_b");
    }
    dims.d_a = out.state->d_a();
    dims.d_b = out.state->d_b();
  }
  if (doc.contains("u")) out.u = parse_unitary(doc["u"], require_dim(dims.d_a, "u"), rng, "u");
  if (doc.contains("v")) out.v = parse_unitary(doc["v"], require_dim(dims.d_b, "v"), rng, "v");
  if (doc.contains("path")) {
    out.paths.push_back(parse_path(doc["path"], require_dim(dims.d_a, "path"), rng, "path", overrides.steps));
  }
  if (doc.contains("loops")) {
    if (!doc["loops"].is_array()) schema("loops", "expected an array of paths");
    for (size_t i = 0; i < doc["loops"].size(); ++i) {
      const std::string field = "loops[" + std::to_string(i) + "]";
      out.paths.push_back(parse_path(doc["loops"][i], require_dim(dims.d_a, field), rng, field, overrides.steps));
    }
  }
  if (doc.contains("closure_tol")) out.closure_tol = get_number(doc, "closure_tol", "scenario");
  if (doc.contains("samples")) out.samples = get_int(doc, "samples", "scenario");
  if (out.samples < 0) schema("samples", "must be non-negative");
  if (doc.contains("outputs")) {
    allow_keys(doc["outputs"], "outputs", {"csv"});
    if (doc["outputs"].contains("csv")) {
      if (!doc["outputs"]["csv"].is_string()) schema("outputs.csv", "expected a file name");
      out.csv = doc["outputs"]["csv"].get<std::string>();
    }
  }
  return out;
}

}  // namespace holonomy::cli
