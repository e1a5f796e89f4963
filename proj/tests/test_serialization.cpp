#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "holonomy/cli/commands.hpp"
#include "holonomy/cli/scenario.hpp"
#include "holonomy/random.hpp"
#include "holonomy/serialization.hpp"

using namespace holonomy;
using nlohmann::json;

namespace {

ErrorCode parse_error_code(const json& doc) {
  try {
    cli::parse_scenario(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << doc.dump();
  return ErrorCode::InternalConsistency;
}

std::string parse_error_message(const json& doc) {
  try {
    cli::parse_scenario(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

json base_scenario() {
  return json::parse(R"({"schema_version": 1, "seed": 3, "d_a": 2, "d_b": 2,
                          "state": {"kind": "schmidt", "a": 0.8}})");
}

}  // namespace

TEST(Serialization, MatrixRoundTripIsExact) {
  Rng rng(1);
  const CMatrix m = rng.haar_unitary(3);
  const json j = io::matrix_to_json(m);
  const CMatrix back = io::matrix_from_json(json::parse(io::dump(j)), "m");
  EXPECT_EQ((back - m).norm(), 0.0);
  const RMatrix r = m.real();
  EXPECT_EQ((io::real_matrix_from_json(json::parse(io::dump(io::real_matrix_to_json(r))), "r") - r).norm(), 0.0);
}

TEST(Serialization, DensityAndStokesRoundTrip) {
  Rng rng(2);
  const auto rho = states::DensityMatrix::from_matrix(3, 2, rng.mixed_density(3, 2));
  const auto back = io::density_from_json(json::parse(io::dump(io::to_json(rho))));
  EXPECT_EQ(back.d_a(), 3);
  EXPECT_EQ((back.matrix() - rho.matrix()).norm(), 0.0);
  const auto s = states::density_to_stokes(rho);
  const auto s_back = io::stokes_from_json(json::parse(io::dump(io::to_json(s))));
  EXPECT_EQ((s_back.matrix() - s.matrix()).norm(), 0.0);
}

TEST(Serialization, ComplexAcceptsBareReal) {
  EXPECT_EQ(io::complex_from_json(json(1.5), "x"), Complex(1.5, 0.0));
  EXPECT_EQ(io::complex_from_json(json::parse("[1, -2]"), "x"), Complex(1.0, -2.0));
  EXPECT_THROW(io::complex_from_json(json::parse("[1, 2, 3]"), "x"), Error);
  EXPECT_THROW(io::complex_from_json(json("a"), "x"), Error);
}

TEST(Serialization, SchemaErrorsNameTheField) {
  try {
    io::matrix_from_json(json::parse(R"([[[1,0],[0,0]],[[0,0]]])"), "state.matrix");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schema);
    EXPECT_NE(std::string(e.what()).find("state.matrix"), std::string::npos);
  }
  EXPECT_THROW(io::density_from_json(json::parse(R"({"d_a": 2, "matrix": []})")), Error);
}

TEST(Serialization, DumpFormatting) {
  const json doc = {{"b", {1.0, 0.1}}, {"a", std::numeric_limits<double>::quiet_NaN()}, {"c", "x"}};
  const std::string text = io::dump(doc);
  EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
  EXPECT_NE(text.find("null"), std::string::npos);
  EXPECT_NE(text.find("[1, 0.10000000000000001]"), std::string::npos);
  EXPECT_EQ(json::parse(text)["b"][1].get<double>(), 0.1);
}

TEST(Scenario, ParsesStatesAndUnitaries) {
  json doc = base_scenario();
  doc["u"] = {{"exp", {0.0, 0.3, 0.0, 0.2}}};
  doc["v"] = "identity";
  doc["group"] = "su";
  const auto s = cli::parse_scenario(doc);
  ASSERT_TRUE(s.state && s.pure_vector && s.u && s.v);
  EXPECT_EQ(s.group, Group::Special);
  EXPECT_NEAR(std::abs(s.state->matrix()(0, 3)), 0.48, 1e-15);
  EXPECT_LT(algebra::unitarity_residual(*s.u), 1e-14);

  json werner = base_scenario();
  werner["state"] = {{"kind", "werner"}, {"p", 0.4}};
  EXPECT_FALSE(cli::parse_scenario(werner).pure_vector.has_value());

  json product = base_scenario();
  product.erase("d_a");
  product.erase("d_b");
  product["state"] = json::parse(R"({"kind": "product", "psi_a": [1, 0, 0], "psi_b": [[0, 1], 0]})");
  const auto p = cli::parse_scenario(product);
  EXPECT_EQ(p.state->d_a(), 3);
  EXPECT_EQ(p.state->d_b(), 2);
}

TEST(Scenario, SeedDeterminesRandomIngredients) {
  json doc = base_scenario();
  doc["state"] = {{"kind", "random"}};
  doc["u"] = {{"random", "u"}};
  const auto a = cli::parse_scenario(doc);
  const auto b = cli::parse_scenario(doc);
  EXPECT_EQ((a.u.value() - b.u.value()).norm(), 0.0);
  EXPECT_EQ((a.state->matrix() - b.state->matrix()).norm(), 0.0);
  const auto c = cli::parse_scenario(doc, {std::uint64_t{4}, std::nullopt});
  EXPECT_EQ(c.seed, 4u);
  EXPECT_GT((a.u.value() - c.u.value()).norm(), 1e-3);
}

TEST(Scenario, PathsAndOverrides) {
  json doc = base_scenario();
  doc["loops"] = json::parse(R"([
    {"kind": "fourier", "name": "f", "n_steps": 30, "components": [{"generator": 1, "sin": [0.4]}]},
    {"kind": "discrete", "steps": [{"exp": [0, 0.1, 0, 0]}, {"exp": [0, 0, 0.1, 0]}], "close": true}
  ])");
  const auto s = cli::parse_scenario(doc);
  ASSERT_EQ(s.paths.size(), 2u);
  EXPECT_EQ(s.paths[0].steps.size(), 30u);
  EXPECT_TRUE(s.paths[0].smooth.has_value());
  EXPECT_EQ(s.paths[1].steps.size(), 3u);
  EXPECT_LT(transport::closure_residual(s.paths[1].steps, 2), 1e-14);
  const auto overridden = cli::parse_scenario(doc, {std::nullopt, 12});
  EXPECT_EQ(overridden.paths[0].steps.size(), 12u);
  EXPECT_EQ(overridden.paths[1].steps.size(), 3u);
}

TEST(Scenario, RejectsMalformedDocuments) {
  json unknown = base_scenario();
  unknown["colour"] = 1;
  EXPECT_EQ(parse_error_code(unknown), ErrorCode::Schema);
  EXPECT_NE(parse_error_message(unknown).find("colour"), std::string::npos);

  json version = base_scenario();
  version["schema_version"] = 2;
  EXPECT_EQ(parse_error_code(version), ErrorCode::Schema);

  json missing = base_scenario();
  missing.erase("schema_version");
  EXPECT_EQ(parse_error_code(missing), ErrorCode::Schema);

  json non_unitary = base_scenario();
  non_unitary["u"] = {{"matrix", json::parse("[[1, 0], [0, 2]]")}};
  EXPECT_EQ(parse_error_code(non_unitary), ErrorCode::Schema);
  EXPECT_NE(parse_error_message(non_unitary).find("u"), std::string::npos);

  json wrong_dim = base_scenario();
  wrong_dim["d_a"] = 3;
  EXPECT_EQ(parse_error_code(wrong_dim), ErrorCode::Schema);

  json bad_kind = base_scenario();
  bad_kind["state"] = {{"kind", "thermal"}};
  EXPECT_EQ(parse_error_code(bad_kind), ErrorCode::Schema);

  json bad_path = base_scenario();
  bad_path["path"] = {{"kind", "fourier"}, {"components", {{{"generator", 1}, {"tan", {1}}}}}};
  EXPECT_NE(parse_error_message(bad_path).find("path.components[0].tan"), std::string::npos);

  json unnormalized = base_scenario();
  unnormalized["state"] = {{"kind", "schmidt"}, {"a", 0.8}, {"b", 0.8}};
  EXPECT_EQ(parse_error_code(unnormalized), ErrorCode::Unnormalized);
}

TEST(Commands, ReportsAndExitCodes) {
  json doc = base_scenario();
  doc["u"] = {{"random", "u"}};
  const auto s = cli::parse_scenario(doc);
  const json intensity = cli::cmd_intensity(s);
  EXPECT_LT(intensity["dual_formula_delta"].get<double>(), 1e-13);
  const json maximize = cli::cmd_maximize(s);
  EXPECT_GE(maximize["result"]["intensity"].get<double>(), intensity["intensity"].get<double>());
  EXPECT_EQ(maximize["result"]["status"], "unique-max");
  EXPECT_THROW(cli::cmd_levay_compare(s), Error);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::Schema), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::Unnormalized), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::SingularB), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::OpenLoop), 3);
}

TEST(Commands, TransportCsv) {
  json doc = base_scenario();
  doc["path"] = json::parse(R"({"kind": "fourier", "n_steps": 5, "components": [{"generator": 2, "slope": 0.2}]})");
  const json report = cli::cmd_transport(cli::parse_scenario(doc));
  const std::string csv = cli::transport_csv(report);
  EXPECT_EQ(csv.rfind("step,intensity,closure_residual\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Commands, IntensityExamples) {
  json doc = base_scenario();
  EXPECT_NEAR(cli::cmd_intensity(cli::parse_scenario(doc))["intensity"].get<double>(), 1.0, 1e-15);
  doc["u"] = {{"matrix", json::parse("[[0, 1], [1, 0]]")}};
  doc["v"] = {{"matrix", json::parse("[[0, 1], [1, 0]]")}};
  EXPECT_NEAR(cli::cmd_intensity(cli::parse_scenario(doc))["intensity"].get<double>(), 0.98, 1e-15);

  json werner = json::parse(R"({"schema_version": 1, "seed": 7, "state": {"kind": "werner", "p": 0.5},
                                "u": {"random": "u"}, "v": {"random": "u"}})");
  EXPECT_LT(cli::cmd_intensity(cli::parse_scenario(werner))["dual_formula_delta"].get<double>(), 1e-12);
}

TEST(Commands, MaximizeExamples) {
  json product = json::parse(R"({"schema_version": 1, "group": "u",
    "state": {"kind": "product", "rho_a": [[0.7, [0.1, 0.2]], [[0.1, -0.2], 0.3]],
                                 "rho_b": [[0.6, 0.1], [0.1, 0.4]]},
    "u": {"exp": [0, 0, 0, 0.3]}})");
  const auto s = cli::parse_scenario(product);
  const json report = cli::cmd_maximize(s);
  const Complex tr = (s.u.value() * s.state->reduced_a()).trace();
  const CMatrix expected = std::polar(1.0, -std::arg(tr)) * CMatrix::Identity(2, 2);
  EXPECT_LT((io::matrix_from_json(report["result"]["v"], "v") - expected).norm(), 1e-8);

  json schmidt = base_scenario();
  schmidt["u"] = {{"matrix", json::parse("[[0, 1], [1, 0]]")}};
  const json r = cli::cmd_maximize(cli::parse_scenario(schmidt));
  EXPECT_NEAR(r["result"]["intensity"].get<double>(), 0.98, 1e-12);
  EXPECT_LT(r["result"]["residual"].get<double>(), 1e-8);

  json zero = base_scenario();
  zero["state"] = {{"kind", "schmidt"}, {"a", 1.0}};
  zero["u"] = {{"matrix", json::parse("[[0, 1], [1, 0]]")}};
  EXPECT_EQ(cli::cmd_maximize(cli::parse_scenario(zero))["result"]["status"], "zero-interference");
}

TEST(Commands, HolonomyOfTrivialLoop) {
  json doc = base_scenario();
  doc["loops"] = json::parse(R"([{"kind": "discrete", "steps": ["identity", "identity"]},
                                 {"kind": "fourier", "n_steps": 40, "components": [{"generator": 1, "slope": 0.5}]}])");
  EXPECT_THROW(cli::cmd_holonomy(cli::parse_scenario(doc)), Error);
  doc["loops"].erase(1);
  const json report = cli::cmd_holonomy(cli::parse_scenario(doc));
  EXPECT_LT((io::matrix_from_json(report["loops"][0]["v"], "v") - CMatrix::Identity(2, 2)).norm(), 1e-10);
  EXPECT_EQ(report["loops"][0]["closure_residual"].get<double>(), 0.0);
}
