#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "holonomy/cli/commands.hpp"
#include "holonomy/serialization.hpp"

namespace {

using nlohmann::json;
using namespace holonomy;

struct Args {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
};

void configure_logging() {
  spdlog::set_default_logger(spdlog::default_logger()->clone("holonomy"));
  spdlog::set_level(spdlog::level::warn);
  const char* level = std::getenv("HOLONOMY_LOG_LEVEL");
  if (!level) return;
  const std::string name = level;
  if (name == "error" || name == "warn" || name == "info" || name == "debug") {
    spdlog::set_level(spdlog::level::from_str(name));
  } else {
    spdlog::warn("ignoring HOLONOMY_LOG_LEVEL={}, expected error|warn|info|debug", name);
  }
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Schema, "scenario: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("scenario: ") + e.what());
  }
}

void emit(const json& report, const std::string& out) {
  const std::string text = io::dump(report) + "\n";
  if (out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream file(out);
  if (!file) throw Error(ErrorCode::Schema, "out: cannot write " + out);
  file << text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::Schema, "outputs.csv: cannot write " + path);
  file << text;
}

int run(const std::string& verb, const Args& args) {
  const auto start = std::chrono::steady_clock::now();
  json report;
  if (verb == "selftest") {
    report = cli::cmd_selftest(args.seed.value_or(20260101));
    emit(report, args.out);
    return report.at("failed").get<int>() == 0 ? 0 : 1;
  }
  if (args.scenario.empty()) throw Error(ErrorCode::Schema, "scenario: --scenario is required");
  const cli::Scenario scenario = cli::parse_scenario(load_document(args.scenario), {args.seed, args.steps});
  spdlog::debug("{}: seed {} group {}", verb, scenario.seed, to_string(scenario.group));
  if (verb == "intensity") {
    report = cli::cmd_intensity(scenario);
  } else if (verb == "maximize") {
    report = cli::cmd_maximize(scenario);
  } else if (verb == "transport") {
    report = cli::cmd_transport(scenario);
    if (scenario.csv) write_text(*scenario.csv, cli::transport_csv(report));
  } else if (verb == "holonomy") {
    report = cli::cmd_holonomy(scenario);
  } else {
    report = cli::cmd_levay_compare(scenario);
  }
  report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(report, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Two-photon interferometer transport and holonomy"};
  app.require_subcommand(1);
  Args args;
  std::uint64_t seed = 0;
  int steps = 0;
  for (const char* verb : {"intensity", "maximize", "transport", "holonomy", "levay-compare", "selftest"}) {
    CLI::App* sub = app.add_subcommand(verb);
    if (std::string(verb) != "selftest") {
      sub->add_option("--scenario", args.scenario, "scenario JSON file")->required();
      sub->add_option("--steps", steps, "override the step count of Fourier paths")->check(CLI::PositiveNumber);
    }
    sub->add_option("--out", args.out, "write the JSON report here instead of stdout");
    sub->add_option("--seed", seed, "override the scenario seed");
  }
  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) args.seed = seed;
  if (chosen->get_name() != "selftest" && chosen->count("--steps") > 0) args.steps = steps;
  try {
    return run(chosen->get_name(), args);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    const json error = {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    std::cout << io::dump(error) << "\n";
    return cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    const json error = {{"error", {{"code", "internal"}, {"message", e.what()}}}};
    std::cout << io::dump(error) << "\n";
    return 3;
  }
}
