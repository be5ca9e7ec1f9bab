// Command-line front end: generate, run, properties, sweep.
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration error,
// 3 learner failure, 4 failed property check.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsl/errors.hpp"
#include "hsl/evaluation.hpp"
#include "hsl/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kConfig = 2;
constexpr int kLearner = 3;
constexpr int kProperty = 4;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hsl::IoError("cannot open config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw hsl::ConfigError(path + ": " + e.what());
  }
}

hsl::ExperimentConfig config_from(const std::string& path, std::optional<std::uint64_t> seed) {
  hsl::ExperimentConfig cfg = hsl::parse_config(read_json(path));
  if (seed) cfg.seed = *seed;
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hsl::IoError("cannot write " + path);
  out << text;
  if (!out) throw hsl::IoError("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-robust halfspace learning experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path, marginal = "gaussian";
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1, d = 10, n = 200000;

  auto* gen = app.add_subcommand("generate", "Write the training set a config describes as CSV");
  gen->add_option("--config", config_path, "Experiment config (JSON)")->required();
  gen->add_option("--out", out_path, "Output CSV path")->required();
  gen->add_option("--seed", seed, "Override the config seed");

  auto* run = app.add_subcommand("run", "Generate, train, evaluate and print a JSON report");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_path, "Also write the report to this path");
  run->add_option("--seed", seed, "Override the config seed");

  auto* props = app.add_subcommand("properties", "Empirical log-concave property checks (JSON lines)");
  props->add_option("--marginal", marginal, "gaussian | uniform_ball")
      ->check(CLI::IsMember({"gaussian", "uniform_ball", "scaled_stub"}));
  props->add_option("--d", d, "Dimension")->check(CLI::PositiveNumber);
  props->add_option("--n", n, "Sample count");
  props->add_option("--seed", seed, "Seed (default 1)");
  props->add_option("--out", out_path, "Also write the report to this path");

  auto* sweep = app.add_subcommand("sweep", "Run a one-parameter sweep and print CSV");
  sweep->add_option("--config", config_path, "Sweep config (JSON with one {\"sweep\": [...]} value)")->required();
  sweep->add_option("--out", out_path, "Also write the CSV to this path");
  sweep->add_option("--seed", seed, "Run only this seed");
  sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*gen) {
      const hsl::ExperimentConfig cfg = config_from(config_path, seed);
      hsl::write_dataset_csv(hsl::training_set(cfg), out_path);
      return kOk;
    }
    if (*run) {
      const hsl::ExperimentConfig cfg = config_from(config_path, seed);
      const hsl::RunOutcome outcome = hsl::run_experiment(cfg);
      const std::string text = outcome.report.dump(2) + "\n";
      std::cout << text;
      if (!out_path.empty()) write_text(out_path, text);
      return kOk;
    }
    if (*props) {
      hsl::MarginalSpec spec{hsl::MarginalKind::gaussian, d};
      if (marginal == "uniform_ball") spec.kind = hsl::MarginalKind::uniform_ball;
      if (marginal == "scaled_stub") spec.kind = hsl::MarginalKind::scaled_stub;
      const hsl::PropertyReport report = hsl::check_logconcave_properties(spec, n, seed.value_or(1));
      const std::string text = report.to_json_lines();
      std::cout << text;
      if (!out_path.empty()) write_text(out_path, text);
      return report.all_passed() ? kOk : kProperty;
    }
    if (*sweep) {
      const hsl::SweepPlan plan = hsl::plan_sweep(read_json(config_path), seed);
      const std::string text = hsl::sweep_csv(hsl::run_sweep(plan, threads));
      std::cout << text;
      if (!out_path.empty()) write_text(out_path, text);
      return kOk;
    }
  } catch (const hsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const hsl::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const hsl::Error& e) {
    std::cerr << "learner error: " << e.what() << "\n";
    return kLearner;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
