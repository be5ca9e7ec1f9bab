#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsl/evaluation.hpp"
#include "hsl/localization.hpp"
#include "hsl/synthdata.hpp"

namespace hsl {

enum class LearnerKind { lp, kearns_li, averaging, poly, localize_hinge, localize_poly_hinge };

std::string to_string(LearnerKind kind);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::averaging;
  std::size_t degree = 3;             // poly, localize_poly_hinge
  std::size_t runs = 1;               // poly: repetitions validated on a held-out set
  std::size_t validation_size = 2000; // poly with runs > 1
  std::size_t repetition_cap = 2000;  // kearns_li
};

struct ScheduleConfig {
  ScheduleMode mode = ScheduleMode::practical;
  ScheduleConstants constants;
  std::size_t quota = 4000;
  std::size_t hinge_iterations = 200;
  double step_radius = 1.0;
  std::optional<std::size_t> max_rounds;
  double g_scale = 1.0;
  double g_exponent = 4.0;
};

struct ExperimentConfig {
  MarginalSpec marginal{MarginalKind::gaussian, 10};
  NoiseSpec noise;
  LearnerConfig learner;
  ScheduleConfig schedule;
  std::size_t n_train = 10000;
  std::size_t n_eval = 100000;
  double eps = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 1;
  std::optional<std::vector<double>> w_star;  // nullopt: random from the seed
  std::size_t block_size = ExampleStream::kDefaultBlock;
};

/// Strict parse: unknown keys and out-of-range values throw ConfigError naming the key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

Hyperplane target_hyperplane(const ExperimentConfig& cfg);

struct RunOutcome {
  nlohmann::ordered_json report;
  ErrorEstimate error;
  std::optional<double> angle;
  double wall_ms = 0.0;
};

/// generate -> train -> evaluate. Learner failures propagate as hsl::Error.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// The training set a config describes (what `generate` writes).
Dataset training_set(const ExperimentConfig& cfg);

struct SweepRow {
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  std::string learner;
  double mc_error = 0.0;
  double ci_radius = 0.0;
  std::optional<double> angle;
  double wall_ms = 0.0;
  std::string error;  // learner failure message, empty on success
};

struct SweepPlan {
  std::string parameter;  // JSON pointer of the swept value
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<nlohmann::json> learners;
  nlohmann::json base;
};

/// Exactly one leaf of the form {"sweep": [...]}; otherwise ConfigError.
SweepPlan plan_sweep(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = std::nullopt);
std::vector<SweepRow> run_sweep(const SweepPlan& plan, std::size_t threads = 1);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace hsl
