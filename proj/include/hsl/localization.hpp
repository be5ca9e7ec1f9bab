#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/learners.hpp"
#include "hsl/solvers.hpp"
#include "hsl/synthdata.hpp"

namespace hsl {

/// Log-concave constants. Defaults are the Gaussian values: disagreement is
/// exactly angle/pi, and 0.48 g <= 2 Phi(g) - 1 <= 0.8 g for g <= 1.
struct ScheduleConstants {
  double c1_upper = 1.0 / std::numbers::pi;
  double c1_lower = 1.0 / std::numbers::pi;
  double c2_upper = 0.8;
  double c2_lower = 0.48;
  double c3_prime = 4.0;
};

enum class ScheduleMode {
  theory,     // constants used verbatim
  practical,  // c0 = 1/4, c_gamma = 1, tau_k = gamma_k / 2
};

std::string to_string(ScheduleMode mode);

class LocalizationSchedule {
 public:
  LocalizationSchedule(ScheduleConstants constants, ScheduleMode mode, double eps,
                       std::optional<std::size_t> max_rounds = std::nullopt);

  [[nodiscard]] const ScheduleConstants& constants() const noexcept { return constants_; }
  [[nodiscard]] ScheduleMode mode() const noexcept { return mode_; }
  [[nodiscard]] double eps() const noexcept { return eps_; }

  [[nodiscard]] double c_gamma() const noexcept { return c_gamma_; }
  [[nodiscard]] double c0() const noexcept { return c0_; }
  /// ceil(log2(C1_upper pi / eps)) - 1, at least 1, capped by max_rounds.
  [[nodiscard]] std::size_t rounds() const noexcept { return rounds_; }
  /// The uncapped round count.
  [[nodiscard]] std::size_t rounds_uncapped() const noexcept { return rounds_uncapped_; }

  [[nodiscard]] double alpha(std::size_t k) const;  // 2^-k pi
  [[nodiscard]] double gamma(std::size_t k) const;  // c_gamma alpha_k
  [[nodiscard]] double tau(std::size_t k) const;

  /// Tolerance function g(z) = scale z^exponent evaluated at c0.
  [[nodiscard]] double g_c0(double scale = 1.0, double exponent = 4.0) const;

 private:
  ScheduleConstants constants_;
  ScheduleMode mode_;
  double eps_;
  double c_gamma_;
  double c0_;
  std::size_t rounds_;
  std::size_t rounds_uncapped_;
};

struct RoundRequest {
  std::size_t round = 1;
  Hyperplane w;
  double alpha = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double delta = 0.0;
};

struct RoundDiagnostics {
  std::size_t round = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  std::size_t band_samples = 0;
  std::size_t raw_draws = 0;
  double hinge_objective = 0.0;
  double angle_step = 0.0;  // angle(w_{k+1}, w_k)
  std::optional<double> angle_before;  // angle(w_k, w*), when w* is known
  std::optional<double> angle_after;   // angle(w_{k+1}, w*)
  std::optional<double> target_band_error;  // err of h_{w*} on the band sample
  // Polynomial step only.
  std::optional<double> step1_target;        // (1 - 2 nu) g(c0)
  std::optional<double> poly_train_error;
  std::optional<double> pseudo_label_disagreement;  // h_{w_{k+1}} vs f_{k+1} on the band
};

struct OracleOutcome {
  Hyperplane w;
  RoundDiagnostics diagnostics;
};

using BandOracle = std::function<OracleOutcome(const RoundRequest&)>;

struct LocalizationResult {
  Hyperplane w;
  std::vector<RoundDiagnostics> rounds;
};

/// Runs the rounds k = 1..r, each asking the oracle for w_{k+1} given
/// (w_k, gamma_k, alpha_k, delta / r).
LocalizationResult localize(const LocalizationSchedule& schedule, const BandOracle& oracle,
                            const Hyperplane& w1, double delta,
                            const std::optional<Hyperplane>& w_star = std::nullopt);

struct BandSample {
  Dataset samples;
  std::size_t raw_draws = 0;
};

/// Draws until `quota` instances fall in |w . x| <= gamma. The draw cap is
/// 50 quota / (2 Phi(gamma) - 1); exceeding it throws InsufficientBandSamples.
BandSample fill_band(Sampler& sampler, const Hyperplane& w, double gamma, std::size_t quota);

struct HingeBandOptions {
  std::size_t quota = 4000;
  HingeOptions hinge;
};

OracleOutcome band_oracle_hinge(Sampler& sampler, const RoundRequest& request,
                                const HingeBandOptions& options,
                                const std::optional<Hyperplane>& w_star = std::nullopt);

struct PolyHingeBandOptions {
  std::size_t quota = 4000;       // each of the two band samples
  std::size_t degree = 3;
  double nu = 0.0;
  double g_c0 = 0.0;              // g(c0), only reported through step1_target
  HingeOptions hinge;
};

OracleOutcome band_oracle_poly_hinge(Sampler& sampler, const RoundRequest& request,
                                     const PolyHingeBandOptions& options,
                                     const std::optional<Hyperplane>& w_star = std::nullopt);

}  // namespace hsl
