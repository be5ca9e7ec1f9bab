#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/learners.hpp"
#include "hsl/synthdata.hpp"

namespace hsl {

/// 95% Hoeffding radius sqrt(ln(2 / 0.05) / (2 n)).
double hoeffding_radius(std::size_t n);

/// Standard normal CDF.
double normal_cdf(double z);

struct ErrorEstimate {
  double value = 0.0;
  std::size_t n = 0;
  double ci_radius = 0.0;
};

/// err_D(f) estimated on n fresh examples from (marginal, w*, noise).
ErrorEstimate mc_error(const Classifier& f, const MarginalSpec& marginal, const Hyperplane& w_star,
                       const NoiseSpec& noise, std::size_t n, std::uint64_t seed);

/// Fraction of rows of X on which f and g disagree.
double disagreement(const Classifier& f, const Classifier& g, const Matrix& X);

struct PropertyCheck {
  std::string name;
  double statistic = 0.0;
  double bound = 0.0;
  std::optional<bool> pass;  // empty when the check is underpowered
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string note;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  /// True iff no powered check failed.
  [[nodiscard]] bool all_passed() const;
  /// One JSON object per line: name, statistic, bound, pass, n, seed (+ note).
  [[nodiscard]] std::string to_json_lines() const;
};

inline constexpr std::size_t kMinPoweredSamples = 1000;

/// Empirical checks of the isotropic log-concave properties: isotropy, norm
/// tail, disagreement vs angle, band mass, and disagreement outside the band.
PropertyReport check_logconcave_properties(const MarginalSpec& marginal, std::size_t n, std::uint64_t seed);

/// Pr[|w . x| <= gamma] for the marginal (exact 1-D marginal of the preset).
double band_mass(const MarginalSpec& marginal, double gamma);

/// Checks (1 - 2 nu) dis <= err(h) - err(h*) <= dis and the variance identity
/// E[(err_h - err_h*)^2] = dis on one shared stream with bounded-noise labels.
PropertyReport check_excess_sandwich(const Classifier& h, const Hyperplane& w_star, double nu,
                                     const MarginalSpec& marginal, const RateFn& rate_fn,
                                     std::size_t n, std::uint64_t seed);

}  // namespace hsl
