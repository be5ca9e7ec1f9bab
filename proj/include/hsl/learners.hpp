#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/matrix.hpp"
#include "hsl/synthdata.hpp"

namespace hsl {

inline constexpr std::size_t kMaxMonomials = 1'000'000;

/// C(d + k, k), saturating at SIZE_MAX.
std::size_t monomial_count(std::size_t d, std::size_t k);

/// Exponent tuples of total degree <= k in graded-lex order, constant first.
std::vector<std::vector<unsigned>> monomial_exponents(std::size_t d, std::size_t k);

/// All monomials of x with total degree <= k, in the order of monomial_exponents.
std::vector<double> expand_monomials(std::span<const double> x, std::size_t k);
Matrix expand_monomials(const Matrix& X, std::size_t k);

class Polynomial {
 public:
  Polynomial(std::size_t d, std::size_t degree, std::vector<double> coefficients);

  [[nodiscard]] std::size_t dim() const noexcept { return d_; }
  [[nodiscard]] std::size_t degree() const noexcept { return degree_; }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] const std::vector<std::vector<unsigned>>& exponents() const noexcept { return exponents_; }

  double operator()(std::span<const double> x) const;

 private:
  std::size_t d_;
  std::size_t degree_;
  std::vector<std::vector<unsigned>> exponents_;
  std::vector<double> coeffs_;
};

/// sign(p(x) - theta) with sign(0) = +1.
struct PolyThreshold {
  Polynomial p;
  double theta = 0.0;

  [[nodiscard]] Label classify(std::span<const double> x) const { return sign_label(p(x) - theta); }
};

/// Either kind of trained model behind one prediction interface.
class Classifier {
 public:
  Classifier(Hyperplane h) : model_(std::move(h)) {}        // NOLINT(google-explicit-constructor)
  Classifier(PolyThreshold f) : model_(std::move(f)) {}     // NOLINT(google-explicit-constructor)

  [[nodiscard]] Label predict(std::span<const double> x) const;
  [[nodiscard]] std::size_t dim() const;

  [[nodiscard]] const Hyperplane* halfspace() const { return std::get_if<Hyperplane>(&model_); }
  [[nodiscard]] const PolyThreshold* poly_threshold() const { return std::get_if<PolyThreshold>(&model_); }

 private:
  std::variant<Hyperplane, PolyThreshold> model_;
};

// --- sample sizes -----------------------------------------------------------

/// ceil((4/eps) (d ln(12/eps) + ln(2/delta))).
std::size_t realizable_sample_bound(std::size_t d, double eps, double delta);

// --- realizable LP and the small-noise reduction ---------------------------

/// A halfspace with zero training error, or nullopt when none exists.
std::optional<Hyperplane> train_lp_realizable(const Dataset& S);

struct KearnsLiOptions {
  std::size_t repetition_cap = 2000;
};

struct KearnsLiResult {
  Hyperplane h;
  std::size_t sample_size = 0;           // m
  double repetitions_theoretical = 0.0;  // m^2 ln(2/delta), uncapped
  std::size_t repetitions = 0;           // oracle calls actually made
  std::size_t candidates = 0;            // feasible oracle calls
  std::size_t validation_size = 0;       // m'
  double validation_error = 0.0;
};

/// Throws NoCandidate if every oracle call is infeasible.
KearnsLiResult train_kearns_li(Sampler& sampler, std::size_t d, double eps, double delta,
                               const KearnsLiOptions& options = {});

// --- Averaging --------------------------------------------------------------

/// normalize(E_S[y x]); throws ZeroVector if the mean vanishes.
Hyperplane train_averaging(const Dataset& S);

// --- L1 polynomial regression -----------------------------------------------

struct ThresholdChoice {
  double theta = 0.0;
  double error = 0.0;
};

/// Threshold in [-1, 1] minimizing the empirical error of sign(value - theta);
/// ties go to the smallest theta.
ThresholdChoice select_threshold(std::span<const double> values, std::span<const Label> labels);

struct PolyRegressionResult {
  PolyThreshold f;
  double l1_error = 0.0;     // E_S |p(x) - y|
  double train_error = 0.0;  // err_S(f)
};

/// L1 fit of a degree-k polynomial to the labels, then the best threshold.
/// Throws NumericalBreakdown if err_S(f) > E_S|p(x) - y| / 2.
PolyRegressionResult train_poly_regression(const Dataset& S, std::size_t degree);

struct ValidatedChoice {
  Classifier classifier;
  std::size_t run = 0;
  std::vector<double> validation_errors;
};

/// Trains `runs` candidates (trainer receives the run index) and keeps the one
/// with the lowest validation error, ties to the lowest run index.
ValidatedChoice repeat_and_validate(const std::function<Classifier(std::size_t)>& trainer,
                                    std::size_t runs, const Dataset& validation);

/// err_S(f) as an exact fraction of mismatches.
double empirical_error(const Classifier& f, const Dataset& S);

}  // namespace hsl
