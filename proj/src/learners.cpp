#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsl/errors.hpp"
#include "hsl/learners.hpp"
#include "hsl/solvers.hpp"

namespace hsl {

Label Classifier::predict(std::span<const double> x) const {
  return std::visit(
      [&](const auto& m) -> Label {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Hyperplane>) {
          return hsl::classify(m, x);
        } else {
          return m.classify(x);
        }
      },
      model_);
}

std::size_t Classifier::dim() const {
  if (const auto* h = halfspace()) return h->dim();
  return poly_threshold()->p.dim();
}

double empirical_error(const Classifier& f, const Dataset& S) {
  if (S.empty()) throw std::invalid_argument("empirical_error: empty sample");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < S.size(); ++i) wrong += f.predict(S.x(i)) != S.y(i);
  return static_cast<double>(wrong) / static_cast<double>(S.size());
}

std::size_t realizable_sample_bound(std::size_t d, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("realizable_sample_bound: eps and delta must lie in (0, 1)");
  }
  const double m = (4.0 / eps) * (static_cast<double>(d) * std::log(12.0 / eps) + std::log(2.0 / delta));
  return static_cast<std::size_t>(std::ceil(m));
}

std::optional<Hyperplane> train_lp_realizable(const Dataset& S) {
  if (S.empty()) throw std::invalid_argument("train_lp_realizable: empty sample");
  LinearConstraintSystem sys(S.dim());
  std::vector<double> row(S.dim());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto x = S.x(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = S.y(i) * x[j];
    sys.add_row(row, 1.0);
  }
  auto v = lp_feasible(sys);
  if (!v) return std::nullopt;
  return normalize(*v);
}

KearnsLiResult train_kearns_li(Sampler& sampler, std::size_t d, double eps, double delta,
                               const KearnsLiOptions& options) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("train_kearns_li: eps and delta must lie in (0, 1)");
  }
  if (sampler.dim() != d) throw DimensionMismatch(d, sampler.dim());
  const std::size_t m = realizable_sample_bound(d, eps / 4.0, 0.5);
  const double r_theory = static_cast<double>(m) * static_cast<double>(m) * std::log(2.0 / delta);
  const auto r = static_cast<std::size_t>(
      std::max(1.0, std::min(std::ceil(r_theory), static_cast<double>(options.repetition_cap))));

  std::vector<Hyperplane> candidates;
  for (std::size_t i = 0; i < r; ++i) {
    const Dataset S = draw(sampler, m);
    if (auto h = train_lp_realizable(S)) candidates.push_back(std::move(*h));
  }
  if (candidates.empty()) throw NoCandidate();

  const auto m_val = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(r) / delta) / eps));
  const Dataset validation = draw(sampler, std::max<std::size_t>(m_val, 1));
  std::size_t best = 0;
  double best_err = 2.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double e = empirical_error(candidates[i], validation);
    if (e < best_err) {
      best_err = e;
      best = i;
    }
  }
  return {candidates[best], m, r_theory, r, candidates.size(), validation.size(), best_err};
}

Hyperplane train_averaging(const Dataset& S) {
  if (S.empty()) throw ZeroVector();
  std::vector<double> mean(S.dim(), 0.0);
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto x = S.x(i);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += S.y(i) * x[j];
  }
  for (double& c : mean) c /= static_cast<double>(S.size());
  return normalize(mean);
}

ThresholdChoice select_threshold(std::span<const double> values, std::span<const Label> labels) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("select_threshold: empty input");
  if (labels.size() != n) throw DimensionMismatch(n, labels.size());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> candidates{-1.0, 1.0};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mid = 0.5 * (values[order[i]] + values[order[i + 1]]);
    candidates.push_back(std::clamp(mid, -1.0, 1.0));
  }
  std::sort(candidates.begin(), candidates.end());

  // Sorted sweep: `below` values are < theta and predicted -1, the rest +1.
  std::size_t total_neg = 0;
  for (Label y : labels) total_neg += y < 0;
  std::size_t below = 0, pos_below = 0, neg_below = 0;
  ThresholdChoice best{candidates.front(), 2.0};
  for (double theta : candidates) {
    while (below < n && values[order[below]] < theta) {
      (labels[order[below]] > 0 ? pos_below : neg_below) += 1;
      ++below;
    }
    const std::size_t errors = pos_below + (total_neg - neg_below);
    const double err = static_cast<double>(errors) / static_cast<double>(n);
    if (err < best.error) best = {theta, err};
  }
  return best;
}

PolyRegressionResult train_poly_regression(const Dataset& S, std::size_t degree) {
  const std::size_t features = monomial_count(S.dim(), degree);
  if (features > kMaxMonomials) throw FeatureBlowup(features);
  if (S.size() < features) {
    throw std::invalid_argument("train_poly_regression: need at least C(d+k, k) samples");
  }
  const Matrix phi = expand_monomials(S.instances(), degree);
  std::vector<double> targets(S.labels().begin(), S.labels().end());
  std::vector<double> coeffs = l1_fit(phi, targets);

  std::vector<double> values(S.size());
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    values[i] = dot(phi.row(i), coeffs);
    abs_sum += std::abs(values[i] - targets[i]);
  }
  const ThresholdChoice t = select_threshold(values, S.labels());

  std::size_t wrong = 0;
  for (std::size_t i = 0; i < S.size(); ++i) wrong += sign_label(values[i] - t.theta) != S.y(i);
  const double n = static_cast<double>(S.size());
  if (2.0 * static_cast<double>(wrong) > abs_sum * (1.0 + 1e-12)) {
    throw NumericalBreakdown("threshold error exceeds half the L1 error");
  }
  return {PolyThreshold{Polynomial(S.dim(), degree, std::move(coeffs)), t.theta}, abs_sum / n,
          static_cast<double>(wrong) / n};
}

ValidatedChoice repeat_and_validate(const std::function<Classifier(std::size_t)>& trainer,
                                    std::size_t runs, const Dataset& validation) {
  if (runs == 0) throw std::invalid_argument("repeat_and_validate: runs must be >= 1");
  if (validation.empty()) throw std::invalid_argument("repeat_and_validate: empty validation set");
  std::optional<Classifier> best;
  std::size_t best_run = 0;
  std::vector<double> errors;
  for (std::size_t i = 0; i < runs; ++i) {
    Classifier c = trainer(i);
    const double e = empirical_error(c, validation);
    errors.push_back(e);
    if (!best || e < errors[best_run]) {
      best = std::move(c);
      best_run = i;
    }
  }
  return {std::move(*best), best_run, std::move(errors)};
}

}  // namespace hsl
