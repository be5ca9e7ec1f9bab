#include <algorithm>
#include <cmath>

#include "hsl/solvers.hpp"

namespace hsl {

namespace {

/// Objective and one subgradient at v, in a single pass over the samples.
double objective_and_subgradient(const HingeProblem& problem, std::span<const double> v,
                                 std::vector<double>& grad) {
  const Dataset& S = problem.samples;
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto x = S.x(i);
    const double z = 1.0 - S.y(i) * dot(v, x) / problem.tau;
    if (z > 0.0) {
      loss += z;
      const double coef = S.y(i) / problem.tau;
      for (std::size_t j = 0; j < grad.size(); ++j) grad[j] -= coef * x[j];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(S.size());
  for (double& g : grad) g *= inv_n;
  return loss * inv_n;
}

}  // namespace

double hinge_objective(const HingeProblem& problem, std::span<const double> v) {
  const Dataset& S = problem.samples;
  if (S.empty()) return 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    loss += std::max(0.0, 1.0 - S.y(i) * dot(v, S.x(i)) / problem.tau);
  }
  return loss / static_cast<double>(S.size());
}

// Step size R / (G sqrt(t)). Besides the plain iterates, the average of the last
// half of the iterates is evaluated at every step, and the best point seen is
// returned. Every candidate of a budget T is also a candidate of any larger
// budget, so the returned objective never increases with the budget.
HingeResult minimize_hinge(const HingeProblem& problem, const HingeOptions& options) {
  const Dataset& S = problem.samples;
  const std::size_t d = problem.K.axis.dim();
  if (S.dim() != d) throw DimensionMismatch(d, S.dim());
  if (!(problem.tau > 0.0)) throw std::invalid_argument("minimize_hinge: tau must be positive");

  std::vector<double> v = project_cone_cap(problem.K.axis.w(), problem.K);
  HingeResult best{v, hinge_objective(problem, v)};
  if (S.empty() || options.iterations == 0) return best;

  double max_norm = 0.0;
  for (std::size_t i = 0; i < S.size(); ++i) max_norm = std::max(max_norm, norm2(S.x(i)));
  const double G = max_norm / problem.tau;
  if (!(G > 0.0)) return best;

  const std::size_t T = options.iterations;
  std::vector<double> prefix((T + 1) * d, 0.0);  // prefix[t] = v_1 + ... + v_t
  std::vector<double> grad(d), avg(d);

  for (std::size_t t = 1; t <= T; ++t) {
    const double f = objective_and_subgradient(problem, v, grad);
    if (f < best.objective) best = {v, f};
    for (std::size_t j = 0; j < d; ++j) prefix[t * d + j] = prefix[(t - 1) * d + j] + v[j];

    if (t >= 2) {
      const std::size_t from = t / 2;  // average of v_{from+1} .. v_t
      const double count = static_cast<double>(t - from);
      for (std::size_t j = 0; j < d; ++j) avg[j] = (prefix[t * d + j] - prefix[from * d + j]) / count;
      std::vector<double> candidate = project_cone_cap(avg, problem.K);
      const double fa = hinge_objective(problem, candidate);
      if (fa < best.objective) best = {std::move(candidate), fa};
    }

    const double eta = options.set_radius / (G * std::sqrt(static_cast<double>(t)));
    for (std::size_t j = 0; j < d; ++j) v[j] -= eta * grad[j];
    v = project_cone_cap(v, problem.K);
  }
  return best;
}

}  // namespace hsl
