#include <algorithm>
#include <cmath>
#include <limits>

#include "hsl/errors.hpp"
#include "hsl/solvers.hpp"

namespace hsl {

void LinearConstraintSystem::add_row(std::span<const double> a, double b) {
  if (a.size() != dim()) throw DimensionMismatch(dim(), a.size());
  a_.append_row(a);
  b_.push_back(b);
}

double LinearConstraintSystem::min_slack(std::span<const double> v) const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows(); ++i) worst = std::min(worst, dot(a(i), v) - b(i));
  return worst;
}

// The slack-minimization problem  min_v sum_i max(0, b_i - a_i . v)  is solved
// through its dual  max sum_i b_i y_i  s.t.  sum_i y_i a_i = 0,  0 <= y <= 1.
// The dual has only dim() equality rows; its optimal row multipliers are an
// optimal v, and the optimal value is the total violation.
std::optional<std::vector<double>> lp_feasible(const LinearConstraintSystem& sys) {
  const std::size_t m = sys.rows();
  const std::size_t d = sys.dim();
  if (m == 0) throw std::invalid_argument("lp_feasible: system has no rows");

  BoundedLp lp;
  lp.M = Matrix(d, m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto a = sys.a(i);
    for (std::size_t j = 0; j < d; ++j) lp.M(j, i) = a[j];
  }
  lp.rhs.assign(d, 0.0);
  lp.cost.resize(m);
  for (std::size_t i = 0; i < m; ++i) lp.cost[i] = sys.b(i);
  lp.lower.assign(m, 0.0);
  lp.upper.assign(m, 1.0);

  SimplexOptions options;
  options.max_iterations = 10 * (m + d) * (m + d);
  // Any y in the box with sum y_i a_i = 0 and positive objective is a Farkas
  // certificate, so the search can stop there.
  options.objective_target = kInfeasibilityCertificate;
  const BoundedLpResult res = solve_bounded_lp(lp, options);
  if (res.status == BoundedLpResult::Status::target_reached) return std::nullopt;
  if (res.status != BoundedLpResult::Status::optimal) {
    throw NumericalBreakdown("dual of the slack problem reported infeasible");
  }
  std::vector<double> v = res.duals;
  if (sys.min_slack(v) >= -kFeasibilitySlack) return v;
  if (res.objective > 1e-9) return std::nullopt;  // below the certificate level but still positive
  throw NumericalBreakdown("zero total violation but the recovered point violates a row");
}

// min_c sum_i |phi_i . c - t_i| is dual to  max t . lambda  s.t.  Phi^T lambda = 0,
// -1 <= lambda <= 1; the coefficients are the row multipliers.
std::vector<double> l1_fit(const Matrix& features, std::span<const double> targets) {
  const std::size_t n = features.rows();
  const std::size_t p = features.cols();
  if (n == 0 || p == 0) throw std::invalid_argument("l1_fit: need at least one sample and one feature");
  if (targets.size() != n) throw DimensionMismatch(n, targets.size());

  BoundedLp lp;
  lp.M = Matrix(p, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto phi = features.row(i);
    for (std::size_t j = 0; j < p; ++j) lp.M(j, i) = phi[j];
  }
  lp.rhs.assign(p, 0.0);
  lp.cost.assign(targets.begin(), targets.end());
  lp.lower.assign(n, -1.0);
  lp.upper.assign(n, 1.0);

  SimplexOptions options;
  options.max_iterations = 10 * (n + p) * (n + p);
  const BoundedLpResult res = solve_bounded_lp(lp, options);
  if (res.status != BoundedLpResult::Status::optimal) {
    throw NumericalBreakdown("l1_fit dual reported infeasible");
  }
  return res.duals;
}

double l1_objective(const Matrix& features, std::span<const double> targets, std::span<const double> c) {
  if (targets.size() != features.rows()) throw DimensionMismatch(features.rows(), targets.size());
  if (c.size() != features.cols()) throw DimensionMismatch(features.cols(), c.size());
  double s = 0.0;
  for (std::size_t i = 0; i < features.rows(); ++i) s += std::abs(dot(features.row(i), c) - targets[i]);
  return s / static_cast<double>(features.rows());
}

}  // namespace hsl
