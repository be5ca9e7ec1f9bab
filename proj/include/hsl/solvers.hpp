#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/matrix.hpp"
#include "hsl/synthdata.hpp"

namespace hsl {

// ---------------------------------------------------------------------------
// Bounded-variable simplex core.
//
//   maximize  cost . y   subject to   M y = rhs,   lower <= y <= upper
//
// Dense tableau of size rows(M) x (cols(M) + rows(M)), largest-reduced-cost
// pricing that falls back to Bland's rule after a run of degenerate steps,
// artificial-variable phase 1. The row
// multipliers of the optimal basis are returned in `duals`.
// ---------------------------------------------------------------------------

struct BoundedLp {
  Matrix M;
  std::vector<double> rhs;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  std::size_t max_iterations = 0;  // 0: derived from the problem size
  // Stop phase 2 once the objective reaches this value (status target_reached).
  std::optional<double> objective_target;
};

struct BoundedLpResult {
  enum class Status { optimal, infeasible, target_reached };
  Status status = Status::optimal;
  std::vector<double> y;
  std::vector<double> duals;
  double objective = 0.0;
  std::size_t iterations = 0;
};

BoundedLpResult solve_bounded_lp(const BoundedLp& lp, const SimplexOptions& options = {});

// ---------------------------------------------------------------------------
// LP feasibility: rows a . v >= b.
// ---------------------------------------------------------------------------

class LinearConstraintSystem {
 public:
  explicit LinearConstraintSystem(std::size_t dim) : a_(0, dim) {}

  void add_row(std::span<const double> a, double b);

  [[nodiscard]] std::size_t dim() const noexcept { return a_.cols(); }
  [[nodiscard]] std::size_t rows() const noexcept { return b_.size(); }
  [[nodiscard]] std::span<const double> a(std::size_t i) const { return a_.row(i); }
  [[nodiscard]] double b(std::size_t i) const { return b_[i]; }

  /// min_i (a_i . v - b_i); nonnegative iff v satisfies every row.
  [[nodiscard]] double min_slack(std::span<const double> v) const;

 private:
  Matrix a_;
  std::vector<double> b_;
};

inline constexpr double kFeasibilitySlack = 1e-7;
/// Objective level at which the dual ray proves a system infeasible.
inline constexpr double kInfeasibilityCertificate = 1e-6;

/// A point with slack >= -1e-7 on every row, or nullopt when the system is
/// infeasible. Throws NumericalBreakdown if the simplex stalls.
std::optional<std::vector<double>> lp_feasible(const LinearConstraintSystem& sys);

/// Coefficients c minimizing (1/n) sum_i |features_i . c - targets_i|.
std::vector<double> l1_fit(const Matrix& features, std::span<const double> targets);

/// (1/n) sum_i |features_i . c - targets_i|.
double l1_objective(const Matrix& features, std::span<const double> targets, std::span<const double> c);

// ---------------------------------------------------------------------------
// Hinge loss minimization over a cone-cap.
// ---------------------------------------------------------------------------

struct HingeProblem {
  Dataset samples;
  double tau;
  ConeCap K;
};

struct HingeOptions {
  std::size_t iterations = 200;
  double set_radius = 1.0;  // R in the step size R / (G sqrt(t))
};

struct HingeResult {
  std::vector<double> v;
  double objective = 0.0;
};

/// E_S[max(0, 1 - y (v . x) / tau)].
double hinge_objective(const HingeProblem& problem, std::span<const double> v);

/// Projected subgradient descent started at the cone axis.
HingeResult minimize_hinge(const HingeProblem& problem, const HingeOptions& options = {});

}  // namespace hsl
