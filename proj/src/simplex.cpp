#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "hsl/errors.hpp"
#include "hsl/solvers.hpp"

namespace hsl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : unsigned char { basic, at_lower, at_upper };

class Tableau {
 public:
  Tableau(const BoundedLp& lp, const SimplexOptions& options)
      : k_(lp.M.rows()),
        n_(lp.M.cols()),
        total_(n_ + k_),
        opt_(options),
        t_(k_ * total_, 0.0),
        d_(total_, 0.0),
        x_(total_, 0.0),
        lo_(total_, 0.0),
        up_(total_, kInf),
        state_(total_, VarState::at_lower),
        basis_(k_),
        sign_(k_, 1.0) {
    if (lp.rhs.size() != k_ || lp.cost.size() != n_ || lp.lower.size() != n_ || lp.upper.size() != n_) {
      throw std::invalid_argument("solve_bounded_lp: inconsistent problem dimensions");
    }
    cost_.assign(lp.cost.begin(), lp.cost.end());
    cost_.resize(total_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lp.lower[j];
      up_[j] = lp.upper[j];
      if (!std::isfinite(lo_[j]) || !std::isfinite(up_[j]) || lo_[j] > up_[j]) {
        throw std::invalid_argument("solve_bounded_lp: bounds must be finite with lower <= upper");
      }
      // Start each variable at the bound nearer zero, so a homogeneous system
      // starts feasible.
      if (std::abs(up_[j]) < std::abs(lo_[j])) {
        state_[j] = VarState::at_upper;
        x_[j] = up_[j];
      } else {
        state_[j] = VarState::at_lower;
        x_[j] = lo_[j];
      }
    }
    for (std::size_t r = 0; r < k_; ++r) {
      double residual = lp.rhs[r];
      for (std::size_t j = 0; j < n_; ++j) residual -= lp.M(r, j) * x_[j];
      sign_[r] = residual >= 0.0 ? 1.0 : -1.0;
      double* row = &t_[r * total_];
      for (std::size_t j = 0; j < n_; ++j) row[j] = sign_[r] * lp.M(r, j);
      row[n_ + r] = 1.0;
      basis_[r] = n_ + r;
      state_[n_ + r] = VarState::basic;
      x_[n_ + r] = std::abs(residual);
      scale_ = std::max(scale_, std::abs(residual));
    }
    max_iterations_ = options.max_iterations != 0 ? options.max_iterations
                                                   : 10 * (k_ + n_) * (k_ + n_) + 1000;
  }

  BoundedLpResult solve() {
    // Phase 1: maximize -sum(artificials).
    std::vector<double> phase1(total_, 0.0);
    for (std::size_t r = 0; r < k_; ++r) phase1[n_ + r] = -1.0;
    run(phase1);

    double infeasibility = 0.0;
    for (std::size_t r = 0; r < k_; ++r) infeasibility += x_[n_ + r];
    BoundedLpResult result;
    if (infeasibility > opt_.feasibility_tolerance * (1.0 + scale_) * static_cast<double>(k_ + 1)) {
      result.status = BoundedLpResult::Status::infeasible;
      result.iterations = iterations_;
      return result;
    }

    drive_out_artificials();
    for (std::size_t r = 0; r < k_; ++r) {
      const std::size_t a = n_ + r;
      up_[a] = 0.0;
      if (state_[a] != VarState::basic) {
        state_[a] = VarState::at_lower;
        x_[a] = 0.0;
      }
    }

    // Phase 2.
    const bool reached = run(cost_, opt_.objective_target);

    result.status = reached ? BoundedLpResult::Status::target_reached : BoundedLpResult::Status::optimal;
    result.y.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    result.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) result.objective += cost_[j] * x_[j];
    result.duals.assign(k_, 0.0);
    for (std::size_t r = 0; r < k_; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < k_; ++i) s += cost_[basis_[i]] * t_[i * total_ + n_ + r];
      result.duals[r] = sign_[r] * s;
    }
    result.iterations = iterations_;
    return result;
  }

 private:
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j < total_; ++j) {
      double s = c[j];
      for (std::size_t i = 0; i < k_; ++i) s -= c[basis_[i]] * t_[i * total_ + j];
      d_[j] = s;
    }
  }

  /// Dantzig pricing (largest improving reduced cost); Bland's lowest index
  /// after a run of degenerate steps, which rules out cycling.
  std::size_t choose_entering() const {
    const double tol = opt_.feasibility_tolerance;
    std::size_t best = total_;
    double best_gain = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (state_[j] == VarState::basic || up_[j] <= lo_[j]) continue;
      double gain = 0.0;
      if (state_[j] == VarState::at_lower && d_[j] > tol) gain = d_[j];
      if (state_[j] == VarState::at_upper && d_[j] < -tol) gain = -d_[j];
      if (gain == 0.0) continue;
      if (degenerate_run_ >= kBlandAfter) return j;
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t q) {
    double* prow = &t_[r * total_];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < total_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < k_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * total_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < total_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double f = d_[q];
    if (f != 0.0) {
      for (std::size_t j = 0; j < total_; ++j) d_[j] -= f * prow[j];
      d_[q] = 0.0;
    }
    basis_[r] = q;
    state_[q] = VarState::basic;
  }

  /// Returns true when `target` stopped the loop before optimality.
  bool run(const std::vector<double>& c, std::optional<double> target = std::nullopt) {
    price(c);
    double objective = 0.0;
    if (target) {
      for (std::size_t j = 0; j < total_; ++j) objective += c[j] * x_[j];
    }
    for (;;) {
      if (target && objective >= *target) return true;
      if (++iterations_ > max_iterations_) {
        throw NumericalBreakdown("simplex exceeded " + std::to_string(max_iterations_) + " iterations");
      }
      const std::size_t q = choose_entering();
      if (q == total_) return false;
      const double dir = state_[q] == VarState::at_lower ? 1.0 : -1.0;

      double step = up_[q] - lo_[q];
      std::size_t leave_row = k_;
      for (std::size_t i = 0; i < k_; ++i) {
        const double alpha = dir * t_[i * total_ + q];
        const std::size_t b = basis_[i];
        double limit;
        if (alpha > opt_.pivot_tolerance) {
          limit = (x_[b] - lo_[b]) / alpha;
        } else if (alpha < -opt_.pivot_tolerance && std::isfinite(up_[b])) {
          limit = (up_[b] - x_[b]) / -alpha;
        } else {
          continue;
        }
        limit = std::max(limit, 0.0);
        if (limit < step || (limit == step && leave_row < k_ && b < basis_[leave_row])) {
          step = limit;
          leave_row = i;
        }
      }
      if (!std::isfinite(step)) throw NumericalBreakdown("unbounded direction in bounded simplex");

      degenerate_run_ = step > 0.0 ? 0 : degenerate_run_ + 1;
      objective += d_[q] * dir * step;
      x_[q] += dir * step;
      for (std::size_t i = 0; i < k_; ++i) x_[basis_[i]] -= dir * step * t_[i * total_ + q];

      if (leave_row == k_) {
        // Bound flip, basis unchanged.
        if (state_[q] == VarState::at_lower) {
          state_[q] = VarState::at_upper;
          x_[q] = up_[q];
        } else {
          state_[q] = VarState::at_lower;
          x_[q] = lo_[q];
        }
        continue;
      }
      const std::size_t leaving = basis_[leave_row];
      if (dir * t_[leave_row * total_ + q] > 0.0) {
        state_[leaving] = VarState::at_lower;
        x_[leaving] = lo_[leaving];
      } else {
        state_[leaving] = VarState::at_upper;
        x_[leaving] = up_[leaving];
      }
      pivot(leave_row, q);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < k_; ++r) {
      if (basis_[r] < n_) continue;
      const double* row = &t_[r * total_];
      std::size_t best = n_;
      double best_abs = opt_.pivot_tolerance;
      for (std::size_t j = 0; j < n_; ++j) {
        if (state_[j] == VarState::basic) continue;
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      if (best == n_) continue;  // redundant row; the artificial stays basic at zero
      const std::size_t art = basis_[r];
      x_[art] = 0.0;
      state_[art] = VarState::at_lower;
      pivot(r, best);
    }
  }

  std::size_t k_, n_, total_;
  SimplexOptions opt_;
  std::vector<double> t_;
  std::vector<double> d_;
  std::vector<double> x_;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> cost_;
  std::vector<VarState> state_;
  std::vector<std::size_t> basis_;
  std::vector<double> sign_;
  double scale_ = 0.0;
  std::size_t degenerate_run_ = 0;
  static constexpr std::size_t kBlandAfter = 50;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
};

}  // namespace

BoundedLpResult solve_bounded_lp(const BoundedLp& lp, const SimplexOptions& options) {
  Tableau tableau(lp, options);
  return tableau.solve();
}

}  // namespace hsl
