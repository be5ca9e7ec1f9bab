// Brute-force reference implementations used to cross-check the solvers.
// They share no code with the library beyond plain vector types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Solves A x = b by Gaussian elimination with partial pivoting; nullopt if singular.
inline std::optional<Vec> solve_square(Mat A, Vec b) {
  const std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    }
    if (std::abs(A[p][c]) < 1e-10) return std::nullopt;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

/// Calls f on every k-subset of {0..n-1}.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Vertex enumeration of {v : a_i . v >= b_i} intersected with the box |v_j| <= box.
/// Returns a feasible vertex (slack >= -tol) if one exists.
inline std::optional<Vec> feasible_vertex(const Mat& a, const Vec& b, double box, double tol = 1e-9) {
  const std::size_t d = a.front().size();
  Mat rows = a;
  Vec rhs = b;
  for (std::size_t j = 0; j < d; ++j) {
    Vec e(d, 0.0);
    e[j] = 1.0;
    rows.push_back(e);
    rhs.push_back(-box);
    e[j] = -1.0;
    rows.push_back(e);
    rhs.push_back(-box);
  }
  std::optional<Vec> found;
  for_each_subset(rows.size(), d, [&](const std::vector<std::size_t>& idx) {
    if (found) return;
    Mat A;
    Vec y;
    for (std::size_t i : idx) {
      A.push_back(rows[i]);
      y.push_back(rhs[i]);
    }
    auto v = solve_square(A, y);
    if (!v) return;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (dot(rows[i], *v) - rhs[i] < -tol) return;
    }
    found = v;
  });
  return found;
}

/// min_c mean |Phi c - t|; some optimum interpolates p rows, so enumerate them.
inline double l1_optimum(const Mat& phi, const Vec& t) {
  const std::size_t n = phi.size();
  const std::size_t p = phi.front().size();
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(n, p, [&](const std::vector<std::size_t>& idx) {
    Mat A;
    Vec y;
    for (std::size_t i : idx) {
      A.push_back(phi[i]);
      y.push_back(t[i]);
    }
    auto c = solve_square(A, y);
    if (!c) return;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(dot(phi[i], *c) - t[i]);
    best = std::min(best, s / static_cast<double>(n));
  });
  return best;
}

/// Hinge objective mean max(0, 1 - y (v . x) / tau).
inline double hinge(const Mat& x, const std::vector<int>& y, double tau, const Vec& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::max(0.0, 1.0 - y[i] * dot(v, x[i]) / tau);
  return s / static_cast<double>(x.size());
}

/// Polar grid over K = {|v| <= 1, angle(v, axis) <= alpha} in d = 2.
/// Returns the grid point with the smallest hinge objective.
inline std::pair<Vec, double> hinge_grid_2d(const Mat& x, const std::vector<int>& y, double tau, const Vec& axis,
                                            double alpha, std::size_t radial = 400, std::size_t angular = 400) {
  const double base = std::atan2(axis[1], axis[0]);
  std::pair<Vec, double> best{Vec{0.0, 0.0}, hinge(x, y, tau, Vec{0.0, 0.0})};
  for (std::size_t i = 1; i <= radial; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(radial);
    for (std::size_t j = 0; j <= angular; ++j) {
      const double phi = base - alpha + 2.0 * alpha * static_cast<double>(j) / static_cast<double>(angular);
      Vec v{r * std::cos(phi), r * std::sin(phi)};
      const double f = hinge(x, y, tau, v);
      if (f < best.second) best = {v, f};
    }
  }
  return best;
}

/// Points of K = {|q| <= radius, angle(q, axis) <= alpha}: a polar grid in d = 2,
/// random draws (plus the boundary) in higher dimension.
inline Mat cone_cap_points(const Vec& axis, double alpha, double radius, std::size_t count, std::mt19937_64& rng) {
  const std::size_t d = axis.size();
  Mat pts{Vec(d, 0.0)};
  if (d == 2) {
    const double base = std::atan2(axis[1], axis[0]);
    const std::size_t side = static_cast<std::size_t>(std::sqrt(static_cast<double>(count)));
    for (std::size_t i = 1; i <= side; ++i) {
      for (std::size_t j = 0; j <= side; ++j) {
        const double r = radius * static_cast<double>(i) / static_cast<double>(side);
        const double phi = base - alpha + 2.0 * alpha * static_cast<double>(j) / static_cast<double>(side);
        pts.push_back({r * std::cos(phi), r * std::sin(phi)});
      }
    }
    return pts;
  }
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (pts.size() < count) {
    Vec z(d);
    for (double& c : z) c = g(rng);
    // Component orthogonal to the axis, turned into a unit direction.
    const double along = dot(z, axis);
    for (std::size_t j = 0; j < d; ++j) z[j] -= along * axis[j];
    const double zn = norm(z);
    if (zn < 1e-12) continue;
    const double phi = alpha * (u(rng) < 0.3 ? 1.0 : u(rng));
    const double r = radius * (u(rng) < 0.3 ? 1.0 : u(rng));
    Vec q(d);
    for (std::size_t j = 0; j < d; ++j) q[j] = r * (std::cos(phi) * axis[j] + std::sin(phi) * z[j] / zn);
    pts.push_back(q);
  }
  return pts;
}

/// Exhaustive threshold scan: the error of sign(value - theta) is constant on each
/// interval between sorted values, and every interval meeting [-1, 1] contains
/// -1, 1, or one of the values.
inline double best_threshold_error(const Vec& values, const std::vector<int>& labels) {
  Vec thetas{-1.0, 1.0};
  for (double v : values) {
    if (v > -1.0 && v <= 1.0) thetas.push_back(v);
  }
  double best = 2.0;
  for (double theta : thetas) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const int pred = values[i] - theta >= 0.0 ? 1 : -1;
      wrong += pred != labels[i];
    }
    best = std::min(best, static_cast<double>(wrong) / static_cast<double>(values.size()));
  }
  return best;
}

}  // namespace oracle
