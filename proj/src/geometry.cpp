#include "hsl/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsl/rng.hpp"

namespace hsl {

namespace {

constexpr double kZeroNorm = 1e-12;
constexpr int kDykstraRounds = 50;

void check_dim(std::size_t expected, std::size_t actual) {
  if (expected != actual) throw DimensionMismatch(expected, actual);
}

}  // namespace

Hyperplane Hyperplane::from_unit(std::vector<double> w) {
  if (w.empty() || std::abs(norm2(w) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("Hyperplane::from_unit: vector is not unit length");
  }
  return Hyperplane(std::move(w));
}

Hyperplane Hyperplane::basis(std::size_t d, std::size_t i) {
  if (i >= d) throw std::invalid_argument("Hyperplane::basis: index out of range");
  std::vector<double> w(d, 0.0);
  w[i] = 1.0;
  return Hyperplane(std::move(w));
}

double Hyperplane::margin(std::span<const double> x) const {
  check_dim(w_.size(), x.size());
  return dot(w_, x);
}

Hyperplane Hyperplane::negated() const {
  std::vector<double> w = w_;
  for (double& c : w) c = -c;
  return Hyperplane(std::move(w));
}

Hyperplane normalize(std::span<const double> v) {
  const double n = norm2(v);
  if (!(n > kZeroNorm)) throw ZeroVector();
  std::vector<double> w(v.begin(), v.end());
  for (double& c : w) c /= n;
  return Hyperplane(std::move(w));
}

double angle_between(std::span<const double> u, std::span<const double> v) {
  check_dim(u.size(), v.size());
  const double nu = norm2(u);
  const double nv = norm2(v);
  if (nu <= kZeroNorm || nv <= kZeroNorm) return 0.0;
  // |u x v|^2 via the Lagrange identity: every 2x2 minor vanishes exactly when
  // u and v are equal, so angle(u, u) is exactly 0.
  double cross2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      const double m = u[i] * v[j] - u[j] * v[i];
      cross2 += m * m;
    }
  }
  return std::atan2(std::sqrt(cross2), dot(u, v));
}

double angle(const Hyperplane& u, const Hyperplane& v) { return angle_between(u.w(), v.w()); }

Label classify(const Hyperplane& h, std::span<const double> x) { return sign_label(h.margin(x)); }

bool in_band(std::span<const double> x, const Hyperplane& w, double gamma) {
  return std::abs(w.margin(x)) <= gamma;
}

std::vector<double> project_cone(std::span<const double> v, const Hyperplane& axis, double half_angle) {
  check_dim(axis.dim(), v.size());
  const auto a = axis.w();
  const double s = dot(a, v);
  std::vector<double> orth(v.begin(), v.end());
  for (std::size_t i = 0; i < orth.size(); ++i) orth[i] -= s * a[i];
  const double r = norm2(orth);

  const double theta = std::atan2(r, s);
  if (theta <= half_angle) return {v.begin(), v.end()};
  if (theta >= half_angle + std::numbers::pi / 2) return std::vector<double>(v.size(), 0.0);

  // Project onto the boundary ray e = cos(a) axis + sin(a) orth/|orth|.
  const double c = std::cos(half_angle);
  const double sn = std::sin(half_angle);
  const double t = c * s + sn * r;
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = t * (c * a[i] + sn * orth[i] / r);
  return p;
}

namespace {

std::vector<double> project_ball(std::vector<double> v, double radius) {
  const double n = norm2(v);
  if (n > radius) {
    for (double& c : v) c *= radius / n;
  }
  return v;
}

}  // namespace

std::vector<double> project_cone_cap(std::span<const double> v, const ConeCap& K) {
  check_dim(K.axis.dim(), v.size());
  const std::size_t d = v.size();
  // Dykstra's alternating projections between the cone and the ball.
  std::vector<double> x(v.begin(), v.end());
  std::vector<double> p(d, 0.0), q(d, 0.0), y(d), tmp(d);
  for (int round = 0; round < kDykstraRounds; ++round) {
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + p[i];
    y = project_cone(tmp, K.axis, K.half_angle);
    for (std::size_t i = 0; i < d; ++i) p[i] = tmp[i] - y[i];

    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + q[i];
    std::vector<double> next = project_ball(tmp, K.radius);
    for (std::size_t i = 0; i < d; ++i) q[i] = tmp[i] - next[i];

    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) change = std::max(change, std::abs(next[i] - x[i]));
    x = std::move(next);
    if (round > 0 && change < 1e-16) break;
  }
  return x;
}

Hyperplane orthogonal_unit(const Hyperplane& w, std::uint64_t seed) {
  const std::size_t d = w.dim();
  if (d < 2) throw std::invalid_argument("orthogonal_unit: dimension must be at least 2");
  CounterRng rng(seed, StreamTag::kOrthogonal, 0);
  for (;;) {
    std::vector<double> u(d);
    for (double& c : u) c = rng.normal();
    const double s = dot(u, w.w());
    for (std::size_t i = 0; i < d; ++i) u[i] -= s * w.w()[i];
    if (norm2(u) > 1e-6) return normalize(u);
  }
}

}  // namespace hsl
