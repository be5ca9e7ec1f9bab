#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsl/errors.hpp"
#include "hsl/matrix.hpp"

namespace hsl {

using Label = int;  // always -1 or +1

/// A homogeneous halfspace h_w(x) = sign(w . x), stored as a unit vector.
class Hyperplane {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  /// Wraps an already-unit vector; throws std::invalid_argument if it is not unit.
  static Hyperplane from_unit(std::vector<double> w);

  /// i-th standard basis vector of R^d.
  static Hyperplane basis(std::size_t d, std::size_t i);

  [[nodiscard]] std::span<const double> w() const noexcept { return w_; }
  [[nodiscard]] std::size_t dim() const noexcept { return w_.size(); }
  [[nodiscard]] double margin(std::span<const double> x) const;
  [[nodiscard]] Hyperplane negated() const;

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;

 private:
  explicit Hyperplane(std::vector<double> w) : w_(std::move(w)) {}
  friend Hyperplane normalize(std::span<const double> v);

  std::vector<double> w_;
};

/// K = { v : |v| <= radius, angle(v, axis) <= half_angle }.
struct ConeCap {
  Hyperplane axis;
  double half_angle;
  double radius = 1.0;
};

Hyperplane normalize(std::span<const double> v);

/// Angle in [0, pi], via atan2 so nearly parallel vectors keep full precision.
double angle(const Hyperplane& u, const Hyperplane& v);
double angle_between(std::span<const double> u, std::span<const double> v);

/// sign(w . x) with sign(0) = +1.
Label classify(const Hyperplane& h, std::span<const double> x);
inline Label sign_label(double value) noexcept { return value >= 0.0 ? 1 : -1; }

/// Closed band |w . x| <= gamma.
bool in_band(std::span<const double> x, const Hyperplane& w, double gamma);

/// Euclidean projection onto the cone-cap K.
std::vector<double> project_cone_cap(std::span<const double> v, const ConeCap& K);

/// Projection onto the (unbounded) circular cone around axis; exposed for tests.
std::vector<double> project_cone(std::span<const double> v, const Hyperplane& axis, double half_angle);

/// A unit vector orthogonal to w, chosen deterministically from seed.
Hyperplane orthogonal_unit(const Hyperplane& w, std::uint64_t seed);

}  // namespace hsl
