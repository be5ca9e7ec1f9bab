#include <cmath>
#include <limits>

#include "hsl/errors.hpp"
#include "hsl/learners.hpp"

namespace hsl {

std::size_t monomial_count(std::size_t d, std::size_t k) {
  // C(d + k, k) built as a running product; each partial product is itself a binomial.
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t factor = d + i;
    if (c > kMax / factor) return kMax;
    c = c * factor / i;
  }
  return c;
}

namespace {

void append_degree(std::size_t d, unsigned degree, std::size_t pos, std::vector<unsigned>& current,
                   std::vector<std::vector<unsigned>>& out) {
  if (pos + 1 == d) {
    current[pos] = degree;
    out.push_back(current);
    return;
  }
  for (unsigned e = degree + 1; e-- > 0;) {
    current[pos] = e;
    append_degree(d, degree - e, pos + 1, current, out);
  }
}

}  // namespace

std::vector<std::vector<unsigned>> monomial_exponents(std::size_t d, std::size_t k) {
  if (d == 0 || k == 0) throw std::invalid_argument("monomial_exponents: need d >= 1 and k >= 1");
  const std::size_t count = monomial_count(d, k);
  if (count > kMaxMonomials) throw FeatureBlowup(count);
  std::vector<std::vector<unsigned>> out;
  out.reserve(count);
  std::vector<unsigned> current(d, 0);
  for (unsigned g = 0; g <= k; ++g) append_degree(d, g, 0, current, out);
  return out;
}

namespace {

void expand_into(std::span<const double> x, std::size_t k, const std::vector<std::vector<unsigned>>& exps,
                 std::vector<double>& powers, std::span<double> out) {
  const std::size_t d = x.size();
  // powers[j * (k + 1) + e] = x_j^e
  for (std::size_t j = 0; j < d; ++j) {
    double p = 1.0;
    for (std::size_t e = 0; e <= k; ++e) {
      powers[j * (k + 1) + e] = p;
      p *= x[j];
    }
  }
  for (std::size_t m = 0; m < exps.size(); ++m) {
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (exps[m][j] != 0) v *= powers[j * (k + 1) + exps[m][j]];
    }
    out[m] = v;
  }
}

}  // namespace

std::vector<double> expand_monomials(std::span<const double> x, std::size_t k) {
  const auto exps = monomial_exponents(x.size(), k);
  std::vector<double> powers(x.size() * (k + 1));
  std::vector<double> out(exps.size());
  expand_into(x, k, exps, powers, out);
  return out;
}

Matrix expand_monomials(const Matrix& X, std::size_t k) {
  const auto exps = monomial_exponents(X.cols(), k);
  Matrix out(X.rows(), exps.size());
  std::vector<double> powers(X.cols() * (k + 1));
  for (std::size_t i = 0; i < X.rows(); ++i) expand_into(X.row(i), k, exps, powers, out.row(i));
  return out;
}

Polynomial::Polynomial(std::size_t d, std::size_t degree, std::vector<double> coefficients)
    : d_(d), degree_(degree), exponents_(monomial_exponents(d, degree)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != exponents_.size()) throw DimensionMismatch(exponents_.size(), coeffs_.size());
}

double Polynomial::operator()(std::span<const double> x) const {
  if (x.size() != d_) throw DimensionMismatch(d_, x.size());
  std::vector<double> powers(d_ * (degree_ + 1));
  std::vector<double> features(exponents_.size());
  expand_into(x, degree_, exponents_, powers, features);
  return dot(features, coeffs_);
}

}  // namespace hsl
