#include "hsl/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsl/rng.hpp"

namespace hsl {

double RateFn::rate(double nu, double margin) const {
  switch (kind) {
    case Kind::constant:
      return nu;
    case Kind::margin_decay:
      return nu * std::exp(-std::abs(margin) / sigma);
    case Kind::fixed:
      return value;
  }
  return nu;
}

NoiseSpec NoiseSpec::rcn(double nu) {
  NoiseSpec s;
  s.kind = NoiseKind::rcn;
  s.nu = nu;
  return s;
}

NoiseSpec NoiseSpec::bounded(double nu, RateFn rate_fn) {
  NoiseSpec s;
  s.kind = NoiseKind::bounded;
  s.nu = nu;
  s.rate_fn = rate_fn;
  return s;
}

NoiseSpec NoiseSpec::adversarial(double budget, AdversaryStrategy strategy) {
  NoiseSpec s;
  s.kind = NoiseKind::adversarial_flip;
  s.budget = budget;
  s.adversary = strategy;
  return s;
}

NoiseSpec NoiseSpec::malicious_replace(double budget, MaliciousStrategy strategy) {
  NoiseSpec s;
  s.kind = NoiseKind::malicious;
  s.budget = budget;
  s.malicious = strategy;
  return s;
}

void NoiseSpec::validate() const {
  switch (kind) {
    case NoiseKind::none:
      return;
    case NoiseKind::rcn:
    case NoiseKind::bounded:
      if (!(nu >= 0.0 && nu < 0.5)) throw ConfigError("noise.nu must lie in [0, 0.5)");
      if (kind == NoiseKind::bounded) {
        if (rate_fn.kind == RateFn::Kind::margin_decay && !(rate_fn.sigma > 0.0)) {
          throw ConfigError("noise.sigma must be positive");
        }
        if (rate_fn.kind == RateFn::Kind::fixed && !(rate_fn.value >= 0.0 && rate_fn.value <= nu)) {
          throw ConfigError("fixed rate must lie in [0, nu]");
        }
      }
      return;
    case NoiseKind::adversarial_flip:
    case NoiseKind::malicious:
      if (!(budget >= 0.0 && budget < 1.0)) throw ConfigError("noise.budget must lie in [0, 1)");
      if (!(cluster_scale >= 0.0) || !(cluster_band >= 0.0)) {
        throw ConfigError("malicious cluster parameters must be nonnegative");
      }
      return;
  }
}

std::string to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::gaussian: return "gaussian";
    case MarginalKind::uniform_ball: return "uniform_ball";
    case MarginalKind::scaled_stub: return "scaled_stub";
  }
  return "?";
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::rcn: return "rcn";
    case NoiseKind::bounded: return "bounded";
    case NoiseKind::adversarial_flip: return "adversarial_flip";
    case NoiseKind::malicious: return "malicious";
  }
  return "?";
}

std::string to_string(AdversaryStrategy s) {
  switch (s) {
    case AdversaryStrategy::nearest_boundary: return "nearest_boundary";
    case AdversaryStrategy::orthogonal_bias: return "orthogonal_bias";
    case AdversaryStrategy::random: return "random";
  }
  return "?";
}

std::string to_string(MaliciousStrategy s) {
  switch (s) {
    case MaliciousStrategy::orthogonal_cluster: return "orthogonal_cluster";
    case MaliciousStrategy::boundary_cluster: return "boundary_cluster";
  }
  return "?";
}

std::string to_string(RateFn::Kind k) {
  switch (k) {
    case RateFn::Kind::constant: return "constant";
    case RateFn::Kind::margin_decay: return "margin_decay";
    case RateFn::Kind::fixed: return "fixed";
  }
  return "?";
}

Dataset::Dataset(Matrix x, std::vector<Label> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.size()) throw DimensionMismatch(x_.rows(), y_.size());
}

void Dataset::push_back(std::span<const double> x, Label y) {
  if (x.size() != dim()) throw DimensionMismatch(dim(), x.size());
  x_.append_row(x);
  y_.push_back(y);
}

void Dataset::set_sample(std::size_t i, std::span<const double> x, Label y) {
  if (x.size() != dim()) throw DimensionMismatch(dim(), x.size());
  std::copy(x.begin(), x.end(), x_.row(i).begin());
  y_[i] = y;
}

Matrix sample_marginal(const MarginalSpec& spec, std::size_t n, std::uint64_t seed,
                       std::uint64_t first_index) {
  const std::size_t d = spec.d;
  Matrix X(n, d);
  const double ball_radius = std::sqrt(static_cast<double>(d) + 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, StreamTag::kMarginal, first_index + i);
    auto row = X.row(i);
    for (double& c : row) c = rng.normal();
    switch (spec.kind) {
      case MarginalKind::gaussian:
        break;
      case MarginalKind::scaled_stub:
        for (double& c : row) c *= 3.0;
        break;
      case MarginalKind::uniform_ball: {
        // Gaussian direction times a radius with density proportional to r^(d-1).
        const double len = norm2(row);
        const double r = ball_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
        const double scale = len > 0.0 ? r / len : 0.0;
        for (double& c : row) c *= scale;
        break;
      }
    }
  }
  return X;
}

Dataset label_realizable(const Matrix& X, const Hyperplane& w_star) {
  if (X.cols() != w_star.dim()) throw DimensionMismatch(w_star.dim(), X.cols());
  std::vector<Label> y(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) y[i] = classify(w_star, X.row(i));
  return {X, std::move(y)};
}

namespace {

Dataset flip_with_probability(const Dataset& S, std::uint64_t seed, auto&& probability) {
  Dataset out = S;
  for (std::size_t i = 0; i < S.size(); ++i) {
    CounterRng rng(seed, StreamTag::kNoise, i);
    if (rng.uniform() < probability(i)) out.set_label(i, -S.y(i));
  }
  return out;
}

/// First k entries of a seeded uniform permutation of [0, n).
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, std::uint64_t seed, StreamTag tag) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CounterRng rng(seed, tag, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

Dataset apply_rcn(const Dataset& S, double nu, std::uint64_t seed) {
  if (nu == 0.0) return S;
  return flip_with_probability(S, seed, [nu](std::size_t) { return nu; });
}

Dataset apply_bounded(const Dataset& S, const Hyperplane& w_star, double nu, const RateFn& rate_fn,
                      std::uint64_t seed) {
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("apply_bounded: nu must lie in [0, 0.5)");
  if (rate_fn.kind == RateFn::Kind::fixed && !(rate_fn.value >= 0.0 && rate_fn.value <= nu)) {
    throw std::invalid_argument("apply_bounded: the rate must stay within [0, nu]");
  }
  if (nu == 0.0) return S;
  return flip_with_probability(
      S, seed, [&](std::size_t i) { return rate_fn.rate(nu, w_star.margin(S.x(i))); });
}

std::size_t corruption_count(double budget, std::size_t n) {
  return static_cast<std::size_t>(std::floor(budget * static_cast<double>(n)));
}

Dataset apply_adversarial_flip(const Dataset& S, const Hyperplane& w_star, double budget,
                               AdversaryStrategy strategy, std::uint64_t seed) {
  const std::size_t n = S.size();
  const std::size_t k = corruption_count(budget, n);
  if (k == 0) return S;

  std::vector<std::size_t> chosen;
  switch (strategy) {
    case AdversaryStrategy::random:
      chosen = random_subset(n, k, seed, StreamTag::kAdversary);
      break;
    case AdversaryStrategy::nearest_boundary: {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::vector<double> key(n);
      for (std::size_t i = 0; i < n; ++i) key[i] = std::abs(w_star.margin(S.x(i)));
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
      chosen.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
    case AdversaryStrategy::orthogonal_bias: {
      // Flipping (x, y) moves E[yx] by -2yx/n; picking the largest y(u.x) among
      // correctly labeled points pushes the label-weighted mean towards -u.
      const Hyperplane u = orthogonal_unit(w_star, 0);
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::vector<double> key(n);
      std::vector<char> correct(n);
      for (std::size_t i = 0; i < n; ++i) {
        key[i] = S.y(i) * u.margin(S.x(i));
        correct[i] = S.y(i) == classify(w_star, S.x(i));
      }
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (correct[a] != correct[b]) return correct[a] > correct[b];
        return key[a] > key[b];
      });
      chosen.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  Dataset out = S;
  for (std::size_t i : chosen) out.set_label(i, -S.y(i));
  return out;
}

Dataset apply_malicious(const Dataset& S, const Hyperplane& w_star, double budget,
                        MaliciousStrategy strategy, std::uint64_t seed, double cluster_scale,
                        double cluster_band) {
  const std::size_t n = S.size();
  const std::size_t k = corruption_count(budget, n);
  if (k == 0) return S;
  if (w_star.dim() != S.dim()) throw DimensionMismatch(S.dim(), w_star.dim());

  const Hyperplane u = orthogonal_unit(w_star, 0);
  std::vector<double> fake(S.dim());
  Label fake_label = 1;
  switch (strategy) {
    case MaliciousStrategy::orthogonal_cluster:
      for (std::size_t j = 0; j < fake.size(); ++j) fake[j] = cluster_scale * u.w()[j];
      fake_label = -classify(w_star, u.w());
      break;
    case MaliciousStrategy::boundary_cluster:
      for (std::size_t j = 0; j < fake.size(); ++j) {
        fake[j] = 1.05 * cluster_band * w_star.w()[j] + cluster_scale * u.w()[j];
      }
      fake_label = -classify(w_star, fake);
      break;
  }

  Dataset out = S;
  for (std::size_t i : random_subset(n, k, seed, StreamTag::kMalicious)) out.set_sample(i, fake, fake_label);
  return out;
}

Dataset apply_noise(const Dataset& S, const Hyperplane& w_star, const NoiseSpec& noise,
                    std::uint64_t seed) {
  switch (noise.kind) {
    case NoiseKind::none:
      return S;
    case NoiseKind::rcn:
      return apply_rcn(S, noise.nu, seed);
    case NoiseKind::bounded:
      return apply_bounded(S, w_star, noise.nu, noise.rate_fn, seed);
    case NoiseKind::adversarial_flip:
      return apply_adversarial_flip(S, w_star, noise.budget, noise.adversary, seed);
    case NoiseKind::malicious:
      return apply_malicious(S, w_star, noise.budget, noise.malicious, seed, noise.cluster_scale,
                             noise.cluster_band);
  }
  return S;
}

Dataset generate(const MarginalSpec& marginal, const NoiseSpec& noise, const Hyperplane& w_star,
                 std::size_t n, std::uint64_t seed) {
  noise.validate();
  if (marginal.d != w_star.dim()) throw DimensionMismatch(marginal.d, w_star.dim());
  Dataset S = label_realizable(sample_marginal(marginal, n, seed), w_star);
  S = apply_noise(S, w_star, noise, derive_seed(seed, StreamTag::kNoise));
  S.provenance = Provenance{marginal, noise, {w_star.w().begin(), w_star.w().end()}, seed};
  return S;
}

Hyperplane random_unit(std::size_t d, std::uint64_t seed) {
  CounterRng rng(seed, StreamTag::kTarget, 0);
  for (;;) {
    std::vector<double> v(d);
    for (double& c : v) c = rng.normal();
    if (norm2(v) > 1e-6) return normalize(v);
  }
}

Dataset draw(Sampler& sampler, std::size_t n) {
  Dataset S(sampler.dim());
  S.reserve(n);
  std::vector<double> x(sampler.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = sampler.next(x);
    S.push_back(x, y);
  }
  return S;
}

ExampleStream::ExampleStream(MarginalSpec marginal, NoiseSpec noise, Hyperplane w_star,
                             std::uint64_t seed, std::size_t block_size)
    : marginal_(marginal),
      noise_(noise),
      w_star_(std::move(w_star)),
      seed_(seed),
      block_size_(std::max<std::size_t>(block_size, 1)),
      block_(marginal.d) {
  noise_.validate();
  if (marginal_.d != w_star_.dim()) throw DimensionMismatch(marginal_.d, w_star_.dim());
}

void ExampleStream::refill() {
  Matrix X = sample_marginal(marginal_, block_size_, seed_, block_index_ * block_size_);
  Dataset clean = label_realizable(X, w_star_);
  const std::uint64_t noise_seed = derive_seed(derive_seed(seed_, StreamTag::kNoise), block_index_);
  block_ = apply_noise(clean, w_star_, noise_, noise_seed);
  ++block_index_;
  position_ = 0;
}

Label ExampleStream::next(std::span<double> x) {
  if (x.size() != marginal_.d) throw DimensionMismatch(marginal_.d, x.size());
  if (position_ >= block_.size()) refill();
  const auto row = block_.x(position_);
  std::copy(row.begin(), row.end(), x.begin());
  const Label y = block_.y(position_);
  ++position_;
  ++drawn_;
  return y;
}

}  // namespace hsl
