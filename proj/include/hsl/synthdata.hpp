#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsl/geometry.hpp"
#include "hsl/matrix.hpp"

namespace hsl {

enum class MarginalKind {
  gaussian,      // standard normal per coordinate
  uniform_ball,  // uniform on the ball of radius sqrt(d + 2), identity covariance
  scaled_stub,   // test hook: Gaussian scaled by 3, violates isotropy and tails
};

struct MarginalSpec {
  MarginalKind kind = MarginalKind::gaussian;
  std::size_t d = 1;

  friend bool operator==(const MarginalSpec&, const MarginalSpec&) = default;
};

/// Per-instance flip probability for bounded (Massart) noise.
struct RateFn {
  enum class Kind {
    constant,      // nu everywhere
    margin_decay,  // nu * exp(-|w* . x| / sigma)
    fixed,         // `value` everywhere, ignoring nu; may exceed nu (negative controls)
  };
  Kind kind = Kind::constant;
  double sigma = 0.5;
  double value = 0.0;

  [[nodiscard]] double rate(double nu, double margin) const;

  friend bool operator==(const RateFn&, const RateFn&) = default;
};

enum class NoiseKind { none, rcn, bounded, adversarial_flip, malicious };
enum class AdversaryStrategy { nearest_boundary, orthogonal_bias, random };
enum class MaliciousStrategy { orthogonal_cluster, boundary_cluster };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double nu = 0.0;      // rcn, bounded
  double budget = 0.0;  // adversarial_flip, malicious
  RateFn rate_fn;       // bounded
  AdversaryStrategy adversary = AdversaryStrategy::nearest_boundary;
  MaliciousStrategy malicious = MaliciousStrategy::orthogonal_cluster;
  double cluster_scale = 5.0;  // distance of malicious clusters along the orthogonal direction
  double cluster_band = 0.1;   // band half-width the boundary cluster sits just outside of

  static NoiseSpec none() { return {}; }
  static NoiseSpec rcn(double nu);
  static NoiseSpec bounded(double nu, RateFn rate_fn = {});
  static NoiseSpec adversarial(double budget, AdversaryStrategy strategy);
  static NoiseSpec malicious_replace(double budget, MaliciousStrategy strategy);

  /// Throws ConfigError when parameters are out of range for the kind.
  void validate() const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

std::string to_string(MarginalKind kind);
std::string to_string(NoiseKind kind);
std::string to_string(AdversaryStrategy s);
std::string to_string(MaliciousStrategy s);
std::string to_string(RateFn::Kind k);

struct Provenance {
  MarginalSpec marginal;
  NoiseSpec noise;
  std::vector<double> w_star;
  std::uint64_t seed = 0;
};

class Dataset {
 public:
  explicit Dataset(std::size_t d) : x_(0, d) {}
  Dataset(Matrix x, std::vector<Label> y);

  [[nodiscard]] std::size_t size() const noexcept { return y_.size(); }
  [[nodiscard]] bool empty() const noexcept { return y_.empty(); }
  [[nodiscard]] std::size_t dim() const noexcept { return x_.cols(); }
  [[nodiscard]] std::span<const double> x(std::size_t i) const { return x_.row(i); }
  [[nodiscard]] Label y(std::size_t i) const { return y_[i]; }
  [[nodiscard]] const Matrix& instances() const noexcept { return x_; }
  [[nodiscard]] const std::vector<Label>& labels() const noexcept { return y_; }

  void push_back(std::span<const double> x, Label y);
  void set_label(std::size_t i, Label y) { y_[i] = y; }
  void set_sample(std::size_t i, std::span<const double> x, Label y);
  void reserve(std::size_t n) {
    x_.reserve_rows(n);
    y_.reserve(n);
  }

  std::optional<Provenance> provenance;

 private:
  Matrix x_;
  std::vector<Label> y_;
};

/// n i.i.d. draws; draw i uses the counter stream (seed, first_index + i).
Matrix sample_marginal(const MarginalSpec& spec, std::size_t n, std::uint64_t seed,
                       std::uint64_t first_index = 0);

Dataset label_realizable(const Matrix& X, const Hyperplane& w_star);

Dataset apply_rcn(const Dataset& S, double nu, std::uint64_t seed);
Dataset apply_bounded(const Dataset& S, const Hyperplane& w_star, double nu, const RateFn& rate_fn,
                      std::uint64_t seed);
Dataset apply_adversarial_flip(const Dataset& S, const Hyperplane& w_star, double budget,
                               AdversaryStrategy strategy, std::uint64_t seed);
Dataset apply_malicious(const Dataset& S, const Hyperplane& w_star, double budget,
                        MaliciousStrategy strategy, std::uint64_t seed, double cluster_scale = 5.0,
                        double cluster_band = 0.1);
Dataset apply_noise(const Dataset& S, const Hyperplane& w_star, const NoiseSpec& noise,
                    std::uint64_t seed);

/// Exact number of corrupted samples for a budget.
std::size_t corruption_count(double budget, std::size_t n);

/// Marginal draw, realizable labels, then noise; records provenance.
Dataset generate(const MarginalSpec& marginal, const NoiseSpec& noise, const Hyperplane& w_star,
                 std::size_t n, std::uint64_t seed);

/// Uniformly random unit vector in R^d derived from seed.
Hyperplane random_unit(std::size_t d, std::uint64_t seed);

/// Sequential access to labeled examples.
class Sampler {
 public:
  virtual ~Sampler() = default;
  [[nodiscard]] virtual std::size_t dim() const = 0;
  /// Writes the next instance into x and returns its label.
  virtual Label next(std::span<double> x) = 0;
};

Dataset draw(Sampler& sampler, std::size_t n);

/// Endless labeled stream from (marginal, noise, w*). Instances are generated in
/// blocks; whole-set corruptions (adversarial, malicious) are applied per block,
/// so their budget holds exactly inside every block.
class ExampleStream final : public Sampler {
 public:
  static constexpr std::size_t kDefaultBlock = 10000;

  ExampleStream(MarginalSpec marginal, NoiseSpec noise, Hyperplane w_star, std::uint64_t seed,
                std::size_t block_size = kDefaultBlock);

  [[nodiscard]] std::size_t dim() const override { return marginal_.d; }
  Label next(std::span<double> x) override;

  [[nodiscard]] std::size_t drawn() const noexcept { return drawn_; }
  [[nodiscard]] const Hyperplane& w_star() const noexcept { return w_star_; }
  [[nodiscard]] const NoiseSpec& noise() const noexcept { return noise_; }

 private:
  void refill();

  MarginalSpec marginal_;
  NoiseSpec noise_;
  Hyperplane w_star_;
  std::uint64_t seed_;
  std::size_t block_size_;
  std::uint64_t block_index_ = 0;
  std::size_t position_ = 0;
  std::size_t drawn_ = 0;
  Dataset block_;
};

// CSV with header x0,...,x{d-1},y and 17-significant-digit floats.
void write_dataset_csv(const Dataset& S, const std::string& path);
std::string dataset_csv(const Dataset& S);
Dataset read_dataset_csv(const std::string& path);

}  // namespace hsl
