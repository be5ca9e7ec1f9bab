#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "hsl/learners.hpp"
#include "hsl/rng.hpp"
#include "hsl/synthdata.hpp"

using namespace hsl;

namespace {

std::size_t flips(const Dataset& a, const Dataset& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a.y(i) != b.y(i);
  return n;
}

double binomial_3sigma(double p, std::size_t n) { return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

TEST_CASE("sample_marginal shapes and support") {
  CHECK(sample_marginal({MarginalKind::gaussian, 4}, 0, 1).rows() == 0);
  const Matrix X = sample_marginal({MarginalKind::uniform_ball, 3}, 5000, 2);
  for (std::size_t i = 0; i < X.rows(); ++i) CHECK(norm2(X.row(i)) <= std::sqrt(5.0));
}

TEST_CASE("sample_marginal is counter based") {
  const MarginalSpec m{MarginalKind::gaussian, 3};
  const Matrix all = sample_marginal(m, 100, 9);
  const Matrix tail = sample_marginal(m, 40, 9, 60);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(all(60 + i, j) == tail(i, j));
  }
}

TEST_CASE("gaussian d=10 moments") {
  const Matrix X = sample_marginal({MarginalKind::gaussian, 10}, 100000, 1);
  const double n = static_cast<double>(X.rows());
  for (std::size_t a = 0; a < 10; ++a) {
    double mean = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) mean += X(i, a);
    CHECK(std::abs(mean / n) <= 0.02);
    for (std::size_t b = 0; b < 10; ++b) {
      double c = 0.0;
      for (std::size_t i = 0; i < X.rows(); ++i) c += X(i, a) * X(i, b);
      CHECK(std::abs(c / n - (a == b ? 1.0 : 0.0)) <= 0.05);
    }
  }
}

TEST_CASE("isotropy of both marginals, d=8") {
  for (auto kind : {MarginalKind::gaussian, MarginalKind::uniform_ball}) {
    const Matrix X = sample_marginal({kind, 8}, 200000, 4);
    const double n = static_cast<double>(X.rows());
    for (std::size_t a = 0; a < 8; ++a) {
      for (std::size_t b = 0; b < 8; ++b) {
        double c = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) c += X(i, a) * X(i, b);
        CHECK(std::abs(c / n - (a == b ? 1.0 : 0.0)) <= 0.05);
      }
    }
  }
}

TEST_CASE("label_realizable") {
  Matrix X(0, 2);
  X.append_row(std::vector<double>{1, 0});
  X.append_row(std::vector<double>{-2, 0});
  X.append_row(std::vector<double>{0, 5});
  const Dataset S = label_realizable(X, Hyperplane::basis(2, 0));
  CHECK(S.y(0) == 1);
  CHECK(S.y(1) == -1);
  CHECK(S.y(2) == 1);
  CHECK_THROWS_AS(label_realizable(X, Hyperplane::basis(3, 0)), DimensionMismatch);
  const auto w = random_unit(6, 3);
  const Dataset T = label_realizable(sample_marginal({MarginalKind::gaussian, 6}, 1000, 3), w);
  CHECK(empirical_error(w, T) == 0.0);
}

TEST_CASE("rcn") {
  const auto w = random_unit(5, 1);
  const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 5}, 100000, 1), w);
  CHECK(flips(S, apply_rcn(S, 0.0, 7)) == 0);
  const Dataset N = apply_rcn(S, 0.2, 7);
  CHECK(std::abs(static_cast<double>(flips(S, N)) / 1e5 - 0.2) <= 0.004);
  CHECK(flips(N, apply_rcn(N, 0.0, 8)) == 0);
  CHECK(flips(N, apply_rcn(S, 0.2, 7)) == 0);
}

TEST_CASE("bounded noise") {
  const auto w = random_unit(5, 2);
  const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 5}, 100000, 2), w);
  CHECK(flips(S, apply_bounded(S, w, 0.0, {}, 3)) == 0);

  const double constant = static_cast<double>(flips(S, apply_bounded(S, w, 0.3, {}, 3))) / 1e5;
  CHECK(std::abs(constant - 0.3) <= binomial_3sigma(0.3, 100000));

  // 0.4 * E[exp(-2|z|)] = 0.4 * 2 e^2 Phi(-2), evaluated by numerical quadrature.
  const double expected = 0.13448160097853643;
  RateFn decay{RateFn::Kind::margin_decay, 0.5};
  const double frac = static_cast<double>(flips(S, apply_bounded(S, w, 0.4, decay, 3))) / 1e5;
  CHECK(frac > 0.0);
  CHECK(frac < 0.4);
  CHECK(std::abs(frac - expected) <= binomial_3sigma(expected, 100000));
}

TEST_CASE("bounded noise cell semantics") {
  // E[y h*(x) | x in cell] = 1 - 2 nu for the constant rate; >= for margin decay.
  const auto w = Hyperplane::basis(3, 0);
  const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 3}, 200000, 5), w);
  const double nu = 0.25;
  for (auto kind : {RateFn::Kind::constant, RateFn::Kind::margin_decay}) {
    const Dataset N = apply_bounded(S, w, nu, RateFn{kind, 0.5}, 6);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < N.size(); ++i) {
      const auto x = N.x(i);
      if (x[0] > 0.0 && x[0] < 1.0 && x[1] > -1.0 && x[1] < 1.0) {
        sum += N.y(i) * classify(w, x);
        ++count;
      }
    }
    REQUIRE(count >= 10000);
    const double mean = sum / static_cast<double>(count);
    const double sigma = std::sqrt((1.0 - (1 - 2 * nu) * (1 - 2 * nu)) / static_cast<double>(count));
    if (kind == RateFn::Kind::constant) {
      CHECK(std::abs(mean - (1 - 2 * nu)) <= 3 * sigma);
    } else {
      CHECK(mean >= (1 - 2 * nu) - 3 * sigma);
    }
  }
}

TEST_CASE("bounded noise rejects rates above nu") {
  const auto w = Hyperplane::basis(2, 0);
  const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 2}, 10, 1), w);
  RateFn fixed{RateFn::Kind::fixed, 0.5, 0.3};
  CHECK_THROWS(apply_bounded(S, w, 0.1, fixed, 1));
  CHECK_THROWS_AS(NoiseSpec::bounded(0.5).validate(), ConfigError);
  CHECK_THROWS_AS(NoiseSpec::rcn(-0.1).validate(), ConfigError);
}

TEST_CASE("adversarial flips") {
  const auto w = random_unit(4, 6);
  const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 4}, 9999, 6), w);
  for (auto strategy : {AdversaryStrategy::nearest_boundary, AdversaryStrategy::orthogonal_bias,
                        AdversaryStrategy::random}) {
    CHECK(flips(S, apply_adversarial_flip(S, w, 0.0, strategy, 1)) == 0);
    for (double budget : {0.01, 0.05, 0.3}) {
      const Dataset N = apply_adversarial_flip(S, w, budget, strategy, 1);
      CHECK(flips(S, N) == corruption_count(budget, S.size()));
    }
  }
  CHECK(corruption_count(0.05, 9999) == 499);
  const Dataset N = apply_adversarial_flip(S, w, 0.05, AdversaryStrategy::nearest_boundary, 1);
  CHECK(empirical_error(w, N) == 499.0 / 9999.0);
  // The flipped points are exactly the ones closest to the boundary.
  double max_flipped = 0.0, min_kept = 1e9;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double m = std::abs(w.margin(S.x(i)));
    if (S.y(i) != N.y(i)) {
      max_flipped = std::max(max_flipped, m);
    } else {
      min_kept = std::min(min_kept, m);
    }
  }
  CHECK(max_flipped <= min_kept);
}

TEST_CASE("orthogonal bias pulls Averaging off w*") {
  const auto w = random_unit(10, 8);
  const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 10}, 50000, 8), w);
  const Dataset N = apply_adversarial_flip(S, w, 0.1, AdversaryStrategy::orthogonal_bias, 8);
  CHECK(angle(train_averaging(N), w) > angle(train_averaging(S), w) + 0.05);
}

TEST_CASE("malicious replacement") {
  const auto w = random_unit(10, 9);
  for (auto strategy : {MaliciousStrategy::orthogonal_cluster, MaliciousStrategy::boundary_cluster}) {
    const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 10}, 5000, 9), w);
    const Dataset same = apply_malicious(S, w, 0.0, strategy, 1);
    CHECK(flips(S, same) == 0);
    const Dataset N = apply_malicious(S, w, 0.1, strategy, 1);
    std::size_t replaced = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
      bool moved = S.y(i) != N.y(i);
      for (std::size_t j = 0; j < 10; ++j) moved = moved || S.x(i)[j] != N.x(i)[j];
      replaced += moved;
    }
    CHECK(replaced == 500);
  }
}

TEST_CASE("orthogonal cluster degrades Averaging on 10 seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto w = random_unit(10, seed);
    const Dataset S = label_realizable(sample_marginal({MarginalKind::gaussian, 10}, 10000, seed), w);
    const Dataset N = apply_malicious(S, w, 0.1, MaliciousStrategy::orthogonal_cluster, seed);
    CHECK(angle(train_averaging(N), w) > angle(train_averaging(S), w));
  }
}

TEST_CASE("generate is deterministic and records provenance") {
  const MarginalSpec m{MarginalKind::gaussian, 3};
  const auto w = random_unit(3, 1);
  const NoiseSpec noise = NoiseSpec::adversarial(0.1, AdversaryStrategy::random);
  const Dataset a = generate(m, noise, w, 1000, 42);
  const Dataset b = generate(m, noise, w, 1000, 42);
  CHECK(std::ranges::equal(a.instances().data(), b.instances().data()));
  CHECK(a.labels() == b.labels());
  REQUIRE(a.provenance.has_value());
  CHECK(a.provenance->seed == 42);
  CHECK(a.provenance->noise == noise);
  const Dataset c = generate(m, noise, w, 1000, 43);
  CHECK(a.labels() != c.labels());
}

TEST_CASE("example stream") {
  const MarginalSpec m{MarginalKind::gaussian, 3};
  const auto w = random_unit(3, 2);
  ExampleStream s1(m, NoiseSpec::rcn(0.1), w, 5, 100);
  ExampleStream s2(m, NoiseSpec::rcn(0.1), w, 5, 100);
  const Dataset a = draw(s1, 250);
  const Dataset b = draw(s2, 250);
  CHECK(a.labels() == b.labels());
  CHECK(std::ranges::equal(a.instances().data(), b.instances().data()));
  CHECK(s1.drawn() == 250);

  // Per-block corruption keeps the exact count inside every full block.
  ExampleStream adv(m, NoiseSpec::adversarial(0.05, AdversaryStrategy::nearest_boundary), w, 5, 1000);
  const Dataset c = draw(adv, 3000);
  CHECK(empirical_error(w, c) == 150.0 / 3000.0);
}

TEST_CASE("dataset CSV round trip") {
  const auto w = random_unit(2, 1);
  const Dataset S = generate({MarginalKind::gaussian, 2}, NoiseSpec::rcn(0.2), w, 5, 42);
  const std::string text = dataset_csv(S);
  CHECK(text.rfind("x0,x1,y\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 6);

  const auto path = std::filesystem::temp_directory_path() / "hsl_csv_roundtrip.csv";
  write_dataset_csv(S, path.string());
  const Dataset T = read_dataset_csv(path.string());
  CHECK(std::ranges::equal(T.instances().data(), S.instances().data()));
  CHECK(T.labels() == S.labels());
  CHECK(dataset_csv(T) == text);

  CHECK(dataset_csv(generate({MarginalKind::gaussian, 2}, NoiseSpec::none(), w, 0, 1)) == "x0,x1,y\n");
  std::filesystem::remove(path);
}
