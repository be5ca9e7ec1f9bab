#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "hsl/evaluation.hpp"
#include "hsl/rng.hpp"

using namespace hsl;
using std::numbers::pi;

namespace {

Hyperplane at_angle(const Hyperplane& w, double theta, std::uint64_t seed) {
  const Hyperplane u = orthogonal_unit(w, seed);
  std::vector<double> v(w.dim());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::cos(theta) * w.w()[j] + std::sin(theta) * u.w()[j];
  return normalize(v);
}

const PropertyCheck& find(const PropertyReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  return r.checks.front();
}

}  // namespace

TEST_CASE("hoeffding radius") {
  CHECK(hoeffding_radius(10000) == doctest::Approx(std::sqrt(std::log(40.0) / 20000.0)));
  CHECK(hoeffding_radius(40000) == doctest::Approx(hoeffding_radius(10000) / 2));
}

TEST_CASE("mc_error") {
  const MarginalSpec m{MarginalKind::gaussian, 5};
  const auto w = random_unit(5, 1);
  SUBCASE("target halfspace, no noise") {
    const auto e = mc_error(w, m, w, NoiseSpec::none(), 20000, 1);
    CHECK(e.value == 0.0);
    CHECK(e.n == 20000);
    CHECK(e.ci_radius == hoeffding_radius(20000));
  }
  SUBCASE("target halfspace under RCN is the noise rate") {
    const auto e = mc_error(w, m, w, NoiseSpec::rcn(0.2), 20000, 2);
    CHECK(std::abs(e.value - 0.2) <= e.ci_radius);
  }
  SUBCASE("angle identity") {
    for (double theta : {0.1, 0.7, 2.0}) {
      const auto h = at_angle(w, theta, 3);
      const auto e = mc_error(h, m, w, NoiseSpec::none(), 50000, 4);
      CHECK(std::abs(e.value - theta / pi) <= e.ci_radius);
    }
  }
  SUBCASE("determinism") {
    const auto h = at_angle(w, 0.4, 5);
    CHECK(mc_error(h, m, w, NoiseSpec::rcn(0.1), 5000, 6).value == mc_error(h, m, w, NoiseSpec::rcn(0.1), 5000, 6).value);
  }
}

TEST_CASE("mc_error CI calibration") {
  // Truth theta / pi + nu (1 - 2 theta / pi) for RCN at angle theta.
  const MarginalSpec m{MarginalKind::gaussian, 3};
  const auto w = random_unit(3, 11);
  const double theta = 0.5;
  const auto h = at_angle(w, theta, 12);
  const double truth = theta / pi + 0.1 * (1.0 - 2.0 * theta / pi);
  int inside = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const auto e = mc_error(h, m, w, NoiseSpec::rcn(0.1), 10000, 1000 + rep);
    inside += std::abs(e.value - truth) <= e.ci_radius;
  }
  CHECK(inside >= 180);
}

TEST_CASE("disagreement") {
  const Matrix X = sample_marginal({MarginalKind::gaussian, 4}, 200000, 7);
  const auto w = random_unit(4, 8);
  CHECK(disagreement(w, w, X) == 0.0);
  CHECK(disagreement(w, w.negated(), X) == 1.0);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = random_unit(4, 20 + s);
    const auto b = random_unit(4, 40 + s);
    CHECK(std::abs(disagreement(a, b, X) - angle(a, b) / pi) <= 0.005);
  }
}

TEST_CASE("band_mass reference values") {
  // 2 Phi(g) - 1 via erf; the uniform-ball values by quadrature of the 1-D
  // marginal density proportional to (1 - t^2 / (d+2))^((d-1)/2) on |t| <= sqrt(d+2).
  CHECK(band_mass({MarginalKind::gaussian, 7}, 0.05) == doctest::Approx(0.03987761167674497).epsilon(1e-12));
  CHECK(band_mass({MarginalKind::gaussian, 7}, 0.1) == doctest::Approx(0.07965567455405798).epsilon(1e-12));
  CHECK(band_mass({MarginalKind::gaussian, 7}, 0.3) == doctest::Approx(0.23582284437790513).epsilon(1e-12));
  CHECK(band_mass({MarginalKind::uniform_ball, 10}, 0.05) == doctest::Approx(0.03732701073105934).epsilon(1e-9));
  CHECK(band_mass({MarginalKind::uniform_ball, 10}, 0.1) == doctest::Approx(0.07458408797723791).epsilon(1e-9));
  CHECK(band_mass({MarginalKind::uniform_ball, 10}, 0.3) == doctest::Approx(0.22153145785475759).epsilon(1e-9));
}

TEST_CASE("check_logconcave_properties") {
  SUBCASE("gaussian passes") {
    const auto r = check_logconcave_properties({MarginalKind::gaussian, 10}, 200000, 1);
    CHECK(r.checks.size() == 10);
    for (const auto& c : r.checks) {
      INFO(c.name << " statistic " << c.statistic << " bound " << c.bound);
      CHECK(c.pass.value_or(false));
    }
    CHECK(r.all_passed());
  }
  SUBCASE("n = 10 is underpowered") {
    const auto r = check_logconcave_properties({MarginalKind::gaussian, 10}, 10, 1);
    REQUIRE_FALSE(r.checks.empty());
    for (const auto& c : r.checks) CHECK_FALSE(c.pass.has_value());
    CHECK(r.all_passed());
    CHECK(r.to_json_lines().find("\"underpowered\":true") != std::string::npos);
  }
  SUBCASE("uniform ball passes tail and band checks") {
    const auto r = check_logconcave_properties({MarginalKind::uniform_ball, 10}, 200000, 2);
    for (const char* name : {"norm_tail_r1.5", "norm_tail_r2", "norm_tail_r3"}) {
      CHECK(find(r, name).statistic == 0.0);
      CHECK(*find(r, name).pass);
    }
    for (const char* name : {"band_mass_gamma0.05", "band_mass_gamma0.1", "band_mass_gamma0.3"}) CHECK(*find(r, name).pass);
  }
  SUBCASE("a non-isotropic stub fails") {
    const auto r = check_logconcave_properties({MarginalKind::scaled_stub, 10}, 20000, 3);
    CHECK_FALSE(r.all_passed());
    CHECK_FALSE(*find(r, "isotropy_covariance").pass);
  }
  SUBCASE("json lines") {
    const auto r = check_logconcave_properties({MarginalKind::gaussian, 3}, 2000, 4);
    const std::string s = r.to_json_lines();
    std::size_t lines = 0;
    for (char ch : s) lines += ch == '\n';
    CHECK(lines == r.checks.size());
    for (const char* key : {"\"name\"", "\"statistic\"", "\"bound\"", "\"pass\"", "\"n\"", "\"seed\""}) {
      CHECK(s.find(key) != std::string::npos);
    }
  }
}

TEST_CASE("check_excess_sandwich") {
  const MarginalSpec m{MarginalKind::gaussian, 5};
  const auto w = random_unit(5, 30);
  SUBCASE("h = h_w* gives zeros") {
    const auto r = check_excess_sandwich(w, w, 0.2, m, {}, 50000, 1);
    CHECK(r.all_passed());
    for (const auto& c : r.checks) CHECK(c.statistic == 0.0);
  }
  SUBCASE("nu = 0 collapses to equality") {
    const auto h = at_angle(w, 0.3, 31);
    const auto r = check_excess_sandwich(h, w, 0.0, m, {}, 50000, 2);
    CHECK(r.all_passed());
    CHECK(find(r, "sandwich_upper").statistic == 0.0);
    CHECK(find(r, "sandwich_lower").statistic == 0.0);
  }
  SUBCASE("theta = 0.3, nu = 0.2 constant") {
    const auto h = at_angle(w, 0.3, 32);
    const auto r = check_excess_sandwich(h, w, 0.2, m, {}, 200000, 3);
    CHECK(r.all_passed());
  }
  SUBCASE("margin-decay rates stay inside the sandwich") {
    const auto h = at_angle(w, 0.4, 33);
    const auto r = check_excess_sandwich(h, w, 0.3, m, {RateFn::Kind::margin_decay, 0.5, 0.0}, 200000, 4);
    CHECK(r.all_passed());
  }
  SUBCASE("negative control: flip rate above nu") {
    const auto h = at_angle(w, 0.5, 34);
    const auto r = check_excess_sandwich(h, w, 0.1, m, {RateFn::Kind::fixed, 0.5, 0.45}, 200000, 5);
    CHECK_FALSE(r.all_passed());
    CHECK_FALSE(*find(r, "sandwich_lower").pass);
  }
  CHECK_THROWS_AS(check_excess_sandwich(w, w, 0.5, m, {}, 10, 1), std::invalid_argument);
}
