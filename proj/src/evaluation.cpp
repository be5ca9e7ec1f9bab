#include "hsl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <json.hpp>

#include "hsl/localization.hpp"
#include "hsl/rng.hpp"

namespace hsl {

double hoeffding_radius(std::size_t n) {
  if (n == 0) return 1.0;
  return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(n)));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

ErrorEstimate mc_error(const Classifier& f, const MarginalSpec& marginal, const Hyperplane& w_star,
                       const NoiseSpec& noise, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("mc_error: n must be >= 1");
  ExampleStream stream(marginal, noise, w_star, derive_seed(seed, StreamTag::kEvaluation));
  std::vector<double> x(marginal.d);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = stream.next(x);
    wrong += f.predict(x) != y;
  }
  return {static_cast<double>(wrong) / static_cast<double>(n), n, hoeffding_radius(n)};
}

double disagreement(const Classifier& f, const Classifier& g, const Matrix& X) {
  if (X.empty()) throw std::invalid_argument("disagreement: no instances");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) diff += f.predict(X.row(i)) != g.predict(X.row(i));
  return static_cast<double>(diff) / static_cast<double>(X.rows());
}

bool PropertyReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass == false; });
}

std::string PropertyReport::to_json_lines() const {
  std::string out;
  for (const auto& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["statistic"] = c.statistic;
    j["bound"] = c.bound;
    j["pass"] = c.pass ? nlohmann::ordered_json(*c.pass) : nlohmann::ordered_json(nullptr);
    j["n"] = c.n;
    j["seed"] = c.seed;
    if (!c.pass) j["underpowered"] = true;
    if (!c.note.empty()) j["note"] = c.note;
    out += j.dump();
    out += '\n';
  }
  return out;
}

double band_mass(const MarginalSpec& marginal, double gamma) {
  if (gamma <= 0.0) return 0.0;
  if (marginal.kind == MarginalKind::uniform_ball) {
    // u = (w . x) / R has density proportional to (1 - u^2)^((d-1)/2), so u^2 ~ Beta(1/2, (d+1)/2).
    const double d = static_cast<double>(marginal.d);
    const double R2 = d + 2.0;
    const double t = std::min(1.0, gamma * gamma / R2);
    return boost::math::ibeta(0.5, (d + 1.0) / 2.0, t);
  }
  return std::erf(gamma / std::numbers::sqrt2);
}

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Unit vector at exactly angle theta from w, in a seeded random plane.
Hyperplane rotated(const Hyperplane& w, double theta, std::uint64_t seed) {
  const Hyperplane u = orthogonal_unit(w, seed);
  std::vector<double> v(w.dim());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::cos(theta) * w.w()[j] + std::sin(theta) * u.w()[j];
  return normalize(v);
}

struct CheckBuilder {
  PropertyReport& report;
  std::size_t n;
  std::uint64_t seed;
  bool powered;

  void add(std::string name, double statistic, double bound, bool ok, std::string note = {}) const {
    PropertyCheck c{std::move(name), statistic, bound, std::nullopt, n, seed, std::move(note)};
    if (powered) c.pass = ok;
    report.checks.push_back(std::move(c));
  }
};

}  // namespace

PropertyReport check_logconcave_properties(const MarginalSpec& marginal, std::size_t n, std::uint64_t seed) {
  PropertyReport report;
  if (n == 0) return report;
  const std::size_t d = marginal.d;
  const double nd = static_cast<double>(n);
  const Matrix X = sample_marginal(marginal, n, derive_seed(seed, StreamTag::kProperties));
  const CheckBuilder add{report, n, seed, n >= kMinPoweredSamples};

  // Isotropy: mean zero, identity covariance.
  {
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) mean[j] += X(i, j);
    }
    for (double& m : mean) m /= nd;
    double worst = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a; b < d; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (X(i, a) - mean[a]) * (X(i, b) - mean[b]);
        worst = std::max(worst, std::abs(s / nd - (a == b ? 1.0 : 0.0)));
      }
    }
    const double bound = std::max(0.05, 6.0 / std::sqrt(nd));
    add.add("isotropy_covariance", worst, bound, worst <= bound,
            "max |cov - I|; marginals of projections are checked through the 1-D checks below");
  }

  // Norm tail: Pr[|x| >= r sqrt(d)] <= exp(-r + 1).
  for (double r : {1.5, 2.0, 3.0}) {
    const double threshold = r * std::sqrt(static_cast<double>(d));
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += norm2(X.row(i)) >= threshold;
    const double stat = static_cast<double>(count) / nd;
    const double bound = std::exp(-r + 1.0);
    add.add("norm_tail_r" + fmt_num(r), stat, bound, stat <= bound);
  }

  // Disagreement of two halfspaces equals angle / pi.
  {
    constexpr int kPairs = 50;
    double worst = 0.0;
    for (int p = 0; p < kPairs; ++p) {
      const std::uint64_t pair_seed = derive_seed(seed, 1000 + static_cast<std::uint64_t>(p));
      const Hyperplane w = random_unit(d, pair_seed);
      CounterRng rng(pair_seed, StreamTag::kProperties, 0);
      const double theta = std::numbers::pi * rng.uniform();
      const Hyperplane w2 = rotated(w, theta, pair_seed);
      const double dis = disagreement(w, w2, X);
      worst = std::max(worst, std::abs(dis - angle(w, w2) / std::numbers::pi));
    }
    const double bound = std::max(0.005, 2.0 / std::sqrt(nd));
    add.add("disagreement_vs_angle", worst, bound, worst <= bound,
            "max over 50 random pairs of |Pr[disagree] - angle/pi|");
  }

  // Band mass against the exact one-dimensional marginal.
  {
    const Hyperplane w = random_unit(d, derive_seed(seed, 2000));
    for (double g : {0.05, 0.1, 0.3}) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) count += in_band(X.row(i), w, g);
      const double emp = static_cast<double>(count) / nd;
      const double ref = band_mass(marginal, g);
      const double bound = 3.0 * std::sqrt(ref * (1.0 - ref) / nd);
      const double stat = std::abs(emp - ref);
      add.add("band_mass_gamma" + fmt_num(g), stat, bound, stat <= bound,
              "empirical " + fmt_num(emp) + " vs reference " + fmt_num(ref));
    }
  }

  // Disagreement outside the band: Pr[|w.x| >= C3' alpha, signs differ] <= C3 alpha.
  {
    const ScheduleConstants c;
    const double C3 = c.c1_lower / 8.0;
    const Hyperplane w = random_unit(d, derive_seed(seed, 3000));
    for (double alpha : {0.05, 0.2}) {
      const Hyperplane w2 = rotated(w, alpha, derive_seed(seed, 3001));
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = X.row(i);
        count += std::abs(w.margin(x)) >= c.c3_prime * alpha && classify(w, x) != classify(w2, x);
      }
      const double stat = static_cast<double>(count) / nd;
      const double bound = C3 * alpha;
      add.add("wedge_outside_band_alpha" + fmt_num(alpha), stat, bound, stat <= bound);
    }
  }
  return report;
}

PropertyReport check_excess_sandwich(const Classifier& h, const Hyperplane& w_star, double nu,
                                     const MarginalSpec& marginal, const RateFn& rate_fn, std::size_t n,
                                     std::uint64_t seed) {
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("check_excess_sandwich: nu must lie in [0, 0.5)");
  PropertyReport report;
  if (n == 0) return report;
  const Matrix X = sample_marginal(marginal, n, derive_seed(seed, StreamTag::kProperties));
  const std::uint64_t noise_seed = derive_seed(seed, StreamTag::kNoise);

  std::size_t err_h = 0, err_star = 0, dis = 0, sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = X.row(i);
    const double margin = w_star.margin(x);
    const Label clean = sign_label(margin);
    CounterRng rng(noise_seed, StreamTag::kNoise, i);
    const Label y = rng.uniform() < rate_fn.rate(nu, margin) ? -clean : clean;
    const Label ph = h.predict(x);
    const int eh = ph != y;
    const int es = clean != y;
    err_h += eh;
    err_star += es;
    dis += ph != clean;
    sq += (eh - es) * (eh - es);
  }
  const double nd = static_cast<double>(n);
  const double excess = (static_cast<double>(err_h) - static_cast<double>(err_star)) / nd;
  const double disagree = static_cast<double>(dis) / nd;
  const double variance = static_cast<double>(sq) / nd;
  const double slack = 3.0 * hoeffding_radius(n);
  const CheckBuilder add{report, n, seed, n >= kMinPoweredSamples};
  const std::string note = "excess " + fmt_num(excess) + ", disagreement " + fmt_num(disagree);

  const double lower = (1.0 - 2.0 * nu) * disagree - excess;
  add.add("sandwich_lower", lower, slack, lower <= slack, note);
  const double upper = excess - disagree;
  add.add("sandwich_upper", upper, slack, upper <= slack, note);
  const double var_gap = std::abs(variance - disagree);
  add.add("variance_identity", var_gap, slack, var_gap <= slack);
  return report;
}

}  // namespace hsl
