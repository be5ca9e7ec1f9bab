#include "hsl/localization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsl {

std::string to_string(ScheduleMode mode) { return mode == ScheduleMode::theory ? "theory" : "practical"; }

LocalizationSchedule::LocalizationSchedule(ScheduleConstants constants, ScheduleMode mode, double eps,
                                           std::optional<std::size_t> max_rounds)
    : constants_(constants), mode_(mode), eps_(eps) {
  const auto& c = constants_;
  if (!(c.c1_upper > 0 && c.c1_lower > 0 && c.c2_upper > 0 && c.c2_lower > 0 && c.c3_prime > 0)) {
    throw std::invalid_argument("LocalizationSchedule: constants must be positive");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("LocalizationSchedule: eps must lie in (0, 1)");
  if (mode == ScheduleMode::theory) {
    c_gamma_ = std::max(c.c3_prime, c.c1_lower / c.c2_upper);
    c0_ = std::min(0.25, c.c1_lower / (4.0 * c.c2_upper * c.c3_prime));
  } else {
    c_gamma_ = 1.0;
    c0_ = 0.25;
  }
  const double r = std::ceil(std::log2(c.c1_upper * std::numbers::pi / eps)) - 1.0;
  rounds_uncapped_ = static_cast<std::size_t>(std::max(1.0, r));
  rounds_ = max_rounds ? std::clamp<std::size_t>(*max_rounds, 1, rounds_uncapped_) : rounds_uncapped_;
}

double LocalizationSchedule::alpha(std::size_t k) const {
  return std::ldexp(std::numbers::pi, -static_cast<int>(k));
}

double LocalizationSchedule::gamma(std::size_t k) const { return c_gamma_ * alpha(k); }

double LocalizationSchedule::tau(std::size_t k) const {
  if (mode_ == ScheduleMode::practical) return gamma(k) / 2.0;
  return gamma(k) * c0_ * constants_.c2_lower / (4.0 * constants_.c2_upper);
}

double LocalizationSchedule::g_c0(double scale, double exponent) const {
  return scale * std::pow(c0_, exponent);
}

LocalizationResult localize(const LocalizationSchedule& schedule, const BandOracle& oracle,
                            const Hyperplane& w1, double delta, const std::optional<Hyperplane>& w_star) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("localize: delta must lie in (0, 1)");
  const std::size_t r = schedule.rounds();
  LocalizationResult result{w1, {}};
  for (std::size_t k = 1; k <= r; ++k) {
    RoundRequest req{k, result.w, schedule.alpha(k), schedule.gamma(k), schedule.tau(k),
                     delta / static_cast<double>(r)};
    OracleOutcome out = oracle(req);
    RoundDiagnostics diag = out.diagnostics;
    diag.round = k;
    diag.alpha = req.alpha;
    diag.gamma = req.gamma;
    diag.tau = req.tau;
    diag.angle_step = angle(out.w, result.w);
    if (w_star) {
      diag.angle_before = angle(result.w, *w_star);
      diag.angle_after = angle(out.w, *w_star);
    }
    result.rounds.push_back(diag);
    result.w = std::move(out.w);
  }
  return result;
}

BandSample fill_band(Sampler& sampler, const Hyperplane& w, double gamma, std::size_t quota) {
  if (quota == 0) throw std::invalid_argument("fill_band: quota must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("fill_band: gamma must be positive");
  if (sampler.dim() != w.dim()) throw DimensionMismatch(w.dim(), sampler.dim());
  const double mass = std::erf(gamma / std::sqrt(2.0));  // 2 Phi(gamma) - 1
  const double cap_real = 50.0 * static_cast<double>(quota) / mass;
  const auto cap = static_cast<std::size_t>(std::min(cap_real, 1e15));

  BandSample out{Dataset(w.dim()), 0};
  out.samples.reserve(quota);
  std::vector<double> x(w.dim());
  while (out.samples.size() < quota) {
    if (out.raw_draws >= cap) throw InsufficientBandSamples(out.samples.size(), quota, out.raw_draws);
    const Label y = sampler.next(x);
    ++out.raw_draws;
    if (in_band(x, w, gamma)) out.samples.push_back(x, y);
  }
  return out;
}

namespace {

Hyperplane direction_or(const std::vector<double>& v, const Hyperplane& fallback) {
  if (norm2(v) <= 1e-12) return fallback;
  return normalize(v);
}

std::optional<double> target_error(const Dataset& band, const std::optional<Hyperplane>& w_star) {
  if (!w_star || band.empty()) return std::nullopt;
  return empirical_error(*w_star, band);
}

}  // namespace

OracleOutcome band_oracle_hinge(Sampler& sampler, const RoundRequest& request,
                                const HingeBandOptions& options, const std::optional<Hyperplane>& w_star) {
  BandSample band = fill_band(sampler, request.w, request.gamma, options.quota);
  RoundDiagnostics diag;
  diag.band_samples = band.samples.size();
  diag.raw_draws = band.raw_draws;
  diag.target_band_error = target_error(band.samples, w_star);

  HingeProblem problem{std::move(band.samples), request.tau, ConeCap{request.w, request.alpha, 1.0}};
  const HingeResult res = minimize_hinge(problem, options.hinge);
  diag.hinge_objective = res.objective;
  return {direction_or(res.v, request.w), diag};
}

OracleOutcome band_oracle_poly_hinge(Sampler& sampler, const RoundRequest& request,
                                     const PolyHingeBandOptions& options,
                                     const std::optional<Hyperplane>& w_star) {
  if (!(options.nu >= 0.0 && options.nu < 0.5)) {
    throw std::invalid_argument("band_oracle_poly_hinge: nu must lie in [0, 0.5)");
  }
  RoundDiagnostics diag;
  diag.step1_target = (1.0 - 2.0 * options.nu) * options.g_c0;

  // Step 1: polynomial threshold fitted to the noisy band labels.
  BandSample first = fill_band(sampler, request.w, request.gamma, options.quota);
  const PolyRegressionResult fit = train_poly_regression(first.samples, options.degree);
  diag.poly_train_error = fit.train_error;

  // Step 2: fresh band sample, relabeled by the polynomial threshold.
  BandSample second = fill_band(sampler, request.w, request.gamma, options.quota);
  diag.band_samples = first.samples.size() + second.samples.size();
  diag.raw_draws = first.raw_draws + second.raw_draws;
  diag.target_band_error = target_error(second.samples, w_star);

  Dataset pseudo = second.samples;
  for (std::size_t i = 0; i < pseudo.size(); ++i) pseudo.set_label(i, fit.f.classify(pseudo.x(i)));

  HingeProblem problem{pseudo, request.tau, ConeCap{request.w, request.alpha, 1.0}};
  const HingeResult res = minimize_hinge(problem, options.hinge);
  diag.hinge_objective = res.objective;
  Hyperplane w_next = direction_or(res.v, request.w);
  diag.pseudo_label_disagreement = empirical_error(w_next, pseudo);
  return {std::move(w_next), diag};
}

}  // namespace hsl
