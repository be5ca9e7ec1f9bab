#include "hsl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "hsl/model_io.hpp"
#include "hsl/rng.hpp"

namespace hsl {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::lp: return "lp";
    case LearnerKind::kearns_li: return "kearns_li";
    case LearnerKind::averaging: return "averaging";
    case LearnerKind::poly: return "poly";
    case LearnerKind::localize_hinge: return "localize_hinge";
    case LearnerKind::localize_poly_hinge: return "localize_poly_hinge";
  }
  return "?";
}

namespace {

/// Reads fields out of one JSON object and rejects any key it was not asked about.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return as<T>(raw(key), name(key));
  }

  template <class T>
  T require(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError("missing key " + name(key));
    return as<T>(raw(key), name(key));
  }

  void allow(std::initializer_list<const char*> keys) {
    for (const char* k : keys) allowed_.insert(k);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key) && !allowed_.count(key)) throw ConfigError("unknown key " + name(key));
    }
  }

  [[nodiscard]] std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  static T as(const json& v, const std::string& where) {
    try {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(where + " must be a nonnegative integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError(where + " must be a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(where + " must be a string");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
  std::set<std::string> allowed_;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

MarginalSpec parse_marginal(const json& j) {
  Fields f(j, "marginal");
  MarginalSpec m;
  const auto kind = f.get<std::string>("kind", "gaussian");
  if (kind == "gaussian") {
    m.kind = MarginalKind::gaussian;
  } else if (kind == "uniform_ball") {
    m.kind = MarginalKind::uniform_ball;
  } else {
    throw ConfigError("marginal.kind must be gaussian or uniform_ball, got '" + kind + "'");
  }
  m.d = f.require<std::size_t>("d");
  check(m.d >= 1, "marginal.d must be >= 1");
  f.finish();
  return m;
}

NoiseSpec parse_noise(const json& j) {
  Fields f(j, "noise");
  NoiseSpec n;
  const auto kind = f.get<std::string>("kind", "none");
  if (kind == "none") {
    n.kind = NoiseKind::none;
  } else if (kind == "rcn") {
    n.kind = NoiseKind::rcn;
    n.nu = f.require<double>("nu");
  } else if (kind == "bounded") {
    n.kind = NoiseKind::bounded;
    n.nu = f.require<double>("nu");
    const auto rate = f.get<std::string>("rate_fn", "constant");
    if (rate == "constant") {
      n.rate_fn.kind = RateFn::Kind::constant;
    } else if (rate == "margin_decay") {
      n.rate_fn.kind = RateFn::Kind::margin_decay;
      n.rate_fn.sigma = f.get<double>("sigma", 0.5);
    } else {
      throw ConfigError("noise.rate_fn must be constant or margin_decay, got '" + rate + "'");
    }
  } else if (kind == "adversarial_flip") {
    n.kind = NoiseKind::adversarial_flip;
    n.budget = f.require<double>("budget");
    const auto s = f.get<std::string>("strategy", "nearest_boundary");
    if (s == "nearest_boundary") {
      n.adversary = AdversaryStrategy::nearest_boundary;
    } else if (s == "orthogonal_bias") {
      n.adversary = AdversaryStrategy::orthogonal_bias;
    } else if (s == "random") {
      n.adversary = AdversaryStrategy::random;
    } else {
      throw ConfigError("noise.strategy '" + s + "' is not an adversarial_flip strategy");
    }
  } else if (kind == "malicious") {
    n.kind = NoiseKind::malicious;
    n.budget = f.require<double>("budget");
    const auto s = f.get<std::string>("strategy", "orthogonal_cluster");
    if (s == "orthogonal_cluster") {
      n.malicious = MaliciousStrategy::orthogonal_cluster;
    } else if (s == "boundary_cluster") {
      n.malicious = MaliciousStrategy::boundary_cluster;
    } else {
      throw ConfigError("noise.strategy '" + s + "' is not a malicious strategy");
    }
    n.cluster_scale = f.get<double>("cluster_scale", n.cluster_scale);
    n.cluster_band = f.get<double>("cluster_band", n.cluster_band);
  } else {
    throw ConfigError("noise.kind '" + kind + "' is not recognized");
  }
  f.finish();
  n.validate();
  return n;
}

LearnerConfig parse_learner(const json& j) {
  Fields f(j, "learner");
  LearnerConfig l;
  const auto kind = f.require<std::string>("kind");
  if (kind == "lp") {
    l.kind = LearnerKind::lp;
  } else if (kind == "kearns_li") {
    l.kind = LearnerKind::kearns_li;
    l.repetition_cap = f.get<std::size_t>("repetition_cap", l.repetition_cap);
    check(l.repetition_cap >= 1, "learner.repetition_cap must be >= 1");
  } else if (kind == "averaging") {
    l.kind = LearnerKind::averaging;
  } else if (kind == "poly") {
    l.kind = LearnerKind::poly;
    l.degree = f.get<std::size_t>("degree", l.degree);
    l.runs = f.get<std::size_t>("runs", l.runs);
    l.validation_size = f.get<std::size_t>("validation_size", l.validation_size);
    check(l.runs >= 1, "learner.runs must be >= 1");
    check(l.validation_size >= 1, "learner.validation_size must be >= 1");
  } else if (kind == "localize_hinge") {
    l.kind = LearnerKind::localize_hinge;
  } else if (kind == "localize_poly_hinge") {
    l.kind = LearnerKind::localize_poly_hinge;
    l.degree = f.get<std::size_t>("degree", l.degree);
  } else {
    throw ConfigError("learner.kind '" + kind + "' is not recognized");
  }
  check(l.degree >= 1, "learner.degree must be >= 1");
  f.finish();
  return l;
}

ScheduleConfig parse_schedule(const json& j) {
  Fields f(j, "schedule");
  ScheduleConfig s;
  const auto mode = f.get<std::string>("mode", "practical");
  if (mode == "practical") {
    s.mode = ScheduleMode::practical;
  } else if (mode == "theory") {
    s.mode = ScheduleMode::theory;
  } else {
    throw ConfigError("schedule.mode must be theory or practical");
  }
  auto& c = s.constants;
  c.c1_upper = f.get<double>("C1_upper", c.c1_upper);
  c.c1_lower = f.get<double>("C1_lower", c.c1_lower);
  c.c2_upper = f.get<double>("C2_upper", c.c2_upper);
  c.c2_lower = f.get<double>("C2_lower", c.c2_lower);
  c.c3_prime = f.get<double>("C3_prime", c.c3_prime);
  check(c.c1_upper > 0 && c.c1_lower > 0 && c.c2_upper > 0 && c.c2_lower > 0 && c.c3_prime > 0,
        "schedule constants must be positive");
  s.quota = f.get<std::size_t>("quota", s.quota);
  s.hinge_iterations = f.get<std::size_t>("hinge_iterations", s.hinge_iterations);
  s.step_radius = f.get<double>("step_radius", s.step_radius);
  if (f.has("max_rounds") && !j.at("max_rounds").is_null()) {
    s.max_rounds = f.require<std::size_t>("max_rounds");
    check(*s.max_rounds >= 1, "schedule.max_rounds must be >= 1");
  } else if (f.has("max_rounds")) {
    f.raw("max_rounds");
  }
  s.g_scale = f.get<double>("g_scale", s.g_scale);
  s.g_exponent = f.get<double>("g_exponent", s.g_exponent);
  check(s.quota >= 1, "schedule.quota must be >= 1");
  check(s.hinge_iterations >= 1, "schedule.hinge_iterations must be >= 1");
  check(s.step_radius > 0, "schedule.step_radius must be positive");
  check(s.g_scale > 0, "schedule.g_scale must be positive");
  f.finish();
  return s;
}

ordered_json noise_to_json(const NoiseSpec& n) {
  ordered_json j;
  j["kind"] = to_string(n.kind);
  switch (n.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::rcn:
      j["nu"] = n.nu;
      break;
    case NoiseKind::bounded:
      j["nu"] = n.nu;
      j["rate_fn"] = to_string(n.rate_fn.kind);
      if (n.rate_fn.kind == RateFn::Kind::margin_decay) j["sigma"] = n.rate_fn.sigma;
      break;
    case NoiseKind::adversarial_flip:
      j["budget"] = n.budget;
      j["strategy"] = to_string(n.adversary);
      break;
    case NoiseKind::malicious:
      j["budget"] = n.budget;
      j["strategy"] = to_string(n.malicious);
      j["cluster_scale"] = n.cluster_scale;
      j["cluster_band"] = n.cluster_band;
      break;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  Fields f(j, "");
  ExperimentConfig cfg;
  cfg.marginal = parse_marginal(f.has("marginal") ? f.raw("marginal") : json::object({{"d", 10}}));
  if (f.has("noise")) cfg.noise = parse_noise(f.raw("noise"));
  if (f.has("learner")) cfg.learner = parse_learner(f.raw("learner"));
  if (f.has("schedule")) cfg.schedule = parse_schedule(f.raw("schedule"));
  cfg.n_train = f.get<std::size_t>("n_train", cfg.n_train);
  cfg.n_eval = f.get<std::size_t>("n_eval", cfg.n_eval);
  cfg.eps = f.get<double>("epsilon", cfg.eps);
  cfg.delta = f.get<double>("delta", cfg.delta);
  cfg.seed = f.get<std::uint64_t>("seed", cfg.seed);
  cfg.block_size = f.get<std::size_t>("block_size", cfg.block_size);
  if (f.has("w_star")) {
    const json& w = f.raw("w_star");
    if (w.is_string()) {
      check(w.get<std::string>() == "random", "w_star must be \"random\" or an explicit vector");
    } else {
      auto v = Fields::as<std::vector<double>>(w, "w_star");
      check(v.size() == cfg.marginal.d, "w_star must have marginal.d entries");
      check(norm2(v) > 1e-12, "w_star must be nonzero");
      cfg.w_star = std::move(v);
    }
  }
  check(cfg.n_eval >= 1, "n_eval must be >= 1");
  check(cfg.eps > 0 && cfg.eps < 1, "epsilon must lie in (0, 1)");
  check(cfg.delta > 0 && cfg.delta < 1, "delta must lie in (0, 1)");
  check(cfg.block_size >= 1, "block_size must be >= 1");
  f.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["marginal"] = {{"kind", to_string(cfg.marginal.kind)}, {"d", cfg.marginal.d}};
  j["noise"] = noise_to_json(cfg.noise);
  ordered_json l;
  l["kind"] = to_string(cfg.learner.kind);
  switch (cfg.learner.kind) {
    case LearnerKind::kearns_li:
      l["repetition_cap"] = cfg.learner.repetition_cap;
      break;
    case LearnerKind::poly:
      l["degree"] = cfg.learner.degree;
      l["runs"] = cfg.learner.runs;
      l["validation_size"] = cfg.learner.validation_size;
      break;
    case LearnerKind::localize_poly_hinge:
      l["degree"] = cfg.learner.degree;
      break;
    default:
      break;
  }
  j["learner"] = l;
  const auto& s = cfg.schedule;
  j["schedule"] = {{"mode", to_string(s.mode)},
                   {"C1_upper", s.constants.c1_upper},
                   {"C1_lower", s.constants.c1_lower},
                   {"C2_upper", s.constants.c2_upper},
                   {"C2_lower", s.constants.c2_lower},
                   {"C3_prime", s.constants.c3_prime},
                   {"quota", s.quota},
                   {"hinge_iterations", s.hinge_iterations},
                   {"step_radius", s.step_radius},
                   {"max_rounds", s.max_rounds ? ordered_json(*s.max_rounds) : ordered_json(nullptr)},
                   {"g_scale", s.g_scale},
                   {"g_exponent", s.g_exponent}};
  j["n_train"] = cfg.n_train;
  j["n_eval"] = cfg.n_eval;
  j["epsilon"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["seed"] = cfg.seed;
  j["w_star"] = cfg.w_star ? ordered_json(*cfg.w_star) : ordered_json("random");
  j["block_size"] = cfg.block_size;
  return j;
}

Hyperplane target_hyperplane(const ExperimentConfig& cfg) {
  if (cfg.w_star) return normalize(*cfg.w_star);
  return random_unit(cfg.marginal.d, derive_seed(cfg.seed, StreamTag::kTarget));
}

Dataset training_set(const ExperimentConfig& cfg) {
  return generate(cfg.marginal, cfg.noise, target_hyperplane(cfg), cfg.n_train, cfg.seed);
}

namespace {

ordered_json round_to_json(const RoundDiagnostics& r) {
  ordered_json j;
  j["round"] = r.round;
  j["alpha"] = r.alpha;
  j["gamma"] = r.gamma;
  j["tau"] = r.tau;
  j["band_samples"] = r.band_samples;
  j["raw_draws"] = r.raw_draws;
  j["hinge_objective"] = r.hinge_objective;
  j["angle_step"] = r.angle_step;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  opt("angle_before", r.angle_before);
  opt("angle_after", r.angle_after);
  opt("target_band_error", r.target_band_error);
  opt("step1_target", r.step1_target);
  opt("poly_train_error", r.poly_train_error);
  opt("pseudo_label_disagreement", r.pseudo_label_disagreement);
  return j;
}

struct Trained {
  Classifier model;
  ordered_json details = ordered_json::object();
  ordered_json rounds = ordered_json::array();
  ordered_json constants = ordered_json::object();
  ordered_json theoretical = ordered_json::object();
};

Trained train_localized(const ExperimentConfig& cfg, const Hyperplane& w_star) {
  const auto& sc = cfg.schedule;
  const LocalizationSchedule schedule(sc.constants, sc.mode, cfg.eps, sc.max_rounds);
  const Dataset S = generate(cfg.marginal, cfg.noise, w_star, cfg.n_train, cfg.seed);
  const Hyperplane w1 = train_averaging(S);
  ExampleStream stream(cfg.marginal, cfg.noise, w_star, derive_seed(cfg.seed, StreamTag::kLearner),
                       cfg.block_size);
  const HingeOptions hinge{sc.hinge_iterations, sc.step_radius};
  const double g_c0 = schedule.g_c0(sc.g_scale, sc.g_exponent);

  BandOracle oracle;
  if (cfg.learner.kind == LearnerKind::localize_hinge) {
    const HingeBandOptions opts{sc.quota, hinge};
    oracle = [&, opts](const RoundRequest& req) { return band_oracle_hinge(stream, req, opts, w_star); };
  } else {
    const double nu = (cfg.noise.kind == NoiseKind::rcn || cfg.noise.kind == NoiseKind::bounded) ? cfg.noise.nu : 0.0;
    const PolyHingeBandOptions opts{sc.quota, cfg.learner.degree, nu, g_c0, hinge};
    oracle = [&, opts](const RoundRequest& req) { return band_oracle_poly_hinge(stream, req, opts, w_star); };
  }
  LocalizationResult res = localize(schedule, oracle, w1, cfg.delta, w_star);

  Trained t{res.w};
  t.details["warm_start_angle"] = angle(w1, w_star);
  t.details["total_draws"] = stream.drawn();
  for (const auto& r : res.rounds) t.rounds.push_back(round_to_json(r));
  t.constants = {{"C1_upper", sc.constants.c1_upper}, {"C1_lower", sc.constants.c1_lower},
                 {"C2_upper", sc.constants.c2_upper}, {"C2_lower", sc.constants.c2_lower},
                 {"C3_prime", sc.constants.c3_prime}, {"C3", sc.constants.c1_lower / 8.0},
                 {"mode", to_string(sc.mode)},         {"c0", schedule.c0()},
                 {"c_gamma", schedule.c_gamma()},      {"g_c0", g_c0},
                 {"rounds", schedule.rounds()},        {"rounds_uncapped", schedule.rounds_uncapped()}};
  ordered_json per_round = ordered_json::array();
  ordered_json quota_theory = ordered_json::array();
  const double d = static_cast<double>(cfg.marginal.d);
  for (std::size_t k = 1; k <= schedule.rounds(); ++k) {
    per_round.push_back({{"k", k}, {"alpha", schedule.alpha(k)}, {"gamma", schedule.gamma(k)}, {"tau", schedule.tau(k)}});
    // d^2 / (gamma_k c0^2) ln(1/eps) ln(r/delta), constants and log factors dropped.
    quota_theory.push_back(d * d / (schedule.gamma(k) * schedule.c0() * schedule.c0()) * std::log(1.0 / cfg.eps) *
                           std::log(static_cast<double>(schedule.rounds()) / cfg.delta));
  }
  t.constants["per_round"] = per_round;
  t.theoretical["band_quota_per_round"] = quota_theory;
  t.theoretical["band_quota_used"] = sc.quota;
  return t;
}

Trained train(const ExperimentConfig& cfg, const Hyperplane& w_star) {
  switch (cfg.learner.kind) {
    case LearnerKind::averaging:
      return Trained{train_averaging(training_set(cfg))};
    case LearnerKind::lp: {
      auto h = train_lp_realizable(training_set(cfg));
      if (!h) throw NoFeasibleSeparator();
      return Trained{*h};
    }
    case LearnerKind::kearns_li: {
      ExampleStream stream(cfg.marginal, cfg.noise, w_star, derive_seed(cfg.seed, StreamTag::kLearner),
                           cfg.block_size);
      const KearnsLiResult r =
          train_kearns_li(stream, cfg.marginal.d, cfg.eps, cfg.delta, {cfg.learner.repetition_cap});
      Trained t{r.h};
      t.details = {{"sample_size", r.sample_size},       {"repetitions", r.repetitions},
                   {"candidates", r.candidates},         {"validation_size", r.validation_size},
                   {"validation_error", r.validation_error}};
      t.theoretical["repetitions_uncapped"] = r.repetitions_theoretical;
      t.theoretical["repetitions_used"] = r.repetitions;
      return t;
    }
    case LearnerKind::poly: {
      if (cfg.learner.runs == 1) {
        const PolyRegressionResult r = train_poly_regression(training_set(cfg), cfg.learner.degree);
        Trained t{r.f};
        t.details = {{"l1_error", r.l1_error}, {"train_error", r.train_error}};
        return t;
      }
      const Dataset validation =
          generate(cfg.marginal, cfg.noise, w_star, cfg.learner.validation_size, derive_seed(cfg.seed, 99));
      auto trainer = [&](std::size_t run) -> Classifier {
        const Dataset S = generate(cfg.marginal, cfg.noise, w_star, cfg.n_train, derive_seed(cfg.seed, 100 + run));
        return train_poly_regression(S, cfg.learner.degree).f;
      };
      ValidatedChoice choice = repeat_and_validate(trainer, cfg.learner.runs, validation);
      Trained t{std::move(choice.classifier)};
      t.details = {{"selected_run", choice.run}, {"validation_errors", choice.validation_errors}};
      return t;
    }
    case LearnerKind::localize_hinge:
    case LearnerKind::localize_poly_hinge:
      return train_localized(cfg, w_star);
  }
  throw ConfigError("unsupported learner");
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Hyperplane w_star = target_hyperplane(cfg);
  Trained t = train(cfg, w_star);
  const ErrorEstimate err = mc_error(t.model, cfg.marginal, w_star, cfg.noise, cfg.n_eval, cfg.seed);
  std::optional<double> ang;
  if (const auto* h = t.model.halfspace()) ang = angle(*h, w_star);
  const auto stop = std::chrono::steady_clock::now();
  const double wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();

  ordered_json report;
  report["config"] = config_to_json(cfg);
  report["w_star"] = std::vector<double>(w_star.w().begin(), w_star.w().end());
  report["model"] = ordered_json::parse(model_to_json(t.model));
  report["mc_error"] = {{"value", err.value}, {"n", err.n}, {"ci_radius", err.ci_radius}};
  report["angle"] = ang ? ordered_json(*ang) : ordered_json(nullptr);
  report["train"] = t.details;
  report["rounds"] = t.rounds;
  report["constants"] = t.constants;
  report["theoretical"] = t.theoretical;
  report["wall_ms"] = wall_ms;
  return {std::move(report), err, ang, wall_ms};
}

// --- sweeps -----------------------------------------------------------------

namespace {

bool is_sweep(const json& j) { return j.is_object() && j.size() == 1 && j.contains("sweep"); }

void find_sweeps(const json& j, const json::json_pointer& at, std::vector<json::json_pointer>& out) {
  if (is_sweep(j)) {
    out.push_back(at);
    return;
  }
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) find_sweeps(value, at / key, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) find_sweeps(j[i], at / i, out);
  }
}

}  // namespace

SweepPlan plan_sweep(const json& j, std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) throw ConfigError("sweep config must be an object");
  SweepPlan plan;
  plan.base = j;

  if (plan.base.contains("seeds")) {
    const json& s = plan.base.at("seeds");
    if (s.is_array()) {
      for (const auto& v : s) plan.seeds.push_back(Fields::as<std::uint64_t>(v, "seeds[]"));
    } else {
      const auto count = Fields::as<std::size_t>(s, "seeds");
      const auto first = plan.base.contains("seed") ? Fields::as<std::uint64_t>(plan.base.at("seed"), "seed") : 1;
      for (std::size_t i = 0; i < count; ++i) plan.seeds.push_back(first + i);
    }
    plan.base.erase("seeds");
  } else {
    plan.seeds.push_back(plan.base.contains("seed") ? Fields::as<std::uint64_t>(plan.base.at("seed"), "seed") : 1);
  }
  if (seed_override) plan.seeds = {*seed_override};
  if (plan.seeds.empty()) throw ConfigError("seeds must not be empty");

  if (plan.base.contains("learners")) {
    const json& l = plan.base.at("learners");
    if (!l.is_array() || l.empty()) throw ConfigError("learners must be a nonempty array");
    for (const auto& v : l) plan.learners.push_back(v);
    plan.base.erase("learners");
  } else if (plan.base.contains("learner")) {
    plan.learners.push_back(plan.base.at("learner"));
  } else {
    plan.learners.push_back(json{{"kind", "averaging"}});
  }

  std::vector<json::json_pointer> sweeps;
  find_sweeps(plan.base, json::json_pointer(), sweeps);
  for (const auto& l : plan.learners) {
    std::vector<json::json_pointer> inner;
    find_sweeps(l, json::json_pointer(), inner);
    if (!inner.empty()) throw ConfigError("sweep values inside learners are not supported");
  }
  if (sweeps.size() != 1) {
    throw ConfigError("a sweep needs exactly one {\"sweep\": [...]} parameter, found " + std::to_string(sweeps.size()));
  }
  const auto& values = plan.base.at(sweeps[0]).at("sweep");
  if (!values.is_array() || values.empty()) throw ConfigError(sweeps[0].to_string() + ".sweep must be a nonempty array");
  for (const auto& v : values) plan.values.push_back(Fields::as<double>(v, sweeps[0].to_string()));
  plan.parameter = sweeps[0].to_string();

  // Validate every cell's configuration before running anything.
  for (double v : plan.values) {
    for (const auto& l : plan.learners) {
      json cell = plan.base;
      cell[json::json_pointer(plan.parameter)] = v;
      cell["learner"] = l;
      cell["seed"] = plan.seeds.front();
      parse_config(cell);
    }
  }
  return plan;
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan, std::size_t threads) {
  struct Cell {
    std::size_t value_index, learner_index, seed_index;
  };
  std::vector<Cell> cells;
  for (std::size_t v = 0; v < plan.values.size(); ++v) {
    for (std::size_t l = 0; l < plan.learners.size(); ++l) {
      for (std::size_t s = 0; s < plan.seeds.size(); ++s) cells.push_back({v, l, s});
    }
  }
  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      json cell = plan.base;
      cell[json::json_pointer(plan.parameter)] = plan.values[c.value_index];
      cell["learner"] = plan.learners[c.learner_index];
      cell["seed"] = plan.seeds[c.seed_index];
      const ExperimentConfig cfg = parse_config(cell);
      SweepRow& row = rows[i];
      row.sweep_value = plan.values[c.value_index];
      row.seed = cfg.seed;
      row.learner = to_string(cfg.learner.kind);
      try {
        const RunOutcome out = run_experiment(cfg);
        row.mc_error = out.error.value;
        row.ci_radius = out.error.ci_radius;
        row.angle = out.angle;
        row.wall_ms = out.wall_ms;
      } catch (const Error& e) {
        row.mc_error = std::nan("");
        row.error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  // Cells were enumerated in (value, learner, seed) order, so rows are already sorted.
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "sweep_value,seed,learner,mc_error,ci_radius,angle,wall_ms\n";
  for (const auto& r : rows) {
    out += format_double(r.sweep_value) + ',' + std::to_string(r.seed) + ',' + r.learner + ',' +
           (r.error.empty() ? format_double(r.mc_error) : std::string("nan")) + ',' +
           format_double(r.ci_radius) + ',' + (r.angle ? format_double(*r.angle) : std::string("")) + ',' +
           format_double(r.wall_ms) + '\n';
  }
  return out;
}

}  // namespace hsl
