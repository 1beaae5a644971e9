#pragma once

// Named end-to-end scenarios: each pairs a Monte Carlo pipeline with its
// analytic target and records pass/fail checks against fixed tolerances.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/estimation.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/models.hpp"
#include "rvtail/spectral_measure.hpp"
#include "rvtail/transforms.hpp"

namespace rvtail {

inline constexpr std::array<const char*, 8> kScenarioNames{"theorem1", "corollary1", "theorem2", "theorem3",
                                                          "corollary2", "example1", "example2", "example3"};

inline bool is_scenario(const std::string& name) {
  return std::find(kScenarioNames.begin(), kScenarioNames.end(), name) != kScenarioNames.end();
}

struct ScenarioOptions {
  std::size_t n = 200000;
  std::uint64_t seed = 42;
  double top_fraction = 0.01;
  unsigned workers = 1;
  bool record_runtime = false;
  /// Merged over the scenario's default config (JSON merge patch).
  json overrides = json::object();
};

struct Check {
  std::string name;
  double value;
  double tolerance;
  std::string relation;  // "<=", ">=", "<", ">", "finite"
  bool pass;
};

inline Check make_check(std::string name, double value, std::string relation, double tolerance) {
  bool pass = false;
  if (relation == "<=") pass = value <= tolerance;
  else if (relation == ">=") pass = value >= tolerance;
  else if (relation == "<") pass = value < tolerance;
  else if (relation == ">") pass = value > tolerance;
  else if (relation == "finite") pass = std::isfinite(value);
  else fail(ErrorKind::InvalidArgument, "unknown check relation " + relation);
  return {std::move(name), value, tolerance, std::move(relation), pass};
}

struct Report {
  std::string scenario;
  json config;
  std::vector<Check> checks;
  json measured = json::object();
  std::optional<double> runtime_s;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

inline json to_json(const Report& r) {
  json checks = json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"relation", c.relation},
                      {"pass", c.pass}});
  }
  return {{"scenario", r.scenario},
          {"config", r.config},
          {"checks", std::move(checks)},
          {"measured", r.measured},
          {"runtime_s", r.runtime_s ? json(*r.runtime_s) : json(nullptr)}};
}

namespace detail {

inline json uniform_sigma_spec() { return {{"kind", "density"}, {"density", {{"name", "uniform"}}}}; }

inline json polar_model_spec(double alpha) {
  return {{"kind", "polar_independent"}, {"alpha", alpha}, {"sigma", uniform_sigma_spec()}, {"radial", {{"kind", "pareto"}}}};
}

inline json default_config(const std::string& name) {
  if (name == "theorem1") return {{"model", polar_model_spec(1.0)}, {"map", "quadrant_snap"}};
  if (name == "corollary1") {
    json atoms = json::array({json{{"angle", kPi / 2.0}, {"weight", 0.3}}, json{{"angle", 3.0 * kPi / 2.0}, {"weight", 0.7}}});
    return {{"model", polar_model_spec(1.0)}, {"target", {{"kind", "discrete"}, {"atoms", atoms}}}};
  }
  if (name == "theorem2")
    return {{"model", polar_model_spec(2.0)}, {"gain", {{"type", "cosine"}, {"base", 1.0}, {"amplitude", 0.5}}}};
  if (name == "theorem3") {
    return {{"model", polar_model_spec(1.0)},
            {"gain", {{"type", "power_cusp"}, {"center", kPi}, {"gamma", 0.2}}},
            {"epsilon", 0.5}};
  }
  if (name == "corollary2") {
    return {{"model", polar_model_spec(1.0)},
            {"process", {{"type", "exponential"}, {"mean", {{"type", "cosine"}, {"base", 1.0}, {"amplitude", 0.5}}}}}};
  }
  if (name == "example1") return {{"model", {{"kind", "example1"}, {"alpha", 1.0}, {"amplitude", 0.5}}}};
  if (name == "example2") {
    return {{"model", {{"kind", "example2"}, {"alpha", 1.0}, {"nu", 0.5}, {"beta", 1.2}}},
            {"r_grid", {100.0, 1000.0, 10000.0}},
            {"delta", 0.05}};
  }
  if (name == "example3") return {{"model", {{"kind", "example3"}, {"alpha", 1.0}}}, {"gain", {{"type", "punctured"}, {"at", 0.0}}}};
  fail(ErrorKind::InvalidArgument, "unknown scenario \"" + name + "\"");
}

/// Weight of an atomic measure within `radius` of angle t.
inline double mass_near(const SpectralMeasure& m, double t, double radius = 1e-6) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    if (circular_distance(m.atom_angles()[i], t) <= radius) s += m.atoms()[i].weight;
  }
  return s;
}

inline double log_grid_point(int j, int steps) { return std::exp(kTwoPi * j / steps); }

}  // namespace detail

/// The exact config a scenario runs with (defaults, budget, overrides).
inline json scenario_config(const std::string& name, const ScenarioOptions& opt) {
  json cfg = detail::default_config(name);
  cfg["n"] = opt.n;
  cfg["seed"] = opt.seed;
  cfg["top_fraction"] = opt.top_fraction;
  cfg.merge_patch(opt.overrides);
  return cfg;
}

namespace detail {

struct Context {
  json cfg;
  std::size_t n;
  std::uint64_t seed;
  double top;
  unsigned workers;
};

// Spherical map applied to a sampled batch, reloaded as from a CSV.
inline Report run_theorem1(const Context& c, Report rep) {
  const ModelPtr model = model_from_json(c.cfg.at("model"));
  const SphereMap f = map_from_json(c.cfg.at("map"));
  const SpectralMeasure sigma = *model->spectral();
  const SpectralMeasure target = normalize(pushforward(sigma, f));
  const LimitMeasure q(model->alpha(), sigma);
  const LimitMeasure qf = limit_pushforward_spherical(q, f);

  const SampleBatch x = model->sample(c.n, c.seed, c.workers);
  const SampleBatch y_raw = spherical_map_apply(x, f);
  double norm_change = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) norm_change = std::max(norm_change, std::abs(y_raw.norm(i) - x.norm(i)));
  const SampleBatch y = y_raw.rederived();
  const std::size_t k = resolve_top(c.top, y.size());
  const SpectralMeasure est = empirical_spectral(y, k);
  const auto dist = spectral_distances(est, target);

  if (dist.count("tv")) rep.checks.push_back(make_check("tv_empirical_vs_pushforward", dist.at("tv"), "<=", 0.05));
  else rep.checks.push_back(make_check("ks_empirical_vs_pushforward", dist.at("ks"), "<=", 0.05));
  rep.checks.push_back(make_check("norm_change", norm_change, "<=", 0.0));
  rep.checks.push_back(make_check("alpha_change", std::abs(qf.alpha() - q.alpha()), "<=", 0.0));
  rep.measured = {{"k", k}, {"distances", dist}, {"alpha_hat", hill_estimator(y, k)}};
  if (target.is_atomic()) rep.measured["target"] = measure_to_json(target);
  return rep;
}

inline Report run_corollary1(const Context& c, Report rep) {
  const ModelPtr model = model_from_json(c.cfg.at("model"));
  const SpectralMeasure mu = normalize(measure_from_json(c.cfg.at("target")));
  const SphereMap f = quantile_transform_map(mu);
  const SpectralMeasure sigma = *model->spectral();

  const double exact_ks = distance_ks(normalize(pushforward(sigma, f)), mu);
  rep.checks.push_back(make_check("exact_pushforward_ks", exact_ks, "<=", 1e-9));

  const SampleBatch y = spherical_map_apply(model->sample(c.n, c.seed, c.workers), f).rederived();
  const std::size_t k = resolve_top(c.top, y.size());
  const SpectralMeasure est = empirical_spectral(y, k);
  json weights = json::array();
  for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
    const double t = mu.atom_angles()[i];
    const double w = detail::mass_near(est, t);
    rep.checks.push_back(make_check("atom_weight_error_" + std::to_string(i), std::abs(w - mu.atoms()[i].weight), "<=", 0.03));
    weights.push_back({{"angle", t}, {"target", mu.atoms()[i].weight}, {"recovered", w}});
  }
  rep.measured = {{"k", k}, {"atoms", weights}, {"distances", spectral_distances(est, mu)}};
  return rep;
}

inline Report run_theorem2(const Context& c, Report rep) {
  const RadialGain h = gain_from_json(c.cfg.at("gain"));
  if (!h.bounded())
    fail(ErrorKind::HypothesisViolation, "theorem2 needs a bounded gain; unbounded gains go through theorem3");
  const ModelPtr model = model_from_json(c.cfg.at("model"));
  const SpectralMeasure sigma = *model->spectral();
  const double alpha = model->alpha();
  const SpectralMeasure target = normalize(reweight(sigma, h, alpha));

  // Analytic side: Q∘φ⁻¹((r,∞) × B) against an independent quadrature of
  // ∫_B h^α dσ, on 10³ (r, arc) probes.
  const LimitMeasure q(alpha, sigma);
  const LimitMeasure qh = limit_pushforward_radial(q, h);
  double max_err = 0.0;
  constexpr int kArcs = 40;
  constexpr int kRadii = 25;
  for (int a = 0; a < kArcs; ++a) {
    const double lo = kTwoPi * a / (kArcs + 1);
    const double hi = lo + kTwoPi * (a + 1) / (2.0 * kArcs + 2.0);
    const ArcSet arc({{lo, std::min(hi, kTwoPi)}});
    auto integrand = [&](double t) {
      const double v = sigma.is_atomic() ? 0.0 : sigma.density_at(t);
      return v * std::pow(h.at_angle(t), alpha);
    };
    double mass = 0.0;
    if (sigma.is_atomic()) {
      for (std::size_t i = 0; i < sigma.atoms().size(); ++i) {
        if (arc.contains(Angle(sigma.atom_angles()[i]))) mass += sigma.atoms()[i].weight * std::pow(h(sigma.atoms()[i].dir), alpha);
      }
    } else {
      mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, arc.arcs()[0].begin, arc.arcs()[0].end, 15, 1e-14);
    }
    for (int j = 0; j < kRadii; ++j) {
      const double r = std::pow(10.0, -1.0 + 5.0 * j / (kRadii - 1));
      const double want = mass * std::pow(r, -alpha);
      const double got = qh.eval(r, arc);
      max_err = std::max(max_err, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
  }
  rep.checks.push_back(make_check("limit_eval_identity_error", max_err, "<=", 1e-12));
  rep.checks.push_back(make_check("alpha_change", std::abs(qh.alpha() - alpha), "<=", 0.0));

  const SampleBatch y = radial_scale_apply(model->sample(c.n, c.seed, c.workers), h).rederived();
  const std::size_t k = resolve_top(c.top, y.size());
  const SpectralMeasure est = empirical_spectral(y, k);
  const auto dist = spectral_distances(est, target);
  rep.checks.push_back(make_check("ks_empirical_vs_reweighted", dist.at("ks"), "<=", 0.05));
  rep.measured = {{"k", k}, {"zero_count", y.zero_count()}, {"distances", dist}, {"alpha_hat", hill_estimator(y, k)}};
  if (!target.is_atomic() && !target.density_spec().is_null()) rep.measured["target"] = measure_to_json(target);
  return rep;
}

inline Report run_theorem3(const Context& c, Report rep) {
  const ModelPtr model = model_from_json(c.cfg.at("model"));
  if (!model->polar_independent())
    fail(ErrorKind::HypothesisViolation, "theorem3 needs a model with independent norm and direction");
  const RadialGain h = gain_from_json(c.cfg.at("gain"));
  const double alpha = model->alpha();
  const double eps = c.cfg.value("epsilon", 0.5);
  const SpectralMeasure sigma = *model->spectral();
  double moment = 0.0;
  try {
    moment = moment_condition(sigma, h, alpha, eps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MomentDivergence) throw;
    fail(ErrorKind::HypothesisViolation, std::string("moment condition fails: ") + e.what());
  }
  rep.checks.push_back(make_check("moment_finite", moment, "finite", 0.0));
  json measured{{"moment", moment}};
  // Closed form for a power cusp against the uniform law on the circle.
  if (h.cusp() && !sigma.is_atomic() && sigma.density_spec().value("name", "") == "uniform") {
    const double gp = h.cusp()->gamma * (alpha + eps);
    const double hand = std::pow(kPi, 1.0 - gp) / ((1.0 - gp) * kPi);
    rep.checks.push_back(make_check("moment_vs_closed_form", std::abs(moment - hand), "<=", 1e-6));
    measured["moment_closed_form"] = hand;
  }
  const SpectralMeasure target = normalize(reweight(sigma, h, alpha));
  const SampleBatch y = radial_scale_apply(model->sample(c.n, c.seed, c.workers), h).rederived();
  const std::size_t k = resolve_top(c.top, y.size());
  const auto dist = spectral_distances(empirical_spectral(y, k), target);
  rep.checks.push_back(make_check("ks_empirical_vs_reweighted", dist.at("ks"), "<=", 0.06));
  measured["k"] = k;
  measured["distances"] = dist;
  rep.measured = std::move(measured);
  return rep;
}

inline Report run_corollary2(const Context& c, Report rep) {
  const ModelPtr model = model_from_json(c.cfg.at("model"));
  if (!model->polar_independent())
    fail(ErrorKind::HypothesisViolation, "corollary2 needs a model with independent norm and direction");
  const RandomGainProcess z = process_from_json(c.cfg.at("process"));
  const double alpha = model->alpha();
  const SpectralMeasure sigma = *model->spectral();

  const SpectralMeasure analytic = expected_gain_reweight(sigma, z, alpha, c.seed);
  const SpectralMeasure mc = expected_gain_reweight(sigma, z.monte_carlo_only(), alpha, c.seed);
  const double mass_gap = std::abs(mc.total_mass() / analytic.total_mass() - 1.0);
  const double shape_gap = distance_ks(normalize(mc), normalize(analytic));
  rep.checks.push_back(make_check("moment_paths_relative_mass_gap", mass_gap, "<=", 0.01));
  rep.checks.push_back(make_check("moment_paths_ks", shape_gap, "<=", 0.01));

  const SampleBatch y = randomized_scale_apply(model->sample(c.n, c.seed, c.workers), z, c.seed, c.workers).rederived();
  const std::size_t k = resolve_top(c.top, y.size());
  const auto dist = spectral_distances(empirical_spectral(y, k), normalize(analytic));
  rep.checks.push_back(make_check("ks_empirical_vs_expected_gain", dist.at("ks"), "<=", 0.06));
  rep.measured = {{"k", k},
                  {"zero_count", y.zero_count()},
                  {"analytic_mass", analytic.total_mass()},
                  {"monte_carlo_mass", mc.total_mass()},
                  {"distances", dist}};
  return rep;
}

inline Report run_example1(const Context& c, Report rep) {
  const ModelPtr base = model_from_json(c.cfg.at("model"));
  const auto* model = dynamic_cast<const Example1Model*>(base.get());
  require(model != nullptr, ErrorKind::InvalidSpec, "example1 needs an example1 model");
  const double alpha = model->alpha();

  // Closed-form scans over r = e^{2πj/16}, j = 0..16: plain and along r·b_n.
  constexpr int kSteps = 16;
  const double bn = normalizing_sequence(alpha, static_cast<double>(c.n));
  std::vector<double> side;
  std::vector<double> side_bn;
  double mixture_err = 0.0;
  for (int j = 0; j <= kSteps; ++j) {
    const double r = detail::log_grid_point(j, kSteps);
    side.push_back(std::pow(r, alpha) * model->side_tail(r, +1));
    side_bn.push_back(std::pow(r, alpha) * static_cast<double>(c.n) * model->side_tail(r * bn, +1));
    mixture_err = std::max(mixture_err, std::abs(std::pow(r, alpha) * model->mixture_tail(r) - 1.0));
    mixture_err = std::max(mixture_err, std::abs(std::pow(r, alpha) * static_cast<double>(c.n) * model->mixture_tail(r * bn) - 1.0));
  }
  auto range = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  rep.checks.push_back(make_check("side_tail_oscillation_range", range(side), ">=", 0.9));
  rep.checks.push_back(make_check("side_tail_oscillation_range_bn", range(side_bn), ">=", 0.9));
  rep.checks.push_back(make_check("mixture_tail_deviation", mixture_err, "<=", 1e-12));

  // Illustration: under the sign map the upper half-plane keeps ½ of the
  // exceedance mass, while σ∘f⁻¹ = δ₀ puts none there.
  const SphereMap f = SphereMap::sign_map();
  const SpectralMeasure pushed = pushforward(*model->spectral(), f);
  const ArcSet upper({{1e-9, kPi + 1e-9}});
  const SampleBatch y = spherical_map_apply(model->sample(c.n, c.seed, c.workers), f).rederived();
  const std::size_t k = resolve_top(c.top, y.size());
  rep.measured = {{"side_tail_scan", side},
                  {"side_tail_scan_bn", side_bn},
                  {"b_n", bn},
                  {"k", k},
                  {"sign_map_upper_mass_empirical", empirical_spectral(y, k).measure_of(upper)},
                  {"sign_map_upper_mass_pushforward", pushed.measure_of(upper)}};
  return rep;
}

inline Report run_example2(const Context& c, Report rep) {
  const ModelPtr base = model_from_json(c.cfg.at("model"));
  const auto* model = dynamic_cast<const Example2Model*>(base.get());
  require(model != nullptr, ErrorKind::InvalidSpec, "example2 needs an example2 model");
  const double alpha = model->alpha();
  const RadialGain h = RadialGain::example2(model->beta());
  const auto grid = c.cfg.at("r_grid").get<std::vector<double>>();
  const std::vector<ArcSet> full{ArcSet::full()};

  const TailScan transformed = tail_scan(*model, alpha, full, grid, h);
  const auto& v = transformed.values[0];
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.size(); ++i) min_step = std::min(min_step, v[i] - v[i - 1]);
  double min_margin = std::numeric_limits<double>::infinity();
  json bounds = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double b = example2_lower_bound(alpha, model->beta(), grid[i]);
    bounds.push_back(b);
    min_margin = std::min(min_margin, v[i] - b);
  }
  rep.checks.push_back(make_check("transformed_min_increment", min_step, ">", 0.0));
  rep.checks.push_back(make_check("transformed_minus_bound", min_margin, ">=", 0.0));

  const TailScan plain = tail_scan(*model, alpha, full, grid);
  rep.checks.push_back(make_check("untransformed_range", plain.full_range[0], "<=", 1e-9));

  const double delta = c.cfg.value("delta", 0.05);
  double moment = std::numeric_limits<double>::infinity();
  try {
    moment = example2_moment_condition(alpha, model->nu(), model->beta(), delta);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MomentDivergence) throw;
  }
  rep.checks.push_back(make_check("moment_condition_finite", moment, "finite", 0.0));

  bool refused = false;
  try {
    (void)limit_pushforward_radial(LimitMeasure(alpha, *model->spectral()), h);
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::UnboundedGain;
  }
  rep.checks.push_back(make_check("bounded_route_refused", refused ? 1.0 : 0.0, ">=", 1.0));
  rep.measured = {{"r_grid", grid},
                  {"transformed", v},
                  {"lower_bound", bounds},
                  {"untransformed", plain.values[0]},
                  {"spectral_mass", model->spectral_mass(ArcSet::full())},
                  {"moment", std::isfinite(moment) ? json(moment) : json(nullptr)}};
  return rep;
}

inline Report run_example3(const Context& c, Report rep) {
  const ModelPtr base = model_from_json(c.cfg.at("model"));
  const auto* model = dynamic_cast<const Example3Model*>(base.get());
  require(model != nullptr, ErrorKind::InvalidSpec, "example3 needs an example3 model");
  const double alpha = model->alpha();
  const RadialGain h = gain_from_json(c.cfg.at("gain"));

  // h vanishes only on the axis ray; graph points have a positive angle even
  // where the stored height underflows, so survival is read from the labels.
  const SampleBatch x = model->sample(c.n, c.seed, c.workers);
  const std::vector<bool> on_graph = model->graph_labels(c.n, c.seed, c.workers);
  const std::size_t k = resolve_top(c.top, x.size());
  std::size_t survivors = 0;
  std::size_t survivors_float = 0;
  for (std::size_t i : top_indices(x.norms(), k)) {
    if (on_graph[i]) ++survivors;
    if (h(x.direction(i)) > 0.0) ++survivors_float;
  }
  const double fraction = static_cast<double>(survivors) / static_cast<double>(k);
  rep.checks.push_back(make_check("surviving_exceedance_fraction_error", std::abs(fraction - 0.5), "<=", 0.03));

  const double r = 1000.0;
  const double exact = std::pow(r, alpha) * *model->exact_tail_under_gain(r, ArcSet::full(), h);
  rep.checks.push_back(make_check("exact_transformed_mass_error", std::abs(exact - 0.5), "<=", 1e-12));

  const double h0 = std::pow(h.at_angle(0.0), alpha);
  const double density0 = exact / (std::pow(r, alpha) * *model->exact_tail(r, ArcSet::full()));
  rep.checks.push_back(make_check("density_vs_gain_contrast", std::abs(density0 - h0), ">", 0.0));

  const SampleBatch y = radial_scale_apply(x, h);
  rep.measured = {{"k", k},
                  {"surviving_fraction", fraction},
                  {"surviving_fraction_from_coordinates", static_cast<double>(survivors_float) / static_cast<double>(k)},
                  {"zero_count", y.zero_count()},
                  {"h0_pow_alpha", h0},
                  {"dmu_dsigma_at_0", density0}};
  return rep;
}

}  // namespace detail

/// Runs a scenario; hypothesis violations in the config throw
/// HypothesisViolation before any sampling happens.
inline Report run_scenario(const std::string& name, const ScenarioOptions& opt = {}) {
  require(is_scenario(name), ErrorKind::InvalidArgument, "unknown scenario \"" + name + "\"");
  require(opt.n >= 1000, ErrorKind::InvalidArgument, "scenarios need n >= 1000");
  require(opt.top_fraction > 0.0 && opt.top_fraction < 1.0, ErrorKind::InvalidArgument, "top fraction must lie in (0, 1)");
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.scenario = name;
  rep.config = scenario_config(name, opt);
  detail::Context c{rep.config, opt.n, opt.seed, opt.top_fraction, opt.workers};
  try {
    c.n = rep.config.at("n").get<std::size_t>();
    c.seed = rep.config.at("seed").get<std::uint64_t>();
    c.top = rep.config.at("top_fraction").get<double>();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed scenario config: ") + e.what());
  }
  if (name == "theorem1") rep = detail::run_theorem1(c, std::move(rep));
  else if (name == "corollary1") rep = detail::run_corollary1(c, std::move(rep));
  else if (name == "theorem2") rep = detail::run_theorem2(c, std::move(rep));
  else if (name == "theorem3") rep = detail::run_theorem3(c, std::move(rep));
  else if (name == "corollary2") rep = detail::run_corollary2(c, std::move(rep));
  else if (name == "example1") rep = detail::run_example1(c, std::move(rep));
  else if (name == "example2") rep = detail::run_example2(c, std::move(rep));
  else rep = detail::run_example3(c, std::move(rep));
  if (opt.record_runtime)
    rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace rvtail
