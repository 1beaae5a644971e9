#pragma once

// Maps acting on the polar parts of a point: sphere-to-sphere maps f, radial
// gains h, and random gain processes Z. Each carries the JSON spec it was
// built from (null for ad-hoc callables) so it can be echoed in reports.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/random.hpp"
#include "rvtail/sphere.hpp"

namespace rvtail {

using json = nlohmann::json;

namespace detail {

inline std::vector<double> sorted_breakpoints(std::vector<double> pts) {
  for (double& p : pts) p = Angle::canonical(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return sorted_breakpoints(std::move(out));
}

}  // namespace detail

class SphereMap {
 public:
  using Fn = std::function<Direction(const Direction&)>;

  SphereMap(std::size_t dim, Fn fn, std::vector<double> breakpoints = {}, std::string discontinuity_note = {},
            json spec = nullptr)
      : dim_(dim),
        fn_(std::move(fn)),
        breakpoints_(detail::sorted_breakpoints(std::move(breakpoints))),
        note_(std::move(discontinuity_note)),
        spec_(std::move(spec)) {}

  /// Planar map given on the angle chart. `breakpoints` lists the angles
  /// where the map may jump; pushforward of a density uses them as bin edges.
  static SphereMap from_angle(std::function<double(double)> angle_fn, std::vector<double> breakpoints = {},
                              std::string note = {}, json spec = nullptr) {
    return SphereMap(
        2,
        [angle_fn = std::move(angle_fn)](const Direction& x) {
          return direction_of(angle_fn(angle_of(x).radians()));
        },
        std::move(breakpoints), std::move(note), std::move(spec));
  }

  static SphereMap identity(std::size_t dim = 2) {
    return SphereMap(dim, [](const Direction& x) { return x; }, {}, "continuous", json{{"type", "identity"}});
  }

  static SphereMap constant(Angle target) {
    const Direction d = direction_of(target);
    return SphereMap(2, [d](const Direction&) { return d; }, {}, "continuous",
                     json{{"type", "constant"}, {"angle", target.radians()}});
  }

  static SphereMap constant(const Direction& target) {
    return SphereMap(target.dim(), [target](const Direction&) { return target; }, {}, "continuous");
  }

  /// Sends each open quadrant [kπ/2, (k+1)π/2) to its center π/4 + kπ/2.
  static SphereMap quadrant_snap() {
    return from_angle(
        [](double t) {
          const double k = std::min(3.0, std::floor(t / (kPi / 2.0)));
          return kPi / 4.0 + k * kPi / 2.0;
        },
        {0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0}, "jumps on the four axis rays", json{{"type", "quadrant_snap"}});
  }

  /// Upper half-circle to π/2, lower to 3π/2, the ray at angle 0 fixed.
  /// Discontinuous exactly at 0, where a spectral mass δ₀ sits.
  static SphereMap sign_map() {
    return from_angle(
        [](double t) {
          if (t == 0.0) return 0.0;
          return t <= kPi ? kPi / 2.0 : 3.0 * kPi / 2.0;
        },
        {0.0, kPi}, "discontinuous at angle 0 and angle π", json{{"type", "sign_map"}});
  }

  /// g ∘ f.
  static SphereMap compose(const SphereMap& g, const SphereMap& f) {
    require(g.dim() == f.dim(), ErrorKind::DimensionMismatch, "composing maps of different dimension");
    std::vector<double> bp = f.breakpoints();
    return SphereMap(
        f.dim(), [g, f](const Direction& x) { return g(f(x)); }, std::move(bp),
        "composition: " + g.discontinuity_note() + "; " + f.discontinuity_note());
  }

  Direction operator()(const Direction& x) const {
    require(x.dim() == dim_, ErrorKind::DimensionMismatch, "map applied to a direction of the wrong dimension");
    return fn_(x);
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::string& discontinuity_note() const noexcept { return note_; }
  const json& spec() const noexcept { return spec_; }

 private:
  std::size_t dim_;
  Fn fn_;
  std::vector<double> breakpoints_;
  std::string note_;
  json spec_;
};

/// Power singularity |θ − center|^{-gamma} carried by a gain; used to decide
/// convergence of moment integrals exactly.
struct Cusp {
  double center;
  double gamma;
};

class RadialGain {
 public:
  using Fn = std::function<double(const Direction&)>;

  RadialGain(Fn fn, std::optional<double> declared_bound, std::vector<double> breakpoints = {}, json spec = nullptr,
             std::optional<Cusp> cusp = std::nullopt)
      : fn_(std::move(fn)),
        bound_(declared_bound),
        breakpoints_(detail::sorted_breakpoints(std::move(breakpoints))),
        spec_(std::move(spec)),
        cusp_(cusp) {
    if (bound_) require(*bound_ > 0.0 && std::isfinite(*bound_), ErrorKind::InvalidGain, "declared bound must be positive");
  }

  static RadialGain from_angle(std::function<double(double)> fn, std::optional<double> bound,
                               std::vector<double> breakpoints = {}, json spec = nullptr,
                               std::optional<Cusp> cusp = std::nullopt) {
    return RadialGain([fn = std::move(fn)](const Direction& x) { return fn(angle_of(x).radians()); }, bound,
                      std::move(breakpoints), std::move(spec), cusp);
  }

  static RadialGain constant(double value) {
    require(value >= 0.0 && std::isfinite(value), ErrorKind::InvalidGain, "constant gain must be finite and >= 0");
    return RadialGain([value](const Direction&) { return value; }, value > 0.0 ? std::optional(value) : std::optional(1.0),
                      {}, json{{"type", "constant"}, {"value", value}});
  }

  /// base + amplitude·cos θ, requires base >= |amplitude|.
  static RadialGain cosine(double base, double amplitude) {
    require(base >= std::abs(amplitude), ErrorKind::InvalidGain, "cosine gain must stay nonnegative");
    return from_angle([base, amplitude](double t) { return base + amplitude * std::cos(t); },
                      base + std::abs(amplitude), {},
                      json{{"type", "cosine"}, {"base", base}, {"amplitude", amplitude}});
  }

  /// Piecewise constant: values[i] on [breakpoints[i-1], breakpoints[i]).
  static RadialGain step(std::vector<double> breakpoints, std::vector<double> values) {
    require(values.size() == breakpoints.size() + 1, ErrorKind::InvalidSpec, "step gain needs one more value than breakpoints");
    require(std::is_sorted(breakpoints.begin(), breakpoints.end()), ErrorKind::InvalidSpec, "step breakpoints must increase");
    for (double b : breakpoints) require(b > 0.0 && b < kTwoPi, ErrorKind::InvalidSpec, "step breakpoints must lie in (0, 2π)");
    double hi = 0.0;
    for (double v : values) {
      require(v >= 0.0 && std::isfinite(v), ErrorKind::InvalidGain, "step values must be finite and >= 0");
      hi = std::max(hi, v);
    }
    json spec{{"type", "step"}, {"breakpoints", breakpoints}, {"values", values}};
    return from_angle(
        [breakpoints, values](double t) {
          const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
          return values[static_cast<std::size_t>(it - breakpoints.begin())];
        },
        hi > 0.0 ? hi : 1.0, breakpoints, std::move(spec));
  }

  static RadialGain indicator(const ArcSet& arcs) {
    json list = json::array();
    for (const Arc& a : arcs.arcs()) list.push_back({a.begin, a.end});
    return from_angle([arcs](double t) { return arcs.contains(Angle(t)) ? 1.0 : 0.0; }, 1.0, arcs.endpoints(),
                      json{{"type", "indicator_arc"}, {"arcs", list}});
  }

  /// 1 everywhere except 0 on the single ray at `at` (exact comparison).
  static RadialGain punctured(double at) {
    const double c = Angle::canonical(at);
    return from_angle([c](double t) { return t == c ? 0.0 : 1.0; }, 1.0, {c},
                      json{{"type", "punctured"}, {"at", c}});
  }

  /// |θ − center|^{-gamma} with the circular distance; unbounded.
  static RadialGain power_cusp(double center, double gamma) {
    require(gamma > 0.0, ErrorKind::InvalidGain, "cusp exponent must be positive");
    const double c = Angle::canonical(center);
    return from_angle(
        [c, gamma](double t) {
          const double d = circular_distance(t, c);
          return d == 0.0 ? std::numeric_limits<double>::infinity() : std::pow(d, -gamma);
        },
        std::nullopt, {c}, json{{"type", "power_cusp"}, {"center", c}, {"gamma", gamma}}, Cusp{c, gamma});
  }

  /// Unbounded staircase Σ k^β 1_{I_k} with I_1 = (7π/4, 2π) ∪ [0, π/4) and
  /// I_k = (b_k − π/2^{k+1}, b_k + π/2^{k+1}), b_k = π − π/2^{k−1}.
  static RadialGain example2(double beta) {
    std::vector<double> bp{kPi / 4.0, 7.0 * kPi / 4.0};
    for (int k = 2; k <= 50; ++k) {
      const double b = kPi - kPi / std::ldexp(1.0, k - 1);
      const double w = kPi / std::ldexp(1.0, k + 1);
      bp.push_back(b - w);
      bp.push_back(b + w);
    }
    return from_angle([beta](double t) { return example2_value(beta, t); }, std::nullopt, std::move(bp),
                      json{{"type", "example2_gain"}, {"beta", beta}});
  }

  static double example2_value(double beta, double t) {
    if (t < kPi / 4.0 || t > 7.0 * kPi / 4.0) return 1.0;
    if (t >= kPi) return 0.0;
    // b_k solves π − b_k = π / 2^{k−1}; test the integer neighbours.
    const double k0 = 1.0 + std::log2(kPi / (kPi - t));
    for (double k = std::max(2.0, std::floor(k0) - 1.0); k <= std::floor(k0) + 1.0; k += 1.0) {
      const double b = kPi - kPi / std::exp2(k - 1.0);
      const double w = kPi / std::exp2(k + 1.0);
      if (std::abs(t - b) < w) return std::pow(k, beta);
    }
    return 0.0;
  }

  /// Pointwise product of two gains.
  static RadialGain product(const RadialGain& a, const RadialGain& b) {
    std::optional<double> bound;
    if (a.declared_bound() && b.declared_bound()) bound = *a.declared_bound() * *b.declared_bound();
    return RadialGain([a, b](const Direction& x) { return a(x) * b(x); }, bound,
                      detail::merge_breakpoints(a.breakpoints(), b.breakpoints()));
  }

  double operator()(const Direction& x) const {
    const double v = fn_(x);
    if (!(v >= 0.0)) fail(ErrorKind::InvalidGain, "gain evaluated to a negative or NaN value");
    if (bound_ && v > *bound_) fail(ErrorKind::InvalidGain, "gain exceeds its declared bound");
    return v;
  }

  double at_angle(double theta) const { return (*this)(direction_of(theta)); }

  const std::optional<double>& declared_bound() const noexcept { return bound_; }
  bool bounded() const noexcept { return bound_.has_value(); }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const json& spec() const noexcept { return spec_; }
  const std::optional<Cusp>& cusp() const noexcept { return cusp_; }

 private:
  Fn fn_;
  std::optional<double> bound_;
  std::vector<double> breakpoints_;
  json spec_;
  std::optional<Cusp> cusp_;
};

/// Random field {Z(θ)} independent of X. Moments are analytic when the law is
/// known in closed form, otherwise estimated by seeded Monte Carlo.
class RandomGainProcess {
 public:
  using Sampler = std::function<double(const Direction&, Engine&)>;
  using Moment = std::function<double(const Direction&, double)>;

  static constexpr std::size_t kDefaultBudget = 100000;

  RandomGainProcess(Sampler sampler, std::optional<Moment> moment, json spec = nullptr,
                    std::size_t mc_budget = kDefaultBudget)
      : sampler_(std::move(sampler)), moment_(std::move(moment)), spec_(std::move(spec)), budget_(mc_budget) {
    require(budget_ > 0, ErrorKind::InvalidArgument, "Monte Carlo budget must be positive");
  }

  static RandomGainProcess deterministic(const RadialGain& h) {
    return RandomGainProcess([h](const Direction& x, Engine&) { return h(x); },
                             Moment([h](const Direction& x, double p) { return std::pow(h(x), p); }),
                             json{{"type", "deterministic"}, {"gain", h.spec()}});
  }

  /// Z(θ) ~ Uniform[lo, hi] for every θ.
  static RandomGainProcess uniform(double lo, double hi) {
    require(0.0 <= lo && lo < hi, ErrorKind::InvalidGain, "uniform gain needs 0 <= lo < hi");
    return RandomGainProcess(
        [lo, hi](const Direction&, Engine& eng) { return lo + (hi - lo) * uniform01(eng); },
        Moment([lo, hi](const Direction&, double p) {
          return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
        }),
        json{{"type", "uniform"}, {"lo", lo}, {"hi", hi}});
  }

  /// Z(θ) ~ Exponential with mean m(θ); E[Z^p] = Γ(p+1)·m^p.
  static RandomGainProcess exponential(const RadialGain& mean) {
    return RandomGainProcess([mean](const Direction& x, Engine& eng) { return exponential_draw(eng, mean(x)); },
                             Moment([mean](const Direction& x, double p) {
                               return std::tgamma(p + 1.0) * std::pow(mean(x), p);
                             }),
                             json{{"type", "exponential"}, {"mean", mean.spec()}});
  }

  static RandomGainProcess zero() {
    return RandomGainProcess([](const Direction&, Engine&) { return 0.0; },
                             Moment([](const Direction&, double) { return 0.0; }), json{{"type", "zero"}});
  }

  /// Same process with the closed-form moment removed, forcing Monte Carlo.
  RandomGainProcess monte_carlo_only() const { return RandomGainProcess(sampler_, std::nullopt, spec_, budget_); }

  RandomGainProcess with_budget(std::size_t budget) const { return RandomGainProcess(sampler_, moment_, spec_, budget); }

  double sample(const Direction& x, Engine& eng) const {
    const double z = sampler_(x, eng);
    if (!(z >= 0.0)) fail(ErrorKind::InvalidGain, "random gain produced a negative or NaN draw");
    return z;
  }

  bool has_analytic_moment() const noexcept { return moment_.has_value(); }

  std::optional<double> analytic_moment(const Direction& x, double p) const {
    if (!moment_) return std::nullopt;
    return (*moment_)(x, p);
  }

  /// Mean of z^p over `budget` draws from substream (seed, Moment, probe).
  double monte_carlo_moment(const Direction& x, double p, std::uint64_t seed, std::uint64_t probe) const {
    Engine eng = substream(seed, Stream::Moment, probe);
    double sum = 0.0;
    for (std::size_t i = 0; i < budget_; ++i) sum += std::pow(sample(x, eng), p);
    return sum / static_cast<double>(budget_);
  }

  double moment(const Direction& x, double p, std::uint64_t seed, std::uint64_t probe) const {
    const double v = moment_ ? (*moment_)(x, p) : monte_carlo_moment(x, p, seed, probe);
    if (!std::isfinite(v)) fail(ErrorKind::MomentDivergence, "gain moment is not finite");
    return v;
  }

  std::size_t budget() const noexcept { return budget_; }
  const json& spec() const noexcept { return spec_; }

 private:
  static double exponential_draw(Engine& eng, double mean) { return rvtail::exponential(eng, mean); }

  Sampler sampler_;
  std::optional<Moment> moment_;
  json spec_;
  std::size_t budget_;
};

inline RadialGain gain_from_json(const json& spec) {
  if (spec.is_string()) return gain_from_json(json{{"type", spec.get<std::string>()}});
  require(spec.is_object() && spec.contains("type"), ErrorKind::InvalidSpec, "gain spec needs a \"type\"");
  const auto type = spec.at("type").get<std::string>();
  try {
    if (type == "constant") return RadialGain::constant(spec.at("value").get<double>());
    if (type == "cosine") return RadialGain::cosine(spec.value("base", 1.0), spec.at("amplitude").get<double>());
    if (type == "step")
      return RadialGain::step(spec.at("breakpoints").get<std::vector<double>>(), spec.at("values").get<std::vector<double>>());
    if (type == "example2_gain") return RadialGain::example2(spec.at("beta").get<double>());
    if (type == "indicator_arc") {
      std::vector<Arc> arcs;
      for (const auto& a : spec.at("arcs")) arcs.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      return RadialGain::indicator(ArcSet(std::move(arcs)));
    }
    if (type == "punctured") return RadialGain::punctured(spec.value("at", 0.0));
    if (type == "power_cusp") return RadialGain::power_cusp(spec.at("center").get<double>(), spec.at("gamma").get<double>());
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed gain spec: ") + e.what());
  }
  fail(ErrorKind::InvalidSpec, "unknown gain type \"" + type + "\"");
}

inline bool is_random_gain_spec(const json& spec) {
  if (!spec.is_object() || !spec.contains("type")) return false;
  const auto type = spec.at("type").get<std::string>();
  return type == "exponential" || type == "uniform" || type == "zero";
}

inline RandomGainProcess process_from_json(const json& spec) {
  require(spec.is_object() && spec.contains("type"), ErrorKind::InvalidSpec, "process spec needs a \"type\"");
  const auto type = spec.at("type").get<std::string>();
  try {
    if (type == "exponential") return RandomGainProcess::exponential(gain_from_json(spec.at("mean")));
    if (type == "uniform") return RandomGainProcess::uniform(spec.at("lo").get<double>(), spec.at("hi").get<double>());
    if (type == "zero") return RandomGainProcess::zero();
    if (type == "deterministic") return RandomGainProcess::deterministic(gain_from_json(spec.at("gain")));
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed process spec: ") + e.what());
  }
  fail(ErrorKind::InvalidSpec, "unknown random gain type \"" + type + "\"");
}

}  // namespace rvtail
