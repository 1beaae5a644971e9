#pragma once

// Sampleable regularly varying laws in ℝ^d: the polar-independent model and
// three planar constructions used as stress scenarios (a log-periodic
// mixture with spectral measure δ₀, an atom series accumulating at angle π,
// and a staircase graph approaching the ray at angle 0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/random.hpp"
#include "rvtail/sample_batch.hpp"
#include "rvtail/spectral_measure.hpp"
#include "rvtail/sphere.hpp"

namespace rvtail {

/// Law of the norm ‖X‖ on [1, ∞).
class RadialLaw {
 public:
  enum class Kind { Pareto, AtomPlusPareto, Oscillating };

  /// P{R > r} = min(1, r^{-α}).
  static RadialLaw pareto(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), ErrorKind::InvalidArgument, "alpha must be positive");
    return RadialLaw(Kind::Pareto, alpha, 1.0, 0.0, 1);
  }

  /// Atom of mass 1 − c at r = 1, then P{R > r} = c·r^{-α} for r >= 1.
  static RadialLaw atom_plus_pareto(double alpha, double tail_coefficient) {
    require(alpha > 0.0, ErrorKind::InvalidArgument, "alpha must be positive");
    require(tail_coefficient > 0.0 && tail_coefficient <= 1.0, ErrorKind::InvalidArgument,
            "tail coefficient must lie in (0, 1]");
    return RadialLaw(Kind::AtomPlusPareto, alpha, tail_coefficient, 0.0, 1);
  }

  /// P{R > r} = min(1, r^{-α}(1 + sign·a·sin ln r)). Regular variation fails:
  /// r^α P{R > r} oscillates in [1 − a, 1 + a].
  static RadialLaw oscillating(double alpha, double amplitude, int sign) {
    require(alpha > 0.0, ErrorKind::InvalidArgument, "alpha must be positive");
    require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
    if (!(amplitude > 0.0 && amplitude < 1.0)) fail(ErrorKind::InvalidConstruction, "oscillation amplitude must lie in (0, 1)");
    // d/dr tail <= 0  ⇔  s·a·cos t <= α(1 + s·a·sin t) for all t = ln r.
    constexpr int kGrid = 10000;
    for (int i = 0; i < kGrid; ++i) {
      const double t = kTwoPi * i / kGrid;
      if (sign * amplitude * std::cos(t) > alpha * (1.0 + sign * amplitude * std::sin(t)))
        fail(ErrorKind::InvalidConstruction, "oscillating tail is not monotone for this alpha and amplitude");
    }
    return RadialLaw(Kind::Oscillating, alpha, 1.0, amplitude, sign);
  }

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double tail_coefficient() const noexcept { return coef_; }
  double amplitude() const noexcept { return amplitude_; }
  int sign() const noexcept { return sign_; }

  /// P{R > r}.
  double tail(double r) const {
    if (r < 1.0) return 1.0;
    switch (kind_) {
      case Kind::Pareto: return std::pow(r, -alpha_);
      case Kind::AtomPlusPareto: return coef_ * std::pow(r, -alpha_);
      case Kind::Oscillating: return std::min(1.0, std::pow(r, -alpha_) * (1.0 + sign_ * amplitude_ * std::sin(std::log(r))));
    }
    return 0.0;
  }

  double sample(Engine& eng) const {
    const double u = uniform01_open_closed(eng);
    switch (kind_) {
      case Kind::Pareto: return std::pow(u, -1.0 / alpha_);
      case Kind::AtomPlusPareto: return u > coef_ ? 1.0 : std::pow(u / coef_, -1.0 / alpha_);
      case Kind::Oscillating: return invert_oscillating(u);
    }
    return 1.0;
  }

  json spec() const {
    switch (kind_) {
      case Kind::Pareto: return {{"kind", "pareto"}, {"alpha", alpha_}};
      case Kind::AtomPlusPareto: return {{"kind", "atom_plus_pareto"}, {"alpha", alpha_}, {"tail_coefficient", coef_}};
      case Kind::Oscillating:
        return {{"kind", "oscillating"}, {"alpha", alpha_}, {"amplitude", amplitude_}, {"sign", sign_}};
    }
    return {};
  }

 private:
  RadialLaw(Kind k, double alpha, double coef, double amplitude, int sign)
      : kind_(k), alpha_(alpha), coef_(coef), amplitude_(amplitude), sign_(sign) {}

  // Solve e^{-αt}(1 + s·a·sin t) = u for t = ln r >= 0 by bisection; the left
  // side is decreasing and lies between e^{-αt}(1 ∓ a).
  double invert_oscillating(double u) const {
    auto g = [&](double t) { return std::exp(-alpha_ * t) * (1.0 + sign_ * amplitude_ * std::sin(t)); };
    double lo = std::max(0.0, std::log((1.0 - amplitude_) / u) / alpha_);
    double hi = std::max(lo, std::log((1.0 + amplitude_) / u) / alpha_);
    if (g(lo) <= u) return std::exp(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > u) lo = mid; else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
  }

  Kind kind_;
  double alpha_;
  double coef_;
  double amplitude_;
  int sign_;
};

/// Regularly varying law on ℝ^d with tail index α. sample() is deterministic
/// in (seed, n): chunk c draws from substream (seed, Sampling, c).
class RegVarModel {
 public:
  virtual ~RegVarModel() = default;

  virtual std::string kind() const = 0;
  virtual double alpha() const = 0;
  virtual std::size_t dim() const = 0;
  /// The limit σ claimed for the construction (absent when the law is not
  /// regularly varying).
  virtual std::optional<SpectralMeasure> spectral() const = 0;
  /// P{X/‖X‖ ∈ B, ‖X‖ > r} in closed form, when available.
  virtual std::optional<double> exact_tail(double /*r*/, const EvalSet& /*set*/) const { return std::nullopt; }
  /// Same for Y = X·h(X/‖X‖), when the construction admits a closed form.
  virtual std::optional<double> exact_tail_under_gain(double /*r*/, const EvalSet& /*set*/, const RadialGain& /*h*/) const {
    return std::nullopt;
  }
  /// Whether X/‖X‖ and ‖X‖ are independent.
  virtual bool polar_independent() const { return false; }
  virtual json spec() const = 0;

  SampleBatch sample(std::size_t n, std::uint64_t seed, unsigned workers = 1) const {
    const std::size_t d = dim();
    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    for_each_chunk(n, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      Engine eng = substream(seed, Stream::Sampling, chunk);
      std::vector<double> p(d);
      for (std::size_t i = begin; i < end; ++i) {
        draw(eng, p);
        for (std::size_t j = 0; j < d; ++j) cols[j][i] = p[j];
      }
    });
    return SampleBatch::from_columns(std::move(cols), seed);
  }

 protected:
  virtual void draw(Engine& eng, std::span<double> out) const = 0;
};

using ModelPtr = std::shared_ptr<const RegVarModel>;

/// b_n = n^{1/α} (slowly varying part fixed to 1).
inline double normalizing_sequence(double alpha, double n) {
  require(alpha > 0.0 && n > 0.0, ErrorKind::InvalidArgument, "normalizing sequence needs alpha > 0 and n > 0");
  return std::pow(n, 1.0 / alpha);
}

inline double normalizing_sequence(const RegVarModel& model, double n) { return normalizing_sequence(model.alpha(), n); }

namespace detail {

inline ArcSet as_arcs(const EvalSet& set) {
  if (const auto* arcs = std::get_if<ArcSet>(&set)) return *arcs;
  return SpectralMeasure::caps_as_arcs(std::get<CapSet>(set));
}

}  // namespace detail

/// Direction ~ σ and norm ~ radial law, independently.
class PolarIndependentModel final : public RegVarModel {
 public:
  PolarIndependentModel(SpectralMeasure sigma, RadialLaw radial) : sigma_(std::move(sigma)), radial_(radial) {
    require(sigma_.is_normalized(), ErrorKind::InvalidArgument, "polar-independent model needs a normalized sigma");
    require(sigma_.is_atomic() || sigma_.dim() == 2, ErrorKind::InvalidArgument, "density sigma needs d = 2");
    if (sigma_.is_atomic() && sigma_.dim() != 2) {
      cum_.reserve(sigma_.atoms().size());
      double c = 0.0;
      for (const Atom& a : sigma_.atoms()) cum_.push_back(c += a.weight);
    }
  }

  std::string kind() const override { return "polar_independent"; }
  double alpha() const override { return radial_.alpha(); }
  std::size_t dim() const override { return sigma_.dim(); }
  std::optional<SpectralMeasure> spectral() const override { return sigma_; }
  bool polar_independent() const override { return true; }
  const RadialLaw& radial() const noexcept { return radial_; }

  std::optional<double> exact_tail(double r, const EvalSet& set) const override {
    return sigma_.measure_of(set) * radial_.tail(r);
  }

  /// ∫_B P{R > r / h(θ)} σ(dθ).
  std::optional<double> exact_tail_under_gain(double r, const EvalSet& set, const RadialGain& h) const override {
    auto tail_at = [&](double g) {
      if (g <= 0.0) return 0.0;
      if (!std::isfinite(g)) return 1.0;
      return radial_.tail(r / g);
    };
    if (sigma_.is_atomic()) {
      double s = 0.0;
      for (const Atom& a : sigma_.atoms()) {
        if (contains(set, a.dir)) s += a.weight * tail_at(h(a.dir));
      }
      return s;
    }
    const ArcSet arcs = detail::as_arcs(set);
    const auto bp = detail::merge_breakpoints(sigma_.breakpoints(), h.breakpoints());
    auto f = [&](double t) { return sigma_.density_at(t) * tail_at(h.at_angle(t)); };
    double s = 0.0;
    for (const Arc& arc : arcs.arcs()) {
      std::vector<double> cuts{arc.begin};
      for (double b : bp) {
        if (b > arc.begin && b < arc.end) cuts.push_back(b);
      }
      cuts.push_back(arc.end);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 12, 1e-12);
      }
    }
    return s;
  }

  json spec() const override {
    return {{"kind", "polar_independent"}, {"alpha", alpha()}, {"sigma", measure_to_json(sigma_)}, {"radial", radial_.spec()}};
  }

 protected:
  void draw(Engine& eng, std::span<double> out) const override {
    const double u = uniform01(eng);
    const double r = radial_.sample(eng);
    if (sigma_.dim() == 2) {
      double theta;
      if (sigma_.is_atomic()) theta = quantile_atomic(u);
      else theta = sigma_.density_table().inverse(u * sigma_.total_mass());
      out[0] = r * std::cos(theta);
      out[1] = r * std::sin(theta);
      return;
    }
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u * cum_.back());
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1);
    const auto c = sigma_.atoms()[idx].dir.coords();
    for (std::size_t j = 0; j < c.size(); ++j) out[j] = r * c[j];
  }

 private:
  double quantile_atomic(double u) const {
    const auto& angles = sigma_.atom_angles();
    const double target = u * sigma_.total_mass();
    std::size_t lo = 0;
    std::size_t hi = angles.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (sigma_.cdf(angles[mid]) > target) hi = mid;
      else lo = mid + 1;
    }
    return angles[lo];
  }

  SpectralMeasure sigma_;
  RadialLaw radial_;
  std::vector<double> cum_;
};

inline ModelPtr polar_independent(const SpectralMeasure& sigma, double alpha, const RadialLaw& radial) {
  require(std::abs(radial.alpha() - alpha) <= 1e-12 * alpha, ErrorKind::InvalidArgument,
          "radial law and model must share alpha");
  return std::make_shared<PolarIndependentModel>(sigma, radial);
}

/// Log-periodic mixture: with probability ½ each, side s = ±1 draws its norm
/// from OscillatingTail(α, a, s) and the point lies on the ray through angle
/// s / max(1, ⌊R⌋). The mixture tail is exactly r^{-α} and σ = δ₀, while
/// neither side tail is regularly varying.
class Example1Model final : public RegVarModel {
 public:
  Example1Model(double alpha, double amplitude)
      : alpha_(alpha),
        amplitude_(amplitude),
        plus_(RadialLaw::oscillating(alpha, amplitude, +1)),
        minus_(RadialLaw::oscillating(alpha, amplitude, -1)) {}

  std::string kind() const override { return "example1"; }
  double alpha() const override { return alpha_; }
  double amplitude() const noexcept { return amplitude_; }
  std::size_t dim() const override { return 2; }
  std::optional<SpectralMeasure> spectral() const override { return SpectralMeasure::dirac(0.0); }

  /// P{R_s > r} for side s.
  double side_tail(double r, int sign) const { return sign > 0 ? plus_.tail(r) : minus_.tail(r); }
  double mixture_tail(double r) const { return 0.5 * (plus_.tail(r) + minus_.tail(r)); }

  /// Angle of the ray carrying side s at norm level n.
  static double ray_angle(int sign, double n) { return Angle::canonical(sign / std::max(1.0, n)); }

  std::optional<double> exact_tail(double r, const EvalSet& set) const override {
    const ArcSet arcs = detail::as_arcs(set);
    return 0.5 * (side_mass(r, arcs, +1) + side_mass(r, arcs, -1));
  }

  json spec() const override { return {{"kind", "example1"}, {"alpha", alpha_}, {"amplitude", amplitude_}}; }

 protected:
  void draw(Engine& eng, std::span<double> out) const override {
    const int s = uniform01(eng) < 0.5 ? +1 : -1;
    const double r = (s > 0 ? plus_ : minus_).sample(eng);
    const double theta = ray_angle(s, std::floor(r));
    out[0] = r * std::cos(theta);
    out[1] = r * std::sin(theta);
  }

 private:
  // Σ over levels n of P{R_s ∈ [n, n+1), R_s > r, ray angle ∈ B}. Beyond the
  // last arc endpoint near the accumulation point membership is constant and
  // the remaining levels telescope to a single tail value.
  double side_mass(double r, const ArcSet& arcs, int s) const {
    double last = 2.0;
    for (double e : arcs.endpoints()) {
      const double dist = s > 0 ? e : kTwoPi - e;
      if (dist > 0.0 && dist <= 1.0) last = std::max(last, std::ceil(1.0 / dist) + 2.0);
    }
    const double first = std::max(1.0, std::floor(r));
    const double stop = std::max(last, first + 1.0);
    require(stop - first <= 1e8, ErrorKind::InvalidArgument, "evaluation arc too close to the accumulation ray");
    double mass = 0.0;
    for (double n = first; n <= stop; n += 1.0) {
      if (!arcs.contains(Angle(ray_angle(s, n)))) continue;
      mass += std::max(0.0, side_tail(std::max(n, r), s) - side_tail(n + 1.0, s));
    }
    if (arcs.contains(Angle(ray_angle(s, stop + 1.0)))) mass += side_tail(std::max(stop + 1.0, r), s);
    return mass;
  }

  double alpha_;
  double amplitude_;
  RadialLaw plus_;
  RadialLaw minus_;
};

/// Atoms at b_k = π − π/2^{k−1} with P{K = k} = 1/(k(k+1)); given K = k the
/// norm has an atom 1 − k^{-ν} at 1 and tail k^{-ν} r^{-α}. Spectral measure
/// σ(B) = Σ_{b_k ∈ B} q_k k^{-ν}.
class Example2Model final : public RegVarModel {
 public:
  static constexpr int kExplicitAtoms = 50;
  static constexpr int kSpectralAtoms = 40;

  Example2Model(double alpha, double nu, double beta) : alpha_(alpha), nu_(nu), beta_(beta) {
    require(alpha > 0.0 && nu > 0.0, ErrorKind::InvalidArgument, "example2 needs alpha > 0 and nu > 0");
    if (!(1.0 / alpha < beta && beta < (1.0 + nu) / alpha))
      fail(ErrorKind::InvalidConstruction, "example2 gain exponent must satisfy 1/alpha < beta < (1+nu)/alpha");
    weights_.resize(kExplicitAtoms + 1, 0.0);
    for (int k = 1; k <= kExplicitAtoms; ++k) weights_[k] = q(k) * std::pow(k, -nu_);
    weight_tail_ = series_tail(kExplicitAtoms, -nu_);
  }

  static double q(double k) { return 1.0 / (k * (k + 1.0)); }
  static double atom_angle(double k) { return kPi - std::ldexp(kPi, static_cast<int>(1.0 - std::min(k, 2000.0))); }

  /// Σ_{k > K} q_k k^{p}, p < 1: explicit to 10^5, then the integral of the
  /// three-term expansion of x^{p-1}/(x+1) from K' + ½.
  static double series_tail(int from, double p) {
    if (!(p < 1.0)) fail(ErrorKind::MomentDivergence, "series Σ q_k k^p diverges for p >= 1");
    constexpr int kExplicit = 100000;
    detail::KahanSum acc;
    for (int k = kExplicit; k > from; --k) acc.add(q(k) * std::pow(k, p));
    const double a = kExplicit + 0.5;
    const double s = 1.0 - p;  // x^{p-2}(1 − 1/x + 1/x²) integrates term by term.
    acc.add(std::pow(a, -s) / s - std::pow(a, -s - 1.0) / (s + 1.0) + std::pow(a, -s - 2.0) / (s + 2.0));
    return acc.sum;
  }

  std::string kind() const override { return "example2"; }
  double alpha() const override { return alpha_; }
  double nu() const noexcept { return nu_; }
  double beta() const noexcept { return beta_; }
  std::size_t dim() const override { return 2; }

  /// Atoms k <= 40 exactly; the remaining mass is lumped at the accumulation
  /// angle π.
  std::optional<SpectralMeasure> spectral() const override {
    std::vector<std::pair<double, double>> atoms;
    double rest = weight_tail_;
    for (int k = 1; k <= kExplicitAtoms; ++k) {
      if (k <= kSpectralAtoms) atoms.emplace_back(atom_angle(k), weights_[k]);
      else rest += weights_[k];
    }
    atoms.emplace_back(kPi, rest);
    return SpectralMeasure::from_angles(atoms);
  }

  /// σ(B) = Σ_{b_k ∈ B} q_k k^{-ν}.
  double spectral_mass(const ArcSet& arcs) const {
    double s = 0.0;
    for (int k = 1; k <= kExplicitAtoms; ++k) {
      if (member(k, arcs)) s += weights_[k];
    }
    if (tail_member(arcs)) s += weight_tail_;
    return s;
  }

  /// Σ_{b_k ∈ B} q_k.
  double direction_mass(const ArcSet& arcs) const {
    double s = 0.0;
    for (int k = 1; k <= kExplicitAtoms; ++k) {
      if (member(k, arcs)) s += q(k);
    }
    if (tail_member(arcs)) s += 1.0 / (kExplicitAtoms + 1.0);
    return s;
  }

  std::optional<double> exact_tail(double r, const EvalSet& set) const override {
    const ArcSet arcs = detail::as_arcs(set);
    if (r < 1.0) return direction_mass(arcs);
    return std::pow(r, -alpha_) * spectral_mass(arcs);
  }

  /// P{Y/‖Y‖ ∈ B, ‖Y‖ > r} for Y = X·h(X/‖X‖) with h(b_k) = k^β: the k-th
  /// ray contributes q_k·P{R > r/k^β}.
  double transformed_tail(double r, const ArcSet& arcs) const {
    require(r > 0.0, ErrorKind::InvalidArgument, "r must be positive");
    const double kstar = std::floor(std::pow(r, 1.0 / beta_)) + 1.0;
    const double last = std::max<double>(kExplicitAtoms, kstar + 1.0);
    detail::KahanSum acc;
    for (double k = 1.0; k <= last; k += 1.0) {
      const bool in = k <= kExplicitAtoms ? member(static_cast<int>(k), arcs) : tail_member(arcs);
      if (!in) continue;
      const double level = r / std::pow(k, beta_);
      acc.add(level < 1.0 ? q(k) : q(k) * std::pow(k, -nu_) * std::pow(level, -alpha_));
    }
    // Every k > last has k^β > r and so P = 1; Σ_{k > K} q_k = 1/(K+1).
    if (tail_member(arcs)) acc.add(1.0 / (last + 1.0));
    return acc.sum;
  }

  std::optional<double> exact_tail_under_gain(double r, const EvalSet& set, const RadialGain& h) const override {
    if (h.spec().is_object() && h.spec().value("type", "") == "example2_gain" &&
        h.spec().value("beta", 0.0) == beta_) {
      return transformed_tail(r, detail::as_arcs(set));
    }
    return std::nullopt;
  }

  json spec() const override { return {{"kind", "example2"}, {"alpha", alpha_}, {"nu", nu_}, {"beta", beta_}}; }

 protected:
  void draw(Engine& eng, std::span<double> out) const override {
    const double v = uniform01_open_closed(eng);
    const double k = std::max(1.0, std::ceil(1.0 / v) - 1.0);
    const RadialLaw law = RadialLaw::atom_plus_pareto(alpha_, std::pow(k, -nu_));
    const double r = law.sample(eng);
    const double theta = atom_angle(k);
    out[0] = r * std::cos(theta);
    out[1] = r * std::sin(theta);
  }

 private:
  static bool member(int k, const ArcSet& arcs) { return arcs.contains(Angle(atom_angle(k))); }

  // b_k ↑ π: for large k, b_k ∈ B iff some arc covers (π − ε, π).
  static bool tail_member(const ArcSet& arcs) {
    return std::any_of(arcs.arcs().begin(), arcs.arcs().end(), [](const Arc& a) { return a.begin < kPi && a.end >= kPi; });
  }

  double alpha_;
  double nu_;
  double beta_;
  std::vector<double> weights_;
  double weight_tail_;
};

/// r^α·P{‖Y‖ > r} for Y = X·h(X/‖X‖), X from Example2Model and h the
/// unbounded staircase gain. Bounded below by r^α/(r^{1/β} + 1).
inline double example2_transformed_tail(double alpha, double nu, double beta, double r) {
  return std::pow(r, alpha) * Example2Model(alpha, nu, beta).transformed_tail(r, ArcSet::full());
}

/// Lower bound r^α / (r^{1/β} + 1).
inline double example2_lower_bound(double alpha, double beta, double r) {
  return std::pow(r, alpha) / (std::pow(r, 1.0 / beta) + 1.0);
}

/// Staircase g(x) = 2^{-k} on (k, k+1]. With probability ½ the point is
/// (R, 0), otherwise (R, g(R)); R ~ Pareto(α). σ = δ₀.
class Example3Model final : public RegVarModel {
 public:
  explicit Example3Model(double alpha) : alpha_(alpha) {
    require(alpha > 0.0, ErrorKind::InvalidArgument, "alpha must be positive");
  }

  static double staircase(double x) { return std::ldexp(1.0, -static_cast<int>(std::max(0.0, std::ceil(x) - 1.0))); }

  std::string kind() const override { return "example3"; }
  double alpha() const override { return alpha_; }
  std::size_t dim() const override { return 2; }
  std::optional<SpectralMeasure> spectral() const override { return SpectralMeasure::dirac(0.0); }

  /// Tails are indexed by the x-coordinate R, not the Euclidean norm; the two
  /// differ by a relative O(R^{-2}) on the graph part.
  std::optional<double> exact_tail(double r, const EvalSet& set) const override {
    const ArcSet arcs = detail::as_arcs(set);
    const double axis = arcs.contains(Angle(0.0)) ? 0.5 * g_tail(r) : 0.0;
    return axis + 0.5 * graph_mass(r, arcs);
  }

  /// Supports the punctured gain at angle 0, which deletes the axis part.
  std::optional<double> exact_tail_under_gain(double r, const EvalSet& set, const RadialGain& h) const override {
    if (h.spec().is_object() && h.spec().value("type", "") == "punctured" && h.spec().value("at", 1.0) == 0.0) {
      return 0.5 * graph_mass(r, detail::as_arcs(set));
    }
    return std::nullopt;
  }

  json spec() const override { return {{"kind", "example3"}, {"alpha", alpha_}}; }

  /// For each point of sample(n, seed), whether it was drawn on the graph.
  /// The height 2^{-k} underflows to 0 once R > 1074, so beyond that the
  /// coordinates alone cannot tell the graph from the axis.
  std::vector<bool> graph_labels(std::size_t n, std::uint64_t seed, unsigned workers = 1) const {
    std::vector<char> labels(n);
    for_each_chunk(n, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      Engine eng = substream(seed, Stream::Sampling, chunk);
      for (std::size_t i = begin; i < end; ++i) labels[i] = !draw_parts(eng).axis;
    });
    return std::vector<bool>(labels.begin(), labels.end());
  }

 protected:
  void draw(Engine& eng, std::span<double> out) const override {
    const Parts p = draw_parts(eng);
    out[0] = p.r;
    out[1] = p.axis ? 0.0 : staircase(p.r);
  }

 private:
  struct Parts {
    double r;
    bool axis;
  };

  Parts draw_parts(Engine& eng) const {
    const double r = std::pow(uniform01_open_closed(eng), -1.0 / alpha_);
    return {r, uniform01(eng) < 0.5};
  }

  double g_tail(double r) const { return r <= 1.0 ? 1.0 : std::pow(r, -alpha_); }

  // P{R > r, atan(g(R)/R) ∈ B}. On (k, k+1] the angle atan(2^{-k}/R) ∈ (0, π/4]
  // decreases in R, so each arc pulls back to an R-interval.
  double graph_mass(double r, const ArcSet& arcs) const {
    const double k0 = std::max(0.0, std::ceil(std::max(r, 1.0)) - 1.0);
    constexpr double kLevels = 80.0;
    double mass = 0.0;
    for (double k = k0; k < k0 + kLevels; k += 1.0) {
      const double lo = std::max(k, r);
      const double hi = k + 1.0;
      if (hi <= lo) continue;
      const double height = std::ldexp(1.0, -static_cast<int>(k));
      for (const Arc& a : arcs.arcs()) {
        if (a.begin >= kPi / 2.0) continue;
        const double r_max = a.begin <= 0.0 ? std::numeric_limits<double>::infinity() : height / std::tan(a.begin);
        const double r_min = a.end >= kPi / 2.0 ? 0.0 : height / std::tan(a.end);
        const double from = std::max(lo, r_min);
        const double to = std::min(hi, r_max);
        if (to > from) mass += g_tail(from) - g_tail(to);
      }
    }
    // Deeper levels have angles below 2^{-80}: only an arc starting at 0 sees them.
    const bool covers_zero = std::any_of(arcs.arcs().begin(), arcs.arcs().end(), [](const Arc& a) { return a.begin == 0.0; });
    if (covers_zero) mass += g_tail(std::max(k0 + kLevels, r));
    return mass;
  }

  double alpha_;
};

// JSON ----------------------------------------------------------------------

inline RadialLaw radial_from_json(const json& spec, double alpha) {
  const auto kind = spec.value("kind", std::string("pareto"));
  const double a = spec.value("alpha", alpha);
  if (kind == "pareto") return RadialLaw::pareto(a);
  if (kind == "atom_plus_pareto") return RadialLaw::atom_plus_pareto(a, spec.at("tail_coefficient").get<double>());
  if (kind == "oscillating") return RadialLaw::oscillating(a, spec.at("amplitude").get<double>(), spec.value("sign", 1));
  fail(ErrorKind::InvalidSpec, "unknown radial law \"" + kind + "\"");
}

inline ModelPtr model_from_json(const json& spec) {
  require(spec.is_object() && spec.contains("kind") && spec.contains("alpha"), ErrorKind::InvalidSpec,
          "model spec needs \"kind\" and \"alpha\"");
  try {
    const auto kind = spec.at("kind").get<std::string>();
    const double alpha = spec.at("alpha").get<double>();
    if (kind == "polar_independent") {
      const SpectralMeasure sigma = measure_from_json(spec.at("sigma"));
      const json radial = spec.value("radial", json{{"kind", "pareto"}});
      return polar_independent(sigma, alpha, radial_from_json(radial, alpha));
    }
    if (kind == "example1") return std::make_shared<Example1Model>(alpha, spec.value("amplitude", 0.5));
    if (kind == "example2")
      return std::make_shared<Example2Model>(alpha, spec.value("nu", 0.5), spec.value("beta", 1.2));
    if (kind == "example3") return std::make_shared<Example3Model>(alpha);
    fail(ErrorKind::InvalidSpec, "unknown model kind \"" + kind + "\"");
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed model spec: ") + e.what());
  }
}

}  // namespace rvtail
