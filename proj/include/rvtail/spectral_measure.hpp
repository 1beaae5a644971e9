#pragma once

// Finite measures on the sphere: atomic (discrete or empirical) in any
// dimension, or a density on the [0, 2π) chart of S¹. Provides the image
// measure σ∘f⁻¹, the reweighting dμ/dσ = h^α, the planar CDF/quantile pair,
// and TV/KS distances.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/sphere.hpp"

namespace rvtail {

enum class MeasureKind { Discrete, Density, Empirical };

inline std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::Discrete: return "discrete";
    case MeasureKind::Density: return "density";
    case MeasureKind::Empirical: return "empirical";
  }
  return "discrete";
}

struct Atom {
  Direction dir;
  double weight;
};

namespace detail {

inline constexpr std::size_t kDensityCells = std::size_t{1} << 16;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

/// Cumulative table of a density on [0, 2π). Cells are the 2^16-point grid
/// refined by the density's breakpoints; each cell is integrated with 7-point
/// Gauss–Legendre, partial cells likewise.
class DensityTable {
 public:
  using Fn = std::function<double(double)>;

  DensityTable(Fn f, const std::vector<double>& breakpoints, std::size_t cells = kDensityCells) : f_(std::move(f)) {
    edges_.reserve(cells + breakpoints.size() + 1);
    for (std::size_t i = 0; i <= cells; ++i) edges_.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(cells));
    edges_.back() = kTwoPi;
    for (double b : breakpoints) {
      if (b > 0.0 && b < kTwoPi) edges_.push_back(b);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    cum_.resize(edges_.size());
    cum_[0] = 0.0;
    KahanSum acc;
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
      const double m = integrate(edges_[i], edges_[i + 1]);
      require(m >= 0.0 && std::isfinite(m), ErrorKind::InvalidArgument, "density must be nonnegative and integrable");
      acc.add(m);
      cum_[i + 1] = acc.sum;
    }
  }

  double density(double theta) const { return f_(theta); }
  double total() const { return cum_.back(); }
  const std::vector<double>& edges() const noexcept { return edges_; }

  /// ∫_0^θ f, θ ∈ [0, 2π].
  double cdf(double theta) const {
    if (theta <= 0.0) return 0.0;
    if (theta >= kTwoPi) return total();
    const std::size_t cell = cell_of(theta);
    if (theta == edges_[cell]) return cum_[cell];
    return cum_[cell] + integrate(edges_[cell], theta);
  }

  double mass(double a, double b) const { return b <= a ? 0.0 : cdf(b) - cdf(a); }

  /// Smallest θ with cdf(θ) >= target; target is clamped to (0, total].
  double inverse(double target) const {
    if (target <= 0.0) {
      const auto it = std::upper_bound(cum_.begin(), cum_.end(), 0.0);
      return it == cum_.end() ? 0.0 : edges_[static_cast<std::size_t>(it - cum_.begin()) - 1];
    }
    target = std::min(target, total());
    const auto it = std::lower_bound(cum_.begin() + 1, cum_.end(), target);
    const std::size_t cell = static_cast<std::size_t>(it - cum_.begin()) - 1;
    double lo = edges_[cell];
    double hi = edges_[cell + 1];
    const double need = target - cum_[cell];
    if (need <= 0.0) return lo;
    // Safeguarded Newton on g(θ) = ∫_lo^θ f − need, monotone in θ.
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * kTwoPi; ++iter) {
      const double g = integrate(edges_[cell], x) - need;
      if (g >= 0.0) hi = x; else lo = x;
      const double d = f_(x);
      double next = (d > 0.0 && std::isfinite(d)) ? x - g / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == x) break;
      x = next;
    }
    return hi;
  }

 private:
  double integrate(double a, double b) const {
    return boost::math::quadrature::gauss<double, 7>::integrate(f_, a, b);
  }

  std::size_t cell_of(double theta) const {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), theta);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
  }

  Fn f_;
  std::vector<double> edges_;
  std::vector<double> cum_;
};

}  // namespace detail

class SpectralMeasure {
 public:
  /// Atomic measure; atoms closer than 1e-12 rad merge with weights added.
  static SpectralMeasure discrete(std::vector<Atom> atoms, MeasureKind kind = MeasureKind::Discrete) {
    require(kind != MeasureKind::Density, ErrorKind::InvalidArgument, "use SpectralMeasure::density for densities");
    SpectralMeasure m;
    m.kind_ = kind;
    m.dim_ = atoms.empty() ? 2 : atoms.front().dir.dim();
    for (const Atom& a : atoms) {
      require(a.dir.dim() == m.dim_, ErrorKind::DimensionMismatch, "atoms must share a dimension");
      require(a.weight > 0.0 && std::isfinite(a.weight), ErrorKind::InvalidArgument, "atom weights must be positive");
    }
    if (m.dim_ == 2) {
      std::vector<double> angles;
      angles.reserve(atoms.size());
      for (const Atom& a : atoms) angles.push_back(angle_of(a.dir).radians());
      m.set_planar_atoms(std::move(atoms), std::move(angles));
    } else {
      m.atoms_ = merge_spatial(std::move(atoms));
      m.total_ = 0.0;
      for (const Atom& a : m.atoms_) m.total_ += a.weight;
    }
    return m;
  }

  /// Planar atoms given by angle; the angle is kept exactly as passed (after
  /// reduction to [0, 2π)).
  static SpectralMeasure from_angles(const std::vector<std::pair<double, double>>& angle_weights,
                                     MeasureKind kind = MeasureKind::Discrete) {
    SpectralMeasure m;
    m.kind_ = kind;
    m.dim_ = 2;
    std::vector<Atom> atoms;
    std::vector<double> angles;
    for (const auto& [theta, w] : angle_weights) {
      require(w > 0.0 && std::isfinite(w), ErrorKind::InvalidArgument, "atom weights must be positive");
      const double t = Angle::canonical(theta);
      atoms.push_back({direction_of(t), w});
      angles.push_back(t);
    }
    m.set_planar_atoms(std::move(atoms), std::move(angles));
    return m;
  }

  static SpectralMeasure dirac(double theta, double mass = 1.0) { return from_angles({{theta, mass}}); }

  /// Relabels an atomic probability measure as Empirical with total mass
  /// exactly 1 (absorbing the rounding of summed 1/k weights).
  static SpectralMeasure empirical(SpectralMeasure m) {
    require(m.is_atomic() && std::abs(m.total_ - 1.0) <= 1e-9, ErrorKind::InvalidArgument,
            "empirical measures are atomic probability measures");
    m.kind_ = MeasureKind::Empirical;
    m.total_ = 1.0;
    if (!m.cum_.empty()) m.cum_.back() = 1.0;
    return m;
  }

  /// Density on the [0, 2π) chart: μ(B) = ∫_B f(θ) dθ.
  static SpectralMeasure density(std::function<double(double)> f, std::vector<double> breakpoints = {},
                                 json spec = nullptr) {
    SpectralMeasure m;
    m.kind_ = MeasureKind::Density;
    m.dim_ = 2;
    m.breakpoints_ = detail::sorted_breakpoints(std::move(breakpoints));
    m.table_ = std::make_shared<const detail::DensityTable>(std::move(f), m.breakpoints_);
    m.total_ = m.table_->total();
    m.spec_ = std::move(spec);
    return m;
  }

  static SpectralMeasure uniform_circle() {
    return density([](double) { return 1.0 / kTwoPi; }, {}, json{{"name", "uniform"}});
  }

  /// (1 + a cos θ) / 2π, a probability density for |a| <= 1.
  static SpectralMeasure cosine_bump(double amplitude) {
    require(std::abs(amplitude) <= 1.0, ErrorKind::InvalidArgument, "cosine bump amplitude must satisfy |a| <= 1");
    return density([amplitude](double t) { return (1.0 + amplitude * std::cos(t)) / kTwoPi; }, {},
                   json{{"name", "cosine_bump"}, {"amplitude", amplitude}});
  }

  MeasureKind kind() const noexcept { return kind_; }
  bool is_atomic() const noexcept { return kind_ != MeasureKind::Density; }
  std::size_t dim() const noexcept { return dim_; }
  double total_mass() const noexcept { return total_; }
  bool is_normalized(double tol = 1e-9) const { return std::abs(total_ - 1.0) <= tol; }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  /// Planar atoms only: angles sorted increasingly, parallel to atoms().
  const std::vector<double>& atom_angles() const noexcept { return angles_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  /// Named-density spec (null when the density came from an ad-hoc callable).
  const json& density_spec() const noexcept { return spec_; }

  double density_at(double theta) const {
    require(kind_ == MeasureKind::Density, ErrorKind::InvalidArgument, "density_at on an atomic measure");
    return table_->density(Angle::canonical(theta));
  }

  std::function<double(double)> density_function() const {
    require(kind_ == MeasureKind::Density, ErrorKind::InvalidArgument, "density_function on an atomic measure");
    auto table = table_;
    return [table](double t) { return table->density(t); };
  }

  const detail::DensityTable& density_table() const {
    require(kind_ == MeasureKind::Density, ErrorKind::InvalidArgument, "density_table on an atomic measure");
    return *table_;
  }

  /// μ([0, θ]).
  double cdf(double theta) const {
    require_planar("cdf");
    if (theta >= kTwoPi) return total_;
    if (theta < 0.0) return 0.0;
    if (kind_ == MeasureKind::Density) return table_->cdf(theta);
    const auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
    return cum_[static_cast<std::size_t>(it - angles_.begin())];
  }

  /// μ([0, θ)).
  double cdf_left(double theta) const {
    require_planar("cdf");
    if (theta > kTwoPi) return total_;
    if (theta <= 0.0) return 0.0;
    if (kind_ == MeasureKind::Density) return table_->cdf(theta);
    const auto it = std::lower_bound(angles_.begin(), angles_.end(), theta);
    return cum_[static_cast<std::size_t>(it - angles_.begin())];
  }

  double measure_of(const ArcSet& set) const {
    require_planar("measure_of(ArcSet)");
    double s = 0.0;
    for (const Arc& a : set.arcs()) s += cdf_left(a.end) - cdf_left(a.begin);
    return s;
  }

  double measure_of(const CapSet& set) const {
    if (is_atomic()) {
      double s = 0.0;
      for (const Atom& a : atoms_) {
        if (set.contains(a.dir)) s += a.weight;
      }
      return s;
    }
    return measure_of(caps_as_arcs(set));
  }

  double measure_of(const EvalSet& set) const {
    return std::visit([this](const auto& s) { return measure_of(s); }, set);
  }

  SpectralMeasure scaled(double factor) const {
    require(factor > 0.0 && std::isfinite(factor), ErrorKind::InvalidArgument, "scale factor must be positive");
    if (kind_ == MeasureKind::Density) {
      json spec = spec_;
      if (!spec.is_null()) spec["scale"] = spec.value("scale", 1.0) * factor;
      auto table = table_;
      return density([table, factor](double t) { return factor * table->density(t); }, breakpoints_, std::move(spec));
    }
    SpectralMeasure m = *this;
    for (Atom& a : m.atoms_) a.weight *= factor;
    m.rebuild_cumulative();
    return m;
  }

  /// Planar caps become (closed) arcs; overlapping arcs are merged.
  static ArcSet caps_as_arcs(const CapSet& set) {
    std::vector<Arc> raw;
    for (const Cap& c : set.caps()) {
      require(c.center.dim() == 2, ErrorKind::DimensionMismatch, "cap to arc conversion needs d = 2");
      const double half = std::acos(c.cosine_threshold);
      if (half >= kPi) return ArcSet::full();
      const ArcSet piece = ArcSet::between(angle_of(c.center).radians() - half, angle_of(c.center).radians() + half);
      raw.insert(raw.end(), piece.arcs().begin(), piece.arcs().end());
    }
    std::sort(raw.begin(), raw.end(), [](const Arc& a, const Arc& b) { return a.begin < b.begin; });
    std::vector<Arc> merged;
    for (const Arc& a : raw) {
      if (!merged.empty() && a.begin <= merged.back().end) merged.back().end = std::max(merged.back().end, a.end);
      else merged.push_back(a);
    }
    return ArcSet(std::move(merged));
  }

 private:
  void require_planar(const char* what) const {
    require(dim_ == 2, ErrorKind::DimensionMismatch, std::string(what) + " needs d = 2");
  }

  void set_planar_atoms(std::vector<Atom> atoms, std::vector<double> angles) {
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
    atoms_.clear();
    angles_.clear();
    for (std::size_t idx : order) {
      if (!angles_.empty() && angles[idx] - angles_.back() <= kAtomTolerance) {
        atoms_.back().weight += atoms[idx].weight;
        continue;
      }
      atoms_.push_back(std::move(atoms[idx]));
      angles_.push_back(angles[idx]);
    }
    // Atoms just below 2π coincide with atoms at 0.
    if (atoms_.size() > 1 && kTwoPi - angles_.back() + angles_.front() <= kAtomTolerance) {
      atoms_.front().weight += atoms_.back().weight;
      atoms_.pop_back();
      angles_.pop_back();
    }
    rebuild_cumulative();
  }

  void rebuild_cumulative() {
    if (dim_ == 2) {
      cum_.assign(atoms_.size() + 1, 0.0);
      for (std::size_t i = 0; i < atoms_.size(); ++i) cum_[i + 1] = cum_[i] + atoms_[i].weight;
      total_ = cum_.back();
    } else {
      total_ = 0.0;
      for (const Atom& a : atoms_) total_ += a.weight;
    }
  }

  static std::vector<Atom> merge_spatial(std::vector<Atom> atoms) {
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.dir[0] < b.dir[0]; });
    std::vector<Atom> out;
    std::vector<bool> used(atoms.size(), false);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (used[i]) continue;
      Atom acc = atoms[i];
      for (std::size_t j = i + 1; j < atoms.size() && atoms[j].dir[0] - atoms[i].dir[0] <= kAtomTolerance; ++j) {
        if (!used[j] && atoms[i].dir.angular_distance(atoms[j].dir) <= kAtomTolerance) {
          acc.weight += atoms[j].weight;
          used[j] = true;
        }
      }
      out.push_back(std::move(acc));
    }
    return out;
  }

  MeasureKind kind_ = MeasureKind::Discrete;
  std::size_t dim_ = 2;
  std::vector<Atom> atoms_;
  std::vector<double> angles_;
  std::vector<double> cum_;
  std::vector<double> breakpoints_;
  std::shared_ptr<const detail::DensityTable> table_;
  double total_ = 0.0;
  json spec_;
};

inline SpectralMeasure normalize(const SpectralMeasure& m) {
  require(m.total_mass() > 0.0, ErrorKind::EmptyMeasure, "cannot normalize a measure of zero mass");
  if (m.is_normalized(0.0)) return m;
  return m.scaled(1.0 / m.total_mass());
}

/// Image measure σ∘f⁻¹. Atomic inputs map atom by atom; a density is binned
/// on its quadrature cells (refined by the map's breakpoints), each cell's
/// mass sent to the image of its midpoint.
inline SpectralMeasure pushforward(const SpectralMeasure& sigma, const SphereMap& f) {
  require(sigma.dim() == f.dim(), ErrorKind::DimensionMismatch, "map and measure dimensions differ");
  std::vector<Atom> out;
  if (sigma.is_atomic()) {
    out.reserve(sigma.atoms().size());
    for (const Atom& a : sigma.atoms()) out.push_back({f(a.dir), a.weight});
    return SpectralMeasure::discrete(std::move(out), sigma.kind());
  }
  // A density stays a density under the identity; any other map is binned.
  if (f.spec().is_object() && f.spec().value("type", "") == "identity") return sigma;
  const auto& table = sigma.density_table();
  std::vector<double> edges = table.edges();
  for (double b : f.breakpoints()) {
    if (b > 0.0 && b < kTwoPi) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  out.reserve(edges.size());
  double previous = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double next = table.cdf(edges[i + 1]);
    const double mass = next - previous;
    previous = next;
    if (mass <= 0.0) continue;
    out.push_back({f(direction_of(0.5 * (edges[i] + edges[i + 1]))), mass});
  }
  return SpectralMeasure::discrete(std::move(out));
}

/// μ with dμ/dσ = h^α. Not renormalized.
inline SpectralMeasure reweight(const SpectralMeasure& sigma, const RadialGain& h, double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorKind::InvalidArgument, "alpha must be positive");
  if (sigma.is_atomic()) {
    std::vector<Atom> out;
    for (const Atom& a : sigma.atoms()) {
      const double w = a.weight * std::pow(h(a.dir), alpha);
      if (w > 0.0) out.push_back({a.dir, w});
    }
    return SpectralMeasure::discrete(std::move(out), sigma.kind());
  }
  json spec = nullptr;
  if (!sigma.density_spec().is_null() && !h.spec().is_null()) {
    spec = {{"name", "reweighted"}, {"base", sigma.density_spec()}, {"gain", h.spec()}, {"alpha", alpha}};
  }
  auto base = sigma.density_function();
  return SpectralMeasure::density(
      [base, h, alpha](double t) {
        const double b = base(t);
        return b == 0.0 ? 0.0 : b * std::pow(h.at_angle(t), alpha);
      },
      detail::merge_breakpoints(sigma.breakpoints(), h.breakpoints()), std::move(spec));
}

/// Number of probe angles used to tabulate a Monte Carlo moment over a density.
inline constexpr std::size_t kMomentProbes = 256;

/// μ with dμ/dσ(θ) = E[Z(θ)^α]. Closed-form moments are used when the
/// process has them; otherwise each atom (or each of 256 probe angles, for a
/// density, linearly interpolated) gets a seeded Monte Carlo estimate.
inline SpectralMeasure expected_gain_reweight(const SpectralMeasure& sigma, const RandomGainProcess& z, double alpha,
                                              std::uint64_t seed = 42) {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorKind::InvalidArgument, "alpha must be positive");
  if (sigma.is_atomic()) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < sigma.atoms().size(); ++i) {
      const Atom& a = sigma.atoms()[i];
      const double w = a.weight * z.moment(a.dir, alpha, seed, i);
      if (w > 0.0) out.push_back({a.dir, w});
    }
    return SpectralMeasure::discrete(std::move(out), sigma.kind());
  }
  auto base = sigma.density_function();
  if (z.has_analytic_moment()) {
    for (std::size_t j = 0; j < kMomentProbes; ++j) {
      z.moment(direction_of(kTwoPi * static_cast<double>(j) / kMomentProbes), alpha, seed, j);
    }
    return SpectralMeasure::density(
        [base, z, alpha](double t) { return base(t) * *z.analytic_moment(direction_of(t), alpha); },
        sigma.breakpoints());
  }
  auto table = std::make_shared<std::vector<double>>(kMomentProbes + 1);
  for (std::size_t j = 0; j < kMomentProbes; ++j) {
    (*table)[j] = z.moment(direction_of(kTwoPi * static_cast<double>(j) / kMomentProbes), alpha, seed, j);
  }
  (*table)[kMomentProbes] = (*table)[0];
  return SpectralMeasure::density(
      [base, table](double t) {
        const double x = t / kTwoPi * static_cast<double>(kMomentProbes);
        const auto j = std::min<std::size_t>(static_cast<std::size_t>(x), kMomentProbes - 1);
        const double frac = x - static_cast<double>(j);
        return base(t) * ((1.0 - frac) * (*table)[j] + frac * (*table)[j + 1]);
      },
      sigma.breakpoints());
}

inline double cdf(const SpectralMeasure& mu, Angle theta) { return mu.cdf(theta.radians()); }

/// Generalized inverse inf{θ : F(θ) >= u}; u = 0 returns the left end of the
/// support.
inline Angle quantile(const SpectralMeasure& mu, double u) {
  require(mu.dim() == 2, ErrorKind::DimensionMismatch, "quantile needs d = 2");
  require(mu.is_normalized(), ErrorKind::InvalidArgument, "quantile needs a normalized measure");
  require(u >= 0.0 && u < 1.0, ErrorKind::InvalidArgument, "quantile level must lie in [0, 1)");
  if (mu.kind() == MeasureKind::Density) return Angle(mu.density_table().inverse(u * mu.total_mass()));
  const auto& angles = mu.atom_angles();
  // First atom whose cumulative mass reaches u; u = 0 gives the first atom.
  // Comparing against u itself (not u·total) keeps F(F⁻¹(u)) >= u exact.
  std::size_t lo = 0;
  std::size_t hi = angles.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (mu.cdf(angles[mid]) >= u) hi = mid;
    else lo = mid + 1;
  }
  return Angle(angles[lo]);
}

/// θ ↦ F⁻¹(θ / 2π): carries the uniform law on S¹ to μ.
inline SphereMap quantile_transform_map(const SpectralMeasure& mu);

inline json measure_to_json(const SpectralMeasure& m);

inline SphereMap quantile_transform_map(const SpectralMeasure& mu) {
  require(mu.dim() == 2, ErrorKind::DimensionMismatch, "quantile transform needs d = 2");
  require(mu.is_normalized(), ErrorKind::InvalidArgument, "quantile transform needs a normalized measure");
  std::vector<double> breakpoints;
  if (mu.is_atomic()) {
    for (double a : mu.atom_angles()) {
      const double c = mu.cdf(a);
      if (c < mu.total_mass()) breakpoints.push_back(kTwoPi * c / mu.total_mass());
    }
  }
  json spec = nullptr;
  if (mu.is_atomic() || !mu.density_spec().is_null()) spec = {{"type", "quantile_transform"}, {"target", measure_to_json(mu)}};
  return SphereMap::from_angle([mu](double t) { return quantile(mu, t / kTwoPi).radians(); }, std::move(breakpoints),
                               "jumps where the target CDF is flat", std::move(spec));
}

/// ½ Σ |w_a − w_b| after matching atoms of a and b that lie within `tol`
/// of each other (single linkage).
inline double distance_tv(const SpectralMeasure& a, const SpectralMeasure& b, double tol = 1e-6) {
  require(a.is_atomic() && b.is_atomic(), ErrorKind::UnsupportedPair, "TV distance needs two atomic measures; use KS");
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "TV distance of measures with different dimension");
  require(a.is_normalized() && b.is_normalized(), ErrorKind::InvalidArgument, "TV distance needs normalized measures");
  struct Signed {
    const Direction* dir;
    double angle;
    double w;
  };
  std::vector<Signed> all;
  for (std::size_t i = 0; i < a.atoms().size(); ++i)
    all.push_back({&a.atoms()[i].dir, a.dim() == 2 ? a.atom_angles()[i] : 0.0, a.atoms()[i].weight});
  for (std::size_t i = 0; i < b.atoms().size(); ++i)
    all.push_back({&b.atoms()[i].dir, b.dim() == 2 ? b.atom_angles()[i] : 0.0, -b.atoms()[i].weight});
  if (all.empty()) return 0.0;

  // Union-find over atoms closer than tol.
  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };

  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (a.dim() == 2) {
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return all[x].angle < all[y].angle; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (all[order[i]].angle - all[order[i - 1]].angle <= tol) unite(order[i], order[i - 1]);
    }
    if (order.size() > 1 && kTwoPi - all[order.back()].angle + all[order.front()].angle <= tol)
      unite(order.back(), order.front());
  } else {
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return (*all[x].dir)[0] < (*all[y].dir)[0]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size() && (*all[order[j]].dir)[0] - (*all[order[i]].dir)[0] <= tol; ++j) {
        if (all[order[i]].dir->angular_distance(*all[order[j]].dir) <= tol) unite(order[i], order[j]);
      }
    }
  }
  std::vector<double> cluster(all.size(), 0.0);
  for (std::size_t i = 0; i < all.size(); ++i) cluster[find(i)] += all[i].w;
  double s = 0.0;
  for (double c : cluster) s += std::abs(c);
  return 0.5 * s;
}

inline constexpr std::size_t kKsGridPoints = std::size_t{1} << 14;

/// Kolmogorov distance of the planar CDFs: sup over a 2^14-point grid, every
/// atom location, and the left limits at atom locations.
inline double distance_ks(const SpectralMeasure& a, const SpectralMeasure& b) {
  require(a.dim() == 2 && b.dim() == 2, ErrorKind::DimensionMismatch, "KS distance needs d = 2");
  require(a.is_normalized() && b.is_normalized(), ErrorKind::InvalidArgument, "KS distance needs normalized measures");
  double sup = 0.0;
  for (std::size_t j = 0; j < kKsGridPoints; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / kKsGridPoints;
    sup = std::max(sup, std::abs(a.cdf(t) - b.cdf(t)));
  }
  for (const SpectralMeasure* m : {&a, &b}) {
    if (!m->is_atomic()) continue;
    // Atoms closer than kAtomTolerance count as one point, as in discrete().
    for (double t : m->atom_angles()) {
      sup = std::max(sup, std::abs(a.cdf(t + kAtomTolerance) - b.cdf(t + kAtomTolerance)));
      sup = std::max(sup, std::abs(a.cdf_left(t - kAtomTolerance) - b.cdf_left(t - kAtomTolerance)));
    }
  }
  return sup;
}

/// Mass of atoms sitting on an arc endpoint (to 1e-12); zero for densities.
inline double boundary_mass(const SpectralMeasure& mu, const ArcSet& set) {
  require(mu.dim() == 2, ErrorKind::DimensionMismatch, "boundary_mass needs d = 2");
  if (!mu.is_atomic()) return 0.0;
  const std::vector<double> ends = set.endpoints();
  double s = 0.0;
  for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
    const double t = mu.atom_angles()[i];
    const bool on_edge = std::any_of(ends.begin(), ends.end(), [t](double e) { return circular_distance(t, e) <= kAtomTolerance; });
    if (on_edge) s += mu.atoms()[i].weight;
  }
  return s;
}

// JSON ----------------------------------------------------------------------

inline SpectralMeasure measure_from_json(const json& spec);

namespace detail {

inline SpectralMeasure density_from_spec(const json& spec) {
  require(spec.is_object() && spec.contains("name"), ErrorKind::InvalidSpec, "density spec needs a \"name\"");
  const auto name = spec.at("name").get<std::string>();
  SpectralMeasure base = [&]() {
    if (name == "uniform") return SpectralMeasure::uniform_circle();
    if (name == "cosine_bump") return SpectralMeasure::cosine_bump(spec.at("amplitude").get<double>());
    if (name == "reweighted") {
      json base_spec = spec.at("base");
      return reweight(density_from_spec(base_spec), gain_from_json(spec.at("gain")), spec.at("alpha").get<double>());
    }
    fail(ErrorKind::InvalidSpec, "unknown density \"" + name + "\"");
  }();
  if (spec.contains("scale")) base = base.scaled(spec.at("scale").get<double>());
  return base;
}

}  // namespace detail

inline json measure_to_json(const SpectralMeasure& m) {
  json out{{"kind", to_string(m.kind())}, {"dim", m.dim()}};
  if (m.kind() == MeasureKind::Density) {
    require(!m.density_spec().is_null(), ErrorKind::InvalidSpec, "this density has no named form and cannot be serialized");
    out["density"] = m.density_spec();
    return out;
  }
  json atoms = json::array();
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    const Atom& a = m.atoms()[i];
    if (m.dim() == 2) atoms.push_back({{"angle", m.atom_angles()[i]}, {"weight", a.weight}});
    else atoms.push_back({{"coords", std::vector<double>(a.dir.coords().begin(), a.dir.coords().end())}, {"weight", a.weight}});
  }
  out["atoms"] = std::move(atoms);
  return out;
}

inline SpectralMeasure measure_from_json(const json& spec) {
  require(spec.is_object(), ErrorKind::InvalidSpec, "measure spec must be an object");
  try {
    const auto kind = spec.value("kind", std::string("discrete"));
    if (kind == "density") {
      require(spec.value("dim", 2) == 2, ErrorKind::InvalidSpec, "densities exist only for d = 2");
      return detail::density_from_spec(spec.at("density"));
    }
    require(kind == "discrete" || kind == "empirical", ErrorKind::InvalidSpec, "unknown measure kind \"" + kind + "\"");
    const MeasureKind mk = kind == "discrete" ? MeasureKind::Discrete : MeasureKind::Empirical;
    const auto dim = spec.value("dim", std::size_t{2});
    std::vector<std::pair<double, double>> by_angle;
    std::vector<Atom> by_coords;
    for (const auto& a : spec.at("atoms")) {
      const double w = a.at("weight").get<double>();
      if (a.contains("angle")) {
        require(dim == 2, ErrorKind::InvalidSpec, "angle atoms need dim = 2");
        by_angle.emplace_back(a.at("angle").get<double>(), w);
      } else {
        const auto c = a.at("coords").get<std::vector<double>>();
        require(c.size() == dim, ErrorKind::InvalidSpec, "atom coords do not match dim");
        by_coords.push_back({Direction::normalize(c), w});
      }
    }
    if (!by_coords.empty()) {
      for (const auto& [t, w] : by_angle) by_coords.push_back({direction_of(t), w});
      return SpectralMeasure::discrete(std::move(by_coords), mk);
    }
    return SpectralMeasure::from_angles(by_angle, mk);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed measure spec: ") + e.what());
  }
}

/// Maps by name, including the measure-dependent quantile transform.
inline SphereMap map_from_json(const json& spec) {
  if (spec.is_string()) return map_from_json(json{{"type", spec.get<std::string>()}});
  require(spec.is_object() && spec.contains("type"), ErrorKind::InvalidSpec, "map spec needs a \"type\"");
  const auto type = spec.at("type").get<std::string>();
  try {
    if (type == "identity") return SphereMap::identity(spec.value("dim", std::size_t{2}));
    if (type == "constant") return SphereMap::constant(Angle(spec.at("angle").get<double>()));
    if (type == "quadrant_snap") return SphereMap::quadrant_snap();
    if (type == "sign_map") return SphereMap::sign_map();
    if (type == "quantile_transform") return quantile_transform_map(normalize(measure_from_json(spec.at("target"))));
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed map spec: ") + e.what());
  }
  fail(ErrorKind::InvalidSpec, "unknown map type \"" + type + "\"");
}

}  // namespace rvtail
