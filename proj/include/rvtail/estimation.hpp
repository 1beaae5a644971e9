#pragma once

// Tail inference from samples: top-k spectral estimates, the Hill estimator
// with a bootstrap interval, the Q_n exceedance counts, and r^α-normalized
// tail scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/models.hpp"
#include "rvtail/random.hpp"
#include "rvtail/sample_batch.hpp"
#include "rvtail/spectral_measure.hpp"

namespace rvtail {

/// Indices of the k largest norms, largest first; equal norms keep sample
/// order.
inline std::vector<std::size_t> top_indices(std::span<const double> norms, std::size_t k) {
  require(k <= norms.size(), ErrorKind::InvalidArgument, "k exceeds the sample size");
  std::vector<std::size_t> idx(norms.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) { return norms[a] > norms[b] || (norms[a] == norms[b] && a < b); };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
  idx.resize(k);
  return idx;
}

/// Weight 1/k on each of the directions with the k largest norms.
inline SpectralMeasure empirical_spectral(const SampleBatch& batch, std::size_t k_top) {
  require(!batch.empty(), ErrorKind::EmptyInput, "empirical spectral measure of an empty batch");
  require(k_top >= 1 && k_top <= batch.size(), ErrorKind::InvalidArgument, "k_top must lie in [1, n]");
  const auto top = top_indices(batch.norms(), k_top);
  const double w = 1.0 / static_cast<double>(k_top);
  if (batch.dim() == 2) {
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(k_top);
    for (std::size_t i : top) atoms.emplace_back(batch.angle(i), w);
    return SpectralMeasure::empirical(SpectralMeasure::from_angles(atoms));
  }
  std::vector<Atom> atoms;
  atoms.reserve(k_top);
  for (std::size_t i : top) atoms.push_back({batch.direction(i), w});
  return SpectralMeasure::empirical(SpectralMeasure::discrete(std::move(atoms)));
}

/// α̂ = [ (1/k) Σ_{i<=k} ln(R_(i) / R_(k+1)) ]^{-1} over descending norms.
inline double hill_estimator(std::span<const double> norms, std::size_t k) {
  require(k >= 1 && k < norms.size(), ErrorKind::InvalidArgument, "Hill estimator needs 1 <= k < n");
  std::vector<double> top(norms.begin(), norms.end());
  std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(), std::greater<>());
  const double threshold = top[k];
  require(threshold > 0.0, ErrorKind::DegenerateTail, "Hill estimator needs positive top norms");
  std::sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(top[i] / threshold);
  require(s > 0.0, ErrorKind::DegenerateTail, "top norms are all equal; the tail index is not identifiable");
  return static_cast<double>(k) / s;
}

inline double hill_estimator(const SampleBatch& batch, std::size_t k) { return hill_estimator(batch.norms(), k); }

inline constexpr std::size_t kBootstrapResamples = 200;

struct Interval {
  double lo;
  double hi;
};

/// Percentile bootstrap (2.5%, 97.5%) of the Hill estimator. Resample b
/// draws from substream (seed, Bootstrap, b). Degenerate resamples are
/// skipped.
inline Interval hill_bootstrap_ci(std::span<const double> norms, std::size_t k, std::uint64_t seed, unsigned workers = 1,
                                  std::size_t resamples = kBootstrapResamples) {
  const std::size_t n = norms.size();
  std::vector<std::optional<double>> est(resamples);
  for_each_index(resamples, workers, [&](std::size_t b) {
    Engine eng = substream(seed, Stream::Bootstrap, b);
    std::vector<double> draw(n);
    for (double& x : draw) x = norms[std::min(n - 1, static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n)))];
    try {
      est[b] = hill_estimator(draw, k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateTail) throw;
    }
  });
  std::vector<double> v;
  for (const auto& e : est) {
    if (e) v.push_back(*e);
  }
  require(!v.empty(), ErrorKind::DegenerateTail, "every bootstrap resample was degenerate");
  std::sort(v.begin(), v.end());
  auto pct = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(i);
    return i + 1 < v.size() ? v[i] + frac * (v[i + 1] - v[i]) : v[i];
  };
  return {pct(0.025), pct(0.975)};
}

/// n·P̂{X/‖X‖ ∈ B, ‖X‖ > r·b_n} with n the number of generated points
/// (including any removed at the origin). This is the exceedance count.
inline double qn_measure(const SampleBatch& batch, double model_alpha, double r, const EvalSet& set) {
  require(r > 0.0, ErrorKind::InvalidArgument, "r must be positive");
  const double n = static_cast<double>(batch.generated());
  if (n == 0.0) return 0.0;
  const double level = r * normalizing_sequence(model_alpha, n);
  std::size_t count = 0;
  const auto* arcs = std::get_if<ArcSet>(&set);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.norm(i) <= level) continue;
    const bool in = arcs ? arcs->contains(Angle(batch.angle(i))) : contains(set, batch.direction(i));
    if (in) ++count;
  }
  return static_cast<double>(count);
}

/// Normalized tails v(r, B) = r^α·P{dir ∈ B, norm > r} on a grid, one row
/// per arc set.
struct TailScan {
  std::vector<double> r_grid;
  std::vector<ArcSet> arcs;
  std::vector<std::vector<double>> values;  // values[arc][r]
  std::string mode;
  std::vector<bool> is_bounded;            // max <= 10·median
  std::vector<double> oscillation_range;   // max − min over r >= median r
  std::vector<double> full_range;          // max − min over the whole grid
};

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
  require(!grid.empty(), ErrorKind::InvalidArgument, "r grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0 && std::isfinite(grid[i]), ErrorKind::InvalidArgument, "r grid must be positive");
    require(i == 0 || grid[i] > grid[i - 1], ErrorKind::InvalidArgument, "r grid must be strictly increasing");
  }
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline void fill_verdicts(TailScan& scan) {
  const double r_mid = median(scan.r_grid);
  for (const auto& row : scan.values) {
    const double hi = *std::max_element(row.begin(), row.end());
    const double lo = *std::min_element(row.begin(), row.end());
    scan.is_bounded.push_back(hi <= 10.0 * median(row));
    scan.full_range.push_back(hi - lo);
    double tail_hi = -std::numeric_limits<double>::infinity();
    double tail_lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (scan.r_grid[j] < r_mid) continue;
      tail_hi = std::max(tail_hi, row[j]);
      tail_lo = std::min(tail_lo, row[j]);
    }
    scan.oscillation_range.push_back(tail_hi - tail_lo);
  }
}

}  // namespace detail

/// Scan of an arbitrary tail function p(r, B); v = r^α·p.
inline TailScan tail_scan(const std::function<double(double, const ArcSet&)>& tail, double alpha,
                          const std::vector<ArcSet>& arcs, const std::vector<double>& r_grid, std::string mode) {
  detail::check_grid(r_grid);
  require(!arcs.empty(), ErrorKind::InvalidArgument, "tail scan needs at least one arc set");
  TailScan scan{r_grid, arcs, {}, std::move(mode), {}, {}, {}};
  for (const ArcSet& b : arcs) {
    std::vector<double> row;
    row.reserve(r_grid.size());
    for (double r : r_grid) row.push_back(std::pow(r, alpha) * tail(r, b));
    scan.values.push_back(std::move(row));
  }
  detail::fill_verdicts(scan);
  return scan;
}

/// Exact mode: closed-form tails of the model, optionally after a
/// deterministic radial gain.
inline TailScan tail_scan(const RegVarModel& model, double alpha, const std::vector<ArcSet>& arcs,
                          const std::vector<double>& r_grid, const std::optional<RadialGain>& gain = std::nullopt) {
  auto tail = [&](double r, const ArcSet& b) {
    const auto v = gain ? model.exact_tail_under_gain(r, b, *gain) : model.exact_tail(r, b);
    require(v.has_value(), ErrorKind::InvalidArgument,
            "model \"" + model.kind() + "\" has no closed-form tail for this configuration");
    return *v;
  };
  return tail_scan(tail, alpha, arcs, r_grid, "exact");
}

/// Empirical mode: exceedance frequencies of a planar batch.
inline TailScan tail_scan(const SampleBatch& batch, double alpha, const std::vector<ArcSet>& arcs,
                          const std::vector<double>& r_grid) {
  require(batch.generated() >= 1000, ErrorKind::InvalidArgument, "empirical tail scan needs at least 1000 points");
  const double n = static_cast<double>(batch.generated());
  auto tail = [&](double r, const ArcSet& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch.norm(i) > r && b.contains(Angle(batch.angle(i)))) ++c;
    }
    return static_cast<double>(c) / n;
  };
  return tail_scan(tail, alpha, arcs, r_grid, "empirical");
}

struct EstimationReport {
  double alpha_hat = 0.0;
  Interval alpha_ci{0.0, 0.0};
  std::size_t k_used = 0;
  SpectralMeasure spectral_hat;
  std::map<std::string, double> distances;
};

/// Distances of an estimate to a declared target: TV when both are atomic,
/// KS in the plane.
inline std::map<std::string, double> spectral_distances(const SpectralMeasure& estimate, const SpectralMeasure& target) {
  const SpectralMeasure t = normalize(target);
  std::map<std::string, double> d;
  if (t.is_atomic() && estimate.is_atomic()) d["tv"] = distance_tv(estimate, t);
  if (t.dim() == 2 && estimate.dim() == 2) d["ks"] = distance_ks(estimate, t);
  return d;
}

inline EstimationReport estimate(const SampleBatch& batch, std::size_t k_top,
                                 const std::optional<SpectralMeasure>& target = std::nullopt, std::uint64_t seed = 42,
                                 unsigned workers = 1) {
  require(!batch.empty(), ErrorKind::EmptyInput, "estimation on an empty batch");
  require(k_top >= 1 && k_top < batch.size(), ErrorKind::InvalidArgument, "k_top must lie in [1, n)");
  EstimationReport rep;
  rep.k_used = k_top;
  rep.alpha_hat = hill_estimator(batch, k_top);
  rep.alpha_ci = hill_bootstrap_ci(batch.norms(), k_top, seed, workers);
  rep.spectral_hat = empirical_spectral(batch, k_top);
  if (target) rep.distances = spectral_distances(rep.spectral_hat, *target);
  return rep;
}

inline json report_to_json(const EstimationReport& r) {
  json d = json::object();
  for (const auto& [k, v] : r.distances) d[k] = v;
  return {{"alpha_hat", r.alpha_hat},
          {"alpha_ci", {r.alpha_ci.lo, r.alpha_ci.hi}},
          {"k_used", r.k_used},
          {"spectral_hat", measure_to_json(r.spectral_hat)},
          {"distances", d}};
}

/// Top-k count from "k" (integer) or "frac" (a value below 1): llround(frac·n),
/// at least 1.
inline std::size_t resolve_top(double top, std::size_t n) {
  require(top > 0.0 && std::isfinite(top), ErrorKind::InvalidArgument, "top must be positive");
  if (top < 1.0) return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(top * static_cast<double>(n))));
  require(top == std::floor(top), ErrorKind::InvalidArgument, "top count must be an integer");
  return static_cast<std::size_t>(top);
}

}  // namespace rvtail
