#pragma once

// Transforms on both sides: sample batches (Monte Carlo) and limit measures
// Q = m_α × σ (analytic).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rvtail/error.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/models.hpp"
#include "rvtail/random.hpp"
#include "rvtail/sample_batch.hpp"
#include "rvtail/spectral_measure.hpp"

namespace rvtail {

/// Y = ‖X‖·f(X/‖X‖). Norms are copied bit for bit.
inline SampleBatch spherical_map_apply(const SampleBatch& batch, const SphereMap& f) {
  require(f.dim() == batch.dim() || batch.empty(), ErrorKind::DimensionMismatch, "map and batch dimensions differ");
  const std::size_t d = batch.dim();
  std::vector<std::vector<double>> dirs(d, std::vector<double>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Direction y = f(batch.direction(i));
    for (std::size_t j = 0; j < d; ++j) dirs[j][i] = y[j];
  }
  std::vector<double> norms(batch.norms().begin(), batch.norms().end());
  return SampleBatch::from_polar(std::move(norms), std::move(dirs), batch.seed(), batch.zero_count());
}

namespace detail {

// Keeps points with gain > 0, scaling their norms; gains of 0 are counted.
template <class GainAt>
SampleBatch scale_norms(const SampleBatch& batch, GainAt&& gain_at) {
  std::vector<double> gains(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) gains[i] = gain_at(i);
  return batch.scaled_by(gains);
}

}  // namespace detail

/// Y = X·h(X/‖X‖). Points sent to the origin are dropped and counted in
/// zero_count.
inline SampleBatch radial_scale_apply(const SampleBatch& batch, const RadialGain& h) {
  return detail::scale_norms(batch, [&](std::size_t i) { return h(batch.direction(i)); });
}

/// Y = X·Z(X/‖X‖) with one independent draw per point. Point i in chunk c
/// draws from substream (seed, Gain, c), so output does not depend on workers.
inline SampleBatch randomized_scale_apply(const SampleBatch& batch, const RandomGainProcess& z, std::uint64_t seed,
                                          unsigned workers = 1) {
  std::vector<double> draws(batch.size());
  for_each_chunk(batch.size(), workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Engine eng = substream(seed, Stream::Gain, chunk);
    for (std::size_t i = begin; i < end; ++i) draws[i] = z.sample(batch.direction(i), eng);
  });
  return detail::scale_norms(batch, [&](std::size_t i) { return draws[i]; });
}

/// Q = m_α × σ with m_α(dr) = α r^{-α-1} dr.
class LimitMeasure {
 public:
  LimitMeasure(double alpha, SpectralMeasure spectral) : alpha_(alpha), spectral_(std::move(spectral)) {
    require(alpha > 0.0 && std::isfinite(alpha), ErrorKind::InvalidArgument, "alpha must be positive");
  }

  double alpha() const noexcept { return alpha_; }
  const SpectralMeasure& spectral() const noexcept { return spectral_; }

  /// Q((r, ∞) × B) = σ(B)·r^{-α}.
  double eval(double r, const EvalSet& set) const {
    require(r > 0.0, ErrorKind::InvalidArgument, "r must be positive");
    return spectral_.measure_of(set) * std::pow(r, -alpha_);
  }

 private:
  double alpha_;
  SpectralMeasure spectral_;
};

/// Same α, spectral measure σf⁻¹.
inline LimitMeasure limit_pushforward_spherical(const LimitMeasure& q, const SphereMap& f) {
  return LimitMeasure(q.alpha(), pushforward(q.spectral(), f));
}

/// Same α, spectral measure h^α dσ. Only bounded gains are accepted.
inline LimitMeasure limit_pushforward_radial(const LimitMeasure& q, const RadialGain& h) {
  require(h.bounded(), ErrorKind::UnboundedGain,
          "radial pushforward needs a bounded gain; use the moment-condition route for unbounded gains");
  return LimitMeasure(q.alpha(), reweight(q.spectral(), h, q.alpha()));
}

/// ∫ h^{α+ε} dσ. Divergence is reported as MomentDivergence.
inline double moment_condition(const SpectralMeasure& sigma, const RadialGain& h, double alpha, double epsilon) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument, "epsilon must be positive");
  require(alpha > 0.0, ErrorKind::InvalidArgument, "alpha must be positive");
  const double p = alpha + epsilon;
  if (sigma.is_atomic()) {
    detail::KahanSum acc;
    for (const Atom& a : sigma.atoms()) {
      const double v = std::pow(h(a.dir), p);
      if (!std::isfinite(v)) fail(ErrorKind::MomentDivergence, "gain is infinite on an atom of sigma");
      acc.add(a.weight * v);
    }
    return acc.sum;
  }
  if (const auto& cusp = h.cusp(); cusp && cusp->gamma * p >= 1.0 && sigma.density_at(cusp->center) > 0.0) {
    fail(ErrorKind::MomentDivergence, "cusp exponent times (alpha + epsilon) is at least 1");
  }
  const auto bp = detail::merge_breakpoints(sigma.breakpoints(), h.breakpoints());
  std::vector<double> cuts{0.0};
  for (double b : bp) {
    if (b > 0.0 && b < kTwoPi) cuts.push_back(b);
  }
  cuts.push_back(kTwoPi);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double t) {
    const double g = h.at_angle(t);
    return g == 0.0 ? 0.0 : sigma.density_at(t) * std::pow(g, p);
  };
  detail::KahanSum acc;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = integrator.integrate(f, cuts[i], cuts[i + 1], 1e-12, &err, &l1);
    if (!std::isfinite(v) || err > 1e-4 * std::max(1.0, l1))
      fail(ErrorKind::MomentDivergence, "moment integral does not converge");
    acc.add(v);
  }
  return acc.sum;
}

/// Σ_k q_k k^{-ν} (k^β)^{α+ε}: the moment condition for the staircase gain
/// against the atom-series spectral measure. Finite iff (α+ε)β − ν < 1.
inline double example2_moment_condition(double alpha, double nu, double beta, double epsilon) {
  require(epsilon > 0.0, ErrorKind::InvalidArgument, "epsilon must be positive");
  return Example2Model::series_tail(0, (alpha + epsilon) * beta - nu);
}

}  // namespace rvtail
