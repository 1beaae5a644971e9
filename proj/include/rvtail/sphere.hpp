#pragma once

// Directions on the unit sphere, the [0, 2π) chart of S¹, and the evaluation
// sets (arc unions in the plane, cap unions in higher dimension).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvtail/error.hpp"

namespace rvtail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kAtomTolerance = 1e-12;

namespace detail {

inline double euclidean_norm(std::span<const double> v) {
  if (v.size() == 2) return std::hypot(v[0], v[1]);
  if (v.size() == 3) return std::hypot(v[0], v[1], v[2]);
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double x : v) sum += (x / scale) * (x / scale);
  return scale * std::sqrt(sum);
}

}  // namespace detail

/// Point of S^{d-1}, d >= 2.
class Direction {
 public:
  /// Takes coordinates that are already unit length (checked to 1e-12).
  static Direction from_unit(std::vector<double> coords) {
    require(coords.size() >= 2, ErrorKind::DimensionMismatch, "direction needs d >= 2");
    const double n = detail::euclidean_norm(coords);
    require(std::abs(n - 1.0) <= kUnitTolerance, ErrorKind::InvalidArgument,
            "direction coordinates are not unit length");
    return Direction(std::move(coords));
  }

  /// Projects a nonzero vector onto the sphere.
  static Direction normalize(std::span<const double> v) {
    require(v.size() >= 2, ErrorKind::DimensionMismatch, "direction needs d >= 2");
    const double n = detail::euclidean_norm(v);
    require(n > 0.0 && std::isfinite(n), ErrorKind::DegeneratePoint, "cannot take the direction of a zero vector");
    std::vector<double> c(v.begin(), v.end());
    for (double& x : c) x /= n;
    return Direction(std::move(c));
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  double dot(const Direction& other) const {
    require(dim() == other.dim(), ErrorKind::DimensionMismatch, "dot of directions with different dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += coords_[i] * other.coords_[i];
    return s;
  }

  /// Great-circle distance, computed from the chord so it stays accurate for
  /// nearly equal directions.
  double angular_distance(const Direction& other) const {
    require(dim() == other.dim(), ErrorKind::DimensionMismatch, "distance of directions with different dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += (coords_[i] - other.coords_[i]) * (coords_[i] - other.coords_[i]);
    return 2.0 * std::asin(std::min(1.0, std::sqrt(s) / 2.0));
  }

  bool operator==(const Direction&) const = default;

 private:
  explicit Direction(std::vector<double> coords) : coords_(std::move(coords)) {}
  std::vector<double> coords_;
};

/// Angle in the canonical chart [0, 2π) of S¹.
class Angle {
 public:
  Angle() = default;
  explicit Angle(double theta) : theta_(canonical(theta)) {}

  static double canonical(double theta) {
    require(std::isfinite(theta), ErrorKind::InvalidArgument, "angle must be finite");
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
  }

  double radians() const noexcept { return theta_; }
  bool operator==(const Angle&) const = default;

 private:
  double theta_ = 0.0;
};

/// Shortest distance between two angles on the circle.
inline double circular_distance(double a, double b) {
  const double d = std::abs(Angle::canonical(a) - Angle::canonical(b));
  return std::min(d, kTwoPi - d);
}

struct Polar {
  double norm;
  Direction dir;
};

inline Polar polar(std::span<const double> point) {
  require(point.size() >= 2, ErrorKind::DimensionMismatch, "polar decomposition needs d >= 2");
  const double n = detail::euclidean_norm(point);
  require(n > 0.0, ErrorKind::DegeneratePoint, "polar decomposition of the zero vector");
  require(std::isfinite(n), ErrorKind::InvalidArgument, "point has non-finite norm");
  return {n, Direction::normalize(point)};
}

inline Angle angle_of(const Direction& dir) {
  require(dir.dim() == 2, ErrorKind::DimensionMismatch, "angle_of needs d = 2");
  return Angle(std::atan2(dir[1], dir[0]));
}

inline Direction direction_of(Angle a) {
  return Direction::from_unit({std::cos(a.radians()), std::sin(a.radians())});
}

inline Direction direction_of(double theta) { return direction_of(Angle(theta)); }

/// Half-open arc [begin, end) of the [0, 2π) chart.
struct Arc {
  double begin;
  double end;
};

/// Finite union of disjoint half-open arcs.
class ArcSet {
 public:
  ArcSet() = default;

  explicit ArcSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
    for (const Arc& a : arcs_) {
      require(0.0 <= a.begin && a.begin < a.end && a.end <= kTwoPi, ErrorKind::InvalidArgument,
              "arc endpoints must satisfy 0 <= a < b <= 2π");
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) { return x.begin < y.begin; });
    for (std::size_t i = 1; i < arcs_.size(); ++i) {
      require(arcs_[i - 1].end <= arcs_[i].begin, ErrorKind::InvalidArgument, "arcs must be pairwise disjoint");
    }
  }

  static ArcSet full() { return ArcSet({{0.0, kTwoPi}}); }

  /// Arc from `from` counterclockwise to `to`; wraps through 0 when from > to.
  static ArcSet between(double from, double to) {
    const double a = Angle::canonical(from);
    const double b = (to == kTwoPi) ? kTwoPi : Angle::canonical(to);
    if (a < b) return ArcSet({{a, b}});
    if (a == b) return ArcSet();
    std::vector<Arc> arcs{{a, kTwoPi}};
    if (b > 0.0) arcs.push_back({0.0, b});
    return ArcSet(std::move(arcs));
  }

  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  bool empty() const noexcept { return arcs_.empty(); }

  bool contains(Angle a) const {
    const double t = a.radians();
    for (const Arc& arc : arcs_) {
      if (arc.begin <= t && t < arc.end) return true;
    }
    return false;
  }

  double length() const {
    double s = 0.0;
    for (const Arc& a : arcs_) s += a.end - a.begin;
    return s;
  }

  /// All arc endpoints, with 2π reported as 0.
  std::vector<double> endpoints() const {
    std::vector<double> out;
    for (const Arc& a : arcs_) {
      out.push_back(a.begin);
      out.push_back(a.end == kTwoPi ? 0.0 : a.end);
    }
    return out;
  }

 private:
  std::vector<Arc> arcs_;
};

struct Cap {
  Direction center;
  double cosine_threshold;
};

/// Finite union of spherical caps {x : <x, center> >= threshold}.
class CapSet {
 public:
  CapSet() = default;
  explicit CapSet(std::vector<Cap> caps) : caps_(std::move(caps)) {
    for (const Cap& c : caps_) {
      require(c.cosine_threshold >= -1.0 && c.cosine_threshold <= 1.0, ErrorKind::InvalidArgument,
              "cap threshold must lie in [-1, 1]");
      require(c.center.dim() == caps_.front().center.dim(), ErrorKind::DimensionMismatch,
              "caps must share a dimension");
    }
  }

  const std::vector<Cap>& caps() const noexcept { return caps_; }

  bool contains(const Direction& x) const {
    for (const Cap& c : caps_) {
      if (x.dot(c.center) >= c.cosine_threshold) return true;
    }
    return false;
  }

 private:
  std::vector<Cap> caps_;
};

using EvalSet = std::variant<ArcSet, CapSet>;

inline bool contains(const EvalSet& set, const Direction& x) {
  if (const auto* arcs = std::get_if<ArcSet>(&set)) return arcs->contains(angle_of(x));
  return std::get<CapSet>(set).contains(x);
}

}  // namespace rvtail
