#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rvtail/error.hpp"
#include "rvtail/sphere.hpp"

namespace rvtail {

/// Ordered, seeded collection of nonzero points in ℝ^d with a cached polar
/// decomposition. Coordinates, directions and norms are stored column-major.
class SampleBatch {
 public:
  SampleBatch() = default;

  /// Takes coordinate columns (columns[j][i] = coordinate j of point i) and
  /// computes the polar cache from them.
  static SampleBatch from_columns(std::vector<std::vector<double>> columns, std::uint64_t seed = 0,
                                  std::size_t zero_count = 0) {
    require(columns.size() >= 2, ErrorKind::DimensionMismatch, "sample points need d >= 2");
    const std::size_t n = columns.front().size();
    for (const auto& c : columns) require(c.size() == n, ErrorKind::InvalidArgument, "ragged coordinate columns");
    SampleBatch b;
    b.seed_ = seed;
    b.zero_count_ = zero_count;
    b.coords_ = std::move(columns);
    b.dirs_.assign(b.coords_.size(), std::vector<double>(n));
    b.norms_.resize(n);
    std::vector<double> p(b.coords_.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) p[j] = b.coords_[j][i];
      const double r = detail::euclidean_norm(p);
      require(r > 0.0, ErrorKind::DegeneratePoint, "sample batches hold nonzero points only");
      require(std::isfinite(r), ErrorKind::InvalidArgument, "sample point has non-finite norm");
      b.norms_[i] = r;
      for (std::size_t j = 0; j < p.size(); ++j) b.dirs_[j][i] = p[j] / r;
    }
    b.fill_angles();
    return b;
  }

  static SampleBatch from_points(const std::vector<std::vector<double>>& points, std::size_t dim,
                                 std::uint64_t seed = 0) {
    std::vector<std::vector<double>> cols(dim, std::vector<double>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      require(points[i].size() == dim, ErrorKind::DimensionMismatch, "point dimension differs from batch dimension");
      for (std::size_t j = 0; j < dim; ++j) cols[j][i] = points[i][j];
    }
    return from_columns(std::move(cols), seed);
  }

  /// Builds from polar parts directly: norms are stored exactly as given and
  /// coordinates are norm·direction. Used by transforms.
  static SampleBatch from_polar(std::vector<double> norms, std::vector<std::vector<double>> dir_columns,
                                std::uint64_t seed, std::size_t zero_count) {
    require(dir_columns.size() >= 2, ErrorKind::DimensionMismatch, "sample points need d >= 2");
    SampleBatch b;
    b.seed_ = seed;
    b.zero_count_ = zero_count;
    b.norms_ = std::move(norms);
    b.dirs_ = std::move(dir_columns);
    b.coords_.assign(b.dirs_.size(), std::vector<double>(b.norms_.size()));
    for (std::size_t i = 0; i < b.norms_.size(); ++i) {
      require(b.norms_[i] > 0.0, ErrorKind::DegeneratePoint, "sample batches hold nonzero points only");
      for (std::size_t j = 0; j < b.dirs_.size(); ++j) b.coords_[j][i] = b.norms_[i] * b.dirs_[j][i];
    }
    b.fill_angles();
    return b;
  }

  /// Point i scaled by gains[i]; points with gain 0 are dropped and counted
  /// in zero_count. Directions and angles are kept as they are.
  SampleBatch scaled_by(std::span<const double> gains) const {
    require(gains.size() == size(), ErrorKind::DimensionMismatch, "one gain per point");
    SampleBatch b;
    b.seed_ = seed_;
    b.zero_count_ = zero_count_;
    b.coords_.resize(dim());
    b.dirs_.resize(dim());
    for (std::size_t i = 0; i < size(); ++i) {
      const double g = gains[i];
      require(g >= 0.0, ErrorKind::InvalidGain, "gain must be nonnegative");
      if (g == 0.0) {
        ++b.zero_count_;
        continue;
      }
      b.norms_.push_back(norms_[i] * g);
      require(std::isfinite(b.norms_.back()), ErrorKind::InvalidArgument, "scaled point has non-finite norm");
      for (std::size_t j = 0; j < dim(); ++j) {
        b.coords_[j].push_back(coords_[j][i] * g);
        b.dirs_[j].push_back(dirs_[j][i]);
      }
      if (!angles_.empty()) b.angles_.push_back(angles_[i]);
    }
    return b;
  }

  /// Same coordinates with the polar cache recomputed from them, i.e. the
  /// batch as it reads back from a lossless CSV.
  SampleBatch rederived() const { return from_columns(coords_, seed_, zero_count_); }

  std::size_t size() const noexcept { return norms_.size(); }
  bool empty() const noexcept { return norms_.empty(); }
  std::size_t dim() const noexcept { return coords_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t zero_count() const noexcept { return zero_count_; }
  /// Points generated before transforms removed any: size() + zero_count().
  std::size_t generated() const noexcept { return size() + zero_count_; }

  std::span<const double> norms() const noexcept { return norms_; }
  std::span<const double> column(std::size_t j) const { return coords_.at(j); }
  std::span<const double> direction_column(std::size_t j) const { return dirs_.at(j); }
  /// Planar batches only.
  std::span<const double> angles() const {
    require(dim() == 2, ErrorKind::DimensionMismatch, "angles need d = 2");
    return angles_;
  }

  double norm(std::size_t i) const { return norms_.at(i); }
  double angle(std::size_t i) const {
    require(dim() == 2, ErrorKind::DimensionMismatch, "angles need d = 2");
    return angles_.at(i);
  }

  std::vector<double> point(std::size_t i) const {
    std::vector<double> p(dim());
    for (std::size_t j = 0; j < dim(); ++j) p[j] = coords_[j].at(i);
    return p;
  }

  Direction direction(std::size_t i) const {
    std::vector<double> d(dim());
    for (std::size_t j = 0; j < dim(); ++j) d[j] = dirs_[j].at(i);
    return Direction::from_unit(std::move(d));
  }

  const std::vector<std::vector<double>>& columns() const noexcept { return coords_; }
  const std::vector<std::vector<double>>& direction_columns() const noexcept { return dirs_; }

 private:
  void fill_angles() {
    angles_.clear();
    if (dim() != 2) return;
    angles_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) angles_[i] = Angle(std::atan2(dirs_[1][i], dirs_[0][i])).radians();
  }

  std::uint64_t seed_ = 0;
  std::size_t zero_count_ = 0;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<double>> dirs_;
  std::vector<double> norms_;
  std::vector<double> angles_;
};

}  // namespace rvtail
