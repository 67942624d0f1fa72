#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "polymer/path.hpp"
#include "polymer/rng.hpp"

namespace polymer {

// Simulation window (0, t_max] x [lo, hi] for the Poisson medium.
struct SpaceTimeBox {
  double t_max = 0.0;
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const noexcept { return static_cast<int>(lo.size()); }
  double spatial_volume() const noexcept;
  double volume() const noexcept { return t_max * spatial_volume(); }
  bool contains(double s, std::span<const double> x) const noexcept;
  // Throws on t_max <= 0, mismatched corners or hi_i <= lo_i.
  void validate() const;

  friend bool operator==(const SpaceTimeBox&, const SpaceTimeBox&) = default;
};

// Box covering every path's spatial range inflated by the ball radius plus
// `margin`, over the paths' common horizon.
SpaceTimeBox covering_box(std::span<const PolymerPath> paths, double margin = 0.5);

/// A realization of the Poisson medium restricted to a box. Points are kept in
/// canonical order (time ascending, ties by lexicographic position) and carry
/// multiplicity: a duplicated point is stored twice.
class PointCloud {
 public:
  PointCloud(SpaceTimeBox box, double nu);
  // Validates every point against the box and sorts into canonical order.
  PointCloud(SpaceTimeBox box, double nu, std::vector<double> times, std::vector<double> coords);

  const SpaceTimeBox& box() const noexcept { return box_; }
  double nu() const noexcept { return nu_; }
  int dim() const noexcept { return box_.dim(); }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  double time(std::size_t i) const noexcept { return times_[i]; }
  std::span<const double> position(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  void canonicalize();

  SpaceTimeBox box_;
  double nu_;
  std::vector<double> times_;
  std::vector<double> coords_;
};

// Poisson process of intensity nu in the box. Times are generated as
// exponential inter-arrivals with rate nu*|spatial box|; positions uniform.
PointCloud sample_poisson(const SpaceTimeBox& box, double nu, Stream& stream);

// Keeps the points with s <= t; the returned box has t_max = t.
PointCloud restrict_to(const PointCloud& cloud, double t);

// Number of points (s, x) with the path position at step_for_time(s) within
// the closed unit ball around x. Requires cloud horizon <= path horizon.
long count_in_tube(const PointCloud& cloud, const PolymerPath& path);

// Counts for many paths at once (same contract as count_in_tube).
std::vector<long> count_in_tubes(const PointCloud& cloud, std::span<const PolymerPath> paths);

PointCloud add_palm_point(const PointCloud& cloud, double s, std::span<const double> x);

// Multiset union of two clouds on the same box; intensities add.
PointCloud superpose(const PointCloud& a, const PointCloud& b);

// CSV with header s,x_1,...,x_d and 17 significant digits.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace polymer
