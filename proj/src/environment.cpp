#include "polymer/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "polymer/error.hpp"
#include "polymer/format.hpp"
#include "polymer/geometry.hpp"

namespace polymer {

double SpaceTimeBox::spatial_volume() const noexcept {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool SpaceTimeBox::contains(double s, std::span<const double> x) const noexcept {
  if (!(s > 0.0 && s <= t_max) || x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

void SpaceTimeBox::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(ErrorKind::invalid_time, "box t_max must be positive");
  if (lo.empty() || lo.size() != hi.size()) {
    throw Error(ErrorKind::invalid_dimension, "box corners must be non-empty and of equal dimension");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) throw Error(ErrorKind::invalid_point, "box needs hi > lo in every coordinate");
  }
}

SpaceTimeBox covering_box(std::span<const PolymerPath> paths, double margin) {
  if (paths.empty()) throw Error(ErrorKind::invalid_count, "covering_box needs at least one path");
  const int d = paths.front().dim();
  const double reach = unit_ball_radius(d) + margin;
  SpaceTimeBox box;
  box.t_max = paths.front().grid().horizon();
  box.lo.assign(d, std::numeric_limits<double>::infinity());
  box.hi.assign(d, -std::numeric_limits<double>::infinity());
  for (const auto& path : paths) {
    const auto c = path.coords();
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto axis = j % d;
      box.lo[axis] = std::min(box.lo[axis], c[j]);
      box.hi[axis] = std::max(box.hi[axis], c[j]);
    }
  }
  for (int i = 0; i < d; ++i) {
    box.lo[i] -= reach;
    box.hi[i] += reach;
  }
  return box;
}

PointCloud::PointCloud(SpaceTimeBox box, double nu) : box_(std::move(box)), nu_(nu) {
  box_.validate();
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw Error(ErrorKind::invalid_intensity, "intensity must be >= 0");
}

PointCloud::PointCloud(SpaceTimeBox box, double nu, std::vector<double> times, std::vector<double> coords)
    : PointCloud(std::move(box), nu) {
  const auto d = static_cast<std::size_t>(box_.dim());
  if (coords.size() != times.size() * d) {
    throw Error(ErrorKind::invalid_count, "coordinate array does not match point count");
  }
  times_ = std::move(times);
  coords_ = std::move(coords);
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!box_.contains(times_[i], position(i))) {
      throw Error(ErrorKind::invalid_point, "point " + std::to_string(i) + " lies outside the box");
    }
  }
  canonicalize();
}

void PointCloud::canonicalize() {
  const auto d = static_cast<std::size_t>(dim());
  std::vector<std::size_t> order(times_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    if (times_[a] != times_[b]) return times_[a] < times_[b];
    return std::lexicographical_compare(coords_.begin() + a * d, coords_.begin() + (a + 1) * d,
                                        coords_.begin() + b * d, coords_.begin() + (b + 1) * d);
  };
  if (std::is_sorted(order.begin(), order.end(), less)) return;
  std::stable_sort(order.begin(), order.end(), less);
  std::vector<double> t(times_.size());
  std::vector<double> c(coords_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    t[i] = times_[order[i]];
    std::copy_n(coords_.begin() + order[i] * d, d, c.begin() + i * d);
  }
  times_ = std::move(t);
  coords_ = std::move(c);
}

PointCloud sample_poisson(const SpaceTimeBox& box, double nu, Stream& stream) {
  PointCloud empty(box, nu);
  if (nu == 0.0) return empty;
  const int d = box.dim();
  const double rate = nu * box.spatial_volume();
  std::vector<double> times;
  std::vector<double> coords;
  double s = stream.exponential(rate);
  while (s <= box.t_max) {
    times.push_back(s);
    for (int i = 0; i < d; ++i) coords.push_back(box.lo[i] + (box.hi[i] - box.lo[i]) * stream.uniform());
    s += stream.exponential(rate);
  }
  return PointCloud(box, nu, std::move(times), std::move(coords));
}

PointCloud restrict_to(const PointCloud& cloud, double t) {
  if (!(t > 0.0 && t <= cloud.box().t_max)) {
    throw Error(ErrorKind::invalid_time, "restriction time must lie in (0, t_max]");
  }
  SpaceTimeBox box = cloud.box();
  box.t_max = t;
  const auto times = cloud.times();
  const auto keep = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
  const auto d = static_cast<std::size_t>(cloud.dim());
  return PointCloud(std::move(box), cloud.nu(), std::vector<double>(times.begin(), times.begin() + keep),
                    std::vector<double>(cloud.coords().begin(), cloud.coords().begin() + keep * d));
}

std::vector<long> count_in_tubes(const PointCloud& cloud, std::span<const PolymerPath> paths) {
  std::vector<long> counts(paths.size(), 0);
  if (paths.empty()) return counts;
  const int d = cloud.dim();
  const double r = unit_ball_radius(d);
  const TimeGrid& grid = paths.front().grid();
  if (cloud.box().t_max > grid.horizon() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::invalid_time, "cloud horizon exceeds the path horizon; restrict the cloud first");
  }
  std::vector<int> steps(cloud.size());
  for (std::size_t j = 0; j < cloud.size(); ++j) steps[j] = grid.step_for_time(cloud.time(j));
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const PolymerPath& path = paths[i];
    if (path.dim() != d) throw Error(ErrorKind::invalid_dimension, "path and cloud dimensions differ");
    if (!(path.grid() == grid)) throw Error(ErrorKind::invalid_time, "paths must share one time grid");
    long count = 0;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      count += within_ball(path.position(steps[j]), cloud.position(j), r) ? 1 : 0;
    }
    counts[i] = count;
  }
  return counts;
}

long count_in_tube(const PointCloud& cloud, const PolymerPath& path) {
  return count_in_tubes(cloud, std::span<const PolymerPath>(&path, 1)).front();
}

PointCloud add_palm_point(const PointCloud& cloud, double s, std::span<const double> x) {
  if (!cloud.box().contains(s, x)) throw Error(ErrorKind::invalid_point, "Palm point lies outside the box");
  std::vector<double> times(cloud.times().begin(), cloud.times().end());
  std::vector<double> coords(cloud.coords().begin(), cloud.coords().end());
  times.push_back(s);
  coords.insert(coords.end(), x.begin(), x.end());
  return PointCloud(cloud.box(), cloud.nu(), std::move(times), std::move(coords));
}

PointCloud superpose(const PointCloud& a, const PointCloud& b) {
  if (!(a.box() == b.box())) throw Error(ErrorKind::incompatible_box, "superposed clouds must share a box");
  std::vector<double> times(a.times().begin(), a.times().end());
  times.insert(times.end(), b.times().begin(), b.times().end());
  std::vector<double> coords(a.coords().begin(), a.coords().end());
  coords.insert(coords.end(), b.coords().begin(), b.coords().end());
  return PointCloud(a.box(), a.nu() + b.nu(), std::move(times), std::move(coords));
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  out << "s";
  for (int i = 1; i <= cloud.dim(); ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    out << format_double(cloud.time(j));
    for (double x : cloud.position(j)) out << ',' << format_double(x);
    out << '\n';
  }
}

}  // namespace polymer
