#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polymer {

// Uniform time grid k*dt, k = 0..n_steps, on [0, horizon].
class TimeGrid {
 public:
  TimeGrid(double horizon, int n_steps);

  double horizon() const noexcept { return horizon_; }
  int n_steps() const noexcept { return n_steps_; }
  double dt() const noexcept { return horizon_ / n_steps_; }
  double time(int k) const noexcept { return horizon_ * k / n_steps_; }

  // Grid index whose position represents time s in (0, horizon]: the path is
  // piecewise constant on (k dt, (k+1) dt] with the value at k dt.
  int step_for_time(double s) const noexcept;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  int n_steps_;
};

// Discretized Brownian trajectory: n_steps + 1 positions in R^d, stored flat.
class PolymerPath {
 public:
  // The constant path at the origin.
  PolymerPath(TimeGrid grid, int dim);
  PolymerPath(TimeGrid grid, int dim, std::vector<double> coords);

  const TimeGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }

  std::span<const double> position(int k) const noexcept {
    return {coords_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> coords() const noexcept { return coords_; }

 private:
  TimeGrid grid_;
  int dim_;
  std::vector<double> coords_;
};

}  // namespace polymer
