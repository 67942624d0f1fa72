#include "polymer/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polymer/error.hpp"

namespace polymer {

TimeGrid::TimeGrid(double horizon, int n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::invalid_time, "time horizon must be positive");
  }
  if (n_steps < 1) throw Error(ErrorKind::invalid_count, "n_steps must be at least 1");
}

int TimeGrid::step_for_time(double s) const noexcept {
  const auto k = static_cast<long>(std::ceil(s * n_steps_ / horizon_)) - 1;
  return static_cast<int>(std::clamp<long>(k, 0, n_steps_ - 1));
}

PolymerPath::PolymerPath(TimeGrid grid, int dim)
    : grid_(grid), dim_(dim), coords_(static_cast<std::size_t>(grid.n_steps() + 1) * std::max(dim, 0), 0.0) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "path dimension must be >= 1");
}

PolymerPath::PolymerPath(TimeGrid grid, int dim, std::vector<double> coords)
    : grid_(grid), dim_(dim), coords_(std::move(coords)) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "path dimension must be >= 1");
  const auto expected = static_cast<std::size_t>(grid.n_steps() + 1) * dim;
  if (coords_.size() != expected) {
    throw Error(ErrorKind::invalid_count,
                "path needs " + std::to_string(expected) + " coordinates, got " + std::to_string(coords_.size()));
  }
}

}  // namespace polymer
