#include "polymer/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polymer/error.hpp"
#include "polymer/geometry.hpp"

namespace polymer {

std::vector<PolymerPath> sample_paths(const TimeGrid& grid, int dim, int count, Stream& stream) {
  if (count < 1) throw Error(ErrorKind::invalid_count, "need at least one path, got " + std::to_string(count));
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "path dimension must be >= 1");
  const double step_sd = std::sqrt(grid.dt());
  const auto n = static_cast<std::size_t>(grid.n_steps());
  const auto d = static_cast<std::size_t>(dim);
  std::vector<PolymerPath> paths;
  paths.reserve(count);
  for (int m = 0; m < count; ++m) {
    std::vector<double> coords((n + 1) * d, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        coords[k * d + i] = coords[(k - 1) * d + i] + step_sd * stream.normal();
      }
    }
    paths.emplace_back(grid, dim, std::move(coords));
  }
  return paths;
}

double log_mean_exp(std::span<const long> hamiltonians, double beta) {
  if (hamiltonians.empty()) throw Error(ErrorKind::invalid_count, "log_mean_exp of an empty set");
  if (beta == 0.0) return 0.0;
  double top = -std::numeric_limits<double>::infinity();
  for (long h : hamiltonians) top = std::max(top, beta * static_cast<double>(h));
  double sum = 0.0;
  for (long h : hamiltonians) sum += std::exp(beta * static_cast<double>(h) - top);
  return top + std::log(sum) - std::log(static_cast<double>(hamiltonians.size()));
}

GibbsEnsemble::GibbsEnsemble(std::vector<PolymerPath> paths, std::vector<long> hamiltonians, double beta)
    : paths_(std::move(paths)), hamiltonians_(std::move(hamiltonians)), beta_(beta) {
  if (paths_.empty()) throw Error(ErrorKind::invalid_count, "an ensemble needs at least one path");
  if (hamiltonians_.size() != paths_.size()) {
    throw Error(ErrorKind::invalid_count, "one Hamiltonian per path is required");
  }
  const std::size_t m = paths_.size();
  log_weights_.resize(m);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    log_weights_[i] = beta_ * static_cast<double>(hamiltonians_[i]);
    top = std::max(top, log_weights_[i]);
  }
  weights_.resize(m);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    weights_[i] = std::exp(log_weights_[i] - top);
    sum += weights_[i];
  }
  double sq = 0.0;
  for (auto& w : weights_) {
    sq += w * w;
    w /= sum;
  }
  log_z_ = top + std::log(sum) - std::log(static_cast<double>(m));
  ess_ = sum * sum / sq;
}

double GibbsEnsemble::z_hat() const noexcept { return std::exp(log_z_); }

double GibbsEnsemble::mean_hamiltonian() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * static_cast<double>(hamiltonians_[i]);
  return acc;
}

GibbsEnsemble build_ensemble(std::vector<PolymerPath> paths, const PointCloud& cloud, double beta) {
  if (paths.empty()) throw Error(ErrorKind::invalid_count, "an ensemble needs at least one path");
  const SpaceTimeBox& box = cloud.box();
  const TimeGrid& grid = paths.front().grid();
  if (std::abs(box.t_max - grid.horizon()) > 1e-12 * grid.horizon()) {
    throw Error(ErrorKind::window_coverage, "cloud horizon " + std::to_string(box.t_max) +
                                                " differs from path horizon " + std::to_string(grid.horizon()));
  }
  const int d = cloud.dim();
  const double r = unit_ball_radius(d);
  for (std::size_t m = 0; m < paths.size(); ++m) {
    const auto c = paths[m].coords();
    if (paths[m].dim() != d) throw Error(ErrorKind::invalid_dimension, "path and cloud dimensions differ");
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto axis = j % d;
      if (c[j] - r < box.lo[axis] || c[j] + r > box.hi[axis]) {
        throw Error(ErrorKind::window_coverage,
                    "tube of path " + std::to_string(m) + " leaves the cloud window along axis " + std::to_string(axis));
      }
    }
  }
  auto hamiltonians = count_in_tubes(cloud, paths);
  return GibbsEnsemble(std::move(paths), std::move(hamiltonians), beta);
}

}  // namespace polymer
