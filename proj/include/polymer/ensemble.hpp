#pragma once

#include <span>
#include <vector>

#include "polymer/environment.hpp"
#include "polymer/path.hpp"
#include "polymer/rng.hpp"

namespace polymer {

// M independent Gaussian random walks from the origin with step covariance
// dt * I. Paths are filled one after another from the stream.
std::vector<PolymerPath> sample_paths(const TimeGrid& grid, int dim, int count, Stream& stream);

// log((1/M) sum_i exp(beta * H_i)), evaluated by subtracting the maximum.
double log_mean_exp(std::span<const long> hamiltonians, double beta);

/// Monte Carlo stand-in for the polymer measure: M paths drawn from the free
/// measure, reweighted by exp(beta * H_i). Immutable once built.
class GibbsEnsemble {
 public:
  GibbsEnsemble(std::vector<PolymerPath> paths, std::vector<long> hamiltonians, double beta);

  std::span<const PolymerPath> paths() const noexcept { return paths_; }
  const PolymerPath& path(std::size_t i) const noexcept { return paths_[i]; }
  std::size_t size() const noexcept { return paths_.size(); }
  int dim() const noexcept { return paths_.front().dim(); }
  const TimeGrid& grid() const noexcept { return paths_.front().grid(); }

  double beta() const noexcept { return beta_; }
  std::span<const long> hamiltonians() const noexcept { return hamiltonians_; }
  std::span<const double> log_weights() const noexcept { return log_weights_; }
  std::span<const double> weights() const noexcept { return weights_; }

  // ln of Z_hat = (1/M) sum exp(beta H_i).
  double log_z() const noexcept { return log_z_; }
  double z_hat() const noexcept;
  // 1 / sum w_i^2.
  double effective_sample_size() const noexcept { return ess_; }
  // sum_i w_i H_i.
  double mean_hamiltonian() const noexcept;

 private:
  std::vector<PolymerPath> paths_;
  std::vector<long> hamiltonians_;
  double beta_;
  std::vector<double> log_weights_;
  std::vector<double> weights_;
  double log_z_ = 0.0;
  double ess_ = 0.0;
};

// Computes H_i = count_in_tube(cloud, path_i) and the Gibbs weights. Throws
// Error{window_coverage} unless the cloud box covers every tube and shares the
// paths' horizon.
GibbsEnsemble build_ensemble(std::vector<PolymerPath> paths, const PointCloud& cloud, double beta);

}  // namespace polymer
