#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polymer/ensemble.hpp"

namespace polymer {

/// Grid estimate of mu_t(chi_{s,x}): m(k, b) = sum_i w_i chi(path_i, k, c_b)
/// for steps k = 0..n_steps-1 and bin centers c_b = (j + 1/2) h on a lattice
/// anchored at the origin. Each step stores only the sub-grid that can carry
/// mass (cells outside it are exactly zero).
class OccupancyField {
 public:
  struct Slice {
    std::vector<long> first;   // lattice index of the slice's first cell, per axis
    std::vector<long> extent;  // number of cells per axis
    std::vector<double> values;  // row-major, first axis slowest
  };

  OccupancyField(int dim, double bin_width, std::vector<Slice> slices);

  int dim() const noexcept { return dim_; }
  int n_steps() const noexcept { return static_cast<int>(slices_.size()); }
  double bin_width() const noexcept { return bin_width_; }
  double cell_volume() const noexcept { return cell_volume_; }
  const Slice& slice(int k) const { return slices_.at(k); }

  // Value at a lattice cell; zero outside the stored slice.
  double value(int k, std::span<const long> cell) const;
  // sum_b m(k, b) h^d
  double mass(int k) const noexcept { return masses_[k]; }

  double center_coordinate(long index) const noexcept { return (static_cast<double>(index) + 0.5) * bin_width_; }
  // Lattice indices of the flat position `flat` within slice k.
  std::vector<long> cell_of(int k, std::size_t flat) const;
  std::vector<double> center_of(std::span<const long> cell) const;

 private:
  int dim_;
  double bin_width_;
  double cell_volume_;
  std::vector<Slice> slices_;
  std::vector<double> masses_;
};

OccupancyField occupancy_field(const GibbsEnsemble& ensemble, double bin_width);

// Per-step grid argmax of the field with lexicographic-smallest tie-break.
struct FavouritePath {
  std::vector<std::vector<long>> cells;
  std::vector<std::vector<double>> centers;
  std::vector<double> maxima;
};

FavouritePath favourite_path(const OccupancyField& field);

// (1/n) sum_k sum_b m(k,b)^2 h^d
double replica_overlap(const OccupancyField& field);

// sum_{i,j} w_i w_j (1/n) sum_k |U(x_i(k)) cap U(x_j(k))|; O(M^2 n), intended
// as the exact reference for the grid form on small ensembles.
double replica_overlap_pairwise(const GibbsEnsemble& ensemble);

// sum_i w_i (1/n) sum_k chi(path_i, k, y_k)
double favourite_overlap(const GibbsEnsemble& ensemble, const FavouritePath& favourite);

struct DeltaSets {
  double middle_measure = 0.0;           // cells with m in [delta, 1 - delta]
  double negligible_in_tube = 0.0;       // m <= delta inside the path's ball
  double predominant_out_of_tube = 0.0;  // m >= 1 - delta outside the path's ball
};

DeltaSets delta_sets(const GibbsEnsemble& ensemble, const OccupancyField& field, double delta);

/// Grid versions of the two-to-one inequalities, evaluated on one ensemble.
/// Each slack is (right side - left side); all are >= 0 up to rounding.
struct TwoToOneReport {
  double overlap = 0.0;               // grid replica overlap R2
  double favourite = 0.0;             // favourite overlap R_*
  double mean_mass = 0.0;             // (1/n) sum_k m(k)
  double one_minus_overlap = 0.0;     // (1/n) sum_k sum_b h^d (m - m^2)
  double mass_weighted_max = 0.0;     // (1/n) sum_k max_b m(k,b) * m(k)
  double mass_defect = 0.0;           // (1/n) sum_k |1 - m(k)|
  double delta = 0.0;
  DeltaSets sets;

  double slack_right = 0.0;        // R2 <= (1/n) sum max * mass
  double slack_complement = 0.0;   // 1 - R_* <= 1 - R2 + defect
  double slack_middle = 0.0;       // middle <= (1 - R2)_grid / (delta (1 - delta))
  double slack_negligible = 0.0;   // negligible <= (1 - R2)_grid / (1 - delta)
  double slack_predominant = 0.0;  // predominant <= (1 - R2)_grid / (1 - delta)
  std::optional<double> slack_left;  // d = 1 only: R_*^2 / 2 <= R2

  double min_slack() const noexcept;
  // Name of the first inequality whose slack is below -tolerance, if any.
  std::optional<std::string> violation(double tolerance) const;
};

TwoToOneReport two_to_one_report(const GibbsEnsemble& ensemble, const OccupancyField& field,
                                 const FavouritePath& favourite, double delta);

// Covering constant used for the left inequality in d = 1.
inline constexpr double kTwoToOneConstantD1 = 0.5;

}  // namespace polymer
