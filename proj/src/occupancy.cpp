#include "polymer/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polymer/error.hpp"
#include "polymer/geometry.hpp"

namespace polymer {
namespace {

struct CellRange {
  std::vector<long> lo;
  std::vector<long> hi;  // inclusive
};

// Lattice cells whose centers may fall in the closed ball around x; one cell
// of slack per side so the exact test in within_ball decides.
CellRange candidate_cells(std::span<const double> x, double radius, double h) {
  CellRange range;
  range.lo.resize(x.size());
  range.hi.resize(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    range.lo[a] = static_cast<long>(std::floor((x[a] - radius) / h - 0.5)) - 1;
    range.hi[a] = static_cast<long>(std::ceil((x[a] + radius) / h - 0.5)) + 1;
  }
  return range;
}

// Calls fn(cell, center) for every lattice cell whose center lies in the
// closed ball of `radius` around x, in lexicographic cell order.
template <class Fn>
void for_each_cell_in_ball(std::span<const double> x, double radius, double h, Fn&& fn) {
  const std::size_t d = x.size();
  const CellRange range = candidate_cells(x, radius, h);
  std::vector<long> cell = range.lo;
  std::vector<double> center(d);
  while (true) {
    for (std::size_t a = 0; a < d; ++a) center[a] = (static_cast<double>(cell[a]) + 0.5) * h;
    if (within_ball(x, center, radius)) fn(std::span<const long>(cell), std::span<const double>(center));
    std::size_t a = d;
    while (a > 0) {
      --a;
      if (cell[a] < range.hi[a]) {
        ++cell[a];
        break;
      }
      cell[a] = range.lo[a];
      if (a == 0) return;
    }
  }
}

std::size_t flat_index(const OccupancyField::Slice& slice, std::span<const long> cell) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < cell.size(); ++a) {
    flat = flat * static_cast<std::size_t>(slice.extent[a]) + static_cast<std::size_t>(cell[a] - slice.first[a]);
  }
  return flat;
}

bool inside(const OccupancyField::Slice& slice, std::span<const long> cell) {
  for (std::size_t a = 0; a < cell.size(); ++a) {
    if (cell[a] < slice.first[a] || cell[a] >= slice.first[a] + slice.extent[a]) return false;
  }
  return true;
}

}  // namespace

OccupancyField::OccupancyField(int dim, double bin_width, std::vector<Slice> slices)
    : dim_(dim), bin_width_(bin_width), cell_volume_(std::pow(bin_width, dim)), slices_(std::move(slices)) {
  if (!(bin_width > 0.0)) throw Error(ErrorKind::domain, "bin width must be positive");
  masses_.reserve(slices_.size());
  for (const auto& s : slices_) {
    double total = 0.0;
    for (double v : s.values) total += v;
    masses_.push_back(total * cell_volume_);
  }
}

double OccupancyField::value(int k, std::span<const long> cell) const {
  const Slice& s = slice(k);
  if (!inside(s, cell)) return 0.0;
  return s.values[flat_index(s, cell)];
}

std::vector<long> OccupancyField::cell_of(int k, std::size_t flat) const {
  const Slice& s = slice(k);
  std::vector<long> cell(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    const auto ext = static_cast<std::size_t>(s.extent[a]);
    cell[a] = s.first[a] + static_cast<long>(flat % ext);
    flat /= ext;
  }
  return cell;
}

std::vector<double> OccupancyField::center_of(std::span<const long> cell) const {
  std::vector<double> c(cell.size());
  for (std::size_t a = 0; a < cell.size(); ++a) c[a] = center_coordinate(cell[a]);
  return c;
}

OccupancyField occupancy_field(const GibbsEnsemble& ensemble, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorKind::domain, "bin width must be positive");
  const int d = ensemble.dim();
  const double r = unit_ball_radius(d);
  const int n = ensemble.grid().n_steps();
  const auto weights = ensemble.weights();
  std::vector<OccupancyField::Slice> slices(n);
  for (int k = 0; k < n; ++k) {
    OccupancyField::Slice& slice = slices[k];
    std::vector<long> lo(d, std::numeric_limits<long>::max());
    std::vector<long> hi(d, std::numeric_limits<long>::min());
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      if (weights[i] == 0.0) continue;
      const CellRange range = candidate_cells(ensemble.path(i).position(k), r, bin_width);
      for (int a = 0; a < d; ++a) {
        lo[a] = std::min(lo[a], range.lo[a]);
        hi[a] = std::max(hi[a], range.hi[a]);
      }
    }
    slice.first = lo;
    slice.extent.resize(d);
    std::size_t cells = 1;
    for (int a = 0; a < d; ++a) {
      slice.extent[a] = hi[a] - lo[a] + 1;
      cells *= static_cast<std::size_t>(slice.extent[a]);
    }
    slice.values.assign(cells, 0.0);
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      const double w = weights[i];
      if (w == 0.0) continue;
      for_each_cell_in_ball(ensemble.path(i).position(k), r, bin_width,
                            [&](std::span<const long> cell, std::span<const double>) {
                              slice.values[flat_index(slice, cell)] += w;
                            });
    }
  }
  return OccupancyField(d, bin_width, std::move(slices));
}

FavouritePath favourite_path(const OccupancyField& field) {
  FavouritePath fav;
  const int n = field.n_steps();
  fav.cells.reserve(n);
  fav.centers.reserve(n);
  fav.maxima.reserve(n);
  for (int k = 0; k < n; ++k) {
    const auto& values = field.slice(k).values;
    std::size_t best = 0;
    for (std::size_t b = 1; b < values.size(); ++b) {
      if (values[b] > values[best]) best = b;
    }
    auto cell = field.cell_of(k, best);
    fav.centers.push_back(field.center_of(cell));
    fav.cells.push_back(std::move(cell));
    fav.maxima.push_back(values.empty() ? 0.0 : values[best]);
  }
  return fav;
}

double replica_overlap(const OccupancyField& field) {
  double total = 0.0;
  for (int k = 0; k < field.n_steps(); ++k) {
    double step = 0.0;
    for (double v : field.slice(k).values) step += v * v;
    total += step * field.cell_volume();
  }
  return total / field.n_steps();
}

double replica_overlap_pairwise(const GibbsEnsemble& ensemble) {
  const int d = ensemble.dim();
  const int n = ensemble.grid().n_steps();
  const auto w = ensemble.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (w[i] == 0.0) continue;
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
      if (w[j] == 0.0) continue;
      double pair = 0.0;
      for (int k = 0; k < n; ++k) {
        const auto a = ensemble.path(i).position(k);
        const auto b = ensemble.path(j).position(k);
        double sq = 0.0;
        for (int c = 0; c < d; ++c) sq += (a[c] - b[c]) * (a[c] - b[c]);
        pair += ball_overlap_volume(d, std::sqrt(sq));
      }
      total += w[i] * w[j] * pair / n;
    }
  }
  return total;
}

double favourite_overlap(const GibbsEnsemble& ensemble, const FavouritePath& favourite) {
  const int n = ensemble.grid().n_steps();
  if (static_cast<int>(favourite.centers.size()) != n) {
    throw Error(ErrorKind::invalid_index, "favourite path and ensemble use different time grids");
  }
  const auto w = ensemble.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (w[i] == 0.0) continue;
    long hits = 0;
    for (int k = 0; k < n; ++k) hits += chi(ensemble.path(i), k, favourite.centers[k]);
    total += w[i] * static_cast<double>(hits) / n;
  }
  return total;
}

DeltaSets delta_sets(const GibbsEnsemble& ensemble, const OccupancyField& field, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw Error(ErrorKind::invalid_delta, "delta must lie in (0, 1/2]");
  const int n = field.n_steps();
  const double r = unit_ball_radius(field.dim());
  const double hd = field.cell_volume();
  const auto w = ensemble.weights();
  DeltaSets sets;
  double predominant_cells = 0.0;  // sum_k sum_b h^d 1{m >= 1 - delta}
  for (int k = 0; k < n; ++k) {
    for (double m : field.slice(k).values) {
      if (m >= delta && m <= 1.0 - delta) sets.middle_measure += hd;
      if (m >= 1.0 - delta) predominant_cells += hd;
    }
  }
  // Per path: cells in the ball split by the field value.
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (w[i] == 0.0) continue;
    double negligible = 0.0;
    double predominant = 0.0;
    for (int k = 0; k < n; ++k) {
      for_each_cell_in_ball(ensemble.path(i).position(k), r, field.bin_width(),
                            [&](std::span<const long> cell, std::span<const double>) {
                              const double m = field.value(k, cell);
                              if (m <= delta) negligible += hd;
                              if (m >= 1.0 - delta) predominant += hd;
                            });
    }
    sets.negligible_in_tube += w[i] * negligible;
    sets.predominant_out_of_tube += w[i] * (predominant_cells - predominant);
  }
  sets.middle_measure /= n;
  sets.negligible_in_tube /= n;
  sets.predominant_out_of_tube /= n;
  return sets;
}

double TwoToOneReport::min_slack() const noexcept {
  double s = std::min({slack_right, slack_complement, slack_middle, slack_negligible, slack_predominant});
  if (slack_left) s = std::min(s, *slack_left);
  return s;
}

std::optional<std::string> TwoToOneReport::violation(double tolerance) const {
  if (slack_right < -tolerance) return "R2 <= mean(max m * mass)";
  if (slack_complement < -tolerance) return "1 - R_* <= 1 - R2 + mass defect";
  if (slack_middle < -tolerance) return "middle set bound";
  if (slack_negligible < -tolerance) return "negligible-in-tube bound";
  if (slack_predominant < -tolerance) return "predominant-out-of-tube bound";
  if (slack_left && *slack_left < -tolerance) return "R_*^2 / 2 <= R2 (d = 1)";
  return std::nullopt;
}

TwoToOneReport two_to_one_report(const GibbsEnsemble& ensemble, const OccupancyField& field,
                                 const FavouritePath& favourite, double delta) {
  TwoToOneReport rep;
  rep.delta = delta;
  const int n = field.n_steps();
  const double hd = field.cell_volume();
  for (int k = 0; k < n; ++k) {
    double sum_m = 0.0;
    double sum_sq = 0.0;
    for (double m : field.slice(k).values) {
      sum_m += m;
      sum_sq += m * m;
    }
    const double mass = field.mass(k);
    rep.overlap += sum_sq * hd;
    rep.one_minus_overlap += (sum_m - sum_sq) * hd;
    rep.mean_mass += mass;
    rep.mass_weighted_max += favourite.maxima[k] * mass;
    rep.mass_defect += std::abs(1.0 - mass);
  }
  rep.overlap /= n;
  rep.one_minus_overlap /= n;
  rep.mean_mass /= n;
  rep.mass_weighted_max /= n;
  rep.mass_defect /= n;
  rep.favourite = favourite_overlap(ensemble, favourite);
  rep.sets = delta_sets(ensemble, field, delta);

  rep.slack_right = rep.mass_weighted_max - rep.overlap;
  rep.slack_complement = (1.0 - rep.overlap + rep.mass_defect) - (1.0 - rep.favourite);
  rep.slack_middle = rep.one_minus_overlap / (delta * (1.0 - delta)) - rep.sets.middle_measure;
  rep.slack_negligible = rep.one_minus_overlap / (1.0 - delta) - rep.sets.negligible_in_tube;
  rep.slack_predominant = rep.one_minus_overlap / (1.0 - delta) - rep.sets.predominant_out_of_tube;
  if (field.dim() == 1) rep.slack_left = rep.overlap - kTwoToOneConstantD1 * rep.favourite * rep.favourite;
  return rep;
}

}  // namespace polymer
