#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "polymer/ensemble.hpp"
#include "polymer/environment.hpp"
#include "polymer/error.hpp"
#include "polymer/geometry.hpp"
#include "polymer/occupancy.hpp"

using namespace polymer;

namespace {

GibbsEnsemble random_ensemble(int d, int m, int n_steps, double t, double beta, double nu, std::uint64_t seed) {
  Stream ps(seed, StreamTag::paths, 0);
  auto paths = sample_paths(TimeGrid(t, n_steps), d, m, ps);
  Stream cs(seed, StreamTag::cloud, 0);
  const PointCloud cloud = sample_poisson(covering_box(paths), nu, cs);
  return build_ensemble(std::move(paths), cloud, beta);
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g(2.0, 8);
  CHECK(g.dt() == 0.25);
  CHECK(g.time(8) == 2.0);
  CHECK(g.step_for_time(0.25) == 0);
  CHECK(g.step_for_time(0.2500001) == 1);
  CHECK(g.step_for_time(2.0) == 7);
  CHECK(g.step_for_time(1e-9) == 0);
  CHECK_THROWS_AS(TimeGrid(0.0, 4), Error);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), Error);
}

TEST_CASE("sample_paths: origin, variance, count") {
  const TimeGrid grid(2.0, 16);
  Stream s(3, StreamTag::paths, 0);
  const int m = 10000;
  const auto paths = sample_paths(grid, 2, m, s);
  REQUIRE(paths.size() == static_cast<std::size_t>(m));
  double s2 = 0;
  for (const auto& p : paths) {
    CHECK(p.position(0)[0] == 0.0);
    CHECK(p.position(0)[1] == 0.0);
    s2 += p.position(16)[0] * p.position(16)[0];
  }
  // Var of the sample second moment of N(0, t): 2 t^2 / m
  CHECK(std::abs(s2 / m - 2.0) <= 4.0 * std::sqrt(2.0 * 4.0 / m));

  Stream z(1);
  try {
    sample_paths(grid, 1, 0, z);
    FAIL("expected invalid_count");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_count);
  }
}

TEST_CASE("halving dt leaves the law of B_t unchanged (two-sample KS at 1%)") {
  const int m = 4000;
  Stream a(8, StreamTag::paths, 0), b(8, StreamTag::paths, 1);
  const auto coarse = sample_paths(TimeGrid(1.5, 6), 1, m, a);
  const auto fine = sample_paths(TimeGrid(1.5, 12), 1, m, b);
  std::vector<double> x, y;
  for (const auto& p : coarse) x.push_back(p.position(6)[0]);
  for (const auto& p : fine) y.push_back(p.position(12)[0]);
  const double critical = 1.628 * std::sqrt(2.0 / m);
  CHECK(ks_statistic(x, y) < critical);
}

TEST_CASE("ensemble: trivial weights") {
  const TimeGrid grid(1.0, 8);
  Stream ps(5);
  auto paths = sample_paths(grid, 1, 50, ps);
  const SpaceTimeBox box = covering_box(paths);
  Stream cs(6);
  const PointCloud cloud = sample_poisson(box, 3.0, cs);

  const GibbsEnsemble flat = build_ensemble(paths, cloud, 0.0);
  for (double w : flat.weights()) CHECK(w == doctest::Approx(1.0 / 50).epsilon(1e-14));
  CHECK(flat.z_hat() == 1.0);
  CHECK(flat.effective_sample_size() == doctest::Approx(50.0));

  const GibbsEnsemble none = build_ensemble(paths, PointCloud(box, 3.0), 1.7);
  CHECK(none.z_hat() == 1.0);
  for (long h : none.hamiltonians()) CHECK(h == 0);

  const GibbsEnsemble hot = build_ensemble(paths, cloud, 2.5);
  const double total = std::accumulate(hot.weights().begin(), hot.weights().end(), 0.0);
  CHECK(std::abs(total - 1.0) <= 1e-12);
  double direct = 0;
  for (long h : hot.hamiltonians()) direct += std::exp(2.5 * h) / 50.0;
  CHECK(hot.log_z() == doctest::Approx(std::log(direct)).epsilon(1e-13));

  std::vector<PolymerPath> single{paths.front()};
  const GibbsEnsemble one = build_ensemble(single, cloud, -0.7);
  CHECK(one.weights()[0] == 1.0);
  CHECK(one.z_hat() == doctest::Approx(std::exp(-0.7 * one.hamiltonians()[0])));
}

TEST_CASE("ensemble: window coverage is enforced") {
  const TimeGrid grid(1.0, 8);
  Stream ps(5);
  auto paths = sample_paths(grid, 1, 20, ps);
  const PointCloud tiny(SpaceTimeBox{1.0, {-0.1}, {0.1}}, 1.0);
  try {
    build_ensemble(paths, tiny, 1.0);
    FAIL("expected window_coverage");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::window_coverage);
  }
  const PointCloud short_horizon(SpaceTimeBox{0.5, {-10.0}, {10.0}}, 1.0);
  CHECK_THROWS_AS(build_ensemble(paths, short_horizon, 1.0), Error);
}

TEST_CASE("log_mean_exp survives large beta H") {
  const std::vector<long> h{1000, 999, 0};
  const double v = log_mean_exp(h, 1.0);
  CHECK(v == doctest::Approx(1000.0 + std::log((1.0 + std::exp(-1.0)) / 3.0)).epsilon(1e-14));
}

TEST_CASE("occupancy field: single path in d = 1") {
  const TimeGrid grid(1.0, 4);
  const std::vector<PolymerPath> paths{PolymerPath(grid, 1, {0.0, 0.31, -0.2, 0.77, 1.03})};
  const GibbsEnsemble e(paths, {3}, 0.8);
  const OccupancyField f = occupancy_field(e, 0.125);
  for (int k = 0; k < 4; ++k) {
    const double x = paths[0].position(k)[0];
    const auto& slice = f.slice(k);
    int ones = 0;
    for (std::size_t i = 0; i < slice.values.size(); ++i) {
      const long cell = f.cell_of(k, i)[0];
      const double c = f.center_coordinate(cell);
      const double expected = std::abs(c - x) <= 0.5 ? 1.0 : 0.0;
      CHECK(slice.values[i] == expected);
      ones += slice.values[i] == 1.0;
    }
    CHECK(ones == 8);
    CHECK(f.mass(k) == 1.0);
  }
  const std::vector<long> far{100};
  CHECK(f.value(0, far) == 0.0);

  // Two identical paths give the same field.
  const std::vector<PolymerPath> twin{paths[0], paths[0]};
  const OccupancyField g = occupancy_field(GibbsEnsemble(twin, {1, 5}, 0.3), 0.125);
  for (int k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < f.slice(k).values.size(); ++i) {
      const auto cell = f.cell_of(k, i);
      CHECK(g.value(k, cell) == doctest::Approx(f.value(k, cell)).epsilon(1e-15));
    }
  }
}

TEST_CASE("occupancy field: heat-kernel mass at beta = 0") {
  const GibbsEnsemble e = random_ensemble(2, 2000, 8, 1.0, 0.0, 1.0, 12);
  const OccupancyField f = occupancy_field(e, unit_ball_radius(2) / 4.0);
  for (int k = 0; k < f.n_steps(); ++k) {
    CHECK(std::abs(f.mass(k) - 1.0) < 0.05);
    for (double m : f.slice(k).values) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("replica overlap: self overlap, separation, grid vs pairwise") {
  const TimeGrid grid(1.0, 4);
  const std::vector<PolymerPath> one{PolymerPath(grid, 2)};
  const GibbsEnsemble single(one, {0}, 0.0);
  CHECK(replica_overlap_pairwise(single) == doctest::Approx(1.0));

  const std::vector<PolymerPath> apart{PolymerPath(grid, 1, {0, 0, 0, 0, 0}), PolymerPath(grid, 1, {0, 5, 5, 5, 5})};
  const GibbsEnsemble sep(apart, {0, 0}, 0.0);
  // step 0 is shared (both at the origin); the other three are disjoint
  CHECK(replica_overlap_pairwise(sep) == doctest::Approx(0.25 + 0.75 * 0.5));
  CHECK(replica_overlap(occupancy_field(sep, 0.125)) == doctest::Approx(replica_overlap_pairwise(sep)));

  const std::vector<PolymerPath> far_apart{PolymerPath(grid, 1, {5, 5, 5, 5, 5}), PolymerPath(grid, 1, {-5, -5, -5, -5, -5})};
  const GibbsEnsemble zero(far_apart, {0, 0}, 0.0);
  CHECK(replica_overlap_pairwise(zero) == doctest::Approx(0.5));

  for (int d : {1, 2}) {
    const GibbsEnsemble e = random_ensemble(d, 60, 16, 1.0, 1.0, 2.0, 40 + d);
    const double exact = replica_overlap_pairwise(e);
    const double r = unit_ball_radius(d);
    double previous = 1.0;
    for (double h : {r / 2.0, r / 4.0, r / 8.0}) {
      const double err = std::abs(replica_overlap(occupancy_field(e, h)) - exact);
      CHECK(err <= 2.0 * d * h);
      previous = std::min(previous, err);
    }
    CHECK(previous < 0.03);
  }
}

TEST_CASE("favourite path tie-break") {
  std::vector<OccupancyField::Slice> slices(1);
  slices[0].first = {-1};
  slices[0].extent = {3};
  slices[0].values = {0.5, 0.2, 0.5};
  const FavouritePath fav = favourite_path(OccupancyField(1, 0.25, slices));
  CHECK(fav.cells[0][0] == -1);
  CHECK(fav.centers[0][0] == -0.125);
  CHECK(fav.maxima[0] == 0.5);

  std::vector<OccupancyField::Slice> s2(1);
  s2[0].first = {0, 0};
  s2[0].extent = {2, 2};
  s2[0].values = {0.1, 0.4, 0.4, 0.1};  // (0,1) and (1,0) tie
  const FavouritePath f2 = favourite_path(OccupancyField(2, 1.0, s2));
  CHECK(f2.cells[0] == std::vector<long>{0, 1});
}

TEST_CASE("favourite path for one path and for a mirror pair") {
  const TimeGrid grid(1.0, 4);
  const std::vector<PolymerPath> one{PolymerPath(grid, 1, {0.0, 0.31, -0.2, 0.77, 1.03})};
  const GibbsEnsemble e(one, {0}, 0.0);
  const FavouritePath fav = favourite_path(occupancy_field(e, 0.125));
  for (int k = 0; k < 4; ++k) {
    const double x = one[0].position(k)[0];
    CHECK(std::abs(fav.centers[k][0] - x) <= 0.5);
    CHECK(fav.centers[k][0] - 0.125 < x - 0.5);  // lexicographic minimum of the maximizers
    CHECK(fav.maxima[k] == 1.0);
  }
  CHECK(favourite_overlap(e, fav) == 1.0);

  FavouritePath nowhere = fav;
  for (auto& c : nowhere.centers) c[0] = 50.0;
  CHECK(favourite_overlap(e, nowhere) == 0.0);

  const std::vector<PolymerPath> mirror{PolymerPath(grid, 1, {0.0, 0.4, 0.9, 1.3, 0.2}),
                                        PolymerPath(grid, 1, {0.0, -0.4, -0.9, -1.3, -0.2})};
  const GibbsEnsemble m(mirror, {2, 2}, 1.0);
  const FavouritePath a = favourite_path(occupancy_field(m, 0.125));
  const FavouritePath b = favourite_path(occupancy_field(m, 0.125));
  CHECK(a.cells == b.cells);
  // At k = 2 the balls [0.4, 1.4] and [-1.4, -0.4] are disjoint: tie at m = 1/2, left one wins.
  CHECK(a.maxima[2] == 0.5);
  CHECK(a.centers[2][0] < 0.0);
}

TEST_CASE("delta sets") {
  const TimeGrid grid(1.0, 4);
  const std::vector<PolymerPath> one{PolymerPath(grid, 1, {0.0, 0.31, -0.2, 0.77, 1.03})};
  const GibbsEnsemble e(one, {0}, 0.0);
  const OccupancyField f = occupancy_field(e, 0.125);
  const DeltaSets s = delta_sets(e, f, 0.25);
  CHECK(s.middle_measure == 0.0);
  CHECK(s.negligible_in_tube == 0.0);
  CHECK(s.predominant_out_of_tube == 0.0);
  CHECK_THROWS_AS(delta_sets(e, f, 0.0), Error);
  CHECK_THROWS_AS(delta_sets(e, f, 0.6), Error);
  CHECK_NOTHROW(delta_sets(e, f, 0.5));
}

TEST_CASE("grid two-to-one inequalities on random ensembles") {
  int checked = 0;
  for (int d : {1, 2}) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const double beta = -2.0 + 4.0 * static_cast<double>(seed) / 11.0;
      const GibbsEnsemble e = random_ensemble(d, 40, 12, 1.5, beta, 0.5 + 0.3 * seed, 100 + seed);
      const OccupancyField f = occupancy_field(e, unit_ball_radius(d) / 4.0);
      const FavouritePath fav = favourite_path(f);
      for (double delta : {0.1, 0.25, 0.5}) {
        const TwoToOneReport r = two_to_one_report(e, f, fav, delta);
        CHECK_MESSAGE(!r.violation(1e-9).has_value(), "d=", d, " seed=", seed, " delta=", delta);
        CHECK(r.slack_left.has_value() == (d == 1));
        ++checked;
      }
      // per-step Cauchy-Schwarz
      for (int k = 0; k < f.n_steps(); ++k) {
        double sq = 0, mx = 0, mass = 0;
        for (double m : f.slice(k).values) {
          sq += m * m;
          mx = std::max(mx, m);
          mass += m;
        }
        CHECK(sq <= mx * mass + 1e-12);
      }
      if (d == 1) {
        for (int k = 0; k < f.n_steps(); ++k) CHECK(f.mass(k) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
  CHECK(checked == 72);
}
