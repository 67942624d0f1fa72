#include "polymer/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "polymer/analytics.hpp"
#include "polymer/ensemble.hpp"
#include "polymer/environment.hpp"
#include "polymer/error.hpp"
#include "polymer/geometry.hpp"
#include "polymer/parallel.hpp"
#include "polymer/rng.hpp"

namespace polymer {
namespace {

constexpr double kInvariantTolerance = 1e-9;

void config_check(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw Error(ErrorKind::config, key + ": " + message);
}

double min_ess(const std::vector<ReplicateRecord>& records) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records) m = std::min(m, r.ess);
  return records.empty() ? 0.0 : m;
}

template <class F>
EstimateWithError summarize_by(const std::vector<ReplicateRecord>& records, F f) {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(f(r));
  return summarize(v);
}

// sum over stored cells of h^d f(m) / n, for f(0) = 0.
template <class F>
double field_integral(const OccupancyField& field, F f) {
  double total = 0.0;
  for (int k = 0; k < field.n_steps(); ++k) {
    double step = 0.0;
    for (double m : field.slice(k).values) {
      if (m != 0.0) step += f(m);
    }
    total += step;
  }
  return total * field.cell_volume() / field.n_steps();
}

}  // namespace

EstimateWithError summarize(std::span<const double> values) {
  EstimateWithError e;
  e.n_replicates = static_cast<int>(values.size());
  if (values.empty()) return e;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  e.value = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

EstimateWithError paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::invalid_count, "paired samples differ in size");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return summarize(diff);
}

double combined_error(const EstimateWithError& a, const EstimateWithError& b) {
  return std::hypot(a.std_error, b.std_error);
}

void ExperimentConfig::validate() const {
  config_check(d >= 1, "d", "must be >= 1");
  config_check(std::isfinite(beta), "beta", "must be finite");
  config_check(std::isfinite(nu) && nu >= 0.0, "nu", "must be >= 0");
  config_check(std::isfinite(t) && t > 0.0, "t", "must be > 0");
  config_check(n_steps >= 0, "n_steps", "must be >= 0 (0 selects 64 per unit time)");
  config_check(steps() >= 1, "n_steps", "resolves to zero steps");
  config_check(paths >= 1, "paths_per_env", "must be >= 1");
  config_check(environments >= 1, "n_envs", "must be >= 1");
  config_check(std::isfinite(bin_width) && bin_width >= 0.0, "bin_width", "must be >= 0 (0 selects r_d/4)");
  config_check(delta > 0.0 && delta <= 0.5, "delta", "must lie in (0, 1/2]");
  config_check(std::isfinite(epsilon) && epsilon > 0.0, "epsilon", "must be > 0");
  if (nu_prime) {
    config_check(*nu_prime > 0.0 && *nu_prime <= nu, "nu_prime", "must satisfy 0 < nu_prime <= nu");
  }
}

int ExperimentConfig::steps() const {
  if (n_steps > 0) return n_steps;
  return static_cast<int>(std::lround(64.0 * t));
}

double ExperimentConfig::effective_bin_width() const {
  return bin_width > 0.0 ? bin_width : unit_ball_radius(d) / 4.0;
}

double ExperimentConfig::effective_nu_prime() const { return nu_prime ? *nu_prime : nu / 2.0; }

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::quenched: return "quenched";
    case Mode::annealed: return "annealed";
    case Mode::derivatives: return "derivatives";
    case Mode::localization: return "localization";
    case Mode::monotonicity: return "monotonicity";
    case Mode::full: return "full";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::quenched, Mode::annealed, Mode::derivatives, Mode::localization, Mode::monotonicity,
                 Mode::full}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::config, "mode: unknown value '" + name + "'");
}

JackknifeLogMean jackknife_log_mean_exp(std::span<const long> hamiltonians, double beta) {
  const std::size_t m = hamiltonians.size();
  if (m == 0) throw Error(ErrorKind::invalid_count, "jackknife of an empty set");
  JackknifeLogMean out;
  if (beta == 0.0) return out;
  out.raw = log_mean_exp(hamiltonians, beta);
  out.corrected = out.raw;
  if (m == 1) return out;

  // Paths sharing H share their leave-one-out value.
  std::map<long, long> groups;
  for (long h : hamiltonians) ++groups[h];

  const auto loo = [&](long removed) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& [h, c] : groups) {
      if (c - (h == removed ? 1 : 0) > 0) top = std::max(top, beta * static_cast<double>(h));
    }
    double s = 0.0;
    for (const auto& [h, c] : groups) {
      const long count = c - (h == removed ? 1 : 0);
      if (count > 0) s += static_cast<double>(count) * std::exp(beta * static_cast<double>(h) - top);
    }
    return top + std::log(s / static_cast<double>(m - 1));
  };

  double mean_loo = 0.0;
  for (const auto& [h, c] : groups) mean_loo += static_cast<double>(c) * loo(h);
  mean_loo /= static_cast<double>(m);
  const double mm = static_cast<double>(m);
  out.corrected = mm * out.raw - (mm - 1.0) * mean_loo;
  out.bias = out.raw - out.corrected;
  return out;
}

ReplicateRecord run_replicate(const ExperimentConfig& cfg, std::uint64_t index, const ReplicateNeeds& needs) {
  ReplicateRecord rec;
  rec.index = index;
  const TimeGrid grid = cfg.grid();
  const double t = cfg.t;

  Stream path_stream(cfg.seed, StreamTag::paths, index);
  std::vector<PolymerPath> paths = sample_paths(grid, cfg.d, cfg.paths, path_stream);
  const SpaceTimeBox box = covering_box(paths);

  Stream cloud_stream(cfg.seed, StreamTag::cloud, index);
  const PointCloud cloud = sample_poisson(box, cfg.nu, cloud_stream);
  std::vector<long> h = count_in_tubes(cloud, paths);

  const JackknifeLogMean jk = jackknife_log_mean_exp(h, cfg.beta);
  rec.log_z = jk.raw / t;
  rec.log_z_jackknife = jk.corrected / t;

  if (needs.beta_shift) {
    rec.log_z_beta_plus = log_mean_exp(h, cfg.beta + cfg.epsilon) / t;
    rec.log_z_beta_minus = log_mean_exp(h, cfg.beta - cfg.epsilon) / t;
  }

  if (needs.nu_shift) {
    // nu - eps base, then two independent eps layers from the same stream.
    // Falls back to a one-sided step when nu < eps.
    const double eps = cfg.epsilon;
    Stream s(cfg.seed, StreamTag::cloud_extra, index);
    const PointCloud base = sample_poisson(box, std::max(cfg.nu - eps, 0.0), s);
    const PointCloud layer1 = sample_poisson(box, eps, s);
    const PointCloud layer2 = sample_poisson(box, eps, s);
    const PointCloud high = superpose(superpose(base, layer1), layer2);
    rec.log_z_nu_minus = log_mean_exp(count_in_tubes(base, paths), cfg.beta) / t;
    rec.log_z_nu_plus = log_mean_exp(count_in_tubes(high, paths), cfg.beta) / t;
  }

  if (needs.coupling) {
    const double nu_low = cfg.effective_nu_prime();
    Stream s(cfg.seed, StreamTag::cloud_extra_2, index);
    const PointCloud low = sample_poisson(box, nu_low, s);
    const PointCloud layer = sample_poisson(box, cfg.nu - nu_low, s);
    const PointCloud high = superpose(low, layer);
    rec.log_z_coupled_low = log_mean_exp(count_in_tubes(low, paths), cfg.beta) / t;
    rec.log_z_coupled_high = log_mean_exp(count_in_tubes(high, paths), cfg.beta) / t;
  }

  const GibbsEnsemble ensemble(std::move(paths), std::move(h), cfg.beta);
  rec.ess = ensemble.effective_sample_size();
  rec.mean_h = ensemble.mean_hamiltonian() / t;

  if (needs.field) {
    const OccupancyField field = occupancy_field(ensemble, cfg.effective_bin_width());
    const double lambda = analytics::lambda_beta(cfg.beta);
    const double eb = std::exp(cfg.beta);
    rec.palm = cfg.nu * eb * field_integral(field, [&](double m) { return m / (1.0 + lambda * m); });
    rec.dnu = field_integral(field, [&](double m) { return std::log1p(lambda * m); });
    const FavouritePath fav = favourite_path(field);
    rec.report = two_to_one_report(ensemble, field, fav, cfg.delta);
    if (needs.check_invariants) {
      if (auto name = rec.report.violation(kInvariantTolerance)) {
        throw InvariantViolation("two-to-one inequality '" + *name + "' violated", cfg.seed, index);
      }
    }
  }
  return rec;
}

PointCloud replicate_cloud(const ExperimentConfig& cfg, std::uint64_t index) {
  cfg.validate();
  Stream path_stream(cfg.seed, StreamTag::paths, index);
  const std::vector<PolymerPath> paths = sample_paths(cfg.grid(), cfg.d, cfg.paths, path_stream);
  Stream cloud_stream(cfg.seed, StreamTag::cloud, index);
  return sample_poisson(covering_box(paths), cfg.nu, cloud_stream);
}

std::vector<ReplicateRecord> run_replicates(const ExperimentConfig& cfg, const ReplicateNeeds& needs) {
  cfg.validate();
  std::vector<ReplicateRecord> records(static_cast<std::size_t>(cfg.environments));
  parallel_for(records.size(), cfg.threads,
               [&](std::size_t i) { records[i] = run_replicate(cfg, static_cast<std::uint64_t>(i), needs); });
  return records;
}

namespace {

QuenchedEstimate quenched_from(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records) {
  QuenchedEstimate q;
  q.corrected = summarize_by(records, [](const ReplicateRecord& r) { return r.log_z_jackknife; });
  q.raw = summarize_by(records, [](const ReplicateRecord& r) { return r.log_z; });
  q.bias = q.raw.value - q.corrected.value;
  q.ess_min = min_ess(records);
  q.ess_warning = q.ess_min < 0.01 * cfg.paths;
  return q;
}

EstimateWithError dp_dbeta_from(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records,
                                DerivativeMethod method) {
  switch (method) {
    case DerivativeMethod::direct:
      return summarize_by(records, [](const ReplicateRecord& r) { return r.mean_h; });
    case DerivativeMethod::palm:
      return summarize_by(records, [](const ReplicateRecord& r) { return r.palm; });
    case DerivativeMethod::finite_difference: {
      const double eps = cfg.epsilon;
      return summarize_by(records, [eps](const ReplicateRecord& r) {
        return (r.log_z_beta_plus - r.log_z_beta_minus) / (2.0 * eps);
      });
    }
  }
  return {};
}

EstimateWithError dp_dnu_fd_from(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records) {
  const double eps = cfg.epsilon;
  return summarize_by(records, [eps](const ReplicateRecord& r) {
    return (r.log_z_nu_plus - r.log_z_nu_minus) / (2.0 * eps);
  });
}

MonotonicityResult monotonicity_from(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records) {
  const double gap = cfg.nu - cfg.effective_nu_prime();
  const double lambda = analytics::lambda_beta(cfg.beta);
  MonotonicityResult out;
  out.difference =
      summarize_by(records, [](const ReplicateRecord& r) { return r.log_z_coupled_high - r.log_z_coupled_low; });
  out.lower_slack = summarize_by(records, [&](const ReplicateRecord& r) {
    return (r.log_z_coupled_high - r.log_z_coupled_low) - cfg.beta * gap;
  });
  out.upper_slack = summarize_by(records, [&](const ReplicateRecord& r) {
    return lambda * gap - (r.log_z_coupled_high - r.log_z_coupled_low);
  });
  return out;
}

LocalizationCell localization_from(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records) {
  LocalizationCell c;
  c.beta = cfg.beta;
  c.nu = cfg.nu;
  c.t = cfg.t;
  c.overlap = summarize_by(records, [](const ReplicateRecord& r) { return r.report.overlap; });
  c.favourite = summarize_by(records, [](const ReplicateRecord& r) { return r.report.favourite; });
  c.middle = summarize_by(records, [](const ReplicateRecord& r) { return r.report.sets.middle_measure; });
  c.negligible = summarize_by(records, [](const ReplicateRecord& r) { return r.report.sets.negligible_in_tube; });
  c.predominant =
      summarize_by(records, [](const ReplicateRecord& r) { return r.report.sets.predominant_out_of_tube; });
  c.mean_mass = summarize_by(records, [](const ReplicateRecord& r) { return r.report.mean_mass; });
  c.ess_min = min_ess(records);
  return c;
}

}  // namespace

QuenchedEstimate quenched_free_energy(const ExperimentConfig& cfg) {
  return quenched_from(cfg, run_replicates(cfg, ReplicateNeeds{}));
}

EstimateWithError annealed_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const TimeGrid grid = cfg.grid();
  const std::vector<PolymerPath> zero{PolymerPath(grid, cfg.d)};
  const SpaceTimeBox box = covering_box(zero);
  std::vector<long> h(static_cast<std::size_t>(cfg.environments));
  parallel_for(h.size(), cfg.threads, [&](std::size_t k) {
    Stream s(cfg.seed, StreamTag::annealed, k);
    h[k] = count_in_tube(sample_poisson(box, cfg.nu, s), zero.front());
  });

  EstimateWithError e;
  e.n_replicates = cfg.environments;
  if (cfg.beta == 0.0) return e;
  double top = -std::numeric_limits<double>::infinity();
  for (long v : h) top = std::max(top, cfg.beta * static_cast<double>(v));
  std::vector<double> x(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) x[k] = std::exp(cfg.beta * static_cast<double>(h[k]) - top);
  const EstimateWithError mean_x = summarize(x);
  e.value = (top + std::log(mean_x.value)) / cfg.t;
  // delta method: se(ln X_bar) = se(X_bar) / X_bar
  e.std_error = mean_x.std_error / mean_x.value / cfg.t;
  return e;
}

EstimateWithError dp_dbeta(const ExperimentConfig& cfg, DerivativeMethod method) {
  ReplicateNeeds needs;
  needs.beta_shift = method == DerivativeMethod::finite_difference;
  needs.field = method == DerivativeMethod::palm;
  return dp_dbeta_from(cfg, run_replicates(cfg, needs), method);
}

EstimateWithError dp_dnu(const ExperimentConfig& cfg) {
  ReplicateNeeds needs;
  needs.field = true;
  return summarize_by(run_replicates(cfg, needs), [](const ReplicateRecord& r) { return r.dnu; });
}

EstimateWithError dp_dnu_finite_difference(const ExperimentConfig& cfg) {
  ReplicateNeeds needs;
  needs.nu_shift = true;
  return dp_dnu_fd_from(cfg, run_replicates(cfg, needs));
}

MonotonicityResult nu_monotonicity(const ExperimentConfig& cfg, double nu_prime) {
  if (!(nu_prime > 0.0 && nu_prime <= cfg.nu)) {
    throw Error(ErrorKind::domain, "nu_monotonicity needs 0 < nu_prime <= nu");
  }
  ExperimentConfig c = cfg;
  c.nu_prime = nu_prime;
  ReplicateNeeds needs;
  needs.coupling = true;
  return monotonicity_from(c, run_replicates(c, needs));
}

LocalizationCell localization_cell(const ExperimentConfig& cfg) {
  ReplicateNeeds needs;
  needs.field = true;
  return localization_from(cfg, run_replicates(cfg, needs));
}

std::vector<LocalizationCell> localization_scan(std::span<const ExperimentConfig> cfgs) {
  std::vector<LocalizationCell> out;
  out.reserve(cfgs.size());
  for (const auto& c : cfgs) out.push_back(localization_cell(c));
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, Mode mode) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  result.mode = mode;
  const int m = cfg.paths;

  const auto add = [&](std::string name, EstimateWithError e, int paths, double ess) {
    result.rows.push_back(ObservableRow{std::move(name), e, paths, ess});
  };

  const bool all = mode == Mode::full;
  if (mode == Mode::annealed || all) {
    add("p_annealed", annealed_check(cfg), 1, 1.0);
  }
  if (mode == Mode::annealed) return result;

  ReplicateNeeds needs;
  needs.beta_shift = mode == Mode::derivatives || all;
  needs.nu_shift = mode == Mode::derivatives || all;
  needs.field = mode == Mode::derivatives || mode == Mode::localization || all;
  needs.coupling = mode == Mode::monotonicity || all;
  const std::vector<ReplicateRecord> records = run_replicates(cfg, needs);
  const QuenchedEstimate q = quenched_from(cfg, records);
  const double ess = q.ess_min;

  add("p_quenched", q.corrected, m, ess);
  add("p_quenched_raw", q.raw, m, ess);
  add("p_quenched_bias", summarize_by(records, [](const ReplicateRecord& r) { return r.log_z - r.log_z_jackknife; }),
      m, ess);

  if (needs.beta_shift) {
    add("dp_dbeta_direct", dp_dbeta_from(cfg, records, DerivativeMethod::direct), m, ess);
    add("dp_dbeta_palm", dp_dbeta_from(cfg, records, DerivativeMethod::palm), m, ess);
    add("dp_dbeta_fd", dp_dbeta_from(cfg, records, DerivativeMethod::finite_difference), m, ess);
    add("dp_dnu", summarize_by(records, [](const ReplicateRecord& r) { return r.dnu; }), m, ess);
    add("dp_dnu_fd", dp_dnu_fd_from(cfg, records), m, ess);
  }
  if (needs.field) {
    const LocalizationCell c = localization_from(cfg, records);
    add("overlap", c.overlap, m, ess);
    add("favourite_overlap", c.favourite, m, ess);
    add("mean_mass", c.mean_mass, m, ess);
    add("middle_measure", c.middle, m, ess);
    add("negligible_in_tube", c.negligible, m, ess);
    add("predominant_out_of_tube", c.predominant, m, ess);
    result.delta_sets = DeltaSets{c.middle.value, c.negligible.value, c.predominant.value};
  }
  if (needs.coupling) {
    const MonotonicityResult mono = monotonicity_from(cfg, records);
    add("nu_difference", mono.difference, m, ess);
    add("monotonicity_lower_slack", mono.lower_slack, m, ess);
    add("monotonicity_upper_slack", mono.upper_slack, m, ess);
    if (!cfg.nu_prime) result.warnings.push_back("nu_prime not set; using nu / 2");
  }
  if (q.ess_warning) {
    result.warnings.push_back("effective sample size fell to " + std::to_string(q.ess_min) + " (< 1% of M = " +
                              std::to_string(m) + ")");
  }
  return result;
}

}  // namespace polymer
