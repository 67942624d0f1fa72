#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polymer/occupancy.hpp"

namespace polymer {

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  int n_replicates = 0;
};

// Mean and standard error (sample sd / sqrt(n)) of per-replicate values.
EstimateWithError summarize(std::span<const double> values);
// Mean of a - b with the SE of the paired differences.
EstimateWithError paired_difference(std::span<const double> a, std::span<const double> b);
// sqrt(se_a^2 + se_b^2)
double combined_error(const EstimateWithError& a, const EstimateWithError& b);

struct ExperimentConfig {
  int d = 1;
  double beta = 0.0;
  double nu = 1.0;
  double t = 1.0;
  int n_steps = 0;         // 0: 64 per unit time
  int paths = 2000;        // M
  int environments = 200;  // K
  double bin_width = 0.0;  // 0: r_d / 4
  double delta = 0.25;
  std::uint64_t seed = 0;
  double epsilon = 0.05;   // finite-difference step in beta and nu
  std::optional<double> nu_prime;  // lower intensity for the coupling; default nu / 2
  unsigned threads = 0;

  // Throws Error{config} naming the offending field.
  void validate() const;
  int steps() const;
  double effective_bin_width() const;
  double effective_nu_prime() const;
  TimeGrid grid() const { return TimeGrid(t, steps()); }
};

enum class Mode { quenched, annealed, derivatives, localization, monotonicity, full };
const char* to_string(Mode mode);
// Throws Error{config} on an unknown name.
Mode parse_mode(const std::string& name);

// What a replicate has to compute; the estimator entry points fill this in.
struct ReplicateNeeds {
  bool beta_shift = false;  // ln Z_hat at beta +/- epsilon on the same Hamiltonians
  bool field = false;       // occupancy field, palm and nu integrands, overlaps
  bool nu_shift = false;    // coupled clouds at nu +/- epsilon
  bool coupling = false;    // coupled clouds at nu' and nu
  bool check_invariants = true;
};

/// Everything measured on one environment (one cloud, one path batch).
/// Free energies are per unit time.
struct ReplicateRecord {
  std::uint64_t index = 0;
  double log_z = 0.0;            // (1/t) ln Z_hat
  double log_z_jackknife = 0.0;  // leave-one-path-out corrected (1/t) ln Z_hat
  double ess = 0.0;
  double mean_h = 0.0;           // (1/t) sum_i w_i H_i
  double log_z_beta_plus = 0.0;
  double log_z_beta_minus = 0.0;
  double palm = 0.0;             // nu e^beta (1/n) sum_k sum_b h^d m / (1 + lambda m)
  double dnu = 0.0;              // (1/n) sum_k sum_b h^d ln(1 + lambda m)
  double log_z_nu_plus = 0.0;
  double log_z_nu_minus = 0.0;
  double log_z_coupled_low = 0.0;   // intensity nu'
  double log_z_coupled_high = 0.0;  // intensity nu, same low cloud plus an independent layer
  TwoToOneReport report;
};

// Runs one replicate. Paths come from stream (seed, paths, index); the main
// cloud from (seed, cloud, index). Throws InvariantViolation if a grid
// two-to-one inequality fails by more than 1e-9 and needs.check_invariants.
ReplicateRecord run_replicate(const ExperimentConfig& cfg, std::uint64_t index, const ReplicateNeeds& needs);
// The main cloud of a replicate, as run_replicate samples it.
PointCloud replicate_cloud(const ExperimentConfig& cfg, std::uint64_t index);
std::vector<ReplicateRecord> run_replicates(const ExperimentConfig& cfg, const ReplicateNeeds& needs);

// Leave-one-path-out jackknife of ln((1/M) sum exp(beta H_i)).
struct JackknifeLogMean {
  double raw = 0.0;
  double corrected = 0.0;
  double bias = 0.0;  // raw - corrected
};
JackknifeLogMean jackknife_log_mean_exp(std::span<const long> hamiltonians, double beta);

struct QuenchedEstimate {
  EstimateWithError corrected;  // headline value
  EstimateWithError raw;
  double bias = 0.0;            // mean jackknife bias estimate
  double ess_min = 0.0;
  bool ess_warning = false;     // some environment had ESS < 0.01 M
};
QuenchedEstimate quenched_free_energy(const ExperimentConfig& cfg);

// Zero path, K environments: (1/t) ln of the environment mean of exp(beta H),
// SE by the delta method. Streams (seed, annealed, index).
EstimateWithError annealed_check(const ExperimentConfig& cfg);

enum class DerivativeMethod { direct, palm, finite_difference };
EstimateWithError dp_dbeta(const ExperimentConfig& cfg, DerivativeMethod method);

EstimateWithError dp_dnu(const ExperimentConfig& cfg);
// Central difference in nu: the nu - eps cloud plus one or two independent
// eps layers, all on the same paths.
EstimateWithError dp_dnu_finite_difference(const ExperimentConfig& cfg);

struct MonotonicityResult {
  EstimateWithError difference;   // p(nu) - p(nu')
  EstimateWithError lower_slack;  // difference - beta (nu - nu')
  EstimateWithError upper_slack;  // lambda (nu - nu') - difference
};
MonotonicityResult nu_monotonicity(const ExperimentConfig& cfg, double nu_prime);

struct LocalizationCell {
  double beta = 0.0;
  double nu = 0.0;
  double t = 0.0;
  EstimateWithError overlap;
  EstimateWithError favourite;
  EstimateWithError middle;
  EstimateWithError negligible;
  EstimateWithError predominant;
  EstimateWithError mean_mass;
  double ess_min = 0.0;
};
LocalizationCell localization_cell(const ExperimentConfig& cfg);
std::vector<LocalizationCell> localization_scan(std::span<const ExperimentConfig> cfgs);

/// One output row per observable.
struct ObservableRow {
  std::string observable;
  EstimateWithError estimate;
  int paths = 0;  // M used (1 for the annealed check)
  double ess_min = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  Mode mode = Mode::full;
  std::vector<ObservableRow> rows;
  std::optional<DeltaSets> delta_sets;  // environment means, when the field was built
  std::vector<std::string> warnings;
};

// Runs every estimator the mode asks for from one pass over the environments.
ExperimentResult run_experiment(const ExperimentConfig& cfg, Mode mode);

}  // namespace polymer
