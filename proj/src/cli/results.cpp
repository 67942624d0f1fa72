#include "polymer/cli/results.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "polymer/format.hpp"

namespace polymer::cli {
namespace {

nlohmann::json number(double v) {
  // NaN and inf have no JSON literal.
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << kCsvHeader << '\n';
  for (const auto& r : results) {
    const ExperimentConfig& c = r.config;
    for (const auto& row : r.rows) {
      out << to_string(r.mode) << ',' << c.d << ',' << format_double(c.beta) << ',' << format_double(c.nu) << ','
          << format_double(c.t) << ',' << c.steps() << ',' << row.paths << ',' << c.environments << ','
          << format_double(c.effective_bin_width()) << ',' << format_double(row.estimate.value) << ','
          << format_double(row.estimate.std_error) << ',' << format_double(row.ess_min) << ',' << row.observable
          << '\n';
    }
  }
}

void write_results_json(std::ostream& out, std::span<const ExperimentResult> results, const std::string& config_hash) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    const ExperimentConfig& c = r.config;
    for (const auto& row : r.rows) {
      nlohmann::json j;
      j["mode"] = to_string(r.mode);
      j["d"] = c.d;
      j["beta"] = number(c.beta);
      j["nu"] = number(c.nu);
      j["t"] = number(c.t);
      j["n_steps"] = c.steps();
      j["M"] = row.paths;
      j["K"] = c.environments;
      j["h"] = number(c.effective_bin_width());
      j["value"] = number(row.estimate.value);
      j["std_error"] = number(row.estimate.std_error);
      j["ess_min"] = number(row.ess_min);
      j["observable"] = row.observable;
      if (r.delta_sets) {
        j["delta_sets"] = {{"delta", c.delta},
                           {"middle_measure", number(r.delta_sets->middle_measure)},
                           {"negligible_in_tube", number(r.delta_sets->negligible_in_tube)},
                           {"predominant_out_of_tube", number(r.delta_sets->predominant_out_of_tube)}};
      } else {
        j["delta_sets"] = nullptr;
      }
      j["manifest_hash"] = config_hash;
      if (!r.warnings.empty()) j["warnings"] = r.warnings;
      rows.push_back(std::move(j));
    }
  }
  out << rows.dump(2) << '\n';
}

void write_manifest(std::ostream& out, const RunManifest& m) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = m.command;
  j["config"] = m.config.entries;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.config.experiment.seed;
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& t : m.timings) timings.push_back({{"operation", t.operation}, {"seconds", t.seconds}});
  j["timings"] = timings;
  out << j.dump(2) << '\n';
}

}  // namespace polymer::cli
