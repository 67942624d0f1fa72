#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "polymer/estimators.hpp"

namespace polymer::cli {

/// Parsed run configuration. `entries` keeps the accepted key/value text
/// exactly as written (trimmed); everything else is derived from it.
struct RunConfig {
  std::map<std::string, std::string> entries;
  ExperimentConfig experiment;
  Mode mode = Mode::full;
  std::vector<double> grid_beta;
  std::vector<double> grid_nu;
  std::vector<double> grid_t;

  // Cells of the beta x nu x t grid, beta outermost and t innermost. Axes
  // without a grid use the scalar value.
  std::vector<ExperimentConfig> cells() const;
};

const std::vector<std::string>& known_keys();

// Builds a RunConfig from key/value pairs; throws Error{config} naming the key.
RunConfig from_entries(std::map<std::string, std::string> entries);

// `key = value` lines, `#` comments, blank lines ignored. Unknown or repeated
// keys are rejected.
RunConfig parse_config(std::istream& in, const std::string& source = "config");

// A config file, or a manifest.json written by a previous run.
RunConfig load_config(const std::filesystem::path& file);

// Sorted `key = value\n` lines of the entries.
std::string canonical_text(const RunConfig& config);

// Git blob id (SHA-1 of "blob <size>\0" + text), lower-case hex.
std::string git_blob_hash(const std::string& text);

}  // namespace polymer::cli
