#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polymer/cli/config.hpp"
#include "polymer/estimators.hpp"

namespace polymer::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeader = "mode,d,beta,nu,t,n_steps,M,K,h,value,std_error,ess_min,observable";

struct Timing {
  std::string operation;
  double seconds = 0.0;
};

struct RunManifest {
  std::string command;
  RunConfig config;
  std::string config_hash;
  std::vector<Timing> timings;
};

void write_results_csv(std::ostream& out, std::span<const ExperimentResult> results);
void write_results_json(std::ostream& out, std::span<const ExperimentResult> results, const std::string& config_hash);
void write_manifest(std::ostream& out, const RunManifest& manifest);

}  // namespace polymer::cli
