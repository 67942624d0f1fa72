#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polymer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::optional<std::filesystem::path> dump_cloud;  // replicate 0's cloud, first cell
};

// Both write results.csv, results.json and manifest.json into out_dir and
// return an exit code. Errors are reported on `err`.
int cmd_simulate(const RunOptions& options, std::ostream& err);
int cmd_sweep(const RunOptions& options, std::ostream& err);

// Full command line: `polymer analytic|simulate|sweep ...`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace polymer::cli
