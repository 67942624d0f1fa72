#include "polymer/cli/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "polymer/error.hpp"

namespace polymer::cli {
namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw Error(ErrorKind::config, key + ": " + message);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(key, "'" + text + "' is not a number");
  return v;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& text) {
  Int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(key, "'" + text + "' is not a valid integer");
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) fail(key, "empty list");
  return out;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "d",    "beta",      "nu",       "t",      "n_steps",  "paths_per_env", "n_envs",  "bin_width",
      "delta", "seed",     "mode",     "grid.beta", "grid.nu", "grid.t",     "nu_prime", "epsilon"};
  return keys;
}

std::vector<ExperimentConfig> RunConfig::cells() const {
  const std::vector<double> betas = grid_beta.empty() ? std::vector<double>{experiment.beta} : grid_beta;
  const std::vector<double> nus = grid_nu.empty() ? std::vector<double>{experiment.nu} : grid_nu;
  const std::vector<double> ts = grid_t.empty() ? std::vector<double>{experiment.t} : grid_t;
  std::vector<ExperimentConfig> out;
  for (double b : betas) {
    for (double n : nus) {
      for (double t : ts) {
        ExperimentConfig c = experiment;
        c.beta = b;
        c.nu = n;
        c.t = t;
        out.push_back(c);
      }
    }
  }
  return out;
}

RunConfig from_entries(std::map<std::string, std::string> entries) {
  RunConfig rc;
  ExperimentConfig& e = rc.experiment;
  for (const auto& [key, value] : entries) {
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      fail(key, "unknown key");
    }
    if (key == "d") e.d = to_integer<int>(key, value);
    else if (key == "beta") e.beta = to_double(key, value);
    else if (key == "nu") e.nu = to_double(key, value);
    else if (key == "t") e.t = to_double(key, value);
    else if (key == "n_steps") e.n_steps = to_integer<int>(key, value);
    else if (key == "paths_per_env") e.paths = to_integer<int>(key, value);
    else if (key == "n_envs") e.environments = to_integer<int>(key, value);
    else if (key == "bin_width") e.bin_width = to_double(key, value);
    else if (key == "delta") e.delta = to_double(key, value);
    else if (key == "seed") e.seed = to_integer<std::uint64_t>(key, value);
    else if (key == "mode") rc.mode = parse_mode(value);
    else if (key == "grid.beta") rc.grid_beta = to_list(key, value);
    else if (key == "grid.nu") rc.grid_nu = to_list(key, value);
    else if (key == "grid.t") rc.grid_t = to_list(key, value);
    else if (key == "nu_prime") e.nu_prime = to_double(key, value);
    else if (key == "epsilon") e.epsilon = to_double(key, value);
  }
  rc.entries = std::move(entries);
  for (const auto& cell : rc.cells()) cell.validate();
  return rc;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config, source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::config, source + ":" + std::to_string(number) + ": missing key");
    if (value.empty()) fail(key, "missing value");
    if (!entries.emplace(key, value).second) fail(key, "given twice");
  }
  return from_entries(std::move(entries));
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::config, "cannot open " + file.string());
  if (file.extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::config, file.string() + ": " + ex.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
      throw Error(ErrorKind::config, file.string() + ": manifest has no config object");
    }
    std::map<std::string, std::string> entries;
    for (const auto& [key, value] : doc["config"].items()) {
      if (!value.is_string()) fail(key, "manifest values must be strings");
      entries[key] = value.get<std::string>();
    }
    return from_entries(std::move(entries));
  }
  return parse_config(in, file.string());
}

std::string canonical_text(const RunConfig& config) {
  std::string text;
  for (const auto& [key, value] : config.entries) text += key + " = " + value + "\n";
  return text;
}

std::string git_blob_hash(const std::string& text) {
  std::string payload = "blob " + std::to_string(text.size());
  payload.push_back('\0');
  payload += text;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(payload.data(), payload.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
    throw Error(ErrorKind::numeric, "SHA-1 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace polymer::cli
