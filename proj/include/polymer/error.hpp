#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polymer {

enum class ErrorKind {
  invalid_dimension,
  invalid_intensity,
  invalid_time,
  invalid_point,
  invalid_index,
  invalid_count,
  invalid_delta,
  incompatible_box,
  window_coverage,
  domain,
  hypothesis,
  invalid_query,
  numeric,
  config,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` tells callers
// which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the experiment driver when an exact per-configuration inequality
// fails; carries what is needed to replay the offending replicate.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(const std::string& what, std::uint64_t seed, std::uint64_t replicate)
      : std::runtime_error(what + " (seed " + std::to_string(seed) + ", replicate " +
                           std::to_string(replicate) + ")"),
        seed_(seed),
        replicate_(replicate) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replicate() const noexcept { return replicate_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replicate_;
};

}  // namespace polymer
