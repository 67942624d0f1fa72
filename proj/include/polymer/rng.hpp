#pragma once

#include <cstdint>
#include <limits>

namespace polymer {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Module tags used to split the master seed into independent substreams.
enum class StreamTag : std::uint64_t {
  paths = 1,
  cloud = 2,
  cloud_extra = 3,
  cloud_extra_2 = 4,
  annealed = 5,
  scenario = 6,
};

// key = mix64(mix64(mix64(master) ^ tag) ^ index)
constexpr std::uint64_t stream_key(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept {
  return mix64(mix64(mix64(master) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

/// Counter-based stream: the i-th draw (i = 1, 2, ...) is
/// mix64(key + i * 0x9E3779B97F4A7C15), i.e. SplitMix64 seeded with `key`.
/// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}
  Stream(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept
      : key_(stream_key(master, tag, index)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }

  result_type next() noexcept {
    ++counter_;
    // mix64 adds the golden-ratio increment itself, so pass key + (i-1)*gamma.
    return mix64(key_ + (counter_ - 1) * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_positive() noexcept { return 1.0 - uniform(); }
  // Standard normal, Box-Muller; both variates of each pair are used.
  double normal() noexcept;
  // Exponential with the given rate.
  double exponential(double rate) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polymer
