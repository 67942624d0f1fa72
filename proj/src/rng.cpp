#include "polymer/rng.hpp"

#include <cmath>
#include <numbers>

namespace polymer {

double Stream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_positive();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double Stream::exponential(double rate) noexcept {
  return -std::log(uniform_positive()) / rate;
}

}  // namespace polymer
