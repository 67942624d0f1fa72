#include "polymer/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "polymer/error.hpp"
#include "polymer/special_functions.hpp"

namespace polymer {

double unit_ball_radius(int d) {
  if (d < 1) throw Error(ErrorKind::invalid_dimension, "dimension must be >= 1, got " + std::to_string(d));
  if (d == 1) return 0.5;
  // pi^{d/2} r^d / Gamma(d/2 + 1) = 1
  const double log_r = (std::lgamma(0.5 * d + 1.0) - 0.5 * d * std::log(std::numbers::pi)) / d;
  return std::exp(log_r);
}

double ball_volume(int d, double radius) {
  if (d < 1) throw Error(ErrorKind::invalid_dimension, "dimension must be >= 1, got " + std::to_string(d));
  return std::exp(0.5 * d * std::log(std::numbers::pi) + d * std::log(radius) - std::lgamma(0.5 * d + 1.0));
}

double ball_overlap_volume(int d, double rho) {
  const double r = unit_ball_radius(d);
  if (rho <= 0.0) return 1.0;
  if (rho >= 2.0 * r) return 0.0;
  if (d == 1) return 1.0 - rho;
  const double half = rho / (2.0 * r);
  return special::regularized_incomplete_beta(0.5 * (d + 1), 0.5, 1.0 - half * half);
}

bool within_ball(std::span<const double> a, std::span<const double> b, double radius) noexcept {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return sq <= radius * radius;
}

BallGeometry BallGeometry::for_dimension(int d) { return {d, unit_ball_radius(d)}; }

int chi(const PolymerPath& path, int k, std::span<const double> x) {
  if (k < 0 || k > path.grid().n_steps()) {
    throw Error(ErrorKind::invalid_index, "time index " + std::to_string(k) + " is off the path grid");
  }
  if (static_cast<int>(x.size()) != path.dim()) {
    throw Error(ErrorKind::invalid_dimension, "point dimension does not match path dimension");
  }
  return within_ball(path.position(k), x, unit_ball_radius(path.dim())) ? 1 : 0;
}

}  // namespace polymer
