#pragma once

#include <span>

#include "polymer/path.hpp"

namespace polymer {

// Radius of the Euclidean ball of unit volume in R^d.
double unit_ball_radius(int d);

// Volume of the radius-r ball in R^d.
double ball_volume(int d, double radius);

/// Volume of the intersection of two unit-volume balls whose centers are
/// `rho` apart. Twice the spherical-cap volume, written with the regularized
/// incomplete beta function; exact linear formula for d = 1.
double ball_overlap_volume(int d, double rho);

// Closed-ball test ||a - b||_2 <= radius (compared on squared distances). Every
// membership decision in the library goes through this function.
bool within_ball(std::span<const double> a, std::span<const double> b, double radius) noexcept;

struct BallGeometry {
  int d;
  double radius;

  static BallGeometry for_dimension(int d);
};

// Indicator that the path at grid index k lies in the unit ball around x.
int chi(const PolymerPath& path, int k, std::span<const double> x);

}  // namespace polymer
