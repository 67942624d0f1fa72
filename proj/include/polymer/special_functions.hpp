#pragma once

namespace polymer::special {

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

// Bessel function of the first kind J_order(x) for real order and x > 0.
// Ascending series for small x, Schlafli's integral otherwise.
double bessel_j(double order, double x);

// Smallest positive zero of J_order, located by a sign scan (step 0.01)
// followed by bisection to 1e-12. Throws Error{numeric} if no sign change is
// found in the scan window.
double first_bessel_zero(double order);

}  // namespace polymer::special
