#include "polymer/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "polymer/error.hpp"

namespace polymer::special {
namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw Error(ErrorKind::numeric, "incomplete beta continued fraction did not converge");
}

// 10-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 5> kGlNodes = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                            0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kGlWeights = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                              0.1494513491505806, 0.0666713443086881};

template <class F>
double gauss_legendre(F&& f, double lo, double hi, int panels) {
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      panel += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
    }
    total += half * panel;
  }
  return total;
}

bool is_integer(double v) { return v == std::nearbyint(v); }

double bessel_series(double order, double x) {
  // (x/2)^order * sum_k (-x^2/4)^k / (k! Gamma(order + k + 1)); terms with a
  // pole of Gamma (negative integer argument) vanish.
  const double q = -0.25 * x * x;
  double sum = 0.0;
  double log_prefix = order * std::log(0.5 * x);
  double power = 1.0;  // q^k / k!
  for (int k = 0; k < 300; ++k) {
    const double g = order + k + 1.0;
    if (!(g <= 0.0 && is_integer(g))) {
      const double term = power / std::tgamma(g);
      sum += term;
      if (k > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    power *= q / (k + 1.0);
  }
  return std::exp(log_prefix) * sum;
}

double bessel_schlafli(double order, double x) {
  const double pi = std::numbers::pi;
  const int oscillation_panels = 16 + static_cast<int>(2.0 * (x + std::abs(order)));
  double value =
      gauss_legendre([&](double tau) { return std::cos(order * tau - x * std::sin(tau)); }, 0.0, pi,
                     oscillation_panels) /
      pi;
  if (!is_integer(order)) {
    // Tail term: -(sin(order*pi)/pi) * int_0^inf exp(-x sinh(tau) - order*tau) dtau.
    double upper = 1.0;
    while (x * std::sinh(upper) + order * upper < 60.0) upper *= 1.5;
    const double tail = gauss_legendre(
        [&](double tau) { return std::exp(-x * std::sinh(tau) - order * tau); }, 0.0, upper, 400);
    value -= std::sin(order * pi) / pi * tail;
  }
  return value;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::domain, "incomplete beta requires a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double bessel_j(double order, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::domain, "bessel_j requires x > 0");
  // The ascending series loses about x/ln(10) digits to cancellation.
  if (x <= 8.0 && std::abs(order) <= 20.0) return bessel_series(order, x);
  return bessel_schlafli(order, x);
}

double first_bessel_zero(double order) {
  constexpr double kStep = 0.01;
  // For order > 0 the first zero exceeds the order, and J_order is positive below it.
  double lo = order > 0.0 ? order : kStep;
  const double estimate = order > 0.0 ? order + 1.8557571 * std::cbrt(order) + 1.033150 / std::cbrt(order) + 1.0
                                      : 5.0;
  const double scan_end = estimate + 2.0;
  double f_lo = bessel_j(order, lo);
  while (lo < scan_end) {
    const double hi = lo + kStep;
    const double f_hi = bessel_j(order, hi);
    if (f_hi == 0.0) return hi;
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      double a = lo;
      double b = hi;
      double fa = f_lo;
      while (b - a > 1e-12 * std::max(1.0, a)) {
        const double m = 0.5 * (a + b);
        const double fm = bessel_j(order, m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw Error(ErrorKind::numeric, "no sign change of J found before the scan bound");
}

}  // namespace polymer::special
