#include "polymer/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polymer/error.hpp"
#include "polymer/geometry.hpp"
#include "polymer/special_functions.hpp"

namespace polymer::analytics {
namespace {

void require(bool ok, const std::string& condition) {
  if (!ok) throw Error(ErrorKind::hypothesis, condition);
}

}  // namespace

double lambda_beta(double beta) { return std::expm1(beta); }

double lambda_star(double u) {
  if (!(u > 0.0)) throw Error(ErrorKind::domain, "lambda* needs u > 0");
  return u * std::log(u) - u + 1.0;
}

double alpha_beta(double beta) {
  if (std::abs(beta) < 1e-3) {
    // (e^b - 1)/b and (e^b - 1 - b)/(b^2/2) by their Taylor series.
    const double b = beta;
    const double a = 1.0 + b / 2.0 + b * b / 6.0 + b * b * b / 24.0 + b * b * b * b / 120.0;
    const double c = 1.0 + b / 3.0 + b * b / 12.0 + b * b * b / 60.0 + b * b * b * b / 360.0;
    return 2.0 * a * a / (std::exp(b) * c);
  }
  if (beta > 1.0) {
    const double e = std::exp(-beta);
    return (1.0 - e) * (1.0 - e) / (1.0 - (1.0 + beta) * e);
  }
  const double em1 = std::expm1(beta);
  return em1 * em1 / (std::exp(beta) * (em1 - beta));
}

double h_alpha(double alpha, double u) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::domain, "h_alpha needs alpha > 0");
  if (!(u > -1.0)) throw Error(ErrorKind::domain, "h_alpha needs u > -1");
  return std::log1p(u) - u + u * u / (alpha * (1.0 + u));
}

double psi(double beta, double u) {
  const double l = lambda_beta(beta);
  return l * (u - u * u) / (1.0 + l * u);
}

double phi(double beta, double u) {
  const double l = lambda_beta(beta);
  return std::exp(beta) * l * u * u / (1.0 + l * u);
}

double psi_ratio_form(double beta, double u) {
  const double l = lambda_beta(beta);
  return std::exp(beta) * u / (1.0 + l * u) - u;
}

double phi_ratio_form(double beta, double u) {
  const double l = lambda_beta(beta);
  const double eb = std::exp(beta);
  return eb * u - eb * u / (1.0 + l * u);
}

CriticalPoint::CriticalPoint(double beta0_, double nu0_, Branch branch_)
    : beta0(beta0_), nu0(nu0_), branch(branch_) {
  if (!(nu0 > 0.0)) throw Error(ErrorKind::domain, "critical intensity nu0 must be positive");
  if (branch == Branch::plus && !(beta0 > 0.0)) throw Error(ErrorKind::domain, "plus-branch point needs beta0 > 0");
  if (branch == Branch::minus && !(beta0 < 0.0)) throw Error(ErrorKind::domain, "minus-branch point needs beta0 < 0");
}

const char* to_string(SandwichCase c) {
  switch (c) {
    case SandwichCase::reference: return "reference";
    case SandwichCase::a1: return "a1";
    case SandwichCase::a2: return "a2";
    case SandwichCase::b1: return "b1";
    case SandwichCase::b2: return "b2";
  }
  return "?";
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::delocalized: return "D";
    case Phase::localized: return "L";
    case Phase::unknown: return "unknown";
  }
  return "?";
}

CriticalBounds sandwich_formula(double nu, const CriticalPoint& crit, double alpha) {
  if (!(nu > 0.0)) throw Error(ErrorKind::domain, "nu must be positive");
  if (!(alpha > 0.0)) throw Error(ErrorKind::domain, "alpha must be positive");
  if (nu == crit.nu0) return {crit.beta0, crit.beta0, SandwichCase::reference};
  const double c1 = std::abs(lambda_beta(crit.beta0));
  const double ratio = crit.nu0 / nu;
  const double by_alpha = std::pow(ratio, 1.0 / alpha);
  const double by_half = std::sqrt(ratio);
  if (crit.branch == Branch::plus) {
    if (nu > crit.nu0) return {std::log1p(c1 * by_alpha), std::log1p(c1 * by_half), SandwichCase::a1};
    return {std::log1p(c1 * by_half), std::log1p(c1 * by_alpha), SandwichCase::a2};
  }
  if (nu > crit.nu0) return {std::log1p(-c1 * by_alpha), std::log1p(-c1 * by_half), SandwichCase::b1};
  return {std::log1p(-c1 * by_half), std::log1p(-c1 * by_alpha), SandwichCase::b2};
}

CriticalBounds bc_bounds(double nu, const CriticalPoint& crit, double alpha, std::optional<double> nu_c_upper) {
  if (!(nu > 0.0)) throw Error(ErrorKind::domain, "nu must be positive");
  if (nu == crit.nu0) return {crit.beta0, crit.beta0, SandwichCase::reference};
  const double c1 = std::abs(lambda_beta(crit.beta0));
  if (crit.branch == Branch::plus) {
    require(alpha >= 1.0, "plus branch needs alpha >= 1");
    if (nu > crit.nu0) {
      require(alpha <= alpha_beta(crit.beta0), "a1 needs alpha <= alpha(beta0)");
    } else {
      // beta_c^+(nu) <= ln(1 + c1 nu0/nu) (the alpha = 1 upper bound), and alpha() decreases.
      const double beta_c_cap = std::log1p(c1 * crit.nu0 / nu);
      require(alpha <= alpha_beta(beta_c_cap), "a2 needs alpha <= alpha(ln(1 + c1 nu0/nu))");
    }
  } else {
    if (nu > crit.nu0) {
      require(alpha >= alpha_beta(crit.beta0), "b1 needs alpha >= alpha(beta0)");
    } else {
      const double c2 = std::expm1(-crit.beta0);
      const double nu1 = crit.nu0 * c2 * c2;
      require(nu > nu1, "b2 needs nu > nu0 c2^2 = " + std::to_string(nu1));
      require(nu_c_upper.has_value() && *nu_c_upper < nu1, "b2 needs a known nu_c upper bound below nu0 c2^2");
      // beta_c^-(nu1) >= ln(1 - e^beta0) follows from the alpha-free L-condition.
      require(alpha >= alpha_beta(std::log1p(-std::exp(crit.beta0))), "b2 needs alpha >= alpha(ln(1 - e^beta0))");
    }
  }
  return sandwich_formula(nu, crit, alpha);
}

Phase classify_phase(double beta, double nu, const CriticalPoint& crit, double alpha) {
  if (!(nu > 0.0)) throw Error(ErrorKind::invalid_query, "nu must be positive");
  if (beta == 0.0) return Phase::delocalized;
  if ((beta > 0.0) != (crit.branch == Branch::plus)) {
    throw Error(ErrorKind::invalid_query, "sign of beta does not match the critical branch");
  }
  if (!(alpha > 0.0)) throw Error(ErrorKind::hypothesis, "alpha must be positive");

  const double l = std::abs(lambda_beta(beta));
  const double l0 = std::abs(lambda_beta(crit.beta0));
  const double nu0 = crit.nu0;
  const double b0 = crit.beta0;
  bool localized = false;
  bool delocalized = false;

  if (crit.branch == Branch::plus) {
    require(alpha <= alpha_beta(std::max(beta, b0)), "plus branch needs alpha <= alpha(max(beta, beta0))");
    if (nu > nu0 && nu * l * l > nu0 * l0 * l0) localized = true;
    if (beta <= b0 && nu * std::pow(l, alpha) <= nu0 * std::pow(l0, alpha)) delocalized = true;
    if (nu <= nu0 && nu * l * l <= nu0 * l0 * l0) delocalized = true;
    if (beta > b0 && nu * std::pow(l, alpha) > nu0 * std::pow(l0, alpha)) localized = true;
  } else {
    require(alpha >= alpha_beta(std::min(beta, b0)), "minus branch needs alpha >= alpha(min(beta, beta0))");
    if (nu > nu0 && nu * std::pow(l, alpha) > nu0 * std::pow(l0, alpha)) localized = true;
    if (b0 <= beta && nu * l * l <= nu0 * l0 * l0) delocalized = true;
    if (beta < b0 && nu * std::pow(l, alpha) <= nu0 * std::pow(l0, alpha)) delocalized = true;
    if (beta < b0 && nu * l * l > nu0 * l0 * l0) localized = true;
  }
  if (localized && delocalized) {
    throw Error(ErrorKind::numeric, "phase conditions fired for both D and L");
  }
  if (localized) return Phase::localized;
  if (delocalized) return Phase::delocalized;
  return Phase::unknown;
}

bool l2_region(double beta, double nu, double a_l2) {
  const double l = lambda_beta(beta);
  return nu * l * l < a_l2;
}

BesselBound bessel_bound(int d) {
  BesselBound b{};
  b.d = d;
  b.radius = unit_ball_radius(d);
  b.order = 0.5 * (d - 4);
  b.gamma = special::first_bessel_zero(b.order);
  b.ratio = b.gamma / (2.0 * b.radius);
  b.ratio_squared = b.ratio * b.ratio;
  return b;
}

double bessel_gamma(int d) { return bessel_bound(d).gamma; }

double nu_c_lower_bound(int d) { return bessel_bound(d).ratio_squared; }

}  // namespace polymer::analytics
