#pragma once

#include <optional>
#include <string>

namespace polymer::analytics {

// lambda(beta) = e^beta - 1, the log-MGF of a mean-one Poisson variable.
double lambda_beta(double beta);

// lambda*(u) = u ln u - u + 1, u > 0.
double lambda_star(double u);

/// alpha(beta) = (e^beta - 1)^2 / (e^beta (e^beta - 1 - beta)), alpha(0) = 2.
/// Decreases from +inf at -inf to 1 at +inf. Series near zero.
double alpha_beta(double beta);

// h_alpha(u) = ln(1+u) - u + u^2 / (alpha (1+u)); alpha > 0, u > -1.
double h_alpha(double alpha, double u);

// psi(u) = lambda (u - u^2) / (1 + lambda u) and phi(u) = e^beta lambda u^2 / (1 + lambda u).
double psi(double beta, double u);
double phi(double beta, double u);
// The same two functions written as differences of Gibbs ratios:
// psi = e^beta u / (1 + lambda u) - u,  phi = e^beta u - e^beta u / (1 + lambda u).
double psi_ratio_form(double beta, double u);
double phi_ratio_form(double beta, double u);

enum class Branch { plus, minus };

// A point (beta0, nu0) on the critical curve, on the branch matching sign(beta0).
struct CriticalPoint {
  double beta0;
  double nu0;
  Branch branch;

  CriticalPoint(double beta0, double nu0, Branch branch);
};

enum class SandwichCase { reference, a1, a2, b1, b2 };
const char* to_string(SandwichCase c);

struct CriticalBounds {
  double lower;
  double upper;
  SandwichCase which;
};

/// Bounds on beta_c^{+/-}(nu) from a known critical point. The case is picked
/// from nu vs nu0 and the branch; hypotheses are checked strictly and a
/// violation throws Error{hypothesis}. Where the theorem's alpha-range refers
/// to beta_c at an unknown intensity, a sufficient condition is checked
/// instead. Case b2 needs nu_c < nu0 c2^2; pass an upper bound on nu_c to use it.
CriticalBounds bc_bounds(double nu, const CriticalPoint& crit, double alpha,
                         std::optional<double> nu_c_upper = std::nullopt);

// The sandwich formulas evaluated without any hypothesis check.
CriticalBounds sandwich_formula(double nu, const CriticalPoint& crit, double alpha);

enum class Phase { delocalized, localized, unknown };
const char* to_string(Phase p);

/// D / L / unknown from the curve-comparison conditions around a critical
/// point. Requires sign(beta) to match the branch (beta = 0 is always D) and
/// alpha in the admissible range: alpha <= alpha(max(beta, beta0)) on the plus
/// branch, alpha >= alpha(min(beta, beta0)) on the minus branch.
Phase classify_phase(double beta, double nu, const CriticalPoint& crit, double alpha);

// nu lambda(beta)^2 < a_l2
bool l2_region(double beta, double nu, double a_l2);

struct BesselBound {
  int d;
  double order;          // (d - 4) / 2
  double gamma;          // smallest positive zero of J_order
  double radius;         // r_d
  double ratio;          // gamma / (2 r_d)
  double ratio_squared;  // (gamma / (2 r_d))^2
};

BesselBound bessel_bound(int d);
double bessel_gamma(int d);
// (gamma_d / (2 r_d))^2
double nu_c_lower_bound(int d);

}  // namespace polymer::analytics
