#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pma/dimension.hpp"

/*
 * Closed-form dimensional constants of the separated solution
 * u(x,t) = w(t) phi(|x|) of -u_t det D^2 u = 1:
 *
 *   c_n        leading coefficient, lim phi(r)/r^{2n/(n+1)}
 *   K_n        refined radial decay exponent of phi - c_n r^{2n/(n+1)} (n >= 4)
 *   k_n        the same rate in the intermediate variable s = r^{2n/(n+1)}
 *   lambda+/-  roots of lambda^2 + (n-3)/2 lambda + (n-1)/(2n) = 0, the
 *              limiting characteristic polynomial of the linearized deviation
 *   C3, C4     the two-sided power-bound constants
 *              C3 r^{2n/(n+1)} <= phi <= 1 + C4 r^{2n/(n+1)}
 *   u0_coef    coefficient of the singular reference solution u_0
 *
 * Everything here is an exact elementary expression evaluated in binary64;
 * the test suite re-derives each value in extended precision.
 */

namespace pma::constants {

/// c_n = (n+1) / ( (2n)^{n/(n+1)} (n-1)^{1/(n+1)} ), n >= 2.
inline double leading_coefficient(Dimension n) {
  require_dimension_at_least(n, 2, "constants.leading_coefficient");
  const double nn = n.real();
  return std::exp(std::log(nn + 1) - nn / (nn + 1) * std::log(2 * nn) -
                  std::log(nn - 1) / (nn + 1));
}

/// Roots of lambda^2 + ((n-3)/2) lambda + (n-1)/(2n) = 0, n >= 2.
/// Complex conjugate for n in {2,...,5}, real and distinct for n >= 6.
/// Returned as (lambda_plus, lambda_minus) with Re(lambda_plus) >= Re(lambda_minus).
inline std::pair<std::complex<double>, std::complex<double>> characteristic_roots(
    Dimension n) {
  require_dimension_at_least(n, 2, "constants.characteristic_roots");
  const double nn = n.real();
  const double half_b = (nn - 3) / 4;                         // -(b/2) sign handled below
  const double disc = (nn - 3) * (nn - 3) / 4 - 2 * (nn - 1) / nn;
  if (disc >= 0) {
    const double sq = std::sqrt(disc) / 2;
    return {std::complex<double>(-half_b + sq, 0.0),
            std::complex<double>(-half_b - sq, 0.0)};
  }
  const double sq = std::sqrt(-disc) / 2;
  return {std::complex<double>(-half_b, sq), std::complex<double>(-half_b, -sq)};
}

/// Deviation decay rate in s-coordinates: k_n = Re(lambda_plus), n >= 4.
/// For n in {4,5} the deviation oscillates and k_n is the envelope rate.
inline double deviation_exponent(Dimension n) {
  require_dimension_at_least(n, 4, "constants.deviation_exponent");
  return characteristic_roots(n).first.real();
}

/// Refined radial decay exponent, n >= 4:
///   K_n = n(n-3)/(2(n+1))                                     for n in {4,5}
///   K_n = n/(n+1) ( (n-3)/2 - sqrt((n-3)^2/4 - 2(n-1)/n) )    for n >= 6
/// The rate for n in {2,3} is an open problem; the call is rejected there
/// rather than extrapolated.
inline double refined_exponent(Dimension n) {
  require_dimension_at_least(n, 4, "constants.refined_exponent");
  const double nn = n.real();
  if (n.value() <= 5) return nn * (nn - 3) / (2 * (nn + 1));
  return nn / (nn + 1) *
         ((nn - 3) / 2 - std::sqrt((nn - 3) * (nn - 3) / 4 - 2 * (nn - 1) / nn));
}

/// Sandwich constants (C3, C4), n >= 2.
/// C3 is the limit of the lower-bound iteration; C4 follows by one
/// application of the lower-to-upper transfer map at the fixed exponent.
inline std::pair<double, double> sandwich_constants(Dimension n) {
  require_dimension_at_least(n, 2, "constants.sandwich_constants");
  const double nn = n.real();
  const double c3 = std::exp(-nn / (nn - 1) * std::log(2.0) -
                             std::log((nn + 1) / (nn - 1)) / (nn * nn - 1) -
                             nn / (nn * nn - 1) * std::log((nn + 1) / nn));
  const double c4 = std::pow(c3, -1.0 / nn) * std::pow((nn + 1) / (nn - 1), 1.0 / nn) *
                    (nn + 1) / (2 * nn);
  return {c3, c4};
}

/// Coefficient of the singular reference solution
///   u_0(x,t) = u0_coef (-t)^{1/(n+1)} |x|^{2n/(n+1)},
/// u0_coef = ( (n+1)^{n+2} / ( (2n)^n (n-1) ) )^{1/(n+1)} = (n+1)^{1/(n+1)} c_n.
inline double u0_coefficient(Dimension n) {
  require_dimension_at_least(n, 2, "constants.u0_coefficient");
  const double nn = n.real();
  return std::exp(((nn + 2) * std::log(nn + 1) - nn * std::log(2 * nn) -
                   std::log(nn - 1)) /
                  (nn + 1));
}

/// One step of the lower-bound iteration: coefficient p_m and exponent k_m of
/// the bound phi >= p_m r^{k_m}.
struct IterationState {
  double p_m;
  double k_m;
  int m;
};

/// First iteration coefficient p_1 = 2^{-(n+1)/n} ((n+1)/(n-1))^{-1/n^2} ((n+1)/n)^{-1/n}.
inline double iteration_seed_coefficient(Dimension n) {
  require_dimension_at_least(n, 2, "constants.iteration_seed_coefficient");
  const double nn = n.real();
  return std::exp(-(nn + 1) / nn * std::log(2.0) -
                  std::log((nn + 1) / (nn - 1)) / (nn * nn) -
                  std::log((nn + 1) / nn) / nn);
}

/// The recursion p_m = p_1 p_{m-1}^{1/n^2}, k_m = (2n-2)/n + k_{m-1}/n^2
/// from the seed p_0 = 1, k_0 = 0 (the trivial bound phi >= 1).
/// Exponents increase strictly to 2n/(n+1); coefficients converge to
/// p_1^{n^2/(n^2-1)} = C3. Returns states m = 1..steps.
inline std::vector<IterationState> iteration_sequence(Dimension n, int steps) {
  require_dimension_at_least(n, 2, "constants.iteration_sequence");
  if (steps < 1)
    throw std::invalid_argument("constants.iteration_sequence: steps must be >= 1");
  const double nn = n.real();
  const double p1 = iteration_seed_coefficient(n);
  std::vector<IterationState> out;
  out.reserve(steps);
  double p = 1.0, k = 0.0;
  for (int m = 1; m <= steps; ++m) {
    p = p1 * std::pow(p, 1.0 / (nn * nn));
    k = (2 * nn - 2) / nn + k / (nn * nn);
    out.push_back({p, k, m});
  }
  return out;
}

/// Time factor w(t) = (w0^{n+1} - (n+1) t)^{1/(n+1)} and w'(t) = -w^{-n},
/// the explicit solution of -w' w^n = 1 on t <= 0.
inline std::pair<double, double> time_factor(double t, double w0, Dimension n) {
  if (t > 0) throw std::invalid_argument("constants.time_factor: t must be <= 0");
  if (w0 < 0) throw std::invalid_argument("constants.time_factor: w0 must be >= 0");
  const double nn = n.real();
  if (t == 0 && w0 == 0)
    throw std::domain_error(
        "constants.time_factor: derivative singular at t = 0 with w(0) = 0 "
        "(w' is unbounded there)");
  const double w = std::pow(std::pow(w0, nn + 1) - (nn + 1) * t, 1.0 / (nn + 1));
  return {w, -std::pow(w, -nn)};
}

/// Pointwise value of the singular reference solution u_0, t < 0.
inline double u0_reference(double x_norm, double t, Dimension n) {
  if (t >= 0) throw std::invalid_argument("constants.u0_reference: t must be < 0");
  if (x_norm < 0)
    throw std::invalid_argument("constants.u0_reference: |x| must be >= 0");
  if (x_norm == 0) return 0.0;
  return u0_coefficient(n) * std::pow(-t, 1.0 / (n.real() + 1)) *
         std::pow(x_norm, n.alpha());
}

/// All catalog constants for one dimension. K_n and k_n are NaN for n in
/// {2,3}, where the refined rate is not defined.
struct AsymptoticConstants {
  double c_n;
  double K_n;
  double k_n;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  double C3;
  double C4;
  double u0_coef;
};

inline AsymptoticConstants catalog(Dimension n) {
  require_dimension_at_least(n, 2, "constants.catalog");
  AsymptoticConstants out{};
  out.c_n = leading_coefficient(n);
  auto [lp, lm] = characteristic_roots(n);
  out.lambda_plus = lp;
  out.lambda_minus = lm;
  if (n.value() >= 4) {
    out.K_n = refined_exponent(n);
    out.k_n = deviation_exponent(n);
  } else {
    out.K_n = std::numeric_limits<double>::quiet_NaN();
    out.k_n = std::numeric_limits<double>::quiet_NaN();
  }
  auto [c3, c4] = sandwich_constants(n);
  out.C3 = c3;
  out.C4 = c4;
  out.u0_coef = u0_coefficient(n);
  return out;
}

}  // namespace pma::constants
