#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pma/constants.hpp"
#include "pma/solution.hpp"

namespace pma {

enum class BoundSide { lower, upper };

/// One-sided power bound on the profile: C r^k (lower) or 1 + C r^k (upper).
struct PowerBound {
  double coef;
  double exponent;
  BoundSide side;

  double offset() const { return side == BoundSide::lower ? 0.0 : 1.0; }
  double value(double r) const { return offset() + coef * std::pow(r, exponent); }
};

/// Lower-to-upper transfer: from phi >= C1 r^k with 0 <= k <= 2n/(n+1),
///   phi <= 1 + C1^{-1/n} ((n+1)/(n-1))^{1/n} (n+1)/(2n) r^{2-k/n}.
inline PowerBound upper_from_lower(const PowerBound& b, Dimension n) {
  require_dimension_at_least(n, 2, "bounds.upper_from_lower");
  const double nn = n.real();
  if (b.side != BoundSide::lower || !(b.coef > 0))
    throw std::invalid_argument("bounds.upper_from_lower: needs a positive lower bound");
  if (b.exponent < 0 || b.exponent > n.alpha() * (1 + 1e-12))
    throw std::invalid_argument("bounds.upper_from_lower: exponent out of range [0, 2n/(n+1)]");
  return {std::pow(b.coef, -1 / nn) * std::pow((nn + 1) / (nn - 1), 1 / nn) *
              (nn + 1) / (2 * nn),
          2 - b.exponent / nn, BoundSide::upper};
}

/// Upper-to-lower transfer: from phi <= 1 + C2 r^k with 2n/(n+1) <= k <= n,
///   phi >= r^{2-k/n} / (2 (1+C2)^{1/n}).
inline PowerBound lower_from_upper(const PowerBound& b, Dimension n) {
  require_dimension_at_least(n, 2, "bounds.lower_from_upper");
  const double nn = n.real();
  if (b.side != BoundSide::upper || !(b.coef > 0))
    throw std::invalid_argument("bounds.lower_from_upper: needs a positive upper bound");
  if (b.exponent < n.alpha() * (1 - 1e-12) || b.exponent > nn * (1 + 1e-12))
    throw std::invalid_argument("bounds.lower_from_upper: exponent out of range [2n/(n+1), n]");
  return {1 / (2 * std::pow(1 + b.coef, 1 / nn)), 2 - b.exponent / nn,
          BoundSide::lower};
}

struct BoundsTrace {
  std::vector<PowerBound> lowers;  // p_m r^{k_m}, m = 1..M
  std::vector<PowerBound> uppers;  // transfer of each lower
};

/// M rounds of the composite transfer map starting from the trivial bound
/// phi >= min(seed, 1) r^0. The closed-form coefficient recursion
/// p_m = p_1 p_{m-1}^{1/n^2} relaxes the two-step composition slightly, which
/// keeps the trace aligned with the iteration-sequence constants; the
/// exponent recursion k_m = (2n-2)/n + k_{m-1}/n^2 is shared by both routes.
inline std::pair<PowerBound, BoundsTrace> iterate_bounds(Dimension n, int steps,
                                                         double seed = 1.0) {
  require_dimension_at_least(n, 2, "bounds.iterate_bounds");
  if (steps < 1) throw std::invalid_argument("bounds.iterate_bounds: steps must be >= 1");
  seed = std::min(seed, 1.0);  // the transfer map assumes C1 <= 1
  if (!(seed > 0)) throw std::invalid_argument("bounds.iterate_bounds: seed must be positive");

  const double nn = n.real();
  const double p1 = constants::iteration_seed_coefficient(n);
  BoundsTrace trace;
  PowerBound low{seed, 0.0, BoundSide::lower};
  for (int m = 1; m <= steps; ++m) {
    trace.uppers.push_back(upper_from_lower(low, n));
    low = {p1 * std::pow(low.coef, 1 / (nn * nn)),
           (2 * nn - 2) / nn + low.exponent / (nn * nn), BoundSide::lower};
    trace.lowers.push_back(low);
  }
  return {low, trace};
}

/// True when the bound holds for the solution at every knot and at 8
/// Chebyshev points per inter-knot interval, up to rel_tol times the bound
/// magnitude (the Hermite interpolant may overshoot slightly between knots).
inline bool bound_holds(const PiecewiseSolution& sol, const PowerBound& b,
                        double rel_tol, double* worst_margin = nullptr,
                        double* at_r = nullptr) {
  static constexpr int cheb = 8;
  double worst = std::numeric_limits<double>::infinity();
  double worst_r = 0.0;
  bool ok = true;
  auto check = [&](double r, double phi_v) {
    const double bv = b.value(r);
    const double slack = rel_tol * std::max(std::abs(bv), 1.0);
    const double margin = b.side == BoundSide::lower ? phi_v - bv : bv - phi_v;
    if (margin < worst) {
      worst = margin;
      worst_r = r;
    }
    if (margin < -slack) ok = false;
  };
  for (std::size_t i = 0; i < sol.size(); ++i) {
    check(sol.knots[i], sol.phi[i]);
    if (i + 1 < sol.size()) {
      const double mid = 0.5 * (sol.knots[i] + sol.knots[i + 1]);
      const double half = 0.5 * (sol.knots[i + 1] - sol.knots[i]);
      for (int j = 0; j < cheb; ++j) {
        const double r = mid + half * std::cos((2 * j + 1) * std::numbers::pi / (2 * cheb));
        check(r, sol.value(r));
      }
    }
  }
  if (worst_margin) *worst_margin = worst;
  if (at_r) *at_r = worst_r;
  return ok;
}

struct SandwichReport {
  bool pass = false;
  double worst_margin_lower = 0;  // min of phi - C3 r^a over check points
  double worst_margin_upper = 0;  // min of 1 + C4 r^a - phi
  double at_r_lower = 0;
  double at_r_upper = 0;
};

/// Checks C3 r^{2n/(n+1)} <= phi <= 1 + C4 r^{2n/(n+1)} on the whole sampled
/// solution. rel_tol absorbs interpolation overshoot; violations within it
/// count as "within numerical tolerance" rather than failure.
inline SandwichReport verify_sandwich(const PiecewiseSolution& sol, double rel_tol) {
  auto [c3, c4] = constants::sandwich_constants(sol.n);
  const double a = sol.n.alpha();
  SandwichReport rep;
  const bool lo = bound_holds(sol, {c3, a, BoundSide::lower}, rel_tol,
                              &rep.worst_margin_lower, &rep.at_r_lower);
  const bool hi = bound_holds(sol, {c4, a, BoundSide::upper}, rel_tol,
                              &rep.worst_margin_upper, &rep.at_r_upper);
  rep.pass = lo && hi;
  return rep;
}

/// The scalar pincer map K -> K^{-1/n} ((n+1)/(n-1))^{1/n} (n+1)/(2n) whose
/// unique fixed point is c_n.
inline double pincer_map(double K, Dimension n) {
  const double nn = n.real();
  return std::pow(K, -1 / nn) * std::pow((nn + 1) / (nn - 1), 1 / nn) * (nn + 1) /
         (2 * nn);
}

}  // namespace pma
