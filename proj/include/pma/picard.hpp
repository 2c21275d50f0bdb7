#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pma/delay.hpp"
#include "pma/solution.hpp"

namespace pma {

/*
 * One Picard step for the integral equation
 *
 *   psi_{k+1}(r) = 1 + int_0^r F(s, psi_k) ds,
 *
 * returned on the same knots as the input. The map is antitone (a larger
 * input produces a smaller output), so starting from psi_0 = 1 the even
 * iterates increase and the odd iterates decrease, bracketing the solution.
 */
inline PiecewiseSolution picard_refine(const PiecewiseSolution& sol) {
  require_dimension_at_least(sol.n, 2, "picard_refine");
  const double nn = sol.n.real();
  DelayFunctional F(sol);

  PiecewiseSolution out(sol.n, MethodTag::picard);
  out.knots = sol.knots;
  out.phi.resize(sol.size());
  out.phi_prime.resize(sol.size());
  out.phi[0] = 1.0;
  out.phi_prime[0] = 0.0;

  const auto& prefix = F.prefix_at_knots();
  for (std::size_t i = 0; i + 1 < sol.size(); ++i) {
    const double r0 = sol.knots[i], r1 = sol.knots[i + 1];
    // inner prefix integral restarted from the stored knot value
    auto F_of = [&](double s) {
      double I = prefix[i];
      if (s > r0)
        I += gauss8([&](double t) { return std::pow(t, nn - 1) / sol.value(t); }, r0, s);
      return std::pow(nn * I, 1.0 / nn);
    };
    out.phi[i + 1] = out.phi[i] + gauss8(F_of, r0, r1);
    out.phi_prime[i + 1] = std::pow(nn * prefix[i + 1], 1.0 / nn);
  }
  measure_defect(out);
  return out;
}

/// Iterates the Picard map from psi = 1 on a uniform grid until the sup gap
/// between consecutive iterates drops below gap_tol. Keeps the last iterate.
inline PiecewiseSolution picard_limit(Dimension n, double r_max, int knots,
                                      double gap_tol = 1e-12, int max_iter = 60) {
  require_dimension_at_least(n, 2, "picard_limit");
  if (knots < 3) throw std::invalid_argument("picard_limit: knots must be >= 3");
  PiecewiseSolution cur(n, MethodTag::picard);
  cur.knots.resize(knots);
  for (int i = 0; i < knots; ++i) cur.knots[i] = r_max * i / (knots - 1);
  cur.phi.assign(knots, 1.0);
  cur.phi_prime.assign(knots, 0.0);
  cur.defect.assign(knots, 0.0);

  for (int it = 0; it < max_iter; ++it) {
    PiecewiseSolution next = picard_refine(cur);
    double gap = 0.0;
    for (int i = 0; i < knots; ++i)
      gap = std::max(gap, std::abs(next.phi[i] - cur.phi[i]));
    cur = std::move(next);
    if (gap < gap_tol) return cur;
  }
  return cur;
}

}  // namespace pma
