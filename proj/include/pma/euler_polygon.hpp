#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pma/quadrature.hpp"
#include "pma/solution.hpp"

namespace pma {

/*
 * Euler break line for the profile IVP: on a uniform mesh r_i = i h the
 * polygon freezes the right-hand side at the left mesh point,
 *
 *   psi(r) = psi(r_{i-1}) + F(r_{i-1}, psi) (r - r_{i-1}),  r in [r_{i-1}, r_i).
 *
 * F depends only on psi's history, so the construction is explicit and never
 * divides by zero (psi >= 1 throughout). The recorded defect per segment is
 * the exact sup of |psi' - F(r, psi)| over the segment, which is attained at
 * the right endpoint because F is nondecreasing in r while psi' is frozen.
 * On [0, 1] the defect obeys the a-priori bound 2^{1/n} m^{-1/n}; beyond the
 * unit interval it is reported, not asserted.
 */
inline PiecewiseSolution euler_break_line(Dimension n, double r_max, int segments) {
  require_dimension_at_least(n, 2, "euler_break_line");
  if (segments < 2)
    throw std::invalid_argument("euler_break_line: at least 2 segments required");
  if (!(r_max > 0))
    throw std::invalid_argument("euler_break_line: r_max must be positive");

  const double nn = n.real();
  const double h = r_max / segments;
  PiecewiseSolution out(n, MethodTag::euler);
  out.knots.resize(segments + 1);
  out.phi.resize(segments + 1);
  out.phi_prime.resize(segments + 1);
  out.defect.assign(segments + 1, 0.0);

  out.knots[0] = 0.0;
  out.phi[0] = 1.0;
  out.phi_prime[0] = 0.0;

  double I = 0.0;       // prefix integral int_0^{r_i} s^{n-1}/psi ds
  double F_left = 0.0;  // F(r_{i-1}, psi)
  for (int i = 1; i <= segments; ++i) {
    const double r0 = out.knots[i - 1], r1 = i * h;
    const double psi0 = out.phi[i - 1];
    // psi is linear on the segment with the frozen slope.
    I += gauss8([&](double s) { return std::pow(s, nn - 1) / (psi0 + F_left * (s - r0)); },
                r0, r1);
    const double F_right = std::pow(nn * I, 1.0 / nn);
    out.knots[i] = r1;
    out.phi[i] = psi0 + F_left * h;
    out.phi_prime[i] = F_right;
    out.defect[i] = F_right - F_left;
    F_left = F_right;
  }
  return out;
}

}  // namespace pma
