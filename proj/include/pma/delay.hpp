#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pma/quadrature.hpp"
#include "pma/solution.hpp"

namespace pma {

/*
 * The delay functional of the profile equation,
 *
 *   F(r, phi) = ( n I(r) )^{1/n},   I(r) = int_0^r s^{n-1} / phi(s) ds,
 *
 * evaluated against a sampled solution. The prefix integral is accumulated
 * segment by segment with bisected Gauss-Legendre quadrature on the Hermite
 * interpolant, keeping per-segment Richardson error estimates. Since the
 * integrand depends on the whole history of phi on (0, r), this is what makes
 * the profile IVP a functional differential equation with unbounded delay.
 *
 * For phi >= 1 the accumulator satisfies I(r) <= r^n / n, i.e. F(r) <= r.
 */
class DelayFunctional {
 public:
  explicit DelayFunctional(const PiecewiseSolution& sol) : sol_(sol) {
    const auto& kn = sol.knots;
    if (kn.size() < 2)
      throw std::invalid_argument("delay_functional: solution has no segments");
    prefix_.resize(kn.size(), 0.0);
    seg_error_.resize(kn.size(), 0.0);
    const double nn = sol.n.real();
    for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
      auto [v, e] = gauss8_refined(
          [&](double s) { return std::pow(s, nn - 1) / sol_.value(s); }, kn[i],
          kn[i + 1]);
      prefix_[i + 1] = prefix_[i] + v;
      seg_error_[i + 1] = e;
    }
  }

  /// I(r); throws beyond the last knot.
  double prefix(double r) const {
    const std::size_t i = sol_.segment_index(r);
    if (r == sol_.knots[i]) return prefix_[i];
    const double nn = sol_.n.real();
    return prefix_[i] + gauss8([&](double s) { return std::pow(s, nn - 1) / sol_.value(s); },
                               sol_.knots[i], r);
  }

  /// F(r, phi).
  double value(double r) const {
    return std::pow(sol_.n.real() * prefix(r), 1.0 / sol_.n.real());
  }

  /// Accumulated quadrature error estimate up to the last knot.
  double quadrature_error() const {
    double acc = 0.0;
    for (double e : seg_error_) acc += e;
    return acc;
  }

  const std::vector<double>& prefix_at_knots() const { return prefix_; }
  const std::vector<double>& segment_errors() const { return seg_error_; }

 private:
  const PiecewiseSolution& sol_;
  std::vector<double> prefix_;
  std::vector<double> seg_error_;
};

/// Fills sol.defect with the measured equation defect |phi' - F(r, phi)|,
/// sampled at each knot and at the midpoint of the segment ending there. The
/// midpoint sample matters: certificates cover the interpolant, and between
/// knots the interpolation error contributes to the true defect.
inline void measure_defect(PiecewiseSolution& sol) {
  DelayFunctional F(sol);
  sol.defect.assign(sol.size(), 0.0);
  for (std::size_t i = 0; i < sol.size(); ++i) {
    double d = std::abs(sol.phi_prime[i] - F.value(sol.knots[i]));
    if (i > 0) {
      const double mid = 0.5 * (sol.knots[i - 1] + sol.knots[i]);
      d = std::max(d, std::abs(sol.derivative(mid) - F.value(mid)));
    }
    sol.defect[i] = d;
  }
}

}  // namespace pma
