#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pma/dimension.hpp"

namespace pma {

enum class MethodTag { euler, picard, reference };

inline const char* to_string(MethodTag t) {
  switch (t) {
    case MethodTag::euler: return "euler";
    case MethodTag::picard: return "picard";
    default: return "reference";
  }
}

/// Cubic Hermite value on one segment given endpoint values and derivatives.
inline double hermite_value(double r0, double r1, double p0, double p1, double d0,
                            double d1, double r) {
  const double h = r1 - r0;
  const double t = (r - r0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return p0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + t) +
         p1 * (-2 * t3 + 3 * t2) + h * d1 * (t3 - t2);
}

inline double hermite_derivative(double r0, double r1, double p0, double p1, double d0,
                                 double d1, double r) {
  const double h = r1 - r0;
  const double t = (r - r0) / h;
  const double t2 = t * t;
  return (p0 * (6 * t2 - 6 * t) + h * d0 * (3 * t2 - 4 * t + 1) + p1 * (6 * t - 6 * t2) +
          h * d1 * (3 * t2 - 2 * t)) /
         h;
}

/// A-posteriori closeness certificate for two approximate profiles on [0, R]:
/// their sup-distance must be explainable by the recorded equation defects
/// amplified by the Gronwall factor e^{C R r}, with C the Lipschitz constant
/// of the delay functional under the a-priori bound 1 <= phi <= 1 + R^2/2.
struct GronwallCertificate {
  double R = 0;
  double sup_distance = 0;
  double growth_constant = 0;  // C
  double defect_budget = 0;    // sum of the two methods' measured sup defects
  bool admissible = false;
};

/*
 * Sampled radial profile: values and first derivatives at increasing knots
 * starting at r = 0, evaluable anywhere on [0, cover()] by cubic Hermite
 * interpolation. The second derivative is always reconstructed from the ODE
 *
 *   phi'' = r^{n-1} / (phi (phi')^{n-1}) = (r/phi')^{n-1} / phi,
 *
 * never by differencing; at r = 0 the limit is phi(0)^{-1/n}.
 *
 * Solutions produced past the log-coordinate handoff additionally carry the
 * deviation tail (log s, Psi, dPsi/d log s) aligned with the knots from
 * tail_begin on. The deviation Psi = Phi(s) - c_n s is integrated directly
 * in those coordinates, so the tail arrays hold it to full relative accuracy
 * where recomputing phi - c_n r^{2n/(n+1)} in binary64 would cancel to noise.
 */
struct PiecewiseSolution {
  Dimension n;
  MethodTag method = MethodTag::reference;
  std::vector<double> knots;
  std::vector<double> phi;
  std::vector<double> phi_prime;
  /// Measured equation defect |phi'(r) - F(r, phi)| per knot (method-specific).
  std::vector<double> defect;

  std::size_t tail_begin = 0;        // knots.size() when no tail data
  std::vector<double> tail_log_s;    // log s at knots[tail_begin + i]
  std::vector<double> tail_psi;      // Psi
  std::vector<double> tail_psi_dot;  // dPsi/d(log s) = s Psi'

  std::optional<GronwallCertificate> certificate;

  PiecewiseSolution(Dimension dim, MethodTag tag) : n(dim), method(tag) {}

  std::size_t size() const { return knots.size(); }
  double cover() const { return knots.empty() ? 0.0 : knots.back(); }
  bool has_tail() const { return !tail_log_s.empty(); }

  /// Index i such that r lies in [knots[i], knots[i+1]].
  std::size_t segment_index(double r) const {
    if (r < 0 || r > cover() || knots.size() < 2)
      throw std::out_of_range("solution: domain exceeded at r = " + std::to_string(r));
    auto it = std::upper_bound(knots.begin(), knots.end(), r);
    std::size_t i = static_cast<std::size_t>(it - knots.begin());
    if (i > 0) --i;
    return std::min(i, knots.size() - 2);
  }

  double value(double r) const {
    const std::size_t i = segment_index(r);
    return hermite_value(knots[i], knots[i + 1], phi[i], phi[i + 1], phi_prime[i],
                         phi_prime[i + 1], r);
  }

  double derivative(double r) const {
    const std::size_t i = segment_index(r);
    return hermite_derivative(knots[i], knots[i + 1], phi[i], phi[i + 1], phi_prime[i],
                              phi_prime[i + 1], r);
  }

  /// ODE-reconstructed second derivative at arbitrary r.
  double second_derivative(double r) const {
    const double p = value(r), dp = derivative(r);
    return second_from_ode(n, r, p, dp);
  }

  /// Same reconstruction from explicit (r, phi, phi') values.
  static double second_from_ode(Dimension n, double r, double phi_v, double dphi_v) {
    if (r == 0.0) return std::pow(phi_v, -1.0 / n.real());
    return std::pow(r / dphi_v, n.real() - 1) / phi_v;
  }

  /// Sup of the recorded defect over knots in [0, upto].
  double max_defect(double upto) const {
    double m = 0.0;
    for (std::size_t i = 0; i < knots.size() && knots[i] <= upto; ++i)
      m = std::max(m, defect[i]);
    return m;
  }
};

/// A-priori bound check at the knots: 1 <= phi <= 1 + r^2/2 and
/// 0 <= phi' <= r, with a small relative slack for computed solutions.
inline bool apriori_bounds_check(const PiecewiseSolution& sol, double rel_slack = 0.0) {
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double r = sol.knots[i];
    const double hi = 1 + 0.5 * r * r;
    const double s_lo = rel_slack, s_hi = rel_slack * hi, s_r = rel_slack * std::max(r, 1.0);
    if (sol.phi[i] < 1 - s_lo || sol.phi[i] > hi + s_hi) return false;
    if (sol.phi_prime[i] < -s_r || sol.phi_prime[i] > r + s_r) return false;
  }
  return true;
}

}  // namespace pma
