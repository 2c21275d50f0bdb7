#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pma/constants.hpp"
#include "pma/delay.hpp"
#include "pma/euler_polygon.hpp"
#include "pma/picard.hpp"
#include "pma/rk45.hpp"
#include "pma/solution.hpp"

namespace pma {

struct SolveConfig {
  Dimension n;
  double r_max = 1e4;
  double tol = 1e-9;       // target relative accuracy
  double r_switch = 1e-2;  // series -> adaptive integration handoff
  double r_log = 10.0;     // r-coordinates -> log-coordinates handoff
  int m_euler = 2000;      // segments of the cross-validation break line

  explicit SolveConfig(Dimension dim) : n(dim) {}

  void validate() const {
    require_dimension_at_least(n, 2, "radial_solver");
    if (!(r_max > 0)) throw std::invalid_argument("radial_solver: r_max must be positive");
    if (!(r_switch > 0) || (r_max > r_switch && !(r_switch < std::min(r_log, r_max))))
      throw std::invalid_argument("radial_solver: need 0 < r_switch < min(r_log, r_max)");
    if (!(tol > 1e-14 && tol < 1e-2))
      throw std::invalid_argument("radial_solver: tol must lie in (1e-14, 1e-2)");
    if (m_euler < 2) throw std::invalid_argument("radial_solver: m_euler must be >= 2");
  }
};

/// Series start at the origin, where the ODE right-hand side is a 0/0 form
/// with limit phi''(0) = 1:
///   phi(r) = 1 + r^2/2 - r^4/(8(n+2)) + (n^2+6n+14)/(48(n+2)^2(n+4)) r^6 + O(r^8).
inline std::pair<double, double> taylor_start(Dimension n, double r) {
  const double nn = n.real();
  const double a4 = -1.0 / (8 * (nn + 2));
  const double a6 = (nn * nn + 6 * nn + 14) / (48 * (nn + 2) * (nn + 2) * (nn + 4));
  const double r2 = r * r;
  return {1 + r2 * (0.5 + r2 * (a4 + r2 * a6)),
          r * (1 + r2 * (4 * a4 + r2 * 6 * a6))};
}

/// Magnitude of the r^6 series term, the truncation estimate for the start
/// region (the evaluated series carries that term, so its actual error is
/// one order better for r <= r_switch).
inline double taylor_truncation_bound(Dimension n, double r) {
  const double nn = n.real();
  const double a6 = (nn * nn + 6 * nn + 14) / (48 * (nn + 2) * (nn + 2) * (nn + 4));
  return a6 * std::pow(r, 6);
}

/*
 * Reference construction of the profile, in three regimes:
 *
 *   [0, r_switch]       series evaluation (the ODE is singular at r = 0)
 *   [r_switch, r_log]   embedded RK on phi'' = (r/phi')^{n-1}/phi
 *   [r_log, r_max]      embedded RK in t = log s, s = r^{2n/(n+1)}, on the
 *                       deviation q = Phi(s) - c_n s, p = dq/dt
 *
 * The log phase keeps the step count O(log r_max) and, because it advances
 * the deviation itself with the cancellation-free residual form
 *   (1+x)(1+y)^n - 1 = expm1(log1p(x) + n log1p(y)),
 * it resolves Phi - c_n s far below the roundoff of phi itself. Value and
 * derivative are continuous across both handoffs via the chain rule.
 */
inline PiecewiseSolution integrate_reference(const SolveConfig& cfg) {
  cfg.validate();
  const Dimension n = cfg.n;
  const double nn = n.real();
  const double alpha = n.alpha();
  const double cn = constants::leading_coefficient(n);
  const double rtol = cfg.tol / 100;

  PiecewiseSolution sol(n, MethodTag::reference);
  auto push = [&](double r, double p, double dp) {
    sol.knots.push_back(r);
    sol.phi.push_back(p);
    sol.phi_prime.push_back(dp);
  };

  // series region
  const double r_series_end = std::min(cfg.r_switch, cfg.r_max);
  push(0.0, 1.0, 0.0);
  for (int k = 6; k >= 0; --k) {
    const double r = r_series_end / (1 << k);
    auto [p, dp] = taylor_start(n, r);
    push(r, p, dp);
  }

  // phase A
  const double rA_end = std::min(cfg.r_log, cfg.r_max);
  if (cfg.r_max > cfg.r_switch) {
    AdaptiveOptions opt;
    opt.rtol = rtol;
    opt.atol = 1e-14;
    opt.initial_step = cfg.r_switch / 8;
    opt.max_step = [rs = cfg.r_switch](double r) { return std::max(0.02 * r, rs / 4); };
    auto rhs = [&](double r, const std::array<double, 2>& y) {
      return std::array<double, 2>{
          y[1], std::pow(r / y[1], nn - 1) / y[0]};
    };
    auto [p0, dp0] = taylor_start(n, cfg.r_switch);
    integrate_dopri5<2>(rhs, {p0, dp0}, cfg.r_switch, rA_end, opt,
                        [&](double r, const std::array<double, 2>& y,
                            const std::array<double, 2>&) {
                          if (r > sol.knots.back()) push(r, y[0], y[1]);
                        });
  }

  // phase B
  if (cfg.r_max > cfg.r_log) {
    const double s0 = std::pow(cfg.r_log, alpha);
    const double t0 = std::log(s0);
    const double t1 = alpha * std::log(cfg.r_max);
    const double phi0 = sol.phi.back(), dphi0 = sol.phi_prime.back();
    const double q0 = phi0 - cn * s0;
    const double p0 = s0 * (dphi0 / (alpha * std::pow(cfg.r_log, alpha - 1)) - cn);

    // re-add the handoff knot through the phase-B observer so the deviation
    // tail starts there
    sol.knots.pop_back();
    sol.phi.pop_back();
    sol.phi_prime.pop_back();
    sol.tail_begin = sol.knots.size();

    auto rhs = [&](double t, const std::array<double, 2>& y) {
      const double s = std::exp(t);
      const double x = y[0] / (cn * s), v = y[1] / (cn * s);
      const double E = std::expm1(std::log1p(x) + nn * std::log1p(v));
      const double s2psi2 =
          -((nn - 1) / (2 * nn)) * cn * s * E / ((1 + x) * std::pow(1 + v, nn - 1));
      return std::array<double, 2>{y[1], y[1] + s2psi2};
    };
    AdaptiveOptions opt;
    opt.rtol = rtol;
    opt.atol = rtol * 1e-2 * std::max(std::hypot(q0, p0), 1e-8 * cn * s0);
    opt.initial_step = 1e-3;
    opt.max_step = [](double) { return 0.02; };
    integrate_dopri5<2>(rhs, {q0, p0}, t0, t1, opt,
                        [&](double t, const std::array<double, 2>& y,
                            const std::array<double, 2>&) {
                          const double s = std::exp(t);
                          const double r = std::exp(t / alpha);
                          push(r, cn * s + y[0],
                               (cn + y[1] / s) * alpha * std::pow(r, alpha - 1));
                          sol.tail_log_s.push_back(t);
                          sol.tail_psi.push_back(y[0]);
                          sol.tail_psi_dot.push_back(y[1]);
                        });
    // exp(log r_max) can land one ulp short of r_max
    if (std::abs(sol.knots.back() - cfg.r_max) <= 1e-12 * cfg.r_max)
      sol.knots.back() = cfg.r_max;
  }

  measure_defect(sol);
  return sol;
}

/*
 * Sup-distance of two approximate profiles on [0, R] against the Gronwall
 * envelope. The Lipschitz bound of the delay functional under
 * 1 <= phi <= 1 + R^2/2 is
 *
 *   |F(r,phi) - F(r,psi)| <= C r ||phi - psi||,  C = (1 + R^2/2)^{(n-1)/n} / n,
 *
 * so two solutions whose measured equation defects sum to eps can drift at
 * most eps R e^{C R r} apart. admissible means the observed distance stays
 * inside that envelope.
 */
inline GronwallCertificate cross_validate(const PiecewiseSolution& a,
                                          const PiecewiseSolution& b, double R) {
  if (a.cover() < R || b.cover() < R)
    throw std::invalid_argument("cross_validate: coverage mismatch, a solution ends before R");
  if (!(a.n == b.n))
    throw std::invalid_argument("cross_validate: dimension mismatch");

  const double nn = a.n.real();
  GronwallCertificate cert;
  cert.R = R;
  cert.growth_constant = std::pow(1 + 0.5 * R * R, (nn - 1) / nn) / nn;

  double sup = 0.0, phi_max = 1.0;
  auto probe = [&](double r) {
    const double va = a.value(r), vb = b.value(r);
    sup = std::max(sup, std::abs(va - vb));
    phi_max = std::max({phi_max, va, vb});
  };
  for (double r : a.knots)
    if (r <= R) probe(r);
  for (double r : b.knots)
    if (r <= R) probe(r);
  const int dense = 2048;
  for (int i = 0; i <= dense; ++i) probe(R * i / dense);

  cert.sup_distance = sup;
  cert.defect_budget = a.max_defect(R) + b.max_defect(R);
  const double growth = cert.growth_constant * R * R;
  const double envelope =
      growth > 700 ? std::numeric_limits<double>::infinity()
                   : cert.defect_budget * R * std::exp(growth);
  cert.admissible = sup <= envelope + 1e-12 * phi_max;
  return cert;
}

/// Full pipeline: reference construction, cross-validated on [0, min(r_max, 10)]
/// against a Picard-refined Euler break line. Throws if the certificate is
/// not admissible; otherwise the certificate is attached to the result.
inline PiecewiseSolution solve(const SolveConfig& cfg) {
  cfg.validate();
  PiecewiseSolution ref = integrate_reference(cfg);

  const double R = std::min(cfg.r_max, 10.0);
  PiecewiseSolution euler = euler_break_line(cfg.n, R, cfg.m_euler);
  PiecewiseSolution refined = picard_refine(euler);
  GronwallCertificate cert = cross_validate(ref, refined, R);
  if (!cert.admissible)
    throw std::runtime_error(
        "radial_solver: certification failure, reference vs Picard-refined Euler "
        "line distance exceeds the Gronwall envelope");
  ref.certificate = cert;
  return ref;
}

}  // namespace pma
