#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pma/constants.hpp"
#include "pma/solution.hpp"

namespace pma {

/*
 * Tail analysis of a computed profile against the limits
 *
 *   phi / r^{2n/(n+1)}                        -> c_n
 *   phi' / ( 2n/(n+1) r^{(n-1)/(n+1)} )       -> c_n
 *   phi'' / ( 2n(n-1)/(n+1)^2 r^{-2/(n+1)} )  -> c_n
 *
 * and of the deviation Psi(s) = Phi(s) - c_n s in the intermediate variable
 * s = r^{2n/(n+1)}, whose linearization
 *
 *   s^2 Psi'' + ((n-1)/2 + R1) s Psi' + ((n-1)/(2n) + R2) Psi = 0
 *
 * has the limiting characteristic polynomial lambda^2 + (n-3)/2 lambda
 * + (n-1)/(2n). Wherever the solution carries deviation tail data the traces
 * are assembled from it directly; recomputing phi - c_n r^{2n/(n+1)} from the
 * interpolant would cancel to roundoff long before the interesting regime.
 */

struct RatioTrace {
  explicit RatioTrace(Dimension dim) : n(dim) {}
  Dimension n;
  double c_n = 0;
  std::vector<double> radii;
  std::vector<double> ratio0, ratio1, ratio2;
  /// Relative deviations ratio_k / c_n - 1, cancellation-free in the tail.
  std::vector<double> dev0, dev1, dev2;
};

namespace detail {

/// s^2 Psi'' from (q, p) = (Psi, dPsi/d log s) via the transformed equation.
inline double s2_psi_second(Dimension n, double cn, double log_s, double q, double p) {
  const double nn = n.real();
  const double s = std::exp(log_s);
  const double x = q / (cn * s), y = p / (cn * s);
  const double E = std::expm1(std::log1p(x) + nn * std::log1p(y));
  return -((nn - 1) / (2 * nn)) * cn * s * E / ((1 + x) * std::pow(1 + y, nn - 1));
}

inline double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b *= static_cast<double>(n - k + i) / i;
  return b;
}

}  // namespace detail

/// Geometric sampling of the three ratios on [max(1, cover/10^6), cover],
/// snapped to knots so no interpolation noise enters. phi'' comes from the
/// ODE identity, never from differencing.
inline RatioTrace ratio_trace(const PiecewiseSolution& sol, int samples) {
  if (sol.cover() < 100.0)
    throw std::invalid_argument(
        "asymptotics.ratio_trace: insufficient range, need two decades of radius");
  if (samples < 2) throw std::invalid_argument("asymptotics.ratio_trace: samples >= 2");
  require_dimension_at_least(sol.n, 2, "asymptotics.ratio_trace");

  const double cn = constants::leading_coefficient(sol.n);
  const double alpha = sol.n.alpha();
  const double r_hi = sol.cover();
  const double r_lo = std::max(1.0, r_hi * 1e-6);

  RatioTrace tr{sol.n};
  tr.c_n = cn;
  std::size_t prev_idx = static_cast<std::size_t>(-1);
  for (int i = 0; i < samples; ++i) {
    const double target =
        r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples - 1));
    std::size_t k = sol.segment_index(target);
    if (k + 1 < sol.size() &&
        sol.knots[k + 1] - target < target - sol.knots[k])
      ++k;
    if (k == prev_idx) continue;
    prev_idx = k;
    const double r = sol.knots[k];
    if (r <= 0) continue;

    double d0, d1, d2;
    if (sol.has_tail() && k >= sol.tail_begin) {
      const std::size_t j = k - sol.tail_begin;
      const double t = sol.tail_log_s[j], s = std::exp(t);
      const double q = sol.tail_psi[j], p = sol.tail_psi_dot[j];
      const double s2pp = detail::s2_psi_second(sol.n, cn, t, q, p);
      d0 = q / (cn * s);
      d1 = p / (cn * s);
      d2 = (p / s + (alpha / (alpha - 1)) * s2pp / s) / cn;
    } else {
      const double phi2 = PiecewiseSolution::second_from_ode(sol.n, r, sol.phi[k],
                                                             sol.phi_prime[k]);
      d0 = sol.phi[k] / std::pow(r, alpha) / cn - 1;
      d1 = sol.phi_prime[k] / (alpha * std::pow(r, alpha - 1)) / cn - 1;
      d2 = phi2 / (alpha * (alpha - 1) * std::pow(r, alpha - 2)) / cn - 1;
    }
    tr.radii.push_back(r);
    tr.dev0.push_back(d0);
    tr.dev1.push_back(d1);
    tr.dev2.push_back(d2);
    tr.ratio0.push_back(cn * (1 + d0));
    tr.ratio1.push_back(cn * (1 + d1));
    tr.ratio2.push_back(cn * (1 + d2));
  }
  return tr;
}

struct PincerEstimate {
  double k_bar = 0;    // max of ratio0 over the trailing window
  double k_under = 0;  // min
  bool holds = false;  // both pincer inequalities within tolerance
};

/// Finite-window proxies for limsup/liminf of phi/r^{2n/(n+1)} and the
/// two-sided pincer test K_under >= T(K_bar), K_bar <= T(K_under) with
/// T(K) = K^{-1/n} ((n+1)/(n-1))^{1/n} (n+1)/(2n). The inequalities are
/// exact-limit statements; the windowed max/min carry an estimator error of
/// the order of their own spread, so the spread is added to the tolerance.
inline PincerEstimate pincer_estimate(const RatioTrace& tr, double tail_fraction,
                                      double rel_tol = 1e-8) {
  if (!(tail_fraction > 0 && tail_fraction < 1))
    throw std::invalid_argument("asymptotics.pincer_estimate: tail_fraction in (0,1)");
  const std::size_t m = tr.ratio0.size();
  if (m < 2) throw std::invalid_argument("asymptotics.pincer_estimate: empty trace");
  const std::size_t begin = static_cast<std::size_t>((1 - tail_fraction) * m);

  PincerEstimate est;
  est.k_bar = -std::numeric_limits<double>::infinity();
  est.k_under = std::numeric_limits<double>::infinity();
  for (std::size_t i = std::min(begin, m - 1); i < m; ++i) {
    est.k_bar = std::max(est.k_bar, tr.ratio0[i]);
    est.k_under = std::min(est.k_under, tr.ratio0[i]);
  }
  const double nn = tr.n.real();
  auto T = [&](double K) {
    return std::pow(K, -1 / nn) * std::pow((nn + 1) / (nn - 1), 1 / nn) * (nn + 1) /
           (2 * nn);
  };
  const double spread = (est.k_bar - est.k_under) / est.k_under;
  est.holds = est.k_under >= T(est.k_bar) * (1 - rel_tol - spread) &&
              est.k_bar <= T(est.k_under) * (1 + rel_tol + spread);
  return est;
}

struct DeviationTrace {
  explicit DeviationTrace(Dimension dim) : n(dim) {}
  Dimension n;
  double c_n = 0;
  std::vector<double> log_s;
  std::vector<double> psi;         // Psi(s)
  std::vector<double> psi_prime;   // Psi'(s)
  std::vector<double> psi_second;  // Psi''(s)
  std::vector<double> R1, R2;      // linearization remainders
};

/// Linearization remainders at one point, from their defining expansions:
///   R2 = s Psi'' / c_n,
///   R1 = (n-1) c_n^{-2} (Psi + c_n s) Psi'' + (n-1)/2 c_n^{-1} Psi/s
///        + c_n^{-n} sum_{k=2}^{n} d_{n,k} (Psi')^{k-1},
/// where d_{n,k} collects the binomial coefficients of (Psi' + c_n)^n and
/// (Psi' + c_n)^{n-1}. With these,
///   s^2 Psi'' + ((n-1)/2 + R1) s Psi' + ((n-1)/(2n) + R2) Psi
/// equals s c_n^{-n} times the transformed-equation residual for arbitrary
/// deviation data, hence vanishes identically along an exact solution.
inline std::pair<double, double> deviation_remainders(Dimension dim, double cn,
                                                      double s, double psi,
                                                      double psi_prime,
                                                      double psi_second) {
  const int n = dim.value();
  const double nn = dim.real();
  double series = 0.0;  // sum_{k>=2} d_{n,k} (Psi')^{k-1}
  for (int k = 2; k <= n; ++k) {
    double d = (nn - 1) / (2 * nn) * (psi / s + cn) * detail::binom(n, k) *
               std::pow(cn, nn - k);
    if (k <= n - 1)
      d += (psi + cn * s) * psi_second * detail::binom(n - 1, k) *
           std::pow(cn, nn - 1 - k);
    series += d * std::pow(psi_prime, k - 1);
  }
  const double r1 = (nn - 1) / (cn * cn) * (psi + cn * s) * psi_second +
                    (nn - 1) / 2 * (psi / s) / cn + series / std::pow(cn, nn);
  const double r2 = s * psi_second / cn;
  return {r1, r2};
}

inline DeviationTrace deviation_trace(const PiecewiseSolution& sol) {
  require_dimension_at_least(sol.n, 2, "asymptotics.deviation_trace");
  if (sol.cover() < 1e4 || !sol.has_tail())
    throw std::invalid_argument(
        "asymptotics.deviation_trace: insufficient range, need tail data up to r >= 1e4");

  const double cn = constants::leading_coefficient(sol.n);
  DeviationTrace tr{sol.n};
  tr.c_n = cn;
  const std::size_t m = sol.tail_log_s.size();
  tr.log_s.resize(m);
  tr.psi.resize(m);
  tr.psi_prime.resize(m);
  tr.psi_second.resize(m);
  tr.R1.resize(m);
  tr.R2.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = sol.tail_log_s[i], s = std::exp(t);
    const double q = sol.tail_psi[i], p = sol.tail_psi_dot[i];
    const double s2pp = detail::s2_psi_second(sol.n, cn, t, q, p);
    const double psip = p / s, psipp = s2pp / (s * s);
    tr.log_s[i] = t;
    tr.psi[i] = q;
    tr.psi_prime[i] = psip;
    tr.psi_second[i] = psipp;
    auto [r1, r2] = deviation_remainders(sol.n, cn, s, q, psip, psipp);
    tr.R1[i] = r1;
    tr.R2[i] = r2;
  }
  return tr;
}

/// Residual of the linearized deviation equation along the trace; vanishes
/// identically (up to roundoff) for an exact solution.
inline std::vector<double> linearized_residual(const DeviationTrace& tr) {
  const double nn = tr.n.real();
  std::vector<double> out(tr.log_s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double s = std::exp(tr.log_s[i]);
    out[i] = s * s * tr.psi_second[i] +
             ((nn - 1) / 2 + tr.R1[i]) * s * tr.psi_prime[i] +
             ((nn - 1) / (2 * nn) + tr.R2[i]) * tr.psi[i];
  }
  return out;
}

struct DecayFit {
  double exponent = 0;      // envelope rate of Psi in log s
  double frequency = 0;     // oscillation frequency, 0 for real roots
  double amplitude = 0;     // max |Psi| over the window
  double fit_residual = 0;  // RMS model error over the window / amplitude
  double window_lo = 0, window_hi = 0;  // in log s
};

namespace detail {

struct Peak {
  double t, log_amp;
};

/// Local maxima of |v| with parabolic sub-sample refinement on (t, log |v|).
inline std::vector<Peak> abs_peaks(const std::vector<double>& t,
                                   const std::vector<double>& v) {
  std::vector<Peak> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double a0 = std::abs(v[i - 1]), a1 = std::abs(v[i]), a2 = std::abs(v[i + 1]);
    if (a1 >= a0 && a1 >= a2 && a1 > 0 && a0 > 0 && a2 > 0) {
      const double l0 = std::log(a0), l1 = std::log(a1), l2 = std::log(a2);
      const double den = l0 - 2 * l1 + l2;
      double dt = 0, dl = 0;
      if (den < 0) {
        dt = 0.5 * (l0 - l2) / den;
        dl = -0.25 * (l0 - l2) * dt;
      }
      out.push_back({t[i] + dt * (t[i + 1] - t[i]), l1 + dl});
      ++i;
    }
  }
  return out;
}

/// Sign-change times of v by linear interpolation.
inline std::vector<double> zero_crossings(const std::vector<double>& t,
                                          const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] != 0 && v[i + 1] != 0 && std::signbit(v[i]) != std::signbit(v[i + 1]))
      out.push_back(t[i] - v[i] * (t[i + 1] - t[i]) / (v[i + 1] - v[i]));
  return out;
}

inline std::pair<double, double> least_squares_line(const std::vector<double>& x,
                                                    const std::vector<double>& y) {
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / x.size(), my = sy / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace detail

/*
 * Decay-rate fit of the deviation over a log-s window.
 *
 * Real roots (n >= 6): least-squares slope of log |Psi| against log s.
 *
 * Complex roots (n in {4,5}): the deviation oscillates, so a plain
 * log-linear fit biases the rate. The envelope rate is fit through the
 * local maxima of |Psi| and of |dPsi/d log s| (both decay at the same
 * envelope rate, and their peaks interleave, which matters when the window
 * holds barely one period): shared slope, one intercept per family. The
 * frequency comes from same-family zero-crossing spacings, each equal to
 * pi/omega.
 */
inline DecayFit decay_fit(const DeviationTrace& tr, Dimension n,
                          double window_lo = std::numeric_limits<double>::quiet_NaN(),
                          double window_hi = std::numeric_limits<double>::quiet_NaN()) {
  require_dimension_at_least(n, 4, "asymptotics.decay_fit (rate undefined for n < 4)");
  // transient cutoff: the linearization is asymptotic, early samples carry
  // the ignored higher-order terms
  const double t_min_default = n.alpha() * std::log(100.0);
  if (std::isnan(window_lo)) window_lo = t_min_default;
  if (std::isnan(window_hi)) window_hi = tr.log_s.empty() ? 0.0 : tr.log_s.back();
  if (!(window_hi - window_lo >= 3.0))
    throw std::invalid_argument(
        "asymptotics.decay_fit: window must span at least 3 units of log s");

  std::vector<double> t, q, p;
  for (std::size_t i = 0; i < tr.log_s.size(); ++i) {
    if (tr.log_s[i] < window_lo || tr.log_s[i] > window_hi) continue;
    t.push_back(tr.log_s[i]);
    q.push_back(tr.psi[i]);
    p.push_back(tr.psi_prime[i] * std::exp(tr.log_s[i]));
  }
  if (t.size() < 16)
    throw std::invalid_argument("asymptotics.decay_fit: too few samples in window");

  DecayFit fit;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  for (double v : q) fit.amplitude = std::max(fit.amplitude, std::abs(v));

  const auto roots = constants::characteristic_roots(n);
  const bool complex_roots = roots.first.imag() != 0.0;

  if (!complex_roots) {
    std::vector<double> tt, ll;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (std::abs(q[i]) > 0) {
        tt.push_back(t[i]);
        ll.push_back(std::log(std::abs(q[i])));
      }
    auto [icept, slope] = detail::least_squares_line(tt, ll);
    fit.exponent = slope;
    fit.frequency = 0;
    double rss = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double model = std::copysign(std::exp(icept + slope * t[i]), q[i]);
      rss += (q[i] - model) * (q[i] - model);
    }
    fit.fit_residual = std::sqrt(rss / t.size()) / fit.amplitude;
    return fit;
  }

  // frequency from pooled same-family crossing spacings
  std::vector<double> spacings;
  for (const auto& family : {detail::zero_crossings(t, q), detail::zero_crossings(t, p)})
    for (std::size_t i = 0; i + 1 < family.size(); ++i)
      spacings.push_back(family[i + 1] - family[i]);
  if (spacings.empty())
    throw std::runtime_error(
        "asymptotics.decay_fit: too few oscillations in window to estimate the frequency");
  double mean_sp = 0;
  for (double s : spacings) mean_sp += s;
  mean_sp /= spacings.size();
  fit.frequency = std::numbers::pi / mean_sp;

  // envelope rate through peak families: shared slope, per-family intercept
  const auto pk_q = detail::abs_peaks(t, q);
  const auto pk_p = detail::abs_peaks(t, p);
  double num = 0, den = 0;
  for (const auto* fam : {&pk_q, &pk_p}) {
    if (fam->size() < 2) continue;
    double mt = 0, ml = 0;
    for (const auto& pk : *fam) mt += pk.t, ml += pk.log_amp;
    mt /= fam->size();
    ml /= fam->size();
    for (const auto& pk : *fam) {
      num += (pk.t - mt) * (pk.log_amp - ml);
      den += (pk.t - mt) * (pk.t - mt);
    }
  }
  if (den == 0)
    throw std::runtime_error(
        "asymptotics.decay_fit: too few oscillations in window to fit the envelope");
  fit.exponent = num / den;

  // residual of the reconstructed mode e^{kt}(A cos wt + B sin wt)
  double caa = 0, cab = 0, cbb = 0, cay = 0, cby = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(fit.exponent * t[i]);
    const double c = e * std::cos(fit.frequency * t[i]);
    const double s = e * std::sin(fit.frequency * t[i]);
    caa += c * c;
    cab += c * s;
    cbb += s * s;
    cay += c * q[i];
    cby += s * q[i];
  }
  const double det = caa * cbb - cab * cab;
  const double A = (cay * cbb - cby * cab) / det;
  const double B = (caa * cby - cab * cay) / det;
  double rss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(fit.exponent * t[i]);
    const double model = e * (A * std::cos(fit.frequency * t[i]) +
                              B * std::sin(fit.frequency * t[i]));
    rss += (q[i] - model) * (q[i] - model);
  }
  fit.fit_residual = std::sqrt(rss / t.size()) / fit.amplitude;
  return fit;
}

/// sup over the tail (r >= 100) of |phi(r) - c_n r^{2n/(n+1)}| r^{K_n}; the
/// implied constant of the refined decay estimate. Finite for n >= 4.
inline double refined_error_check(const PiecewiseSolution& sol, Dimension n) {
  require_dimension_at_least(n, 4, "asymptotics.refined_error_check (rate undefined for n < 4)");
  if (!sol.has_tail())
    throw std::invalid_argument("asymptotics.refined_error_check: no tail data");
  const double kn = constants::deviation_exponent(n);
  const double t_min = n.alpha() * std::log(100.0);
  double sup = 0;
  for (std::size_t i = 0; i < sol.tail_log_s.size(); ++i) {
    if (sol.tail_log_s[i] < t_min) continue;
    // r^{K_n} = s^{-k_n}
    sup = std::max(sup, std::abs(sol.tail_psi[i]) * std::exp(-kn * sol.tail_log_s[i]));
  }
  return sup;
}

/// Block-maxima envelope test on log-spaced blocks of [r_lo, r_hi]: each
/// block's max must not exceed the previous block's by more than the slack
/// factor. Used for the convergence statements that carry no rate.
inline bool nonincreasing_envelope(const std::vector<double>& radii,
                                   const std::vector<double>& values, double r_lo,
                                   double r_hi, int blocks, double slack = 1.05) {
  if (blocks < 2) throw std::invalid_argument("nonincreasing_envelope: blocks >= 2");
  std::vector<double> bmax(blocks, -1.0);
  const double w = std::log(r_hi / r_lo) / blocks;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < r_lo || radii[i] > r_hi) continue;
    int b = std::min(blocks - 1,
                     static_cast<int>(std::log(radii[i] / r_lo) / w));
    bmax[b] = std::max(bmax[b], std::abs(values[i]));
  }
  double prev = -1.0;
  int seen = 0;
  for (int b = 0; b < blocks; ++b) {
    if (bmax[b] < 0) continue;  // empty block
    ++seen;
    if (prev >= 0 && bmax[b] > prev * slack) return false;
    prev = bmax[b];
  }
  return seen >= 2;  // an envelope statement needs at least two blocks of data
}

}  // namespace pma
