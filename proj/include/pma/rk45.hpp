#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace pma {

/// Raised when the adaptive controller cannot make progress. For the
/// problems in this library that indicates an interior singularity and is
/// itself a test failure, not a recoverable condition.
struct StepSizeUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdaptiveOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double initial_step = 1e-4;
  /// Hard cap on the step size as a function of the independent variable.
  /// Keeps accepted steps dense enough for the downstream interpolation.
  std::function<double(double)> max_step = [](double) { return 0.1; };
};

/*
 * Embedded Dormand-Prince 5(4) pair with FSAL. The observer is called once
 * at (x0, y0) and after every accepted step; it receives x, y and the
 * derivative at x so callers can store Hermite data without re-evaluating
 * the right-hand side.
 */
template <std::size_t N, class Rhs, class Observer>
void integrate_dopri5(Rhs&& f, std::array<double, N> y, double x0, double x1,
                      const AdaptiveOptions& opt, Observer&& observe) {
  using State = std::array<double, N>;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 5th-order minus embedded 4th-order weights (error estimator).
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(x1 > x0)) throw std::invalid_argument("integrate_dopri5: x1 must exceed x0");

  double x = x0;
  State k1 = f(x, y);
  observe(x, y, k1);

  double h = std::min(opt.initial_step, opt.max_step(x));
  const double h_floor_scale = 1e-14;

  while (x < x1) {
    h = std::min({h, opt.max_step(x), x1 - x});
    if (h < h_floor_scale * std::max(1.0, std::abs(x)))
      throw StepSizeUnderflow("integrate_dopri5: step size underflow at x = " +
                              std::to_string(x));

    State k2, k3, k4, k5, k6, k7, yt, y5;
    auto stage = [&](const State& base, auto... terms) {
      State out;
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        ((acc += terms.first * terms.second[i]), ...);
        out[i] = base[i] + h * acc;
      }
      return out;
    };
    using P = std::pair<double, const State&>;
    yt = stage(y, P{a21, k1});
    k2 = f(x + c2 * h, yt);
    yt = stage(y, P{a31, k1}, P{a32, k2});
    k3 = f(x + c3 * h, yt);
    yt = stage(y, P{a41, k1}, P{a42, k2}, P{a43, k3});
    k4 = f(x + c4 * h, yt);
    yt = stage(y, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
    k5 = f(x + c5 * h, yt);
    yt = stage(y, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
    k6 = f(x + h, yt);
    y5 = stage(y, P{b1, k1}, P{b3, k3}, P{b4, k4}, P{b5, k5}, P{b6, k6});
    k7 = f(x + h, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      x += h;
      y = y5;
      k1 = k7;  // FSAL
      observe(x, y, k1);
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= fac;
  }
}

}  // namespace pma
