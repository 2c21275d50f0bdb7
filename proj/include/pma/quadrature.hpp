#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace pma {

/// 8-point Gauss-Legendre rule on [a, b]. Exact through degree 15; on the
/// smooth integrands used here the truncation error is far below roundoff
/// for any segment the solvers produce.
template <class F>
double gauss8(F&& f, double a, double b) {
  static constexpr std::array<double, 4> x = {
      0.1834346424956498049394761, 0.5255324099163289858177391,
      0.7966664774136267395915539, 0.9602898564975362316835609};
  static constexpr std::array<double, 4> w = {
      0.3626837833783619829651505, 0.3137066458778872873379622,
      0.2223810344533744705443560, 0.1012285362903762591525314};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i)
    acc += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  return acc * half;
}

/// Gauss-Legendre with one level of bisection. Returns the refined value and
/// a Richardson-style error estimate |coarse - refined|.
template <class F>
std::pair<double, double> gauss8_refined(F&& f, double a, double b) {
  const double coarse = gauss8(f, a, b);
  const double mid = 0.5 * (a + b);
  const double fine = gauss8(f, a, mid) + gauss8(f, mid, b);
  return {fine, std::abs(fine - coarse)};
}

}  // namespace pma
