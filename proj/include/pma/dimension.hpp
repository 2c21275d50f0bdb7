#pragma once

#include <stdexcept>
#include <string>

namespace pma {

/// Spatial dimension n of the equation -u_t det D^2 u = 1.
///
/// Every formula in the library is parameterized by n. Most of them need
/// n >= 2 (the profile ODE has a (n-1)-power of phi'); the refined decay
/// exponent needs n >= 4; the logarithmic regime is n = 1. Values above 64
/// are rejected: intermediate powers like (2n)^n would start losing all
/// meaning in binary64 long before that, and nothing of interest happens
/// at large n anyway.
class Dimension {
 public:
  explicit Dimension(int n) : n_(n) {
    if (n < 1 || n > 64)
      throw std::invalid_argument("dimension: n must be in [1, 64], got " +
                                  std::to_string(n));
  }

  int value() const { return n_; }
  double real() const { return static_cast<double>(n_); }

  /// The growth exponent alpha = 2n/(n+1) of the profile at infinity.
  double alpha() const { return 2.0 * n_ / (n_ + 1.0); }

  friend bool operator==(Dimension a, Dimension b) { return a.n_ == b.n_; }

 private:
  int n_;
};

/// Precondition helper: throws with a module-qualified message.
inline void require_dimension_at_least(Dimension n, int lo, const char* who) {
  if (n.value() < lo)
    throw std::invalid_argument(std::string(who) + ": dimension out of range (n >= " +
                                std::to_string(lo) + " required, got " +
                                std::to_string(n.value()) + ")");
}

}  // namespace pma
