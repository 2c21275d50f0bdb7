#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracle_constants.hpp"
#include "pma/constants.hpp"

using namespace pma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
Dimension D(int n) { return Dimension(n); }
}  // namespace

TEST_CASE("leading coefficient c_n") {
  // frozen 40-digit evaluations of (n+1)/((2n)^{n/(n+1)} (n-1)^{1/(n+1)})
  CHECK_THAT(constants::leading_coefficient(D(2)),
             WithinRel(1.1905507889761496061, 1e-15));
  CHECK_THAT(constants::leading_coefficient(D(4)),
             WithinRel(0.76045542736650719911, 1e-15));

  SECTION("defining identity across n") {
    for (int n = 2; n <= 12; ++n) {
      const double nn = n;
      const double cn = constants::leading_coefficient(D(n));
      const double prod = cn * std::pow(2 * nn, nn / (nn + 1)) *
                          std::pow(nn - 1, 1 / (nn + 1)) / (nn + 1);
      CHECK_THAT(prod, WithinAbs(1.0, 1e-14));
    }
  }
  SECTION("12-digit agreement with the extended-precision oracle") {
    for (int n = 2; n <= 12; ++n)
      CHECK_THAT(constants::leading_coefficient(D(n)),
                 WithinRel(static_cast<double>(oracle::c_n(n)), 1e-12));
  }
  CHECK_THROWS_AS(constants::leading_coefficient(D(1)), std::invalid_argument);
}

TEST_CASE("refined exponent K_n") {
  CHECK(constants::refined_exponent(D(4)) == 4.0 * 1.0 / (2 * 5.0));  // exactly 2/5
  CHECK(constants::refined_exponent(D(5)) == 5.0 * 2.0 / (2 * 6.0));  // exactly 5/6
  CHECK_THAT(constants::refined_exponent(D(6)),
             WithinRel(0.63106061500630857049, 1e-15));

  // the n = 2,3 rate is an open problem; no extrapolation
  CHECK_THROWS_AS(constants::refined_exponent(D(2)), std::invalid_argument);
  CHECK_THROWS_AS(constants::refined_exponent(D(3)), std::invalid_argument);

  SECTION("oracle agreement") {
    for (int n = 4; n <= 12; ++n)
      CHECK_THAT(constants::refined_exponent(D(n)),
                 WithinRel(static_cast<double>(oracle::K_n(n)), 1e-12));
  }
}

TEST_CASE("characteristic roots") {
  SECTION("complex pair at n = 4") {
    auto [lp, lm] = constants::characteristic_roots(D(4));
    CHECK_THAT(lp.real(), WithinAbs(-0.25, 1e-15));
    CHECK_THAT(lp.imag(), WithinRel(0.5590169943749474241, 1e-15));
    CHECK(lm == std::conj(lp));
  }
  SECTION("real pair at n = 6") {
    auto [lp, lm] = constants::characteristic_roots(D(6));
    CHECK_THAT(lp.real(), WithinRel(-0.36811869208701333278, 1e-14));
    CHECK_THAT(lm.real(), WithinRel(-1.1318813079129866672, 1e-14));
    CHECK(lp.imag() == 0.0);
  }
  SECTION("Vieta and polynomial residual for every n") {
    for (int n = 2; n <= 12; ++n) {
      const double nn = n;
      auto [lp, lm] = constants::characteristic_roots(D(n));
      CHECK_THAT((lp + lm).real(), WithinAbs(-(nn - 3) / 2, 1e-14));
      CHECK_THAT((lp * lm).real(), WithinAbs((nn - 1) / (2 * nn), 1e-14));
      for (auto l : {lp, lm}) {
        const auto res = l * l + (nn - 3) / 2 * l + (nn - 1) / (2 * nn);
        CHECK(std::abs(res) <= 1e-14);
      }
    }
  }
}

TEST_CASE("cross-formula consistency of the decay rates") {
  // K_n from its closed form equals -(2n/(n+1)) Re(lambda_plus)
  for (int n = 4; n <= 12; ++n) {
    const double from_root =
        -D(n).alpha() * constants::characteristic_roots(D(n)).first.real();
    CHECK_THAT(constants::refined_exponent(D(n)), WithinAbs(from_root, 1e-12));
    CHECK_THAT(constants::deviation_exponent(D(n)),
               WithinAbs(constants::characteristic_roots(D(n)).first.real(), 1e-15));
  }
  // ... and the same algebra holds for the n = 2,3 branch of the formula,
  // where the would-be rate is nonpositive (no decay statement exists there)
  for (int n = 2; n <= 3; ++n) {
    const double nn = n;
    const double branch = nn * (nn - 3) / (2 * (nn + 1));
    const double from_root =
        -D(n).alpha() * constants::characteristic_roots(D(n)).first.real();
    CHECK_THAT(branch, WithinAbs(from_root, 1e-12));
    CHECK(branch <= 0.0);
  }
}

TEST_CASE("sandwich constants") {
  auto [c3_2, c4_2] = constants::sandwich_constants(D(2));
  CHECK_THAT(c3_2, WithinRel(0.13228342099734995623, 1e-14));
  CHECK_THAT(c4_2, WithinRel(3.5716523669284488182, 1e-14));

  SECTION("C3 equals the iteration limit p1^{n^2/(n^2-1)}") {
    for (int n = 2; n <= 8; ++n) {
      const double nn = n;
      const double p1 = constants::iteration_seed_coefficient(D(n));
      auto [c3, c4] = constants::sandwich_constants(D(n));
      CHECK_THAT(c3, WithinRel(std::pow(p1, nn * nn / (nn * nn - 1)), 1e-13));
      CHECK(0 < c3);
      CHECK(c3 <= constants::leading_coefficient(D(n)));
      CHECK(constants::leading_coefficient(D(n)) <= c4 + 1);
    }
  }
  SECTION("oracle agreement") {
    for (int n = 2; n <= 8; ++n) {
      auto [c3, c4] = constants::sandwich_constants(D(n));
      CHECK_THAT(c3, WithinRel(static_cast<double>(oracle::C3(n)), 1e-12));
      CHECK_THAT(c4, WithinRel(static_cast<double>(oracle::C4(n)), 1e-12));
    }
  }
}

TEST_CASE("iteration sequence") {
  SECTION("exact low-order values") {
    auto s2 = constants::iteration_sequence(D(2), 2);
    CHECK_THAT(s2[0].k_m, WithinAbs(1.0, 1e-15));  // (2n-2)/n at n = 2
    auto s3 = constants::iteration_sequence(D(3), 2);
    CHECK_THAT(s3[1].k_m, WithinAbs(40.0 / 27.0, 1e-15));  // 4/3 + (4/3)/9
  }
  SECTION("monotone exponents, positive coefficients, geometric tail") {
    for (int n = 2; n <= 8; ++n) {
      const double limit = D(n).alpha();
      auto seq = constants::iteration_sequence(D(n), 30);
      double prev = 0.0;
      for (const auto& st : seq) {
        // strictly increasing until the limit saturates in binary64
        if (limit - prev > 1e-14)
          CHECK(st.k_m > prev);
        else
          CHECK(st.k_m >= prev);
        CHECK(st.k_m < limit + 1e-15);
        CHECK(st.p_m > 0);
        prev = st.k_m;
      }
      const int M = static_cast<int>(seq.size());
      CHECK(limit - seq.back().k_m <= limit * std::pow(n, -2.0 * M) * (1 + 1e-12));
      CHECK_THAT(seq.back().p_m,
                 WithinAbs(constants::sandwich_constants(D(n)).first, 1e-12));
    }
  }
}

TEST_CASE("time factor") {
  SECTION("exact values") {
    auto [w1, wp1] = constants::time_factor(-1.0 / 3, 0.0, D(2));
    CHECK_THAT(w1, WithinRel(1.0, 1e-15));
    CHECK_THAT(wp1, WithinRel(-1.0, 1e-14));
    auto [w2, wp2] = constants::time_factor(0.0, 1.0, D(3));
    CHECK(w2 == 1.0);
    CHECK(wp2 == -1.0);
    auto [w3, wp3] = constants::time_factor(-9.0, 0.0, D(2));
    CHECK_THAT(w3, WithinRel(3.0, 1e-15));
    (void)wp3;
  }
  SECTION("-w' w^n = 1 along a time sweep") {
    for (double t : {-1e-6, -0.5, -3.0, -1e3})
      for (int n : {2, 3, 5}) {
        auto [w, wp] = constants::time_factor(t, 0.25, D(n));
        CHECK_THAT(-wp * std::pow(w, n), WithinAbs(1.0, 1e-14));
      }
  }
  CHECK_THROWS_AS(constants::time_factor(0.0, 0.0, D(2)), std::domain_error);
  CHECK_THROWS_AS(constants::time_factor(0.5, 1.0, D(2)), std::invalid_argument);
}

TEST_CASE("reference solution u0") {
  const Dimension n2 = D(2);
  CHECK(constants::u0_reference(0.0, -1.0, n2) == 0.0);
  CHECK(constants::u0_reference(0.0, -7.5, n2) == 0.0);

  SECTION("coefficient identity u0_coef = (n+1)^{1/(n+1)} c_n") {
    for (int n = 2; n <= 12; ++n) {
      const double lhs = constants::u0_coefficient(D(n));
      const double rhs =
          std::pow(n + 1.0, 1.0 / (n + 1)) * constants::leading_coefficient(D(n));
      CHECK_THAT(lhs, WithinAbs(rhs, 1e-12));
      CHECK_THAT(lhs, WithinRel(static_cast<double>(oracle::u0_coef(n)), 1e-12));
    }
  }
  SECTION("value at n = 2: (81/16)^{1/3}") {
    CHECK_THAT(constants::u0_reference(1.0, -1.0, n2),
               WithinRel(std::cbrt(81.0 / 16.0), 1e-14));
  }
  SECTION("homogeneity u0(l^{(n+1)/(2n)} x, t) = l u0(x, t)") {
    const double l = 3.7;
    for (int n : {2, 3, 5}) {
      const double nn = n;
      const double lhs =
          constants::u0_reference(std::pow(l, (nn + 1) / (2 * nn)) * 1.3, -2.0, D(n));
      CHECK_THAT(lhs, WithinRel(l * constants::u0_reference(1.3, -2.0, D(n)), 1e-13));
    }
  }
  CHECK_THROWS_AS(constants::u0_reference(1.0, 0.0, n2), std::invalid_argument);
}

TEST_CASE("dimension gate") {
  CHECK_THROWS_AS(Dimension(0), std::invalid_argument);
  CHECK_THROWS_AS(Dimension(65), std::invalid_argument);
  CHECK(Dimension(2).alpha() == Catch::Approx(4.0 / 3.0));
}
