#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pma/power_bounds.hpp"
#include "pma/solver.hpp"

using namespace pma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("lower-to-upper transfer") {
  const Dimension n2(2);
  SECTION("trivial bound phi >= 1 maps to exponent 2, coefficient 3^{1/2} 3/4") {
    auto up = upper_from_lower({1.0, 0.0, BoundSide::lower}, n2);
    CHECK(up.side == BoundSide::upper);
    CHECK_THAT(up.exponent, WithinAbs(2.0, 1e-15));
    CHECK_THAT(up.coef, WithinRel(1.2990381056766579701, 1e-14));
  }
  SECTION("k = 1 at n = 2 maps to exponent 3/2, same coefficient") {
    auto up = upper_from_lower({1.0, 1.0, BoundSide::lower}, n2);
    CHECK_THAT(up.exponent, WithinAbs(1.5, 1e-15));
    CHECK_THAT(up.coef, WithinRel(1.2990381056766579701, 1e-14));
  }
  SECTION("the growth exponent 2n/(n+1) is the fixed point") {
    for (int n : {2, 3, 6}) {
      const double a = Dimension(n).alpha();
      auto up = upper_from_lower({0.5, a, BoundSide::lower}, Dimension(n));
      CHECK_THAT(up.exponent, WithinAbs(a, 1e-14));
    }
  }
  CHECK_THROWS_AS(upper_from_lower({1.0, 1.9, BoundSide::lower}, n2),
                  std::invalid_argument);
  CHECK_THROWS_AS(upper_from_lower({1.0, 0.5, BoundSide::upper}, n2),
                  std::invalid_argument);
}

TEST_CASE("upper-to-lower transfer") {
  const Dimension n2(2);
  SECTION("n = 2, k = 4/3, C2 = 1 gives 1/(2 sqrt 2) r^{4/3}") {
    auto low = lower_from_upper({1.0, 4.0 / 3, BoundSide::upper}, n2);
    CHECK(low.side == BoundSide::lower);
    CHECK_THAT(low.exponent, WithinAbs(4.0 / 3, 1e-15));
    CHECK_THAT(low.coef, WithinRel(0.3535533905932737622, 1e-14));
  }
  SECTION("coefficient decreases monotonically in C2") {
    double prev = 1e300;
    for (double c2 : {0.5, 1.0, 5.0, 100.0}) {
      auto low = lower_from_upper({c2, 1.5, BoundSide::upper}, n2);
      CHECK(low.coef < prev);
      prev = low.coef;
    }
  }
  CHECK_THROWS_AS(lower_from_upper({1.0, 1.0, BoundSide::upper}, n2),
                  std::invalid_argument);
}

TEST_CASE("composition reproduces the exponent recursion") {
  for (int n : {2, 3, 5}) {
    const double nn = n;
    for (double k : {0.0, 0.7, 1.2}) {
      if (k > Dimension(n).alpha()) continue;
      auto up = upper_from_lower({0.8, k, BoundSide::lower}, Dimension(n));
      auto low = lower_from_upper(up, Dimension(n));
      CHECK_THAT(low.exponent, WithinAbs((2 * nn - 2) / nn + k / (nn * nn), 1e-14));
    }
  }
}

TEST_CASE("bound iteration") {
  SECTION("n = 2 first step: k1 = 1, p1 = 2^{-3/2} 3^{-1/4} (3/2)^{-1/2}") {
    auto [final_low, trace] = iterate_bounds(Dimension(2), 1);
    CHECK_THAT(final_low.exponent, WithinAbs(1.0, 1e-15));
    CHECK_THAT(final_low.coef, WithinRel(0.21934566882541541014, 1e-14));
    CHECK(trace.lowers.size() == 1);
    CHECK(trace.uppers.size() == 1);
  }
  SECTION("trace matches the iteration-sequence constants") {
    for (int n : {2, 4, 7}) {
      auto [final_low, trace] = iterate_bounds(Dimension(n), 12);
      auto seq = constants::iteration_sequence(Dimension(n), 12);
      for (std::size_t m = 0; m < seq.size(); ++m) {
        CHECK_THAT(trace.lowers[m].coef, WithinRel(seq[m].p_m, 1e-13));
        CHECK_THAT(trace.lowers[m].exponent, WithinRel(seq[m].k_m, 1e-13));
      }
      (void)final_low;
    }
  }
  SECTION("limit coefficient reaches C3 to 1e-12 at M = 30") {
    for (int n = 2; n <= 8; ++n) {
      auto [final_low, trace] = iterate_bounds(Dimension(n), 30);
      CHECK_THAT(final_low.coef,
                 WithinAbs(constants::sandwich_constants(Dimension(n)).first, 1e-12));
      CHECK_THAT(final_low.exponent, WithinAbs(Dimension(n).alpha(), 1e-12));
      (void)trace;
    }
  }
  SECTION("exponents strictly increasing along the trace") {
    auto [final_low, trace] = iterate_bounds(Dimension(3), 20);
    const double limit = Dimension(3).alpha();
    for (std::size_t m = 1; m < trace.lowers.size(); ++m) {
      if (limit - trace.lowers[m - 1].exponent > 1e-14)
        CHECK(trace.lowers[m].exponent > trace.lowers[m - 1].exponent);
      else
        CHECK(trace.lowers[m].exponent >= trace.lowers[m - 1].exponent);
    }
    (void)final_low;
  }
  SECTION("seeds above 1 are clamped") {
    auto a = iterate_bounds(Dimension(2), 3, 5.0).first;
    auto b = iterate_bounds(Dimension(2), 3, 1.0).first;
    CHECK(a.coef == b.coef);
  }
}

TEST_CASE("sandwich verification") {
  SECTION("reference solution passes, n in {2, 5}") {
    for (int n : {2, 5}) {
      SolveConfig cfg{Dimension(n)};
      cfg.r_max = 1e4;
      auto sol = integrate_reference(cfg);
      auto rep = verify_sandwich(sol, 1e-8);
      CHECK(rep.pass);
      CHECK(rep.worst_margin_lower > 0);
      CHECK(rep.worst_margin_upper >= 0);
    }
  }
  SECTION("r = 0 endpoint: upper bound holds with equality") {
    SolveConfig cfg{Dimension(2)};
    cfg.r_max = 100.0;
    auto sol = integrate_reference(cfg);
    auto [c3, c4] = constants::sandwich_constants(sol.n);
    (void)c4;
    CHECK(sol.phi.front() == 1.0);               // upper bound reads 1 <= 1
    CHECK(c3 * std::pow(0.0, sol.n.alpha()) == 0.0);  // lower reads 0 <= 1
  }
  SECTION("a profile at half the sharp constant is flagged") {
    const Dimension n(2);
    auto [c3, c4] = constants::sandwich_constants(n);
    (void)c4;
    PiecewiseSolution bad(n, MethodTag::reference);
    for (int i = 0; i <= 400; ++i) {
      const double r = 1e4 * i / 400.0;
      bad.knots.push_back(r);
      bad.phi.push_back(0.5 * c3 * std::pow(r, n.alpha()) + 1.0 * (r < 1));
      bad.phi_prime.push_back(0.5 * c3 * n.alpha() * std::pow(std::max(r, 1e-9), n.alpha() - 1));
    }
    bad.defect.assign(bad.size(), 0.0);
    auto rep = verify_sandwich(bad, 1e-8);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_margin_lower < 0);
  }
}

TEST_CASE("every bound along the trace holds on the computed solution") {
  for (int n : {2, 4}) {
    SolveConfig cfg{Dimension(n)};
    cfg.r_max = 1e4;
    auto sol = integrate_reference(cfg);
    auto [final_low, trace] = iterate_bounds(Dimension(n), 12);
    (void)final_low;
    for (const auto& b : trace.lowers) CHECK(bound_holds(sol, b, 1e-8));
    for (const auto& b : trace.uppers) CHECK(bound_holds(sol, b, 1e-8));
  }
}

TEST_CASE("pincer map contracts toward c_n") {
  for (int n : {2, 4, 6}) {
    const Dimension dim(n);
    const double cn = constants::leading_coefficient(dim);
    CHECK_THAT(pincer_map(cn, dim), WithinRel(cn, 1e-13));  // fixed point
    double K = 3.0 * cn;
    double err_prev = std::log(K / cn);
    for (int it = 0; it < 3; ++it) {
      K = pincer_map(pincer_map(K, dim), dim);
      const double err = std::abs(std::log(K / cn));
      // double application contracts log-distance by n^{-2}
      CHECK(err <= err_prev / (n * n) * 1.0001);
      err_prev = err;
    }
  }
}
