#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pma/dim1.hpp"

using namespace pma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("dim1 initial data and small-r behavior") {
  auto sol = solve_dim1(10.0);
  CHECK(sol.phi.front() == 1.0);
  CHECK(sol.phi_prime.front() == 0.0);
  // phi'' = 1/phi -> 1 at the origin
  CHECK_THAT(1.0 / sol.phi[1], WithinAbs(1.0, 1e-4));
}

TEST_CASE("dim1 energy identity (phi')^2 = 2 log phi") {
  SECTION("second-order route") {
    auto sol = solve_dim1(1e6);
    CHECK(sol.max_energy_residual() <= 1e-10);
  }
  SECTION("first-order route") {
    auto sol = solve_dim1_first_order(1e6);
    CHECK(sol.max_energy_residual() <= 1e-9);
  }
}

TEST_CASE("dim1 cross-method agreement on [0, 100]") {
  auto a = solve_dim1(100.0);
  auto b = solve_dim1_first_order(100.0);
  for (std::size_t i = 10; i < a.knots.size(); i += 17)
    CHECK_THAT(b.value(a.knots[i]), WithinRel(a.phi[i], 1e-8));
  for (double r = 0.25; r < 100.0; r += 7.3)
    CHECK_THAT(b.value(r), WithinRel(a.value(r), 1e-8));
  CHECK_THAT(a.phi.back(), WithinRel(b.phi.back(), 1e-8));
}

TEST_CASE("dim1 growth structure") {
  auto sol = solve_dim1(1e6);
  SECTION("phi' increasing and unbounded") {
    double prev = -1;
    for (std::size_t i = 0; i < sol.knots.size(); i += 50) {
      CHECK(sol.phi_prime[i] >= prev);
      prev = sol.phi_prime[i];
    }
    CHECK(sol.phi_prime.back() > 5.0);
  }
  SECTION("log phi - log r is positive, increasing, sublogarithmic") {
    std::vector<double> excess, lnr;
    for (std::size_t i = 0; i < sol.knots.size(); ++i) {
      if (sol.knots[i] < 10) continue;
      lnr.push_back(std::log(sol.knots[i]));
      excess.push_back(std::log(sol.phi[i]) - std::log(sol.knots[i]));
    }
    for (std::size_t i = 1; i < excess.size(); ++i) {
      CHECK(excess[i] > 0);
      CHECK(excess[i] >= excess[i - 1] - 1e-12);
    }
    // sublogarithmic: the excess grows slower than 0.75 log log r on the tail
    CHECK(excess.back() <= 0.75 * std::log(lnr.back()));
  }
}

TEST_CASE("dim1 logarithmic limit") {
  SECTION("synthetic model form gives ratio 2 by construction") {
    // phi defined implicitly by phi^2 = 2 r^2 log phi, i.e. the model form
    // phi = sqrt(2) r (log phi)^{1/2}, so the ratio is exactly 2 at every knot
    Dim1Solution model;
    for (int i = 0; i <= 400; ++i) {
      const double r = std::exp(std::log(1e4) + (std::log(1e8) - std::log(1e4)) * i / 400.0);
      double phi = std::sqrt(2.0) * r * std::sqrt(std::log(r));
      for (int it = 0; it < 200; ++it) phi = std::sqrt(2.0) * r * std::sqrt(std::log(phi));
      model.knots.push_back(r);
      model.phi.push_back(phi);
      model.phi_prime.push_back(0);
    }
    auto lim = log_limit_check(model);
    CHECK_THAT(lim.ratio_at_rmax, WithinRel(2.0, 1e-12));
    CHECK_THAT(lim.extrapolated, WithinRel(2.0, 1e-9));
  }
  SECTION("computed solution at r = 1e8") {
    auto sol = solve_dim1(1e8);
    auto lim = log_limit_check(sol);
    CHECK_THAT(lim.ratio_at_rmax, WithinRel(2.0, 0.15));
    CHECK_THAT(lim.extrapolated, WithinRel(2.0, 0.025));
    // monotone approach over the final three decades
    double prev = 0;
    for (std::size_t i = 0; i < sol.knots.size(); ++i) {
      if (sol.knots[i] < 1e5) continue;
      const double ratio =
          sol.phi[i] * sol.phi[i] / (sol.knots[i] * sol.knots[i] * std::log(sol.phi[i]));
      CHECK(ratio >= prev - 1e-12);
      CHECK(ratio < 2.0);
      prev = ratio;
    }
  }
  SECTION("insufficient range is rejected") {
    auto sol = solve_dim1(1e3);
    CHECK_THROWS_AS(log_limit_check(sol), std::invalid_argument);
  }
}
