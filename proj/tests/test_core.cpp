#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "isoperim/density.hpp"
#include "isoperim/manifold.hpp"

using namespace isoperim;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ====================  warped manifolds  ====================

TEST_CASE("unit sphere areas") {
  REQUIRE(unit_sphere_area(1) == Catch::Approx(2.0 * kPi).epsilon(1e-15));
  REQUIRE(unit_sphere_area(2) == Catch::Approx(4.0 * kPi).epsilon(1e-15));
  REQUIRE(unit_sphere_area(3) == Catch::Approx(2.0 * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("hyperbolic warp") {
  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  const auto w = M.warp_at(1.0);
  REQUIRE(w.lambda == Catch::Approx(std::sinh(1.0)).epsilon(1e-15));
  REQUIRE(w.lambda_prime == Catch::Approx(std::cosh(1.0)).epsilon(1e-15));
  REQUIRE(M.lambda_min() == 0.0);
  REQUIRE(M.lambda_max() == Catch::Approx(std::sinh(3.0)).epsilon(1e-15));
  REQUIRE(M.slope_excess(0.7) == 1.0);
  REQUIRE(M.warp_slope(2.0) == Catch::Approx(std::sqrt(5.0)).epsilon(1e-15));
  REQUIRE(M.rho_to_r(std::sinh(1.0)) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("euclidean warp") {
  const auto M = WarpedManifold::euclidean(2, 3.0);
  const auto w = M.warp_at(2.0);
  REQUIRE(w.lambda == 2.0);
  REQUIRE(w.lambda_prime == 1.0);
  REQUIRE(M.slope_excess(1.5) == 0.0);
  REQUIRE(M.warp_slope(1.5) == 1.0);
  REQUIRE(M.rho_to_r(1.25) == 1.25);
}

TEST_CASE("black-hole warp starts at the horizon with unit slope") {
  const auto M = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  REQUIRE(M.lambda_min() == Catch::Approx(1.0).epsilon(1e-14));  // m^{1/(n+1)}
  const auto w0 = M.warp_at(0.0);
  REQUIRE(w0.lambda == Catch::Approx(1.0).epsilon(1e-14));
  REQUIRE(w0.lambda_prime == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(M.slope_excess(1.0) == 0.0);
}

TEST_CASE("black-hole warp slope matches the defining polynomial") {
  const auto M = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  // Psi(rho)^2 = 1 + rho^2 - m rho^{1-n}; at rho=2, n=2, m=1: 1 + 4 - 1/2 = 4.5
  REQUIRE(M.warp_slope(2.0) == Catch::Approx(std::sqrt(4.5)).epsilon(1e-14));
  REQUIRE(M.slope_excess(2.0) == Catch::Approx(std::sqrt(1.0 - 1.0 / 8.0)).epsilon(1e-14));
}

TEST_CASE("black-hole radius/rho round trips") {
  const auto M = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  for (double rho : {1.0, 1.2, 1.5, 2.0, 3.0, 5.0}) {
    const double r = M.rho_to_r(rho);
    REQUIRE(r >= 0.0);
    REQUIRE(M.warp_at(r).lambda == Catch::Approx(rho).epsilon(1e-11));
  }
  // monotone in r, and lambda' equals warp_slope(lambda) along the way
  double prev = M.warp_at(0.0).lambda;
  for (int i = 1; i <= 40; ++i) {
    const double r = 1.6 * i / 40.0;
    const auto w = M.warp_at(r);
    REQUIRE(w.lambda > prev);
    REQUIRE(w.lambda_prime == Catch::Approx(M.warp_slope(w.lambda)).epsilon(1e-10));
    prev = w.lambda;
  }
}

TEST_CASE("manifold validation") {
  REQUIRE_THROWS_AS(WarpedManifold::hyperbolic(0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(WarpedManifold::hyperbolic(2, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(WarpedManifold::ads_schwarzschild(2, -1.0, 1.0), std::invalid_argument);

  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  REQUIRE_THROWS_AS(M.warp_at(3.5), std::domain_error);
  REQUIRE_THROWS_AS(M.warp_at(-0.5), std::domain_error);
  REQUIRE_THROWS_AS(M.slope_excess(-1.0), std::domain_error);
}

// ====================  densities  ====================

TEST_CASE("constant density") {
  const auto d = Density::constant(2.0);
  REQUIRE(d.value(0.7) == 2.0);
  REQUIRE(d.log_derivative(0.7) == 0.0);
  REQUIRE(d.log_second(0.7) == 0.0);
  REQUIRE(d.derivative(0.7) == 0.0);
  REQUIRE(d.is_constant());
  REQUIRE_THROWS_AS(Density::constant(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(Density::constant(-1.0), std::invalid_argument);
}

TEST_CASE("exp-quadratic density: phi = e^{c t^2}") {
  const auto d = Density::exp_quadratic(0.5);
  REQUIRE(d.value(1.0) == Catch::Approx(std::exp(0.5)).epsilon(1e-15));
  REQUIRE(d.log_derivative(1.0) == Catch::Approx(1.0).epsilon(1e-15));
  REQUIRE(d.log_second(1.0) == Catch::Approx(1.0).epsilon(1e-15));
  REQUIRE(d.derivative(1.0) == Catch::Approx(std::exp(0.5)).epsilon(1e-15));
  REQUIRE_FALSE(d.is_constant());
}

TEST_CASE("cosh-linear density: phi = cosh(c t)") {
  const auto d = Density::cosh_linear(1.0);
  REQUIRE(d.value(1.0) == Catch::Approx(std::cosh(1.0)).epsilon(1e-15));
  REQUIRE(d.log_derivative(1.0) == Catch::Approx(std::tanh(1.0)).epsilon(1e-15));
  const double sech = 1.0 / std::cosh(1.0);
  REQUIRE(d.log_second(1.0) == Catch::Approx(sech * sech).epsilon(1e-14));
  REQUIRE(d.derivative(1.0) == Catch::Approx(std::sinh(1.0)).epsilon(1e-14));
}

TEST_CASE("power-quadratic density: phi = (1 + t^2)^p") {
  const auto d = Density::power_quadratic(2.0);
  REQUIRE(d.value(1.0) == Catch::Approx(4.0).epsilon(1e-15));
  REQUIRE(d.log_derivative(1.0) == Catch::Approx(2.0).epsilon(1e-15));
  REQUIRE(d.log_second(1.0) == Catch::Approx(0.0).margin(1e-15));  // 2p(1-t^2)/(1+t^2)^2
  REQUIRE(d.log_second(2.0) < 0.0);                                // log-convexity lost past t=1
}

TEST_CASE("product density multiplies values and adds log-derivatives") {
  const auto d = Density::product({Density::constant(2.0), Density::exp_quadratic(0.25)});
  REQUIRE(d.value(1.0) == Catch::Approx(2.0 * std::exp(0.25)).epsilon(1e-15));
  REQUIRE(d.log_derivative(1.0) == Catch::Approx(0.5).epsilon(1e-15));
  REQUIRE(d.log_second(1.0) == Catch::Approx(0.5).epsilon(1e-15));
  REQUIRE_FALSE(d.is_constant());
  REQUIRE(Density::product({Density::constant(1.0), Density::constant(3.0)}).is_constant());
  REQUIRE_THROWS_AS(Density::product({}), std::invalid_argument);
}

TEST_CASE("certificates separate the admissible densities from the designed violator") {
  REQUIRE(Density::constant(1.0).certify(10.0).valid);
  REQUIRE(Density::exp_quadratic(0.25).certify(10.0).valid);
  REQUIRE(Density::cosh_linear(1.0).certify(10.0).valid);

  const auto cert = Density::power_quadratic(1.5).certify(2.0);
  REQUIRE_FALSE(cert.valid);
  REQUIRE(cert.min_log_convexity < 0.0);

  // within [0, 1] the same family is still log-convex
  REQUIRE(Density::power_quadratic(1.5).certify(1.0).valid);

  REQUIRE_THROWS_AS(Density::constant(1.0).certify(-1.0), std::invalid_argument);
}

TEST_CASE("density derivative identity phi' = phi (log phi)' on a grid") {
  const auto d = Density::product({Density::cosh_linear(0.7), Density::exp_quadratic(0.3)});
  for (int i = 0; i <= 20; ++i) {
    const double t = 2.0 * i / 20.0;
    REQUIRE(d.derivative(t) ==
            Catch::Approx(d.value(t) * d.log_derivative(t)).margin(1e-13));
  }
}
