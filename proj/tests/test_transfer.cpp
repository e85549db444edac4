#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "isoperim/transfer.hpp"

using namespace isoperim;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ====================  shadow geometry  ====================

TEST_CASE("shadow of a hyperbolic ball is the round sphere of radius sinh r0") {
  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  const auto shadow = project(make_profile(CenteredBall{1.0}, M), M);
  for (double th : {0.0, 0.7, 2.2, kPi}) {
    REQUIRE(shadow.radial(th) == Catch::Approx(std::sinh(1.0)).epsilon(1e-14));
    REQUIRE(shadow.radial_prime(th) == 0.0);
    REQUIRE(shadow.support(th) == Catch::Approx(std::sinh(1.0)).epsilon(1e-14));
  }
  REQUIRE(shadow.is_round());
  REQUIRE(shadow.rho_min() == 0.0);
}

TEST_CASE("shadow radial slope follows the chain rule") {
  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  const auto shadow = project(make_profile(Perturbed{1.0, {0.0, 0.1}}, M), M);
  // R(pi/4) = 1, R'(pi/4) = -0.2, so rho' = cosh(1) R'
  REQUIRE(shadow.radial(kPi / 4) == Catch::Approx(std::sinh(1.0)).epsilon(1e-14));
  REQUIRE(shadow.radial_prime(kPi / 4) == Catch::Approx(-0.2 * std::cosh(1.0)).epsilon(1e-13));
  REQUIRE_FALSE(shadow.is_round());
}

TEST_CASE("shadow of a coordinate slice sits at constant rho") {
  const auto A = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  const auto shadow = project(make_profile(SliceAtRho{2.0}, A), A);
  for (double th : {0.1, 1.0, 3.0}) {
    REQUIRE(shadow.radial(th) == Catch::Approx(2.0).epsilon(1e-11));
    REQUIRE(shadow.support(th) == Catch::Approx(2.0).epsilon(1e-11));
  }
  REQUIRE(shadow.rho_min() == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("shadow support is constant exactly on round profiles") {
  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  const auto bumpy = project(make_profile(Perturbed{1.0, {0.0, 0.1}}, M), M);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 64; ++i) {
    const double u = bumpy.support(kPi * i / 64.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  REQUIRE(hi - lo > 1e-3);
}

// ====================  transfer identities  ====================

TEST_CASE("volume transfer identity holds through the projection") {
  const QuadratureRule rule;

  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  const auto p = make_profile(Perturbed{1.0, {0.0, 0.1}}, M);
  const auto r1 = check_volume_transfer(p, M, Density::exp_quadratic(0.5), rule);
  REQUIRE(r1.case_id == "VolumeTransfer");
  REQUIRE(r1.status == CheckStatus::Ok);
  REQUIRE(r1.equality_expected);
  REQUIRE(r1.pass);
  REQUIRE(std::abs(r1.relative_deficit) < 1e-9);

  const auto A = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  const double base = A.rho_to_r(2.0);
  const auto q = make_profile(Perturbed{base, {0.0, 0.05}}, A);
  const auto r2 = check_volume_transfer(q, A, Density::cosh_linear(0.5), rule);
  REQUIRE(r2.pass);
  REQUIRE(std::abs(r2.relative_deficit) < 1e-8);
}

TEST_CASE("area transfer identity holds across manifolds, profiles and densities") {
  const QuadratureRule rule;
  const std::vector<WarpedManifold> manifolds = {
      WarpedManifold::hyperbolic(1, 3.0),
      WarpedManifold::hyperbolic(2, 3.0),
      WarpedManifold::euclidean(2, 3.0),
      WarpedManifold::ads_schwarzschild(2, 1.0, 1.6),
  };
  const std::vector<Density> densities = {
      Density::constant(1.0),
      Density::exp_quadratic(0.25),
      Density::cosh_linear(0.5),
  };
  for (const auto& M : manifolds) {
    std::vector<RadialProfile> profiles;
    profiles.push_back(make_profile(CenteredBall{0.8}, M));
    profiles.push_back(make_profile(Perturbed{0.8, {0.0, 0.1}}, M));
    if (M.kind() == ManifoldKind::Hyperbolic) {
      profiles.push_back(make_profile(OffCenterBall{0.8, 0.2}, M));
    }
    if (M.kind() == ManifoldKind::AdsSchwarzschild) {
      profiles.push_back(make_profile(SliceAtRho{2.0}, M));
    }
    for (const auto& p : profiles) {
      for (const auto& d : densities) {
        const auto area = check_area_transfer(p, M, d, rule);
        INFO(area.detail);
        REQUIRE(area.pass);
        REQUIRE(std::abs(area.relative_deficit) < 1e-9);
        const auto vol = check_volume_transfer(p, M, d, rule);
        INFO(vol.detail);
        REQUIRE(vol.pass);
        REQUIRE(std::abs(vol.relative_deficit) < 1e-9);
      }
    }
  }
}

// ====================  Minkowski normal  ====================

TEST_CASE("reconstructed Minkowski normal is unit and orthogonal") {
  for (int n : {1, 2}) {
    const auto M = WarpedManifold::hyperbolic(n, 3.0);
    const std::vector<RadialProfile> profiles = {
        make_profile(CenteredBall{1.0}, M),
        make_profile(Perturbed{1.0, {0.0, 0.1}}, M),
        make_profile(Perturbed{0.9, {0.05, 0.0, 0.04}}, M),
        make_profile(OffCenterBall{1.0, 0.3}, M),
    };
    for (const auto& p : profiles) {
      const auto r = check_minkowski_normal(p, M);
      INFO(r.detail);
      REQUIRE(r.case_id == "MinkowskiNormal");
      REQUIRE(r.pass);
      REQUIRE(r.lhs < 1e-7);
    }
  }
}

TEST_CASE("the Minkowski check rejects non-hyperbolic manifolds") {
  const auto E = WarpedManifold::euclidean(2, 3.0);
  const auto p = make_profile(CenteredBall{1.0}, E);
  REQUIRE_THROWS_AS(check_minkowski_normal(p, E), std::invalid_argument);
}

// ====================  support transfer  ====================

TEST_CASE("support function reconstructs from the shadow support") {
  const auto M = WarpedManifold::hyperbolic(2, 3.0);
  const auto r1 = check_support_transfer(make_profile(Perturbed{1.0, {0.0, 0.1}}, M), M);
  REQUIRE(r1.case_id == "SupportTransfer");
  REQUIRE(r1.pass);

  const auto A = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  const double base = A.rho_to_r(2.0);
  const auto r2 = check_support_transfer(make_profile(Perturbed{base, {0.0, 0.05}}, A), A);
  REQUIRE(r2.pass);
}
