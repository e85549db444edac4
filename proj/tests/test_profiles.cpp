#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "isoperim/profiles.hpp"

using namespace isoperim;

namespace {
constexpr double kPi = 3.14159265358979323846;

// r_max = asinh(2) puts the top of the warp range exactly at 2, so the
// Chebyshev table midpoint lands on t = 1.
const double kAsinh2 = std::asinh(2.0);
}

// ====================  kind plumbing  ====================

TEST_CASE("profile kind names round trip") {
  for (ProfileKind k : {ProfileKind::Psi, ProfileKind::Xi, ProfileKind::XiTilde, ProfileKind::Eta,
                        ProfileKind::EtaTilde, ProfileKind::EtaHat, ProfileKind::PsiTilde,
                        ProfileKind::H0, ProfileKind::F0, ProfileKind::H0Tilde, ProfileKind::F0Tilde}) {
    REQUIRE(profile_kind_from_string(to_string(k)) == k);
  }
  REQUIRE_THROWS_AS(profile_kind_from_string("psi"), std::invalid_argument);
}

// ====================  frozen values  ====================

TEST_CASE("uniform-density model profile hits its closed form") {
  const auto M = WarpedManifold::hyperbolic(1, kAsinh2);
  const ProfileFunction psi(ProfileKind::Psi, M, Density::constant(1.0), QuadratureRule{});

  REQUIRE(psi.parameter_min() == 0.0);
  REQUIRE(psi.parameter_max() == Catch::Approx(2.0).epsilon(1e-14));
  REQUIRE(static_cast<int>(psi.table().size()) == ProfileFunction::kTablePoints);
  REQUIRE(psi.table()[1024].t == Catch::Approx(1.0).margin(1e-12));

  REQUIRE(psi.cumulative(1.0) == Catch::Approx(kPi).epsilon(1e-12));
  REQUIRE(psi.evaluate_at_parameter(1.0) == Catch::Approx(2.0 * kPi * std::sqrt(2.0)).epsilon(1e-13));
  REQUIRE(psi(kPi) == Catch::Approx(2.0 * kPi * std::sqrt(2.0)).epsilon(1e-11));
  REQUIRE(psi.invert(kPi) == Catch::Approx(1.0).epsilon(1e-11));

  REQUIRE(psi.value_min() == 0.0);
  REQUIRE(psi.value_max() == Catch::Approx(4.0 * kPi).epsilon(1e-12));
}

TEST_CASE("cumulative boundary profile matches its antiderivative") {
  // phi = e^{t^2/2}, one angular dimension: F(t) = 2 pi (e^{t^2/2} - 1) and
  // G(t) = 2 pi ((t^2 - 2) e^{t^2/2} + 2).
  const auto M = WarpedManifold::hyperbolic(1, kAsinh2);
  const ProfileFunction eta(ProfileKind::Eta, M, Density::exp_quadratic(0.5), QuadratureRule{});
  const double root_e = std::exp(0.5);

  REQUIRE(eta.cumulative(1.0) == Catch::Approx(2.0 * kPi * (root_e - 1.0)).epsilon(1e-12));
  REQUIRE(eta.evaluate_at_parameter(1.0) ==
          Catch::Approx(2.0 * kPi * (2.0 - root_e)).epsilon(1e-11));
  REQUIRE(eta(2.0 * kPi * (root_e - 1.0)) ==
          Catch::Approx(2.0 * kPi * (2.0 - root_e)).epsilon(1e-9));
}

TEST_CASE("hyperbolic ball profiles evaluate in closed form") {
  const QuadratureRule rule;
  REQUIRE(closed_h_f(ProfileKind::H0, 1, 1.0, rule) ==
          Catch::Approx(2.0 * kPi * std::cosh(1.0) * std::sinh(1.0)).epsilon(1e-14));
  REQUIRE(closed_h_f(ProfileKind::H0Tilde, 1, 1.0, rule) ==
          Catch::Approx(2.0 * kPi * std::exp(-1.0) * std::sinh(1.0)).epsilon(1e-14));
  REQUIRE(closed_h_f(ProfileKind::F0, 1, 1.0, rule) ==
          Catch::Approx(2.0 * kPi * (std::cosh(1.0) - 1.0)).epsilon(1e-13));
  REQUIRE_THROWS_AS(closed_h_f(ProfileKind::Psi, 1, 1.0, rule), std::invalid_argument);

  const auto M = WarpedManifold::hyperbolic(1, 3.0);
  const ProfileFunction h0(ProfileKind::H0, M, Density::constant(1.0), QuadratureRule{});
  REQUIRE(h0.cumulative(1.0) == Catch::Approx(2.0 * kPi * (std::cosh(1.0) - 1.0)).epsilon(1e-12));
  REQUIRE(h0.evaluate_at_parameter(1.0) ==
          Catch::Approx(2.0 * kPi * std::cosh(1.0) * std::sinh(1.0)).epsilon(1e-13));
  REQUIRE(h0(2.0 * kPi * (std::cosh(1.0) - 1.0)) ==
          Catch::Approx(2.0 * kPi * std::cosh(1.0) * std::sinh(1.0)).epsilon(1e-10));

  const ProfileFunction f0(ProfileKind::F0, M, Density::constant(1.0), QuadratureRule{});
  REQUIRE(f0.evaluate_at_parameter(1.3) == Catch::Approx(f0.cumulative(1.3)).epsilon(1e-13));
}

// ====================  inversion  ====================

TEST_CASE("inversion round trips and respects the domain") {
  const auto M = WarpedManifold::hyperbolic(2, 2.0);
  const Density d = Density::exp_quadratic(0.25);
  for (ProfileKind k : {ProfileKind::Psi, ProfileKind::Xi, ProfileKind::Eta}) {
    const ProfileFunction pf(k, M, d, QuadratureRule{});
    for (double t : {0.15, 0.5, 0.9, 1.4, 2.0, 3.0}) {
      if (t > pf.parameter_max()) continue;
      const double g = pf.evaluate_at_parameter(t);
      const double rt = pf(pf.cumulative(t));
      REQUIRE(std::abs(rt - g) <= 1e-10 * std::max(1.0, std::abs(g)));
    }
  }

  const ProfileFunction psi(ProfileKind::Psi, M, d, QuadratureRule{});
  const double top = psi.value_max();
  REQUIRE_THROWS_AS(psi.invert(top * (1.0 + 1e-6)), std::out_of_range);
  REQUIRE_THROWS_AS(psi.invert(-1.0), std::out_of_range);
  // within the 1e-9 slack band the value clamps to the endpoint
  REQUIRE(psi.invert(top + 1e-10 * top) == Catch::Approx(psi.parameter_max()).epsilon(1e-9));
  REQUIRE_THROWS_AS(psi.cumulative(10.0), std::domain_error);
}

// ====================  structural identities  ====================

TEST_CASE("tilded boundary profiles satisfy the Pythagorean identity") {
  const QuadratureRule rule;
  struct Setup {
    WarpedManifold M;
    Density d;
  };
  const Setup setups[] = {
      {WarpedManifold::hyperbolic(2, 2.0), Density::exp_quadratic(0.25)},
      {WarpedManifold::ads_schwarzschild(2, 1.0, 1.6), Density::cosh_linear(0.5)},
  };
  for (const auto& s : setups) {
    const ProfileFunction eta_t(ProfileKind::EtaTilde, s.M, s.d, rule);
    const ProfileFunction xi_t(ProfileKind::XiTilde, s.M, s.d, rule);
    const ProfileFunction psi_t(ProfileKind::PsiTilde, s.M, s.d, rule);
    const double lo = eta_t.parameter_min(), hi = eta_t.parameter_max();
    for (int i = 1; i <= 8; ++i) {
      const double t = lo + (hi - lo) * i / 9.0;
      const double v = xi_t.cumulative(t);
      const double combined = std::hypot(eta_t(v), xi_t(v));
      const double direct = psi_t(v);
      REQUIRE(std::abs(combined - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("black-hole cumulative profile obeys its derivative identity") {
  // (n+1) int L s^n ds + (m (n+1)/2) int ds/(s L) telescopes to L t^{n+1}.
  const auto M = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  const ProfileFunction ehat(ProfileKind::EtaHat, M, Density::constant(1.0), QuadratureRule{});
  const double omega = M.sphere_area();
  for (double t : {1.5, 2.0, 3.0}) {
    const double g = ehat.evaluate_at_parameter(t) / omega;
    const double bulk = integrate_1d([&](double s) { return 1.0 / (s * M.slope_excess(s)); }, 1.0,
                                     t, singular_left_rule(QuadratureRule{}));
    const double lhs = 3.0 * g + 1.5 * bulk;
    const double rhs = M.slope_excess(t) * t * t * t;
    REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

// ====================  constructor validation  ====================

TEST_CASE("profile constructors reject incompatible manifolds") {
  const auto A = WarpedManifold::ads_schwarzschild(2, 1.0, 1.6);
  const auto E = WarpedManifold::euclidean(2, 2.0);
  const Density d = Density::constant(1.0);
  const QuadratureRule rule;
  REQUIRE_THROWS_AS(ProfileFunction(ProfileKind::Psi, A, d, rule), std::invalid_argument);
  REQUIRE_THROWS_AS(ProfileFunction(ProfileKind::Eta, A, d, rule), std::invalid_argument);
  REQUIRE_THROWS_AS(ProfileFunction(ProfileKind::H0, E, d, rule), std::invalid_argument);
  REQUIRE_THROWS_AS(ProfileFunction(ProfileKind::F0Tilde, A, d, rule), std::invalid_argument);
  REQUIRE_NOTHROW(ProfileFunction(ProfileKind::XiTilde, A, d, rule));
  REQUIRE_NOTHROW(ProfileFunction(ProfileKind::EtaHat, A, d, rule));
}
