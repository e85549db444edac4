#pragma once

// Projection of a warped radial graph to its Euclidean shadow: the surface
// with the same angular profile and radius rho(theta) = lambda(R(theta)).
// Weighted measures transfer across the projection by
//
//   integral over Omega of  phi(lambda) lambda' dv
//       = integral over shadow volume of  phi(rho) dv^                (volumes)
//   integral over Sigma of  phi(lambda) lambda' dmu
//       = integral over shadow of  phi(rho) sqrt((L u^)^2 + 1) dmu^   (areas)
//
// where u^ is the Euclidean support function of the shadow, L = slope_excess,
// and dmu^ = rho^{n+1} / u^ dsigma. The checks below evaluate both sides of
// each identity through disjoint code paths and report the difference.
//
// For the hyperbolic metric the graph embeds into Minkowski space as
// X = (sinh R . direction, cosh R); check_minkowski_normal verifies that the
// reconstructed unit normal
//
//   nu = (nu^ + u^ x, lambda' u^) / sqrt(u^2 + 1)
//
// is unit, orthogonal to the position vector and orthogonal to tangent
// secants of the embedding.

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "report.hpp"
#include "surface.hpp"

namespace isoperim {

class EuclideanShadow {
 public:
  EuclideanShadow(RadialProfile profile, WarpedManifold manifold)
      : profile_(std::move(profile)), manifold_(std::move(manifold)) {}

  int sphere_dim() const { return manifold_.sphere_dim(); }
  double rho_min() const { return manifold_.lambda_min(); }
  double rho_max() const { return manifold_.lambda_max(); }
  bool is_round() const { return profile_.is_round(); }
  const WarpedManifold& source() const { return manifold_; }
  const RadialProfile& profile() const { return profile_; }

  double radial(double theta) const { return manifold_.warp_at(profile_.radius(theta)).lambda; }

  double radial_prime(double theta) const {
    return manifold_.warp_at(profile_.radius(theta)).lambda_prime * profile_.radius_prime(theta);
  }

  /// Euclidean support function u^ = rho^2 / sqrt(rho^2 + rho'^2).
  double support(double theta) const {
    const double rho = radial(theta);
    const double dr = radial_prime(theta);
    return rho * rho / std::sqrt(rho * rho + dr * dr);
  }

 private:
  RadialProfile profile_;
  WarpedManifold manifold_;
};

inline EuclideanShadow project(const RadialProfile& p, const WarpedManifold& M) {
  return EuclideanShadow(p, M);
}

// --- weighted shadow integrals (right-hand machinery for several checks) ----

/// integral over the shadow surface of phi(rho) dmu^, dmu^ = rho^{n+1}/u^ dsigma.
inline double shadow_weighted_perimeter(const EuclideanShadow& s, const Density& d,
                                        const QuadratureRule& rule) {
  const int n = s.sphere_dim();
  return integrate_polar(
      n,
      [&](double th) {
        const double rho = s.radial(th);
        return d.value(rho) * std::pow(rho, n + 1) / s.support(th);
      },
      rule);
}

/// integral over the shadow volume (between rho_min and the surface) of phi dv^.
inline double shadow_weighted_volume(const EuclideanShadow& s, const Density& d,
                                     const QuadratureRule& rule) {
  const int n = s.sphere_dim();
  const double lo = s.rho_min();
  return integrate_polar_nested(
      n, [&](double, double rho) { return d.value(rho) * std::pow(rho, n); },
      [&](double th) { return std::pair<double, double>(lo, s.radial(th)); }, rule);
}

/// integral of phi(rho) (L u^) dmu^ with L = slope_excess of the source metric.
inline double shadow_support_integral(const EuclideanShadow& s, const Density& d,
                                      const QuadratureRule& rule) {
  const int n = s.sphere_dim();
  return integrate_polar(
      n,
      [&](double th) {
        const double rho = s.radial(th);
        const double uhat = s.support(th);
        return d.value(rho) * s.source().slope_excess(rho) * uhat * std::pow(rho, n + 1) / uhat;
      },
      rule);
}

/// integral of phi(rho) sqrt((L u^)^2 + 1) dmu^.
inline double shadow_tilted_perimeter(const EuclideanShadow& s, const Density& d,
                                      const QuadratureRule& rule) {
  const int n = s.sphere_dim();
  return integrate_polar(
      n,
      [&](double th) {
        const double rho = s.radial(th);
        const double uhat = s.support(th);
        const double tilt = s.source().slope_excess(rho) * uhat;
        return d.value(rho) * std::sqrt(tilt * tilt + 1.0) * std::pow(rho, n + 1) / uhat;
      },
      rule);
}

// --- transfer identity checks ----------------------------------------------

/// Weighted volume computed in the warped metric versus through the shadow.
inline DeficitReport check_volume_transfer(const RadialProfile& p, const WarpedManifold& M,
                                           const Density& d, const QuadratureRule& rule,
                                           const CheckOptions& opts = {}) {
  auto shadow = project(p, M);
  auto eval = [&](const QuadratureRule& r) {
    return std::pair<double, double>(weighted_volume(p, M, d, r),
                                     shadow_weighted_volume(shadow, d, r));
  };
  auto [lhs, rhs] = eval(rule);
  double qerr = 0.0;
  if (opts.estimate_error) {
    auto [l2, r2] = eval(doubled_panels(rule));
    qerr = std::max(std::abs(lhs - l2), std::abs(rhs - r2));
  }
  CheckOptions identity = opts;
  identity.equality_tol = opts.identity_tol;
  identity.inequality_tol = opts.identity_tol;
  return finalize_report("VolumeTransfer", lhs, rhs, /*equality_expected=*/true, identity,
                         CheckStatus::Ok, p.describe(), qerr);
}

/// Weighted area computed in the warped metric versus through the shadow.
inline DeficitReport check_area_transfer(const RadialProfile& p, const WarpedManifold& M,
                                         const Density& d, const QuadratureRule& rule,
                                         const CheckOptions& opts = {}) {
  auto shadow = project(p, M);
  auto eval = [&](const QuadratureRule& r) {
    return std::pair<double, double>(weighted_area(p, M, d, r),
                                     shadow_tilted_perimeter(shadow, d, r));
  };
  auto [lhs, rhs] = eval(rule);
  double qerr = 0.0;
  if (opts.estimate_error) {
    auto [l2, r2] = eval(doubled_panels(rule));
    qerr = std::max(std::abs(lhs - l2), std::abs(rhs - r2));
  }
  CheckOptions identity = opts;
  identity.equality_tol = opts.identity_tol;
  identity.inequality_tol = opts.identity_tol;
  return finalize_report("AreaTransfer", lhs, rhs, /*equality_expected=*/true, identity,
                         CheckStatus::Ok, p.describe(), qerr);
}

namespace detail {

// Vectors in the Minkowski space R^{n+1,1}, restricted to the span of the
// meridian plane (e1, axis), one azimuthal direction e2 and the time axis.
using MinkVec = std::array<double, 4>;  // (e1, e2, axis, time)

inline double mink_dot(const MinkVec& a, const MinkVec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3];
}

inline MinkVec hyperboloid_point(const RadialProfile& p, double theta) {
  const double R = p.radius(theta);
  return {std::sinh(R) * std::sin(theta), 0.0, std::sinh(R) * std::cos(theta), std::cosh(R)};
}

}  // namespace detail

/// Verifies the reconstructed Minkowski normal on a theta grid: <X, nu> = 0,
/// <nu, nu> = 1 (both to identity_tol) and orthogonality to finite-difference
/// tangent secants (to 1e-7; the secant itself carries O(h^2) error).
inline DeficitReport check_minkowski_normal(const RadialProfile& p, const WarpedManifold& M,
                                            const CheckOptions& opts = {}) {
  if (M.kind() != ManifoldKind::Hyperbolic) {
    throw std::invalid_argument("check_minkowski_normal requires the hyperbolic manifold");
  }
  constexpr double kSecantStep = 1e-5;
  constexpr double kTangencyTol = 1e-7;
  const double pi = 3.14159265358979323846;
  const int n = M.sphere_dim();

  double worst_algebraic = 0.0;  // <X,nu> and <nu,nu>-1
  double worst_tangency = 0.0;
  for (int i = 0; i < opts.grid_points; ++i) {
    const double th = pi * i / (opts.grid_points - 1.0);
    const double R = p.radius(th);
    const double dr = p.radius_prime(th);
    const double rho = std::sinh(R);
    const double rho_p = std::cosh(R) * dr;
    const double w = std::sqrt(rho * rho + rho_p * rho_p);
    const double uhat = rho * rho / w;
    const double sin_t = std::sin(th), cos_t = std::cos(th);

    // Euclidean shadow normal and position, then the lifted normal.
    const detail::MinkVec x = {rho * sin_t, 0.0, rho * cos_t, 0.0};
    const detail::MinkVec nu_hat = {(rho * sin_t - rho_p * cos_t) / w, 0.0,
                                    (rho * cos_t + rho_p * sin_t) / w, 0.0};
    const double lift = std::sqrt(uhat * uhat + 1.0);
    detail::MinkVec nu;
    for (int c = 0; c < 3; ++c) nu[c] = (nu_hat[c] + uhat * x[c]) / lift;
    nu[3] = std::cosh(R) * uhat / lift;

    const detail::MinkVec X = detail::hyperboloid_point(p, th);
    worst_algebraic = std::max(worst_algebraic, std::abs(detail::mink_dot(X, nu)));
    worst_algebraic = std::max(worst_algebraic, std::abs(detail::mink_dot(nu, nu) - 1.0));

    // Meridian tangent secant (profiles are even, so theta < 0 is fine).
    const detail::MinkVec Xp = detail::hyperboloid_point(p, th + kSecantStep);
    const detail::MinkVec Xm = detail::hyperboloid_point(p, th - kSecantStep);
    detail::MinkVec tangent;
    for (int c = 0; c < 4; ++c) tangent[c] = (Xp[c] - Xm[c]) / (2.0 * kSecantStep);
    const double tnorm = std::sqrt(std::max(detail::mink_dot(tangent, tangent), 1e-300));
    worst_tangency = std::max(worst_tangency, std::abs(detail::mink_dot(tangent, nu)) / tnorm);

    // Azimuthal tangent (exact direction e2) when it is defined.
    if (n >= 2 && rho * sin_t > 1e-12) {
      const detail::MinkVec azim = {0.0, 1.0, 0.0, 0.0};
      worst_tangency = std::max(worst_tangency, std::abs(detail::mink_dot(azim, nu)));
    }
  }

  const double worst = std::max(worst_algebraic, worst_tangency);
  DeficitReport r;
  r.case_id = "MinkowskiNormal";
  r.lhs = worst;
  r.rhs = 0.0;
  r.deficit = worst;
  r.relative_deficit = worst;
  r.equality_expected = true;
  r.status = CheckStatus::Ok;
  r.pass = worst_algebraic < opts.identity_tol && worst_tangency < kTangencyTol;
  r.detail = p.describe() + "; algebraic=" + std::to_string(worst_algebraic) +
             ", tangency=" + std::to_string(worst_tangency);
  return r;
}

/// Compares the direct support function u with its reconstruction from the
/// shadow support, u = lambda' lambda u^ / sqrt(lambda^2 + (lambda'^2 - 1) u^2).
inline DeficitReport check_support_transfer(const RadialProfile& p, const WarpedManifold& M,
                                            const CheckOptions& opts = {}) {
  auto shadow = project(p, M);
  const double pi = 3.14159265358979323846;
  double worst = 0.0;
  for (int i = 0; i < opts.grid_points; ++i) {
    const double th = pi * i / (opts.grid_points - 1.0);
    const double direct = support_function(p, M, th);
    const auto w = M.warp_at(p.radius(th));
    const double uhat = shadow.support(th);
    const double lp2 = w.lambda_prime * w.lambda_prime;
    const double composed = w.lambda_prime * w.lambda * uhat /
                            std::sqrt(w.lambda * w.lambda + (lp2 - 1.0) * uhat * uhat);
    worst = std::max(worst, std::abs(direct - composed) / std::max(std::abs(direct), 1e-300));
  }
  DeficitReport r;
  r.case_id = "SupportTransfer";
  r.lhs = worst;
  r.rhs = 0.0;
  r.deficit = worst;
  r.relative_deficit = worst;
  r.equality_expected = true;
  r.status = CheckStatus::Ok;
  r.pass = worst < opts.identity_tol;
  r.detail = p.describe();
  return r;
}

}  // namespace isoperim
