#pragma once

// Axially symmetric star-shaped hypersurfaces given as radial graphs
// r = R(theta) over S^n, where theta is the polar angle. Generators:
//
//   CenteredBall / Slice   R = r0 (the two tags are geometrically identical;
//                          Slice names a coordinate sphere of a warped metric)
//   SliceAtRho             slice located by its warped radius lambda = rho0
//   OffCenterBall          geodesic ball at distance `offset` from the origin
//                          (hyperbolic metric only); R(theta) solves
//                          cosh(ball) = cosh R cosh d - sinh R sinh d cos theta
//   Perturbed              R = r0 (1 + sum_k eps_k cos(k theta))
//
// Every generator is even in theta and 2 pi periodic, so integrals over S^n
// reduce to [0, pi] against sin^{n-1} for n >= 2 and to a full [0, 2 pi) turn
// for n = 1.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "density.hpp"
#include "manifold.hpp"
#include "quadrature.hpp"

namespace isoperim {

struct CenteredBall {
  double r0 = 1.0;
};
struct Slice {
  double r0 = 1.0;
};
struct SliceAtRho {
  double rho0 = 1.0;
};
struct OffCenterBall {
  double radius = 1.0;
  double offset = 0.0;
};
struct Perturbed {
  double r0 = 1.0;
  std::vector<double> cosine_eps;  // cosine_eps[k-1] multiplies cos(k theta)
};

using SurfaceGenerator = std::variant<CenteredBall, Slice, SliceAtRho, OffCenterBall, Perturbed>;

namespace detail {

// Radius of the off-center ball in direction theta: unique root R of
//   cosh(R) cosh(d) - sinh(R) sinh(d) cos(theta) = cosh(ball).
// The left side is below the target at R = 0 (d < ball) and above it at
// R = ball + d, and crosses once; plain bisection is deterministic and
// reaches ~1e-14 of the bracket width.
inline double off_center_radius(double ball, double offset, double theta) {
  const double cos_t = std::cos(theta);
  const double cosh_d = std::cosh(offset);
  const double sinh_d = std::sinh(offset);
  const double target = std::cosh(ball);
  auto g = [&](double R) {
    return std::cosh(R) * cosh_d - std::sinh(R) * sinh_d * cos_t - target;
  };
  double lo = 0.0;
  double hi = ball + offset + 1e-9;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid; else hi = mid;
    if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

inline double off_center_radius_prime(double ball, double offset, double theta) {
  const double R = off_center_radius(ball, offset, theta);
  const double num = std::sinh(R) * std::sinh(offset) * std::sin(theta);
  const double den = std::sinh(R) * std::cosh(offset) - std::cosh(R) * std::sinh(offset) * std::cos(theta);
  return -num / den;
}

}  // namespace detail

class RadialProfile {
 public:
  RadialProfile(SurfaceGenerator gen, bool round) : gen_(std::move(gen)), round_(round) {}

  double radius(double theta) const {
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, CenteredBall>) {
            return g.r0;
          } else if constexpr (std::is_same_v<T, Slice>) {
            return g.r0;
          } else if constexpr (std::is_same_v<T, SliceAtRho>) {
            throw std::logic_error("SliceAtRho must be resolved by make_profile");
          } else if constexpr (std::is_same_v<T, OffCenterBall>) {
            return detail::off_center_radius(g.radius, g.offset, theta);
          } else {
            double s = 1.0;
            for (std::size_t k = 0; k < g.cosine_eps.size(); ++k) {
              s += g.cosine_eps[k] * std::cos((k + 1.0) * theta);
            }
            return g.r0 * s;
          }
        },
        gen_);
  }

  double radius_prime(double theta) const {
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, CenteredBall> || std::is_same_v<T, Slice>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, SliceAtRho>) {
            throw std::logic_error("SliceAtRho must be resolved by make_profile");
          } else if constexpr (std::is_same_v<T, OffCenterBall>) {
            return detail::off_center_radius_prime(g.radius, g.offset, theta);
          } else {
            double s = 0.0;
            for (std::size_t k = 0; k < g.cosine_eps.size(); ++k) {
              s -= g.cosine_eps[k] * (k + 1.0) * std::sin((k + 1.0) * theta);
            }
            return g.r0 * s;
          }
        },
        gen_);
  }

  const SurfaceGenerator& generator() const { return gen_; }

  /// True when R' vanishes identically (centered ball, slice, zero offset or
  /// all-zero perturbation); these are the equality candidates.
  bool is_round() const { return round_; }

  std::string describe() const {
    return std::visit(
        [](const auto& g) -> std::string {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, CenteredBall>) {
            return "centered_ball(r0=" + std::to_string(g.r0) + ")";
          } else if constexpr (std::is_same_v<T, Slice>) {
            return "slice(r0=" + std::to_string(g.r0) + ")";
          } else if constexpr (std::is_same_v<T, SliceAtRho>) {
            return "slice(rho0=" + std::to_string(g.rho0) + ")";
          } else if constexpr (std::is_same_v<T, OffCenterBall>) {
            return "off_center_ball(radius=" + std::to_string(g.radius) +
                   ", offset=" + std::to_string(g.offset) + ")";
          } else {
            std::string s = "perturbed(r0=" + std::to_string(g.r0) + ", eps=[";
            for (std::size_t k = 0; k < g.cosine_eps.size(); ++k) {
              if (k) s += ", ";
              s += std::to_string(g.cosine_eps[k]);
            }
            return s + "])";
          }
        },
        gen_);
  }

 private:
  SurfaceGenerator gen_;
  bool round_;
};

/// Builds a profile and validates it against the manifold: the graph must stay
/// inside [a, r_max - 1e-6] and off-center balls require the hyperbolic metric
/// with the origin strictly inside.
inline RadialProfile make_profile(const SurfaceGenerator& gen, const WarpedManifold& M) {
  constexpr double kMargin = 1e-6;
  const double r_cap = M.outer_radius() - kMargin;
  const double a = M.inner_radius();

  SurfaceGenerator resolved = gen;
  if (const auto* s = std::get_if<SliceAtRho>(&gen)) {
    resolved = Slice{M.rho_to_r(s->rho0)};
  }

  bool round = false;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, CenteredBall> || std::is_same_v<T, Slice>) {
          round = true;
        } else if constexpr (std::is_same_v<T, OffCenterBall>) {
          if (M.kind() != ManifoldKind::Hyperbolic) {
            throw std::invalid_argument("off-center balls require the hyperbolic manifold");
          }
          if (!(g.offset >= 0.0 && g.offset < g.radius)) {
            throw std::invalid_argument("off-center ball: need 0 <= offset < radius");
          }
          round = g.offset == 0.0;
        } else if constexpr (std::is_same_v<T, Perturbed>) {
          round = true;
          for (double e : g.cosine_eps) {
            if (e != 0.0) round = false;
          }
        }
      },
      resolved);

  RadialProfile p(resolved, round);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i <= 1024; ++i) {
    const double theta = pi * i / 1024.0;
    const double R = p.radius(theta);
    if (!(R >= a - 1e-12)) {
      throw std::invalid_argument("profile dips below the inner radius at theta=" + std::to_string(theta));
    }
    if (!(R <= r_cap + 1e-12)) {
      throw std::invalid_argument("profile exceeds r_max - 1e-6 at theta=" + std::to_string(theta));
    }
  }
  return p;
}

/// Support function u(theta) = lambda^2 / sqrt(lambda^2 + R'(theta)^2) with
/// lambda = lambda(R(theta)); satisfies u <= lambda with equality iff R' = 0.
inline double support_function(const RadialProfile& p, const WarpedManifold& M, double theta) {
  const double lambda = M.warp_at(p.radius(theta)).lambda;
  const double dr = p.radius_prime(theta);
  return lambda * lambda / std::sqrt(lambda * lambda + dr * dr);
}

/// Integral over S^n of an axially symmetric function g(theta).
template <class G>
double integrate_polar(int n, G&& g, const QuadratureRule& rule) {
  const double pi = 3.14159265358979323846;
  if (n == 1) return integrate_1d(g, 0.0, 2.0 * pi, closed_rule(rule));
  const double band = unit_sphere_area(n - 1);
  return band * integrate_1d([&](double th) { return g(th) * std::pow(std::sin(th), n - 1); },
                             0.0, pi, closed_rule(rule));
}

/// Same reduction for nested integrals with theta-dependent radial bounds.
/// The rule kind applies to the radial direction.
template <class F2, class Bounds>
double integrate_polar_nested(int n, F2&& f, Bounds&& bounds, const QuadratureRule& rule) {
  const double pi = 3.14159265358979323846;
  if (n == 1) return integrate_nested(f, 0.0, 2.0 * pi, bounds, rule);
  const double band = unit_sphere_area(n - 1);
  return band * integrate_nested(
                    [&](double th, double r) { return f(th, r) * std::pow(std::sin(th), n - 1); },
                    0.0, pi, bounds, rule);
}

/// Weighted surface area  integral over Sigma of phi(lambda) lambda' dmu,
/// with the area element lambda^{n-1} sqrt(lambda^2 + R'^2) dsigma.
inline double weighted_area(const RadialProfile& p, const WarpedManifold& M, const Density& d,
                            const QuadratureRule& rule) {
  const int n = M.sphere_dim();
  return integrate_polar(
      n,
      [&](double th) {
        const auto w = M.warp_at(p.radius(th));
        const double dr = p.radius_prime(th);
        return d.value(w.lambda) * w.lambda_prime * std::pow(w.lambda, n - 1) *
               std::sqrt(w.lambda * w.lambda + dr * dr);
      },
      rule);
}

/// Weighted enclosed volume  integral over Omega of phi(lambda) lambda' dv.
inline double weighted_volume(const RadialProfile& p, const WarpedManifold& M, const Density& d,
                              const QuadratureRule& rule) {
  const int n = M.sphere_dim();
  const double a = M.inner_radius();
  return integrate_polar_nested(
      n,
      [&](double, double r) {
        const auto w = M.warp_at(r);
        return d.value(w.lambda) * w.lambda_prime * std::pow(w.lambda, n);
      },
      [&](double th) { return std::pair<double, double>(a, p.radius(th)); }, rule);
}

/// Plain enclosed volume  integral over Omega of dv.
inline double unweighted_volume(const RadialProfile& p, const WarpedManifold& M,
                                const QuadratureRule& rule) {
  const int n = M.sphere_dim();
  const double a = M.inner_radius();
  return integrate_polar_nested(
      n, [&](double, double r) { return std::pow(M.warp_at(r).lambda, n); },
      [&](double th) { return std::pair<double, double>(a, p.radius(th)); }, rule);
}

struct SurfaceMeasures {
  double weighted_area = 0.0;
  double weighted_volume = 0.0;
  double unweighted_volume = 0.0;
};

inline SurfaceMeasures compute_measures(const RadialProfile& p, const WarpedManifold& M,
                                        const Density& d, const QuadratureRule& rule) {
  return {weighted_area(p, M, d, rule), weighted_volume(p, M, d, rule),
          unweighted_volume(p, M, rule)};
}

}  // namespace isoperim
