#pragma once

// Rotationally symmetric metrics dr^2 + lambda(r)^2 dtheta^2 on [a, r_max) x S^n,
// described by the warp factor lambda and its derivative. Three families are
// built in:
//
//   hyperbolic          lambda = sinh r
//   euclidean           lambda = r
//   ads_schwarzschild   lambda' = sqrt(1 + lambda^2 - m lambda^{1-n}),
//                       lambda(a) = m^{1/(n+1)}
//
// Two derived closed forms are exposed as functions of the slice radius
// rho = lambda(r):
//
//   warp_slope(rho)    = lambda' o lambda^{-1}   (>= 1 for the built-ins)
//   slope_excess(rho)  = sqrt(warp_slope^2 - 1) / rho
//
// For the third family lambda(r) has no elementary form; it is recovered by
// inverting r(rho) = integral of 1/warp_slope from lambda(a) to rho, using a
// cached cumulative table refined by safeguarded Newton steps.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace isoperim {

enum class ManifoldKind { Hyperbolic, Euclidean, AdsSchwarzschild };

inline const char* to_string(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::Hyperbolic: return "hyperbolic";
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::AdsSchwarzschild: return "ads_schwarzschild";
  }
  return "?";
}

/// Surface area of the unit n-sphere, 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double unit_sphere_area(int n) {
  if (n < 0) throw std::invalid_argument("unit_sphere_area: dimension must be non-negative");
  const double pi = 3.14159265358979323846;
  return 2.0 * std::pow(pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

struct WarpValues {
  double lambda = 0.0;
  double lambda_prime = 0.0;
};

class WarpedManifold {
 public:
  static WarpedManifold hyperbolic(int n, double r_max) {
    return WarpedManifold(ManifoldKind::Hyperbolic, n, 0.0, r_max);
  }
  static WarpedManifold euclidean(int n, double r_max) {
    return WarpedManifold(ManifoldKind::Euclidean, n, 0.0, r_max);
  }
  static WarpedManifold ads_schwarzschild(int n, double mass, double r_max) {
    return WarpedManifold(ManifoldKind::AdsSchwarzschild, n, mass, r_max);
  }

  ManifoldKind kind() const { return kind_; }
  int sphere_dim() const { return n_; }
  double mass() const { return mass_; }
  double inner_radius() const { return 0.0; }  // a
  double outer_radius() const { return r_max_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }
  double sphere_area() const { return omega_; }  // area of the unit S^n

  /// lambda and lambda' at radial coordinate r in [a, r_max].
  WarpValues warp_at(double r) const {
    check_radius(r);
    switch (kind_) {
      case ManifoldKind::Hyperbolic: return {std::sinh(r), std::cosh(r)};
      case ManifoldKind::Euclidean: return {r, 1.0};
      case ManifoldKind::AdsSchwarzschild: {
        const double rho = ads_rho_from_r(r);
        return {rho, warp_slope_unchecked(rho)};
      }
    }
    return {};
  }

  /// lambda' as a function of the slice radius rho = lambda(r).
  double warp_slope(double rho) const {
    check_rho(rho);
    return warp_slope_unchecked(rho);
  }

  /// sqrt(warp_slope^2 - 1) / rho; vanishes identically in the euclidean
  /// case and equals 1 in the hyperbolic one.
  double slope_excess(double rho) const {
    check_rho(rho);
    if (rho <= 0.0) throw std::domain_error("slope_excess: rho must be positive");
    switch (kind_) {
      case ManifoldKind::Hyperbolic: return 1.0;
      case ManifoldKind::Euclidean: return 0.0;
      case ManifoldKind::AdsSchwarzschild:
        return std::sqrt(std::max(0.0, 1.0 - mass_ * std::pow(rho, -(n_ + 1.0))));
    }
    return 0.0;
  }

  /// Radial coordinate of the slice { lambda = rho }; inverse of r -> lambda(r).
  double rho_to_r(double rho) const {
    check_rho(rho);
    switch (kind_) {
      case ManifoldKind::Hyperbolic: return std::asinh(rho);
      case ManifoldKind::Euclidean: return rho;
      case ManifoldKind::AdsSchwarzschild: {
        const double r = ads_r_from_rho(rho);
        return std::min(std::max(r, 0.0), r_max_);
      }
    }
    return 0.0;
  }

  std::string describe() const {
    std::string s = std::string(to_string(kind_)) + "(n=" + std::to_string(n_);
    if (kind_ == ManifoldKind::AdsSchwarzschild) s += ", m=" + std::to_string(mass_);
    return s + ")";
  }

 private:
  WarpedManifold(ManifoldKind kind, int n, double mass, double r_max)
      : kind_(kind), n_(n), mass_(mass), r_max_(r_max) {
    if (n < 1) throw std::invalid_argument("manifold: sphere dimension must be >= 1");
    if (!(r_max > 0.0)) throw std::invalid_argument("manifold: r_max must be positive");
    if (mass < 0.0) throw std::invalid_argument("manifold: mass must be non-negative");
    omega_ = unit_sphere_area(n);
    switch (kind_) {
      case ManifoldKind::Hyperbolic:
        lambda_min_ = 0.0;
        lambda_max_ = std::sinh(r_max);
        break;
      case ManifoldKind::Euclidean:
        lambda_min_ = 0.0;
        lambda_max_ = r_max;
        break;
      case ManifoldKind::AdsSchwarzschild:
        lambda_min_ = std::pow(mass, 1.0 / (n + 1.0));
        build_ads_table();
        break;
    }
  }

  double warp_slope_unchecked(double rho) const {
    switch (kind_) {
      case ManifoldKind::Hyperbolic: return std::sqrt(1.0 + rho * rho);
      case ManifoldKind::Euclidean: return 1.0;
      case ManifoldKind::AdsSchwarzschild: {
        // 1 + rho^2 - m rho^{1-n}, written as 1 + (rho * slope_excess)^2 to
        // stay exact at the inner slice where the bracket vanishes.
        const double excess_sq = std::max(0.0, 1.0 - mass_ * std::pow(rho, -(n_ + 1.0)));
        return std::sqrt(1.0 + rho * rho * excess_sq);
      }
    }
    return 1.0;
  }

  void check_radius(double r) const {
    const double tol = 1e-9 * std::max(1.0, r_max_);
    if (!(r >= -tol && r <= r_max_ + tol)) {
      throw std::domain_error("manifold: radius " + std::to_string(r) + " outside [0, " +
                              std::to_string(r_max_) + "]");
    }
  }

  void check_rho(double rho) const {
    const double tol = 1e-9 * std::max(1.0, lambda_max_);
    if (!(rho >= lambda_min_ - tol && rho <= lambda_max_ + tol)) {
      throw std::domain_error("manifold: slice radius " + std::to_string(rho) + " outside [" +
                              std::to_string(lambda_min_) + ", " + std::to_string(lambda_max_) + "]");
    }
  }

  // --- third family: cumulative r(rho) table -------------------------------

  // dr/drho = 1 / warp_slope(rho); smooth on [lambda(a), infinity), equal to 1
  // at the inner slice.
  double ads_dr_drho(double rho) const { return 1.0 / warp_slope_unchecked(rho); }

  double ads_segment(double rho_from, double rho_to) const {
    const auto& gn = detail::gauss_nodes(16);
    const double mid = 0.5 * (rho_from + rho_to);
    const double half = 0.5 * (rho_to - rho_from);
    CompensatedSum acc;
    for (int i = 0; i < 16; ++i) {
      acc.add(half * gn.weights[i] * ads_dr_drho(mid + half * gn.nodes[i]));
    }
    return acc.value();
  }

  void build_ads_table() {
    const double rho0 = lambda_min_;
    rho_knots_.clear();
    r_knots_.clear();
    rho_knots_.push_back(rho0);
    r_knots_.push_back(0.0);
    const double base_step = std::max(rho0, 1.0) / 2048.0;
    double rho = rho0;
    double r = 0.0;
    while (r < r_max_) {
      const double step = std::max(base_step, rho / 512.0);
      const double next = rho + step;
      r += ads_segment(rho, next);
      rho = next;
      rho_knots_.push_back(rho);
      r_knots_.push_back(r);
      if (rho_knots_.size() > 4'000'000) {
        throw std::invalid_argument("manifold: r_max too large for the ads_schwarzschild table");
      }
    }
    // Trim the top knot back to lambda(r_max) so the stored range is exact.
    lambda_max_ = ads_rho_from_r_unclamped(r_max_);
  }

  std::size_t ads_segment_index_by_r(double r) const {
    std::size_t lo = 0, hi = r_knots_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (r_knots_[mid] <= r) lo = mid; else hi = mid;
    }
    return lo;
  }

  double ads_rho_from_r_unclamped(double r) const {
    const std::size_t i = ads_segment_index_by_r(r);
    double lo = rho_knots_[i], hi = rho_knots_[i + 1];
    double rho = lo + (hi - lo) * 0.5;
    for (int it = 0; it < 60; ++it) {
      const double err = (r_knots_[i] + ads_segment(rho_knots_[i], rho)) - r;
      if (std::abs(err) < 1e-15 * std::max(1.0, std::abs(r))) break;
      if (err > 0.0) hi = rho; else lo = rho;
      double next = rho - err * warp_slope_unchecked(rho);  // dr/drho = 1/slope
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      rho = next;
    }
    return rho;
  }

  double ads_rho_from_r(double r) const {
    if (r <= 0.0) return lambda_min_;
    if (r >= r_max_) return lambda_max_;
    return ads_rho_from_r_unclamped(r);
  }

  double ads_r_from_rho(double rho) const {
    if (rho <= lambda_min_) return 0.0;
    std::size_t lo = 0, hi = rho_knots_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (rho_knots_[mid] <= rho) lo = mid; else hi = mid;
    }
    return r_knots_[lo] + ads_segment(rho_knots_[lo], rho);
  }

  ManifoldKind kind_;
  int n_;
  double mass_;
  double r_max_;
  double omega_ = 0.0;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
  std::vector<double> rho_knots_;  // ads only
  std::vector<double> r_knots_;
};

}  // namespace isoperim
