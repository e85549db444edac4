#pragma once

// Model profile functions: each check's right-hand side is G(F^{-1}(v)),
// where F is a cumulative weighted measure of centered spheres and G the
// corresponding boundary quantity, both parameterized by the sphere radius t.
// With omega = area of the unit S^n and phi the density:
//
//   kind       F(t)                                G(t)
//   Psi        omega int_0^t phi s^n ds            omega phi(t) t^n sqrt(t^2+1)
//   Xi         same                                omega phi(t) t^n
//   XiTilde    omega int_{l0}^t phi s^n ds         omega phi(t) t^n
//   Eta        omega int_0^t phi s^n ds            omega int_0^t phi' s^{n+1} ds
//   EtaTilde   omega int_{l0}^t phi s^n ds         omega phi(t) L(t) t^{n+1}
//   EtaHat     omega int_{l0}^t s^n ds             omega int_{l0}^t L(s) s^n ds
//   PsiTilde   omega int_{l0}^t phi s^n ds         omega phi(t) t^n slope(t)
//   H0         omega int_0^t sinh^n s ds           omega cosh(t) sinh^n(t)
//   H0Tilde    same                                omega e^{-t} sinh^n(t)
//   F0/F0Tilde same                                F(t)
//
// with l0 = lambda(a), slope = warp_slope and L = slope_excess of the
// attached manifold. EtaHat ignores the density (it is defined unweighted),
// and the H0 family is parameterized by the geodesic radius of the
// hyperbolic metric rather than by the slice radius.
//
// EtaTilde is pinned as the boundary term that makes
// sqrt(EtaTilde^2 + XiTilde^2) = PsiTilde hold pointwise: with
// slope^2 = (L t)^2 + 1 the identity is algebraic, and at centered spheres
// EtaTilde(F(t)) equals the support integral of the shadow, so equality
// cases are preserved.
//
// Each instance caches a strictly increasing table of (t, F, G) on 2,049
// Chebyshev-spaced parameters; inversion is bisection on the table refined
// with local panel integrals. L has a square-root branch point at the inner
// slice of the black-hole family, so the cumulative G of EtaHat is advanced
// in the substituted variable u = sqrt(t - l0), where it is smooth.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "density.hpp"
#include "manifold.hpp"
#include "quadrature.hpp"

namespace isoperim {

enum class ProfileKind { Psi, Xi, XiTilde, Eta, EtaTilde, EtaHat, PsiTilde, H0, F0, H0Tilde, F0Tilde };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Psi: return "Psi";
    case ProfileKind::Xi: return "Xi";
    case ProfileKind::XiTilde: return "XiTilde";
    case ProfileKind::Eta: return "Eta";
    case ProfileKind::EtaTilde: return "EtaTilde";
    case ProfileKind::EtaHat: return "EtaHat";
    case ProfileKind::PsiTilde: return "PsiTilde";
    case ProfileKind::H0: return "H0";
    case ProfileKind::F0: return "F0";
    case ProfileKind::H0Tilde: return "H0Tilde";
    case ProfileKind::F0Tilde: return "F0Tilde";
  }
  return "?";
}

inline ProfileKind profile_kind_from_string(const std::string& s) {
  for (ProfileKind k : {ProfileKind::Psi, ProfileKind::Xi, ProfileKind::XiTilde, ProfileKind::Eta,
                        ProfileKind::EtaTilde, ProfileKind::EtaHat, ProfileKind::PsiTilde,
                        ProfileKind::H0, ProfileKind::F0, ProfileKind::H0Tilde, ProfileKind::F0Tilde}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown profile function kind '" + s + "'");
}

/// Weighted measure of the centered sphere family: omega int_{t0}^{t} phi(s) s^n ds.
inline double cumulative_weighted_measure(const WarpedManifold& M, const Density& d, double t0,
                                          double t, const QuadratureRule& rule) {
  const int n = M.sphere_dim();
  return M.sphere_area() *
         integrate_1d([&](double s) { return d.value(s) * std::pow(s, n); }, t0, t, rule);
}

/// Direct evaluation of the hyperbolic ball profile pair (H0/F0 family).
inline double closed_h_f(ProfileKind kind, int n, double r, const QuadratureRule& rule) {
  const double omega = unit_sphere_area(n);
  switch (kind) {
    case ProfileKind::H0: return omega * std::cosh(r) * std::pow(std::sinh(r), n);
    case ProfileKind::H0Tilde: return omega * std::exp(-r) * std::pow(std::sinh(r), n);
    case ProfileKind::F0:
    case ProfileKind::F0Tilde:
      return omega * integrate_1d([&](double s) { return std::pow(std::sinh(s), n); }, 0.0, r, rule);
    default:
      throw std::invalid_argument("closed_h_f applies to the H0/F0 family only");
  }
}

class ProfileFunction {
 public:
  static constexpr int kTablePoints = 2049;

  struct Row {
    double t = 0.0;
    double f = 0.0;
    double g = 0.0;
  };

  ProfileFunction(ProfileKind kind, const WarpedManifold& M, const Density& d,
                  const QuadratureRule& rule)
      : kind_(kind), M_(M), d_(d), rule_(rule), n_(M.sphere_dim()), omega_(M.sphere_area()) {
    r_param_ = kind == ProfileKind::H0 || kind == ProfileKind::F0 ||
               kind == ProfileKind::H0Tilde || kind == ProfileKind::F0Tilde;
    g_cumulative_ = kind == ProfileKind::Eta || kind == ProfileKind::EtaHat ||
                    kind == ProfileKind::F0 || kind == ProfileKind::F0Tilde;
    if (r_param_) {
      if (M.kind() != ManifoldKind::Hyperbolic) {
        throw std::invalid_argument("the H0/F0 profile family needs the hyperbolic manifold");
      }
      t_lo_ = 0.0;
      t_hi_ = M.outer_radius();
    } else if (kind == ProfileKind::Psi || kind == ProfileKind::Xi || kind == ProfileKind::Eta) {
      if (M.lambda_min() > 0.0) {
        throw std::invalid_argument(std::string(to_string(kind)) +
                                    " starts at radius 0; the manifold has lambda(a) > 0");
      }
      t_lo_ = 0.0;
      t_hi_ = M.lambda_max();
    } else {
      t_lo_ = M.lambda_min();
      t_hi_ = M.lambda_max();
    }
    build_table();
  }

  ProfileKind kind() const { return kind_; }
  double parameter_min() const { return t_lo_; }
  double parameter_max() const { return t_hi_; }
  double value_min() const { return rows_.front().f; }
  double value_max() const { return rows_.back().f; }
  const std::vector<Row>& table() const { return rows_; }

  /// F(t).
  double cumulative(double t) const {
    clamp_parameter(t);
    const std::size_t i = row_below_t(t);
    return rows_[i].f + f_segment(rows_[i].t, t);
  }

  /// G(t).
  double evaluate_at_parameter(double t) const {
    clamp_parameter(t);
    if (!g_cumulative_) return g_point(t);
    const std::size_t i = row_below_t(t);
    return rows_[i].g + g_segment(rows_[i].t, t);
  }

  /// F^{-1}(v), bisected on the cached table to |F(t) - v| < 1e-12 max(1, |v|).
  double invert(double v) const {
    const double slack = 1e-9 * std::max(1.0, std::abs(value_max()));
    if (v < value_min() - slack || v > value_max() + slack) {
      throw std::out_of_range("profile inversion: value " + std::to_string(v) + " outside [" +
                              std::to_string(value_min()) + ", " + std::to_string(value_max()) + "]");
    }
    const double target = std::min(std::max(v, value_min()), value_max());
    const std::size_t i = row_below_f(target);
    double lo = rows_[i].t;
    double hi = rows_[i + 1].t;
    const double f_tol = 1e-12 * std::max(1.0, std::abs(target));
    const double t_tol = 1e-15 * std::max(1.0, std::abs(t_hi_));
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > t_tol; ++it) {
      mid = 0.5 * (lo + hi);
      const double fm = rows_[i].f + f_segment(rows_[i].t, mid);
      if (std::abs(fm - target) < f_tol) return mid;
      if (fm < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  /// G(F^{-1}(v)): the model value against which a check's left side competes.
  double operator()(double v) const { return evaluate_at_parameter(invert(v)); }

 private:
  void clamp_parameter(double& t) const {
    const double tol = 1e-9 * std::max(1.0, std::abs(t_hi_));
    if (t < t_lo_ - tol || t > t_hi_ + tol) {
      throw std::domain_error("profile parameter " + std::to_string(t) + " outside [" +
                              std::to_string(t_lo_) + ", " + std::to_string(t_hi_) + "]");
    }
    t = std::min(std::max(t, t_lo_), t_hi_);
  }

  double panel(double a, double b, auto&& f) const {
    if (b <= a) return 0.0;
    const auto& gn = detail::gauss_nodes(rule_.order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    CompensatedSum acc;
    for (int i = 0; i < rule_.order; ++i) acc.add(half * gn.weights[i] * f(mid + half * gn.nodes[i]));
    return acc.value();
  }

  double f_integrand(double s) const {
    if (r_param_) return omega_ * std::pow(std::sinh(s), n_);
    if (kind_ == ProfileKind::EtaHat) return omega_ * std::pow(s, n_);
    return omega_ * d_.value(s) * std::pow(s, n_);
  }

  double f_segment(double a, double b) const {
    return panel(a, b, [&](double s) { return f_integrand(s); });
  }

  double g_point(double t) const {
    switch (kind_) {
      case ProfileKind::Psi:
        return omega_ * d_.value(t) * std::pow(t, n_) * std::sqrt(t * t + 1.0);
      case ProfileKind::Xi:
      case ProfileKind::XiTilde:
        return omega_ * d_.value(t) * std::pow(t, n_);
      case ProfileKind::PsiTilde:
        return omega_ * d_.value(t) * std::pow(t, n_) * (t > 0.0 ? M_.warp_slope(t) : 1.0);
      case ProfileKind::EtaTilde:
        if (t <= 0.0) return 0.0;
        return omega_ * d_.value(t) * M_.slope_excess(t) * std::pow(t, n_ + 1);
      case ProfileKind::H0:
        return omega_ * std::cosh(t) * std::pow(std::sinh(t), n_);
      case ProfileKind::H0Tilde:
        return omega_ * std::exp(-t) * std::pow(std::sinh(t), n_);
      default:
        throw std::logic_error("g_point called for a cumulative kind");
    }
  }

  double g_segment(double a, double b) const {
    if (b <= a) return 0.0;
    switch (kind_) {
      case ProfileKind::Eta:
        return panel(a, b, [&](double s) { return omega_ * d_.derivative(s) * std::pow(s, n_ + 1); });
      case ProfileKind::EtaHat: {
        // Advance in u = sqrt(s - t_lo); slope_excess(t_lo + u^2) ~ c u near
        // the inner slice, so the substituted integrand is smooth.
        const double ua = std::sqrt(std::max(0.0, a - t_lo_));
        const double ub = std::sqrt(std::max(0.0, b - t_lo_));
        return panel(ua, ub, [&](double u) {
          const double s = t_lo_ + u * u;
          return 2.0 * u * omega_ * M_.slope_excess(s) * std::pow(s, n_);
        });
      }
      case ProfileKind::F0:
      case ProfileKind::F0Tilde:
        return f_segment(a, b);
      default:
        throw std::logic_error("g_segment called for a pointwise kind");
    }
  }

  void build_table() {
    rows_.resize(kTablePoints);
    const double pi = 3.14159265358979323846;
    for (int j = 0; j < kTablePoints; ++j) {
      rows_[j].t = t_lo_ + (t_hi_ - t_lo_) * 0.5 * (1.0 - std::cos(pi * j / (kTablePoints - 1.0)));
    }
    rows_.front().t = t_lo_;
    rows_.back().t = t_hi_;
    rows_.front().f = 0.0;
    rows_.front().g = g_cumulative_ ? 0.0 : g_point(rows_.front().t);
    for (int j = 1; j < kTablePoints; ++j) {
      rows_[j].f = rows_[j - 1].f + f_segment(rows_[j - 1].t, rows_[j].t);
      rows_[j].g = g_cumulative_ ? rows_[j - 1].g + g_segment(rows_[j - 1].t, rows_[j].t)
                                 : g_point(rows_[j].t);
      if (!(rows_[j].f > rows_[j - 1].f)) {
        throw std::runtime_error("profile table: cumulative measure is not strictly increasing");
      }
    }
  }

  std::size_t row_below_t(double t) const {
    std::size_t lo = 0, hi = rows_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (rows_[mid].t <= t) lo = mid; else hi = mid;
    }
    return lo;
  }

  std::size_t row_below_f(double v) const {
    std::size_t lo = 0, hi = rows_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (rows_[mid].f <= v) lo = mid; else hi = mid;
    }
    return lo;
  }

  ProfileKind kind_;
  WarpedManifold M_;
  Density d_;
  QuadratureRule rule_;
  int n_;
  double omega_;
  bool r_param_ = false;
  bool g_cumulative_ = false;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
  std::vector<Row> rows_;
};

}  // namespace isoperim
