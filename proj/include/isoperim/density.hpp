#pragma once

// Radial weight families phi(t), all smooth, even and positive, with analytic
// first and logarithmic second derivatives:
//
//   constant(s)         phi = s
//   exp_quadratic(c)    phi = exp(c t^2)
//   cosh_linear(c)      phi = cosh(c t)
//   power_quadratic(p)  phi = (1 + t^2)^p
//   product(...)        pointwise product of the above
//
// The inequality checks require phi to be log-convex and t -> phi'(t) t / phi(t)
// to be non-decreasing on the radius range in use. certify() samples both
// quantities on a 1000-point grid and reports the minima; callers downgrade a
// check to "hypothesis violated" when the certificate is invalid instead of
// rejecting the density outright (the power_quadratic family loses
// log-convexity beyond t = 1 by design).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace isoperim {

enum class DensityKind { Constant, ExpQuadratic, CoshLinear, PowerQuadratic, Product };

struct LogConvexityCertificate {
  double half_width = 0.0;        // grid covers [0, half_width]
  double min_log_convexity = 0.0; // min (log phi)''
  double min_monotonicity = 0.0;  // min ((log phi)'' t + (log phi)')
  bool valid = false;
};

class Density {
 public:
  static Density constant(double scale = 1.0) {
    if (!(scale > 0.0)) throw std::invalid_argument("density: constant scale must be positive");
    Density d(DensityKind::Constant);
    d.param_ = scale;
    return d;
  }
  static Density exp_quadratic(double c) {
    Density d(DensityKind::ExpQuadratic);
    d.param_ = c;
    return d;
  }
  static Density cosh_linear(double c) {
    Density d(DensityKind::CoshLinear);
    d.param_ = c;
    return d;
  }
  static Density power_quadratic(double p) {
    Density d(DensityKind::PowerQuadratic);
    d.param_ = p;
    return d;
  }
  static Density product(std::vector<Density> factors) {
    if (factors.empty()) throw std::invalid_argument("density: product needs at least one factor");
    Density d(DensityKind::Product);
    d.factors_ = std::move(factors);
    return d;
  }

  DensityKind kind() const { return kind_; }
  double parameter() const { return param_; }

  double value(double t) const {
    switch (kind_) {
      case DensityKind::Constant: return param_;
      case DensityKind::ExpQuadratic: return std::exp(param_ * t * t);
      case DensityKind::CoshLinear: return std::cosh(param_ * t);
      case DensityKind::PowerQuadratic: return std::pow(1.0 + t * t, param_);
      case DensityKind::Product: {
        double v = 1.0;
        for (const auto& f : factors_) v *= f.value(t);
        return v;
      }
    }
    return 1.0;
  }

  /// (log phi)'(t) = phi'/phi.
  double log_derivative(double t) const {
    switch (kind_) {
      case DensityKind::Constant: return 0.0;
      case DensityKind::ExpQuadratic: return 2.0 * param_ * t;
      case DensityKind::CoshLinear: return param_ * std::tanh(param_ * t);
      case DensityKind::PowerQuadratic: return 2.0 * param_ * t / (1.0 + t * t);
      case DensityKind::Product: {
        double v = 0.0;
        for (const auto& f : factors_) v += f.log_derivative(t);
        return v;
      }
    }
    return 0.0;
  }

  /// (log phi)''(t).
  double log_second(double t) const {
    switch (kind_) {
      case DensityKind::Constant: return 0.0;
      case DensityKind::ExpQuadratic: return 2.0 * param_;
      case DensityKind::CoshLinear: {
        const double c = std::cosh(param_ * t);
        return param_ * param_ / (c * c);
      }
      case DensityKind::PowerQuadratic: {
        const double q = 1.0 + t * t;
        return 2.0 * param_ * (1.0 - t * t) / (q * q);
      }
      case DensityKind::Product: {
        double v = 0.0;
        for (const auto& f : factors_) v += f.log_second(t);
        return v;
      }
    }
    return 0.0;
  }

  double derivative(double t) const { return value(t) * log_derivative(t); }

  /// d/dt of phi'(t) t / phi(t).
  double monotone_quantity_prime(double t) const {
    return log_second(t) * t + log_derivative(t);
  }

  bool is_constant() const {
    if (kind_ == DensityKind::Constant) return true;
    if (kind_ != DensityKind::Product) return false;
    for (const auto& f : factors_) {
      if (!f.is_constant()) return false;
    }
    return true;
  }

  /// Samples (log phi)'' and ((log phi)'' t + (log phi)') on a uniform grid
  /// over [0, half_width]; both minima must clear -1e-12 for a valid
  /// certificate.
  LogConvexityCertificate certify(double half_width, int grid_points = 1000) const {
    if (!(half_width >= 0.0)) throw std::invalid_argument("density: certificate half-width must be >= 0");
    if (grid_points < 2) throw std::invalid_argument("density: certificate grid too small");
    LogConvexityCertificate cert;
    cert.half_width = half_width;
    double min_convex = std::numeric_limits<double>::infinity();
    double min_mono = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
      const double t = half_width * i / (grid_points - 1);
      min_convex = std::min(min_convex, log_second(t));
      min_mono = std::min(min_mono, monotone_quantity_prime(t));
    }
    cert.min_log_convexity = min_convex;
    cert.min_monotonicity = min_mono;
    cert.valid = min_convex >= -1e-12 && min_mono >= -1e-12;
    return cert;
  }

  std::string describe() const {
    switch (kind_) {
      case DensityKind::Constant: return "constant(" + std::to_string(param_) + ")";
      case DensityKind::ExpQuadratic: return "exp_quadratic(c=" + std::to_string(param_) + ")";
      case DensityKind::CoshLinear: return "cosh_linear(c=" + std::to_string(param_) + ")";
      case DensityKind::PowerQuadratic: return "power_quadratic(p=" + std::to_string(param_) + ")";
      case DensityKind::Product: {
        std::string s = "product(";
        for (std::size_t i = 0; i < factors_.size(); ++i) {
          if (i) s += ", ";
          s += factors_[i].describe();
        }
        return s + ")";
      }
    }
    return "?";
  }

 private:
  explicit Density(DensityKind k) : kind_(k) {}

  DensityKind kind_;
  double param_ = 1.0;
  std::vector<Density> factors_;
};

}  // namespace isoperim
