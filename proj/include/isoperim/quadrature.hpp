#pragma once

// 1-D Gauss-Legendre panel quadrature, a substitution rule for integrands
// with an inverse-square-root singularity at the left endpoint, nested 2-D
// integration over radial-graph regions, and a seeded Monte Carlo estimator
// used as an independent cross-check.
//
// Nodes are always visited in a fixed order and sums are accumulated with
// compensated (error-tracking) addition, so results do not depend on call
// interleaving or thread count.

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isoperim {

enum class RuleKind {
  ClosedGauss,       // composite Gauss-Legendre panels
  OpenSingularLeft,  // substitution s = a + u^2; nodes never touch s = a
};

struct QuadratureRule {
  int order = 48;   // nodes per panel
  int panels = 4;
  RuleKind kind = RuleKind::ClosedGauss;
};

inline QuadratureRule closed_rule(const QuadratureRule& r) {
  return {r.order, r.panels, RuleKind::ClosedGauss};
}

inline QuadratureRule singular_left_rule(const QuadratureRule& r) {
  return {r.order, r.panels, RuleKind::OpenSingularLeft};
}

inline QuadratureRule doubled_panels(const QuadratureRule& r) {
  return {r.order, 2 * r.panels, r.kind};
}

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

struct GaussNodes {
  std::vector<double> nodes;    // strictly inside (-1, 1)
  std::vector<double> weights;  // positive, sum to 2
};

// Roots of the Legendre polynomial by Newton iteration from the Chebyshev
// initial guess. Accurate to a few ulps for the orders used here.
inline GaussNodes make_gauss_nodes(int order) {
  GaussNodes g;
  g.nodes.resize(order);
  g.weights.resize(order);
  const double pi = 3.14159265358979323846;
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[i] = -x;
    g.nodes[order - 1 - i] = x;
    g.weights[i] = w;
    g.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) g.nodes[half - 1] = 0.0;
  return g;
}

inline const GaussNodes& gauss_nodes(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussNodes> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss_nodes(order)).first;
  return it->second;
}

template <class F>
double integrate_closed_panels(F&& f, double a, double b, int order, int panels) {
  const auto& gn = gauss_nodes(order);
  const double h = (b - a) / panels;
  CompensatedSum acc;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    for (int i = 0; i < order; ++i) {
      const double x = mid + half * gn.nodes[i];
      const double fx = f(x);
      if (!std::isfinite(fx)) {
        throw std::runtime_error("integrate_1d: integrand not finite at node s=" + std::to_string(x));
      }
      acc.add(half * gn.weights[i] * fx);
    }
  }
  return acc.value();
}

}  // namespace detail

/// Composite quadrature of f over [a, b]. With RuleKind::OpenSingularLeft the
/// integral is evaluated through s = a + u^2, which turns an (s-a)^{-1/2}
/// factor into a smooth one.
template <class F>
double integrate_1d(F&& f, double a, double b, const QuadratureRule& rule = {}) {
  if (!(a <= b)) throw std::domain_error("integrate_1d: interval has a > b");
  if (rule.panels < 1) throw std::invalid_argument("quadrature panels must be positive");
  if (a == b) return 0.0;

  if (rule.kind == RuleKind::OpenSingularLeft) {
    const double width = std::sqrt(b - a);
    auto g = [&](double u) {
      const double s = a + u * u;
      const double fs = f(s);
      if (!std::isfinite(fs)) {
        throw std::runtime_error("integrate_1d: integrand not finite at node s=" + std::to_string(s));
      }
      return 2.0 * u * fs;
    };
    return detail::integrate_closed_panels(g, 0.0, width, rule.order, rule.panels);
  }
  return detail::integrate_closed_panels(f, a, b, rule.order, rule.panels);
}

/// Tensor-product integral of f(x, y) with y-bounds depending on x. The rule
/// kind applies to the inner (y) direction; the outer direction is always
/// integrated with closed panels. Summation order is fixed.
template <class F2, class Bounds>
double integrate_nested(F2&& f, double outer_lo, double outer_hi, Bounds&& inner_bounds,
                        const QuadratureRule& rule = {}) {
  if (!(outer_lo <= outer_hi)) throw std::domain_error("integrate_nested: outer interval has a > b");
  const auto& gn = detail::gauss_nodes(rule.order);
  const double h = (outer_hi - outer_lo) / rule.panels;
  CompensatedSum acc;
  for (int p = 0; p < rule.panels; ++p) {
    const double mid = outer_lo + (p + 0.5) * h;
    const double half = 0.5 * h;
    for (int i = 0; i < rule.order; ++i) {
      const double x = mid + half * gn.nodes[i];
      const auto [lo, hi] = inner_bounds(x);
      if (hi < lo) {
        throw std::domain_error("integrate_nested: inner bounds inverted at x=" + std::to_string(x));
      }
      const double inner = integrate_1d([&](double y) { return f(x, y); }, lo, hi, rule);
      acc.add(half * gn.weights[i] * inner);
    }
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle
// ---------------------------------------------------------------------------

struct McOracle {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

namespace detail {

// mt19937_64 output mapped to [0, 1) via the top 53 bits; identical across
// platforms for a fixed seed.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

template <class Sampler>
McEstimate mc_accumulate(Sampler&& sample_value, double measure, std::uint64_t samples) {
  if (samples == 0) throw std::invalid_argument("mc_estimate: sample count must be positive");
  CompensatedSum sum, sum_sq;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double v = sample_value();
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double n = static_cast<double>(samples);
  const double mean = sum.value() / n;
  const double var = std::max(0.0, sum_sq.value() / n - mean * mean);
  return {measure * mean, measure * std::sqrt(var / n)};
}

}  // namespace detail

/// Uniform-sampling estimate of the integral of f over [a, b].
template <class F>
McEstimate mc_integrate(F&& f, double a, double b, const McOracle& oracle) {
  detail::UniformStream u(oracle.seed);
  return detail::mc_accumulate([&] { return f(a + (b - a) * u.next()); }, b - a, oracle.samples);
}

/// Uniform-sampling estimate over the box [ax, bx] x [ay, by].
template <class F2>
McEstimate mc_integrate_box(F2&& f, double ax, double bx, double ay, double by, const McOracle& oracle) {
  detail::UniformStream u(oracle.seed);
  const double measure = (bx - ax) * (by - ay);
  return detail::mc_accumulate(
      [&] {
        const double x = ax + (bx - ax) * u.next();
        const double y = ay + (by - ay) * u.next();
        return f(x, y);
      },
      measure, oracle.samples);
}

/// Estimate over the radial-graph region { (x, y) : y_lo <= y <= y_hi(x) },
/// sampled through the enclosing box with y capped at y_cap.
template <class F2, class UpperFn>
McEstimate mc_integrate_radial(F2&& f, double x_lo, double x_hi, double y_lo, UpperFn&& y_hi,
                               double y_cap, const McOracle& oracle) {
  detail::UniformStream u(oracle.seed);
  const double measure = (x_hi - x_lo) * (y_cap - y_lo);
  return detail::mc_accumulate(
      [&] {
        const double x = x_lo + (x_hi - x_lo) * u.next();
        const double y = y_lo + (y_cap - y_lo) * u.next();
        return y <= y_hi(x) ? f(x, y) : 0.0;
      },
      measure, oracle.samples);
}

}  // namespace isoperim
