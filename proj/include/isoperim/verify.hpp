#pragma once

// Deficit checks. Every check computes its left side by direct surface/bulk
// quadrature and its right side through an independently tabulated model
// profile (or a closed form), then reports the signed deficit lhs - rhs.
// Quadrature error is estimated by re-evaluating both sides with doubled
// panel counts.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "density.hpp"
#include "manifold.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "surface.hpp"
#include "transfer.hpp"

namespace isoperim {

enum class HyperbolicCase { MainThm, CorCosh, CorCoshMinusU, CorH0, LemSym, LemVolW };
enum class EuclideanCase { ThmC, Lem32, JensenStep };

inline const char* to_string(HyperbolicCase c) {
  switch (c) {
    case HyperbolicCase::MainThm: return "MainThm";
    case HyperbolicCase::CorCosh: return "CorCosh";
    case HyperbolicCase::CorCoshMinusU: return "CorCoshMinusU";
    case HyperbolicCase::CorH0: return "CorH0";
    case HyperbolicCase::LemSym: return "LemSym";
    case HyperbolicCase::LemVolW: return "LemVolW";
  }
  return "?";
}

inline const char* to_string(EuclideanCase c) {
  switch (c) {
    case EuclideanCase::ThmC: return "ThmC";
    case EuclideanCase::Lem32: return "Lem32";
    case EuclideanCase::JensenStep: return "JensenStep";
  }
  return "?";
}

inline HyperbolicCase hyperbolic_case_from_string(const std::string& s) {
  for (HyperbolicCase c : {HyperbolicCase::MainThm, HyperbolicCase::CorCosh,
                           HyperbolicCase::CorCoshMinusU, HyperbolicCase::CorH0,
                           HyperbolicCase::LemSym, HyperbolicCase::LemVolW}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown hyperbolic case '" + s + "'");
}

inline EuclideanCase euclidean_case_from_string(const std::string& s) {
  for (EuclideanCase c : {EuclideanCase::ThmC, EuclideanCase::Lem32, EuclideanCase::JensenStep}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown euclidean case '" + s + "'");
}

namespace detail {

inline std::string describe_certificate(const LogConvexityCertificate& cert) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "density hypothesis fails on [0, %.6g]: min log-convexity %.3g, min monotone slope %.3g",
                cert.half_width, cert.min_log_convexity, cert.min_monotonicity);
  return buf;
}

template <class Eval>
DeficitReport run_two_sided(const std::string& case_id, Eval&& eval, const QuadratureRule& rule,
                            bool equality_expected, const CheckOptions& opts, CheckStatus status,
                            std::string detail) {
  const auto [lhs, rhs] = eval(rule);
  double qerr = 0.0;
  if (opts.estimate_error) {
    const auto [lhs2, rhs2] = eval(doubled_panels(rule));
    qerr = std::max(std::abs(lhs - lhs2), std::abs(rhs - rhs2));
  }
  return finalize_report(case_id, lhs, rhs, equality_expected, opts, status, std::move(detail), qerr);
}

}  // namespace detail

// ====================  hyperbolic checks  ====================

inline DeficitReport check_hyperbolic(HyperbolicCase c, const RadialProfile& p,
                                      const WarpedManifold& M, const Density& d,
                                      const QuadratureRule& rule = {},
                                      const CheckOptions& opts = {}) {
  if (M.kind() != ManifoldKind::Hyperbolic) {
    throw std::invalid_argument("hyperbolic checks need the hyperbolic manifold");
  }
  const int n = M.sphere_dim();
  const double omega = M.sphere_area();
  const double a = M.inner_radius();
  const Density unit = Density::constant(1.0);

  CheckStatus status = CheckStatus::Ok;
  std::string detail = p.describe();
  const bool weighted = c == HyperbolicCase::MainThm || c == HyperbolicCase::LemSym;
  if (weighted && !d.is_constant()) {
    const auto cert = d.certify(M.lambda_max());
    if (!cert.valid) {
      status = CheckStatus::HypothesisViolated;
      detail += "; " + detail::describe_certificate(cert);
    }
  }

  auto eval = [&](const QuadratureRule& qr) -> std::pair<double, double> {
    switch (c) {
      case HyperbolicCase::MainThm: {
        const double lhs = weighted_area(p, M, d, qr);
        const double v = weighted_volume(p, M, d, qr);
        return {lhs, ProfileFunction(ProfileKind::Psi, M, d, qr)(v)};
      }
      case HyperbolicCase::CorCosh: {
        const double lhs = weighted_area(p, M, unit, qr);
        const double s = (n + 1.0) * weighted_volume(p, M, unit, qr);
        return {lhs, std::sqrt(s * s + std::pow(omega, 2.0 / (n + 1)) *
                                           std::pow(s, 2.0 * n / (n + 1)))};
      }
      case HyperbolicCase::CorCoshMinusU: {
        const double lhs = integrate_polar(
            n,
            [&](double th) {
              const auto w = M.warp_at(p.radius(th));
              const double dr = p.radius_prime(th);
              const double element =
                  std::pow(w.lambda, n - 1) * std::sqrt(w.lambda * w.lambda + dr * dr);
              return (w.lambda_prime - support_function(p, M, th)) * element;
            },
            qr);
        const double vol = unweighted_volume(p, M, qr);
        return {lhs, ProfileFunction(ProfileKind::H0Tilde, M, unit, qr)(vol)};
      }
      case HyperbolicCase::CorH0: {
        const double lhs = weighted_area(p, M, unit, qr);
        const double vol = unweighted_volume(p, M, qr);
        return {lhs, ProfileFunction(ProfileKind::H0, M, unit, qr)(vol)};
      }
      case HyperbolicCase::LemSym: {
        const double lhs = integrate_polar_nested(
            n,
            [&](double, double r) {
              const auto w = M.warp_at(r);
              return d.derivative(w.lambda) * w.lambda_prime * std::pow(w.lambda, n + 1);
            },
            [&](double th) { return std::pair<double, double>(a, p.radius(th)); }, qr);
        const double v = weighted_volume(p, M, d, qr);
        return {lhs, ProfileFunction(ProfileKind::Eta, M, d, qr)(v)};
      }
      case HyperbolicCase::LemVolW: {
        const double lhs = weighted_volume(p, M, unit, qr);
        const double vol = unweighted_volume(p, M, qr);
        const double r_ball = ProfileFunction(ProfileKind::F0, M, unit, qr).invert(vol);
        return {lhs, omega * std::pow(std::sinh(r_ball), n + 1) / (n + 1.0)};
      }
    }
    throw std::logic_error("unreachable hyperbolic case");
  };

  bool equality = p.is_round();
  if (c == HyperbolicCase::LemSym && d.is_constant()) equality = true;  // both sides vanish
  return detail::run_two_sided(to_string(c), eval, rule, equality, opts, status, std::move(detail));
}

// ====================  general warped products  ====================

/// Boundary-vs-model check in an arbitrary warped product; the structural
/// hypotheses on the slope excess L(t) = slope_excess(t) and on the density
/// are sampled on a grid and reported as hypothesis-violated when they fail
/// (the black-hole manifold violates (L' t)' >= 0 strictly inside, so there
/// this check is expected to carry that status).
inline DeficitReport check_warped(const RadialProfile& p, const WarpedManifold& M,
                                  const Density& d, const QuadratureRule& rule = {},
                                  const CheckOptions& opts = {}) {
  CheckStatus status = CheckStatus::Ok;
  std::string detail = p.describe();

  if (!d.is_constant()) {
    const auto cert = d.certify(M.lambda_max());
    if (!cert.valid) {
      status = CheckStatus::HypothesisViolated;
      detail += "; " + detail::describe_certificate(cert);
    }
  }

  {
    // Sample L' >= 0, (L' t)' >= 0 and the combined density/warp condition
    //   (log phi)'' L t + (log phi)' (L t)' + (L' t)' >= 0
    // by central differences away from the inner boundary, where L may have
    // a branch point.
    const double lo = M.lambda_min();
    const double hi = M.lambda_max();
    const double inset = 1e-2 * (hi - lo);
    const int points = std::max(opts.grid_points, 3);
    double min_slope = std::numeric_limits<double>::infinity();
    double min_radial = min_slope;
    double min_combined = min_slope;
    for (int i = 0; i < points; ++i) {
      double t = lo + inset + (hi - lo - inset) * i / (points - 1.0);
      const double h = std::min(1e-5 * std::max(1.0, t), 0.45 * t);
      t = std::min(t, hi - h);  // keep the upper stencil point inside the warp range
      const double lm = M.slope_excess(t - h);
      const double l0 = M.slope_excess(t);
      const double lp = M.slope_excess(t + h);
      const double l1 = (lp - lm) / (2.0 * h);
      const double l2 = (lp - 2.0 * l0 + lm) / (h * h);
      const double radial = l2 * t + l1;  // (L' t)'
      const double combined =
          d.log_second(t) * l0 * t + d.log_derivative(t) * (l1 * t + l0) + radial;
      min_slope = std::min(min_slope, l1);
      min_radial = std::min(min_radial, radial);
      min_combined = std::min(min_combined, combined);
    }
    if (min_slope < -1e-10 || min_radial < -1e-8 || min_combined < -1e-8) {
      status = CheckStatus::HypothesisViolated;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "; warp hypothesis fails: min L' %.3g, min (L' t)' %.3g, min combined %.3g",
                    min_slope, min_radial, min_combined);
      detail += buf;
    }
  }

  auto eval = [&](const QuadratureRule& qr) -> std::pair<double, double> {
    const double lhs = weighted_area(p, M, d, qr);
    const double v = weighted_volume(p, M, d, qr);
    return {lhs, ProfileFunction(ProfileKind::PsiTilde, M, d, qr)(v)};
  };
  return detail::run_two_sided("Warped", eval, rule, p.is_round(), opts, status, std::move(detail));
}

// ====================  black-hole manifold  ====================

/// Quadratic-form check on the ads_schwarzschild manifold:
///   (int lambda' dmu)^2  >=  ((n+1) EtaHat(V) + m(n+1)/2 I)^2
///                            + ((n+1) omega^{1/n} V + omega^{(n+1)/n} m)^{2n/(n+1)}
/// with V = int lambda' dv and the singular bulk integral
///   I = int_Omega lambda' / (lambda^n sqrt(lambda'^2 - 1)) dv
///     = int_angles int_{rho_h}^{rho(theta)} drho / (rho L(rho)),
/// integrated with the square-root-adapted rule at the horizon end.
inline DeficitReport check_adss(const RadialProfile& p, const WarpedManifold& M,
                                const QuadratureRule& rule = {},
                                const CheckOptions& opts = adss_options()) {
  if (M.kind() != ManifoldKind::AdsSchwarzschild || M.mass() <= 0.0) {
    throw std::invalid_argument(
        "the AdSS check needs the ads_schwarzschild manifold with positive mass");
  }
  const int n = M.sphere_dim();
  const double omega = M.sphere_area();
  const double m = M.mass();
  const Density unit = Density::constant(1.0);

  auto eval = [&](const QuadratureRule& qr) -> std::pair<double, double> {
    const double area = weighted_area(p, M, unit, qr);
    const double v = weighted_volume(p, M, unit, qr);
    const double singular = integrate_polar_nested(
        n, [&](double, double rho) { return 1.0 / (rho * M.slope_excess(rho)); },
        [&](double th) {
          return std::pair<double, double>(M.lambda_min(), M.warp_at(p.radius(th)).lambda);
        },
        singular_left_rule(qr));
    const double boundary_term =
        (n + 1.0) * ProfileFunction(ProfileKind::EtaHat, M, unit, qr)(v) +
        0.5 * m * (n + 1.0) * singular;
    const double bulk_term =
        std::pow((n + 1.0) * std::pow(omega, 1.0 / n) * v + std::pow(omega, (n + 1.0) / n) * m,
                 2.0 * n / (n + 1.0));
    return {area * area, boundary_term * boundary_term + bulk_term};
  };
  return detail::run_two_sided("AdSS", eval, rule, p.is_round(), opts, CheckStatus::Ok,
                               p.describe());
}

// ====================  euclidean shadow checks  ====================

inline DeficitReport check_euclidean(EuclideanCase c, const EuclideanShadow& sh, const Density& d,
                                     const QuadratureRule& rule = {},
                                     const CheckOptions& opts = {}) {
  const WarpedManifold& M = sh.source();
  if (c == EuclideanCase::ThmC && sh.rho_min() > 0.0) {
    throw std::invalid_argument("ThmC needs a shadow star-shaped about the origin (lambda(a) = 0)");
  }

  CheckStatus status = CheckStatus::Ok;
  std::string detail = sh.profile().describe();
  if (!d.is_constant()) {
    const auto cert = d.certify(M.lambda_max());
    if (!cert.valid) {
      status = CheckStatus::HypothesisViolated;
      detail += "; " + detail::describe_certificate(cert);
    }
  }

  auto eval = [&](const QuadratureRule& qr) -> std::pair<double, double> {
    switch (c) {
      case EuclideanCase::ThmC: {
        const double lhs = shadow_weighted_perimeter(sh, d, qr);
        const double v = shadow_weighted_volume(sh, d, qr);
        return {lhs, ProfileFunction(ProfileKind::Xi, M, d, qr)(v)};
      }
      case EuclideanCase::Lem32: {
        const double lhs = shadow_weighted_perimeter(sh, d, qr);
        const double v = shadow_weighted_volume(sh, d, qr);
        return {lhs, ProfileFunction(ProfileKind::XiTilde, M, d, qr)(v)};
      }
      case EuclideanCase::JensenStep: {
        const double lhs = shadow_tilted_perimeter(sh, d, qr);
        return {lhs, std::hypot(shadow_support_integral(sh, d, qr),
                                shadow_weighted_perimeter(sh, d, qr))};
      }
    }
    throw std::logic_error("unreachable euclidean case");
  };

  bool equality = sh.is_round();
  if (c == EuclideanCase::Lem32) {
    equality = false;
    detail += "; equality diagnosis: not asserted";
  }
  if (c == EuclideanCase::JensenStep && M.kind() == ManifoldKind::Euclidean) {
    equality = true;  // zero slope excess makes the tilt trivial
  }
  return detail::run_two_sided(to_string(c), eval, rule, equality, opts, status,
                               std::move(detail));
}

inline DeficitReport check_euclidean(EuclideanCase c, const RadialProfile& p,
                                     const WarpedManifold& M, const Density& d,
                                     const QuadratureRule& rule = {},
                                     const CheckOptions& opts = {}) {
  return check_euclidean(c, project(p, M), d, rule, opts);
}

// ====================  deficit minimization  ====================

struct TracePoint {
  std::vector<double> point;
  double value = 0.0;
};

struct NelderMeadResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  int evaluations = 0;
  std::vector<TracePoint> trace;
};

/// Plain Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink
/// 1/2), stopped by evaluation budget; returns the best point ever visited,
/// not the final simplex. A budget smaller than the initial simplex degrades
/// to evaluating what it can (budget 1 returns the start point).
template <class F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& start, double step, int budget) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead needs a nonempty start point");
  if (budget < 1) throw std::invalid_argument("nelder_mead needs at least one evaluation");

  NelderMeadResult out;
  auto track = [&](std::vector<double> x) {
    const double v = f(x);
    if (out.evaluations == 0 || v < out.best_value) {
      out.best_value = v;
      out.best_point = x;
    }
    ++out.evaluations;
    out.trace.push_back({std::move(x), v});
    return v;
  };

  struct Vertex {
    std::vector<double> x;
    double v;
  };
  std::vector<Vertex> simplex;
  simplex.push_back({start, track(start)});
  for (std::size_t i = 0; i < dim && out.evaluations < budget; ++i) {
    auto x = start;
    x[i] += step;
    simplex.push_back({x, track(x)});
  }
  if (simplex.size() < dim + 1) return out;

  auto by_value = [](const Vertex& l, const Vertex& r) { return l.v < r.v; };
  while (out.evaluations < budget) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    std::vector<double> cen(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) cen[k] += simplex[i].x[k] / static_cast<double>(dim);
    }
    Vertex& worst = simplex.back();
    auto along = [&](double t) {
      std::vector<double> x(dim);
      for (std::size_t k = 0; k < dim; ++k) x[k] = cen[k] + t * (cen[k] - worst.x[k]);
      return x;
    };

    auto xr = along(1.0);
    const double vr = track(xr);
    if (vr < simplex.front().v) {
      if (out.evaluations >= budget) break;
      auto xe = along(2.0);
      const double ve = track(xe);
      worst = ve < vr ? Vertex{std::move(xe), ve} : Vertex{std::move(xr), vr};
    } else if (vr < simplex[dim - 1].v) {
      worst = {std::move(xr), vr};
    } else {
      if (out.evaluations >= budget) break;
      auto xc = along(vr < worst.v ? 0.5 : -0.5);
      const double vc = track(xc);
      if (vc < std::min(vr, worst.v)) {
        worst = {std::move(xc), vc};
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          if (out.evaluations >= budget) break;
          for (std::size_t k = 0; k < dim; ++k) {
            simplex[i].x[k] = simplex.front().x[k] + 0.5 * (simplex[i].x[k] - simplex.front().x[k]);
          }
          simplex[i].v = track(simplex[i].x);
        }
      }
    }
  }
  return out;
}

struct SearchResult {
  DeficitReport report;
  std::vector<double> best_point;
  int evaluations = 0;
  std::vector<TracePoint> trace;
};

inline RadialProfile perturbed_profile(const std::vector<double>& x, const WarpedManifold& M) {
  Perturbed gen;
  gen.r0 = x.front();
  gen.cosine_eps.assign(x.begin() + 1, x.end());
  return make_profile(SurfaceGenerator(gen), M);
}

/// Numerically search, over perturbed-ball shapes {r0, eps_1, eps_2, ...},
/// for the smallest relative deficit of a hyperbolic check. Shapes outside
/// the admissible family score a flat penalty. The returned report re-checks
/// the best shape with full error estimation.
inline SearchResult minimize_deficit(HyperbolicCase c, const WarpedManifold& M, const Density& d,
                                     const QuadratureRule& rule, const std::vector<double>& initial,
                                     int budget, const CheckOptions& opts = {}) {
  if (initial.empty()) {
    throw std::invalid_argument("minimize_deficit needs an initial point {r0, eps...}");
  }
  CheckOptions inner = opts;
  inner.estimate_error = false;
  auto objective = [&](const std::vector<double>& x) -> double {
    try {
      const RadialProfile prof = perturbed_profile(x, M);
      const DeficitReport rep = check_hyperbolic(c, prof, M, d, rule, inner);
      if (rep.status != CheckStatus::Ok) return 1e6;
      return rep.relative_deficit;
    } catch (const std::exception&) {
      return 1e6;  // outside the admissible shape family
    }
  };
  NelderMeadResult nm = nelder_mead(objective, initial, 0.05, budget);
  SearchResult out;
  out.best_point = nm.best_point;
  out.evaluations = nm.evaluations;
  out.trace = std::move(nm.trace);
  out.report = check_hyperbolic(c, perturbed_profile(nm.best_point, M), M, d, rule, opts);
  return out;
}

// ====================  sweeps  ====================

/// Run `runner(i)` for i in [0, count), catching failures into
/// evaluation-error reports so one bad point cannot sink a table. Honors
/// ISOPERIM_THREADS (default 1; results are ordered by index either way).
template <class Runner>
std::vector<DeficitReport> sweep(std::size_t count, Runner&& runner,
                                 const std::string& fallback_case_id) {
  std::vector<DeficitReport> out(count);
  auto run_one = [&](std::size_t i) {
    try {
      out[i] = runner(i);
    } catch (const std::exception& e) {
      DeficitReport r;
      r.case_id = fallback_case_id;
      r.status = CheckStatus::EvaluationError;
      r.pass = false;
      r.detail = e.what();
      out[i] = r;
    }
  };

  int threads = 1;
  if (const char* env = std::getenv("ISOPERIM_THREADS")) threads = std::max(1, std::atoi(env));
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
    return out;
  }
  std::vector<std::future<void>> tasks;
  tasks.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    tasks.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < count; i += workers) run_one(i);
    }));
  }
  for (auto& task : tasks) task.get();
  return out;
}

}  // namespace isoperim
