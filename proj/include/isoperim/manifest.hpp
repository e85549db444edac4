#pragma once

// Batch-run plumbing: a JSON manifest selects the manifold, density, default
// surface, quadrature rule, tolerances, and a list of checks (each with its
// own surfaces or a sharpness search). The schema is validated strictly --
// unknown keys are rejected with their JSON path -- before any computation.
// Report lines echo the FNV-1a hash of the manifest text for provenance.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "density.hpp"
#include "manifold.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "surface.hpp"
#include "transfer.hpp"
#include "verify.hpp"

namespace isoperim {

struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchRequest {
  std::vector<double> initial;
  int budget = 200;
};

struct CheckRequest {
  std::string case_id;
  std::vector<SurfaceGenerator> surfaces;
  std::optional<SearchRequest> search;
  std::optional<int> grid_points;
};

struct Manifest {
  Manifest(WarpedManifold m, Density d) : manifold(std::move(m)), density(std::move(d)) {}

  WarpedManifold manifold;
  Density density;
  std::optional<SurfaceGenerator> default_surface;
  QuadratureRule rule;
  McOracle mc;
  std::vector<CheckRequest> checks;
  std::optional<double> tol_equality;
  std::optional<double> tol_inequality;
  std::string hash_hex;
};

enum class OutputFormat { JsonLines, Csv };

inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ====================  schema helpers  ====================

namespace detail {

using nlohmann::json;

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ManifestError("'" + path + "' must be an object");
}

inline void expect_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ManifestError("unknown key '" + path + "/" + it.key() + "'");
  }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ManifestError("missing key '" + path + "/" + key + "'");
  return *it;
}

inline double get_number(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_number()) throw ManifestError("'" + path + "/" + key + "' must be a number");
  return v.get<double>();
}

inline double get_number_or(const json& obj, const std::string& path, const char* key,
                            double fallback) {
  return obj.contains(key) ? get_number(obj, path, key) : fallback;
}

inline long long get_integer(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) {
    const double x = v.get<double>();
    if (x == static_cast<long long>(x)) return static_cast<long long>(x);
  }
  throw ManifestError("'" + path + "/" + key + "' must be an integer");
}

inline std::string get_string(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) throw ManifestError("'" + path + "/" + key + "' must be a string");
  return v.get<std::string>();
}

inline Density parse_density(const json& j, const std::string& path) {
  expect_object(j, path);
  const std::string kind = get_string(j, path, "kind");
  if (kind == "constant") {
    expect_keys(j, path, {"kind", "scale"});
    return Density::constant(get_number_or(j, path, "scale", 1.0));
  }
  if (kind == "exp_quadratic") {
    expect_keys(j, path, {"kind", "coeff"});
    return Density::exp_quadratic(get_number(j, path, "coeff"));
  }
  if (kind == "cosh_linear") {
    expect_keys(j, path, {"kind", "coeff"});
    return Density::cosh_linear(get_number(j, path, "coeff"));
  }
  if (kind == "power_quadratic") {
    expect_keys(j, path, {"kind", "power"});
    return Density::power_quadratic(get_number(j, path, "power"));
  }
  if (kind == "product") {
    expect_keys(j, path, {"kind", "factors"});
    const json& factors = require(j, path, "factors");
    if (!factors.is_array() || factors.empty()) {
      throw ManifestError("'" + path + "/factors' must be a nonempty array");
    }
    std::vector<Density> parts;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      parts.push_back(parse_density(factors[i], path + "/factors[" + std::to_string(i) + "]"));
    }
    return Density::product(parts);
  }
  throw ManifestError("unknown density kind '" + kind + "' at '" + path + "'");
}

inline SurfaceGenerator parse_generator(const json& j, const std::string& path) {
  expect_object(j, path);
  const std::string g = get_string(j, path, "generator");
  if (g == "CenteredBall") {
    expect_keys(j, path, {"generator", "r0"});
    return CenteredBall{get_number(j, path, "r0")};
  }
  if (g == "Slice") {
    expect_keys(j, path, {"generator", "r0"});
    return Slice{get_number(j, path, "r0")};
  }
  if (g == "SliceAtRho") {
    expect_keys(j, path, {"generator", "rho0"});
    return SliceAtRho{get_number(j, path, "rho0")};
  }
  if (g == "OffCenterBall") {
    expect_keys(j, path, {"generator", "radius", "offset"});
    return OffCenterBall{get_number(j, path, "radius"), get_number(j, path, "offset")};
  }
  if (g == "Perturbed") {
    expect_keys(j, path, {"generator", "r0", "eps"});
    Perturbed p;
    p.r0 = get_number(j, path, "r0");
    const json& eps = require(j, path, "eps");
    if (!eps.is_array()) throw ManifestError("'" + path + "/eps' must be an array of numbers");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (!eps[i].is_number()) {
        throw ManifestError("'" + path + "/eps[" + std::to_string(i) + "]' must be a number");
      }
      p.cosine_eps.push_back(eps[i].get<double>());
    }
    return p;
  }
  throw ManifestError("unknown generator '" + g + "' at '" + path + "'");
}

inline WarpedManifold parse_manifold(const json& j) {
  expect_object(j, "manifold");
  const std::string kind = get_string(j, "manifold", "kind");
  const int n = static_cast<int>(get_integer(j, "manifold", "n"));
  const double r_max = get_number(j, "manifold", "r_max");
  if (kind == "hyperbolic") {
    expect_keys(j, "manifold", {"kind", "n", "r_max"});
    return WarpedManifold::hyperbolic(n, r_max);
  }
  if (kind == "euclidean") {
    expect_keys(j, "manifold", {"kind", "n", "r_max"});
    return WarpedManifold::euclidean(n, r_max);
  }
  if (kind == "ads_schwarzschild") {
    expect_keys(j, "manifold", {"kind", "n", "m", "r_max"});
    return WarpedManifold::ads_schwarzschild(n, get_number(j, "manifold", "m"), r_max);
  }
  throw ManifestError("unknown manifold kind '" + kind + "'");
}

inline const std::vector<std::string>& known_case_ids() {
  static const std::vector<std::string> ids = {
      "MainThm",       "CorCosh",      "CorCoshMinusU",  "CorH0",
      "LemSym",        "LemVolW",      "Warped",         "AdSS",
      "ThmC",          "Lem32",        "JensenStep",     "VolumeTransfer",
      "AreaTransfer",  "SupportTransfer", "MinkowskiNormal"};
  return ids;
}

inline bool is_hyperbolic_case(const std::string& id) {
  return id == "MainThm" || id == "CorCosh" || id == "CorCoshMinusU" || id == "CorH0" ||
         id == "LemSym" || id == "LemVolW";
}

inline void validate_case_for_manifold(const std::string& id, const WarpedManifold& M,
                                       const std::string& path) {
  bool known = false;
  for (const auto& k : known_case_ids()) {
    if (k == id) {
      known = true;
      break;
    }
  }
  if (!known) throw ManifestError("unknown case '" + id + "' at '" + path + "'");
  const ManifoldKind kind = M.kind();
  if ((is_hyperbolic_case(id) || id == "MinkowskiNormal") && kind != ManifoldKind::Hyperbolic) {
    throw ManifestError("case '" + id + "' needs the hyperbolic manifold ('" + path + "')");
  }
  if (id == "AdSS" && kind != ManifoldKind::AdsSchwarzschild) {
    throw ManifestError("case '" + id + "' needs the ads_schwarzschild manifold ('" + path + "')");
  }
  if (id == "ThmC" && M.lambda_min() > 0.0) {
    throw ManifestError("case 'ThmC' needs lambda(a) = 0 ('" + path + "')");
  }
}

}  // namespace detail

// ====================  parsing  ====================

inline Manifest parse_manifest(const std::string& text) {
  using detail::expect_keys;
  using detail::get_number;
  using detail::require;
  using nlohmann::json;

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  detail::expect_object(root, "");
  expect_keys(root, "", {"manifold", "density", "surface", "quadrature", "tolerances", "checks"});

  WarpedManifold manifold = detail::parse_manifold(require(root, "", "manifold"));
  Density density = detail::parse_density(require(root, "", "density"), "density");
  Manifest man(std::move(manifold), std::move(density));
  man.hash_hex = fnv1a_hex(text);

  if (root.contains("surface")) {
    man.default_surface = detail::parse_generator(root["surface"], "surface");
  }

  if (root.contains("quadrature")) {
    const json& q = root["quadrature"];
    detail::expect_object(q, "quadrature");
    expect_keys(q, "quadrature", {"order", "panels", "mc_samples", "seed"});
    if (q.contains("order")) {
      const long long order = detail::get_integer(q, "quadrature", "order");
      if (order < 2 || order > 512) {
        throw ManifestError("'quadrature/order' must be between 2 and 512");
      }
      man.rule.order = static_cast<int>(order);
    }
    if (q.contains("panels")) {
      const long long panels = detail::get_integer(q, "quadrature", "panels");
      if (panels < 1 || panels > 4096) {
        throw ManifestError("'quadrature/panels' must be between 1 and 4096");
      }
      man.rule.panels = static_cast<int>(panels);
    }
    if (q.contains("mc_samples")) {
      const long long samples = detail::get_integer(q, "quadrature", "mc_samples");
      if (samples < 1) throw ManifestError("'quadrature/mc_samples' must be positive");
      man.mc.samples = static_cast<std::size_t>(samples);
    }
    if (q.contains("seed")) {
      const long long seed = detail::get_integer(q, "quadrature", "seed");
      if (seed < 0) throw ManifestError("'quadrature/seed' must be nonnegative");
      man.mc.seed = static_cast<std::uint64_t>(seed);
    }
  }

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    detail::expect_object(t, "tolerances");
    expect_keys(t, "tolerances", {"equality", "inequality"});
    if (t.contains("equality")) {
      man.tol_equality = get_number(t, "tolerances", "equality");
      if (*man.tol_equality <= 0.0) throw ManifestError("'tolerances/equality' must be positive");
    }
    if (t.contains("inequality")) {
      man.tol_inequality = get_number(t, "tolerances", "inequality");
      if (*man.tol_inequality <= 0.0) {
        throw ManifestError("'tolerances/inequality' must be positive");
      }
    }
  }

  const json& checks = require(root, "", "checks");
  if (!checks.is_array()) throw ManifestError("'checks' must be an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string path = "checks[" + std::to_string(i) + "]";
    const json& c = checks[i];
    detail::expect_object(c, path);
    expect_keys(c, path, {"case", "surfaces", "search", "grid_points"});
    CheckRequest req;
    req.case_id = detail::get_string(c, path, "case");
    detail::validate_case_for_manifold(req.case_id, man.manifold, path);
    if (c.contains("surfaces")) {
      const json& arr = c["surfaces"];
      if (!arr.is_array() || arr.empty()) {
        throw ManifestError("'" + path + "/surfaces' must be a nonempty array");
      }
      for (std::size_t k = 0; k < arr.size(); ++k) {
        req.surfaces.push_back(
            detail::parse_generator(arr[k], path + "/surfaces[" + std::to_string(k) + "]"));
      }
    }
    if (c.contains("search")) {
      if (!req.surfaces.empty()) {
        throw ManifestError("'" + path + "' must not set both surfaces and search");
      }
      if (!detail::is_hyperbolic_case(req.case_id)) {
        throw ManifestError("'" + path + "/search' applies to hyperbolic cases only");
      }
      const json& s = c["search"];
      detail::expect_object(s, path + "/search");
      expect_keys(s, path + "/search", {"initial", "budget"});
      SearchRequest sr;
      const json& init = require(s, path + "/search", "initial");
      if (!init.is_array() || init.empty()) {
        throw ManifestError("'" + path + "/search/initial' must be a nonempty array");
      }
      for (const auto& x : init) {
        if (!x.is_number()) {
          throw ManifestError("'" + path + "/search/initial' must contain numbers");
        }
        sr.initial.push_back(x.get<double>());
      }
      if (s.contains("budget")) {
        const long long b = detail::get_integer(s, path + "/search", "budget");
        if (b < 1) throw ManifestError("'" + path + "/search/budget' must be positive");
        sr.budget = static_cast<int>(b);
      }
      req.search = std::move(sr);
    }
    if (c.contains("grid_points")) {
      const long long gp = detail::get_integer(c, path, "grid_points");
      if (gp < 3 || gp > 100000) {
        throw ManifestError("'" + path + "/grid_points' must be between 3 and 100000");
      }
      req.grid_points = static_cast<int>(gp);
    }
    if (req.surfaces.empty() && !req.search && !man.default_surface) {
      throw ManifestError("'" + path + "' has no surfaces and the manifest has no default surface");
    }
    man.checks.push_back(std::move(req));
  }
  return man;
}

inline Manifest load_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot read manifest file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

// ====================  output  ====================

namespace detail {

inline std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

inline std::string report_json_line(const DeficitReport& r, const std::string& hash) {
  std::string s = "{\"case\":\"" + json_escape(r.case_id) + "\"";
  s += ",\"lhs\":" + num17(r.lhs);
  s += ",\"rhs\":" + num17(r.rhs);
  s += ",\"deficit\":" + num17(r.deficit);
  s += ",\"rel_deficit\":" + num17(r.relative_deficit);
  s += ",\"status\":\"";
  s += to_string(r.status);
  s += "\",\"pass\":";
  s += r.pass ? "true" : "false";
  s += ",\"equality_expected\":";
  s += r.equality_expected ? "true" : "false";
  s += ",\"quad_error\":" + num17(r.quad_error);
  s += ",\"domain_scope\":\"" + json_escape(r.domain_scope) + "\"";
  s += ",\"detail\":\"" + json_escape(r.detail) + "\"";
  s += ",\"manifest\":\"" + hash + "\"}";
  return s;
}

inline std::string report_csv_row(const DeficitReport& r) {
  std::string s = r.case_id;
  s += ',' + num17(r.lhs);
  s += ',' + num17(r.rhs);
  s += ',' + num17(r.deficit);
  s += ',' + num17(r.relative_deficit);
  s += ',';
  s += to_string(r.status);
  s += ',';
  s += r.pass ? "true" : "false";
  return s;
}

}  // namespace detail

/// Per-check options: manifest tolerances override the per-case defaults
/// (the AdSS case starts from its looser horizon-substitution default).
inline CheckOptions options_for(const Manifest& man, const CheckRequest& req) {
  CheckOptions opts = req.case_id == "AdSS" ? adss_options() : CheckOptions{};
  if (man.tol_equality) opts.equality_tol = *man.tol_equality;
  if (man.tol_inequality) opts.inequality_tol = *man.tol_inequality;
  if (req.grid_points) opts.grid_points = *req.grid_points;
  return opts;
}

inline DeficitReport dispatch_case(const std::string& case_id, const RadialProfile& p,
                                   const WarpedManifold& M, const Density& d,
                                   const QuadratureRule& rule, const CheckOptions& opts) {
  if (case_id == "Warped") return check_warped(p, M, d, rule, opts);
  if (case_id == "AdSS") return check_adss(p, M, rule, opts);
  if (case_id == "ThmC") return check_euclidean(EuclideanCase::ThmC, p, M, d, rule, opts);
  if (case_id == "Lem32") return check_euclidean(EuclideanCase::Lem32, p, M, d, rule, opts);
  if (case_id == "JensenStep") {
    return check_euclidean(EuclideanCase::JensenStep, p, M, d, rule, opts);
  }
  if (case_id == "VolumeTransfer") return check_volume_transfer(p, M, d, rule, opts);
  if (case_id == "AreaTransfer") return check_area_transfer(p, M, d, rule, opts);
  if (case_id == "SupportTransfer") return check_support_transfer(p, M, opts);
  if (case_id == "MinkowskiNormal") return check_minkowski_normal(p, M, opts);
  return check_hyperbolic(hyperbolic_case_from_string(case_id), p, M, d, rule, opts);
}

/// Execute every check in the manifest and stream one report per line.
/// Exit code: 0 all pass, 1 some ok-status check failed its inequality,
/// 2 any report carries a non-ok status (hypothesis or evaluation trouble).
inline int run_manifest(const Manifest& man, std::ostream& os, OutputFormat format) {
  std::vector<DeficitReport> reports;
  for (const CheckRequest& req : man.checks) {
    const CheckOptions opts = options_for(man, req);
    if (req.search) {
      SearchResult sr =
          minimize_deficit(hyperbolic_case_from_string(req.case_id), man.manifold, man.density,
                           man.rule, req.search->initial, req.search->budget, opts);
      char note[200];
      std::string pt;
      for (double x : sr.best_point) {
        if (!pt.empty()) pt += ", ";
        pt += detail::num17(x);
      }
      std::snprintf(note, sizeof(note), "; search evaluations=%d best=[", sr.evaluations);
      sr.report.detail += note + pt + "]";
      reports.push_back(std::move(sr.report));
    } else {
      std::vector<SurfaceGenerator> gens = req.surfaces;
      if (gens.empty()) gens.push_back(*man.default_surface);
      auto batch = sweep(
          gens.size(),
          [&](std::size_t i) {
            const RadialProfile p = make_profile(gens[i], man.manifold);
            return dispatch_case(req.case_id, p, man.manifold, man.density, man.rule, opts);
          },
          req.case_id);
      for (auto& r : batch) reports.push_back(std::move(r));
    }
  }

  if (format == OutputFormat::Csv) os << "case,lhs,rhs,deficit,rel_deficit,status,pass\n";
  for (const DeficitReport& r : reports) {
    os << (format == OutputFormat::Csv ? detail::report_csv_row(r)
                                       : detail::report_json_line(r, man.hash_hex))
       << '\n';
  }

  int code = 0;
  for (const DeficitReport& r : reports) {
    if (r.status != CheckStatus::Ok) return 2;
    if (!r.pass) code = 1;
  }
  return code;
}

/// CSV dump (header `t,F,G`, 2,049 rows) of a profile function built from the
/// manifest's manifold, density, and quadrature rule.
inline void write_profile_table(ProfileKind kind, const Manifest& man, std::ostream& os) {
  const ProfileFunction f(kind, man.manifold, man.density, man.rule);
  os << "t,F,G\n";
  for (const auto& row : f.table()) {
    os << detail::num17(row.t) << ',' << detail::num17(row.f) << ',' << detail::num17(row.g)
       << '\n';
  }
}

}  // namespace isoperim
