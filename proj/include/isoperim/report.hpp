#pragma once

// Common result record for every identity and inequality check. A check
// computes its left and right sides through independent code paths and
// reports the signed deficit lhs - rhs; a non-negative deficit (up to
// tolerance) means the inequality held.

#include <algorithm>
#include <cmath>
#include <string>

namespace isoperim {

enum class CheckStatus {
  Ok,
  HypothesisViolated,  // a precondition certificate failed; sides still reported
  EvaluationError,
};

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Ok: return "ok";
    case CheckStatus::HypothesisViolated: return "hypothesis-violated";
    case CheckStatus::EvaluationError: return "error";
  }
  return "?";
}

struct CheckOptions {
  double equality_tol = 1e-8;    // |relative deficit| bound when equality is expected
  double inequality_tol = 1e-8;  // slack allowed below zero
  double identity_tol = 1e-9;    // bound for exact-identity checks (transfers)
  bool estimate_error = true;    // re-run with doubled panels and report the drift
  int grid_points = 181;         // theta samples for pointwise checks
};

// Looser equality window for the black-hole family, whose profile functions
// carry an integrable square-root singularity at the inner slice.
inline CheckOptions adss_options() {
  CheckOptions o;
  o.equality_tol = 1e-6;
  o.inequality_tol = 1e-6;
  return o;
}

struct DeficitReport {
  std::string case_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;           // lhs - rhs
  double relative_deficit = 0.0;  // deficit / max(|lhs|, |rhs|)
  double quad_error = 0.0;        // drift under panel doubling
  CheckStatus status = CheckStatus::Ok;
  bool pass = false;
  bool equality_expected = false;
  // The library only represents star-shaped radial graphs, so every verdict
  // is scoped to that class of domains.
  std::string domain_scope = "star-shaped-radial-graph";
  std::string detail;
};

inline DeficitReport finalize_report(std::string case_id, double lhs, double rhs,
                                     bool equality_expected, const CheckOptions& opts,
                                     CheckStatus status = CheckStatus::Ok,
                                     std::string detail = {}, double quad_error = 0.0) {
  DeficitReport r;
  r.case_id = std::move(case_id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.deficit = lhs - rhs;
  const double denom = std::max(std::abs(lhs), std::abs(rhs));
  r.relative_deficit = denom > 0.0 ? r.deficit / denom : 0.0;
  r.quad_error = quad_error;
  r.status = status;
  r.equality_expected = equality_expected;
  r.detail = std::move(detail);
  bool ok = r.relative_deficit >= -opts.inequality_tol;
  if (equality_expected) ok = ok && std::abs(r.relative_deficit) < opts.equality_tol;
  r.pass = status == CheckStatus::Ok && ok;
  return r;
}

}  // namespace isoperim
