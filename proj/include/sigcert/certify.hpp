#pragma once

// Certificate checks: each geometric or ODE condition on a path is turned
// into a family of linear functionals on its truncated signature, evaluated
// for every word w up to a length bound. Zero residuals up to that bound are
// necessary, never sufficient, so PASS reads "consistent up to length L".

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigcert/path.hpp"
#include "sigcert/poly.hpp"
#include "sigcert/signature.hpp"

namespace sigcert {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct CheckConfig {
  std::size_t K = 5;
  std::size_t L = 2;
  double tol_pass = 1e-5;
  double tol_fail = 1e-3;
  /// Recorded in every report; the checks assume a reduced path.
  std::string reducedness = "assumed";

  /// 1e-5 / 1e-3 for sampled paths, 1e-9 / 1e-6 for piecewise-linear ones.
  static CheckConfig defaults_for(const PathModel& x);
  /// Throws ConfigError unless 1 <= L, 1 <= K and tol_pass < tol_fail.
  void validate() const;
};

Verdict classify(double max_abs_normalized, const CheckConfig& cfg);

struct ResidualRow {
  /// Condition family within the report, e.g. "g1", "i=2", "X(0)[3]".
  std::string condition;
  /// The quantified word w; empty for point conditions.
  std::string word;
  double residual = 0;
  /// residual / (1 + max |signature entry| at level |w| + 2).
  double normalized = 0;
};

struct ResidualReport {
  std::string condition;
  std::size_t K = 0;
  std::size_t L = 0;
  double tol_pass = 0;
  double tol_fail = 0;
  std::vector<ResidualRow> rows;
  /// Over this report's rows and all children.
  double max_abs_residual = 0;
  /// Same for normalized residuals; the verdict compares this against the
  /// tolerances so that thresholds do not depend on the path's scale.
  double max_abs_normalized = 0;
  Verdict verdict = Verdict::Pass;
  std::map<std::string, std::string> metadata;
  std::vector<ResidualReport> children;

  /// Largest |residual| among rows whose condition matches exactly.
  double max_abs(const std::string& condition_name) const;
  /// Residual of one row; throws UsageError when absent.
  double residual(const std::string& condition_name, const std::string& word) const;
  const ResidualReport& child(const std::string& condition_name) const;
};

std::string to_json_text(const ResidualReport& r);

struct VarietySpec {
  std::vector<MultiPoly> polys;
  /// Also require g_i(X(a)) = 0.
  bool anchored = false;
};

struct CauchyProblem {
  std::size_t r = 1;
  std::size_t l = 1;
  /// Polynomials in d = 1 + r(l+1) variables.
  std::vector<MultiPoly> F;
  /// Initial data v_0 .. v_{l-1}, each of length r.
  std::vector<std::vector<double>> init;
};

/// Path together with its signature and the data every check needs.
struct PreparedPath {
  PathModel path;
  TruncSig sig;
  Point start;
  double a = 0;
  double b = 0;
  std::string digest;

  static PreparedPath make(const PathModel& x, std::size_t K);
};

ResidualReport variety_check(const PathModel& x, const VarietySpec& spec, const CheckConfig& cfg);
ResidualReport holonomy_check(const PathModel& x, std::size_t r, std::size_t l,
                              const CheckConfig& cfg);
ResidualReport legendrian_check(const PathModel& x, const CheckConfig& cfg);

struct ProjectableReport {
  bool projectable = false;
  double max_deviation = 0;
  double tol = 0;
};

/// max over the path's own nodes of |X_1(t) - t| <= tol.
ProjectableReport projectable_check(const PathModel& x, double tol);

ResidualReport cauchy_check(const PathModel& x, const CauchyProblem& prob, const CheckConfig& cfg);

/// Path (t, f, f') for f' = A f, f(0) = p.
ResidualReport linear_vf_check(const PathModel& x, const std::vector<std::vector<double>>& A,
                               const std::vector<double>& p, const CheckConfig& cfg);

struct HamiltonianProblem {
  /// Symmetric s x s.
  std::vector<std::vector<double>> A;
  std::vector<double> v;
  std::vector<double> x0;
  std::vector<double> p0;
  /// Use A*x0 instead of A*p0 for the fourth block of X(0).
  bool strict_literal = false;
};

/// Path (t, x, p, y, q) with y = x' = A p and q = p' = -v.
ResidualReport hamiltonian_check(const PathModel& x, const HamiltonianProblem& prob,
                                 const CheckConfig& cfg);

/// Anchored variety check for x_1^2 + ... + x_r^2 = |X(a)|^2.
ResidualReport sphere_invariant_check(const PathModel& x, const CheckConfig& cfg);

// Same checks on an already prepared path (signature computed once).
ResidualReport variety_check(const PreparedPath& x, const VarietySpec& spec, const CheckConfig& cfg);
ResidualReport holonomy_check(const PreparedPath& x, std::size_t r, std::size_t l,
                              const CheckConfig& cfg);

}  // namespace sigcert
