#include "sigcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "sigcert/errors.hpp"
#include "sigcert/parallel.hpp"

namespace sigcert {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

CheckConfig CheckConfig::defaults_for(const PathModel& x) {
  CheckConfig cfg;
  if (std::holds_alternative<PiecewiseLinearPath>(x)) {
    cfg.tol_pass = 1e-9;
    cfg.tol_fail = 1e-6;
  }
  return cfg;
}

void CheckConfig::validate() const {
  if (K < 1) throw ConfigError("truncation level K must be at least 1");
  if (L < 1) throw ConfigError("word length L must be at least 1");
  if (!(tol_pass >= 0) || !(tol_pass < tol_fail))
    throw ConfigError("tolerances must satisfy 0 <= tol_pass < tol_fail");
}

Verdict classify(double m, const CheckConfig& cfg) {
  if (m <= cfg.tol_pass) return Verdict::Pass;
  if (m <= cfg.tol_fail) return Verdict::Inconclusive;
  return Verdict::Fail;  // also NaN
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= base;
  return r;
}

// Residual family: w |-> sum_k coef_k <S, prefix_k . w>.
struct Family {
  std::string name;
  std::vector<std::pair<double, std::vector<Letter>>> terms;

  std::size_t max_prefix() const {
    std::size_t m = 0;
    for (const auto& t : terms) m = std::max(m, t.second.size());
    return m;
  }
};

Family family_from(std::string name, const TensorElem& e) {
  Family f{std::move(name), {}};
  for (const auto& [w, c] : e.terms()) f.terms.emplace_back(c.get_d(), w.letters());
  return f;
}

std::size_t flat_index(const std::vector<Letter>& letters, std::size_t d) {
  std::size_t idx = 0;
  for (Letter l : letters) idx = idx * d + static_cast<std::size_t>(l - 1);
  return idx;
}

ResidualReport new_report(const std::string& condition, const CheckConfig& cfg,
                          const PreparedPath& x) {
  ResidualReport r;
  r.condition = condition;
  r.K = cfg.K;
  r.L = cfg.L;
  r.tol_pass = cfg.tol_pass;
  r.tol_fail = cfg.tol_fail;
  r.metadata["path_digest"] = x.digest;
  r.metadata["domain"] = "[" + num(x.a) + ", " + num(x.b) + "]";
  r.metadata["reducedness"] = cfg.reducedness;
  return r;
}

// Evaluates every family on every word of length <= L, in parallel; rows are
// ordered by family, then canonical word order.
void evaluate_families(ResidualReport& report, const std::vector<Family>& families,
                       const PreparedPath& x, const CheckConfig& cfg) {
  const std::size_t d = x.sig.dimension();
  for (const Family& f : families)
    if (f.max_prefix() + cfg.L > cfg.K)
      throw ConfigError("condition " + f.name + " pairs words of length up to " +
                        std::to_string(f.max_prefix() + cfg.L) + " but K = " +
                        std::to_string(cfg.K) + "; raise --trunc or lower --word-len");
  const std::vector<Word> words = all_words(static_cast<int>(d), cfg.L);
  const std::size_t first = report.rows.size();
  report.rows.resize(first + families.size() * words.size());
  std::vector<double> level_max(cfg.K + 1);
  for (std::size_t k = 0; k <= cfg.K; ++k) level_max[k] = x.sig.max_abs(k);

  parallel_for(families.size() * words.size(), [&](std::size_t n) {
    const Family& f = families[n / words.size()];
    const Word& w = words[n % words.size()];
    const std::size_t wi = flat_index(w.letters(), d);
    const std::size_t scale = ipow(d, w.size());
    double total = 0;
    for (const auto& [c, prefix] : f.terms) {
      const std::size_t level = prefix.size() + w.size();
      total += c * x.sig.level(level)[flat_index(prefix, d) * scale + wi];
    }
    ResidualRow& row = report.rows[first + n];
    row.condition = f.name;
    row.word = to_string(w);
    row.residual = total;
    row.normalized = total / (1.0 + level_max[std::min(w.size() + 2, cfg.K)]);
  });
}

void add_point_row(ResidualReport& report, std::string condition, double residual) {
  report.rows.push_back({std::move(condition), "", residual, residual});
}

double max_abs_merge(double m, double x) {
  if (std::isnan(m) || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::max(m, std::abs(x));
}

void finalize(ResidualReport& r, const CheckConfig& cfg) {
  double raw = 0, norm = 0;
  for (const auto& row : r.rows) {
    raw = max_abs_merge(raw, row.residual);
    norm = max_abs_merge(norm, row.normalized);
  }
  Verdict v = classify(norm, cfg);
  for (const auto& c : r.children) {
    raw = max_abs_merge(raw, c.max_abs_residual);
    norm = max_abs_merge(norm, c.max_abs_normalized);
    if (c.verdict == Verdict::Fail || v == Verdict::Fail)
      v = Verdict::Fail;
    else if (c.verdict == Verdict::Inconclusive)
      v = Verdict::Inconclusive;
  }
  r.max_abs_residual = raw;
  r.max_abs_normalized = norm;
  r.verdict = v;
  r.metadata["scope"] = "consistent up to word length " + std::to_string(cfg.L) +
                        " (necessary condition only)";
}

Point value_at_zero(const PreparedPath& x) {
  if (0.0 < x.a || 0.0 > x.b)
    throw UsageError("time 0 lies outside the path domain [" + num(x.a) + ", " + num(x.b) + "]");
  return value_at(x.path, 0.0);
}

void require_dimension(const PreparedPath& x, std::size_t d, const std::string& what) {
  if (x.sig.dimension() != d)
    throw UsageError(what + " needs a path in R^" + std::to_string(d) + ", got dimension " +
                     std::to_string(x.sig.dimension()));
}

void require_square(const std::vector<std::vector<double>>& A, std::size_t n, const char* name) {
  if (A.size() != n)
    throw UsageError(std::string(name) + " must have " + std::to_string(n) + " rows");
  for (const auto& row : A)
    if (row.size() != n)
      throw UsageError(std::string(name) + " must have " + std::to_string(n) + " columns");
}

std::vector<double> mat_vec(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& v) {
  std::vector<double> out(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += A[i][j] * v[j];
  return out;
}

ResidualReport initial_data_report(const PreparedPath& x, const std::vector<double>& target,
                                   const CheckConfig& cfg) {
  const Point x0 = value_at_zero(x);
  ResidualReport r = new_report("initial-data", cfg, x);
  for (std::size_t k = 0; k < target.size(); ++k)
    add_point_row(r, "X(0)[" + std::to_string(k + 1) + "]", x0[k] - target[k]);
  finalize(r, cfg);
  return r;
}

std::vector<Letter> letters(std::initializer_list<Letter> l) { return l; }

}  // namespace

// ---------------------------------------------------------------- report

double ResidualReport::max_abs(const std::string& name) const {
  double m = 0;
  for (const auto& row : rows)
    if (row.condition == name) m = std::max(m, std::abs(row.residual));
  return m;
}

double ResidualReport::residual(const std::string& name, const std::string& word) const {
  for (const auto& row : rows)
    if (row.condition == name && row.word == word) return row.residual;
  throw UsageError("report " + condition + " has no row " + name + " " + word);
}

const ResidualReport& ResidualReport::child(const std::string& name) const {
  for (const auto& c : children)
    if (c.condition == name) return c;
  throw UsageError("report " + condition + " has no sub-report " + name);
}

namespace {

nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["condition"] = r.condition;
  j["K"] = r.K;
  j["L"] = r.L;
  j["tolerances"] = {{"pass", r.tol_pass}, {"fail", r.tol_fail}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"condition", row.condition},
                    {"word", row.word},
                    {"residual", row.residual},
                    {"normalized", row.normalized}});
  j["rows"] = std::move(rows);
  j["max_abs_residual"] = r.max_abs_residual;
  j["max_abs_normalized"] = r.max_abs_normalized;
  j["verdict"] = to_string(r.verdict);
  j["metadata"] = r.metadata;
  auto children = nlohmann::ordered_json::array();
  for (const auto& c : r.children) children.push_back(to_json(c));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

std::string to_json_text(const ResidualReport& r) { return to_json(r).dump(2); }

// ---------------------------------------------------------------- checks

PreparedPath PreparedPath::make(const PathModel& x, std::size_t K) {
  return PreparedPath{x, signature(x, K), start_point(x), start_time(x), end_time(x),
                      path_digest(x)};
}

ResidualReport variety_check(const PreparedPath& x, const VarietySpec& spec,
                             const CheckConfig& cfg) {
  cfg.validate();
  const std::size_t d = x.sig.dimension();
  const int di = static_cast<int>(d);
  const std::vector<Rational> anchor = exact_rationals(x.start);
  ResidualReport r = new_report("variety", cfg, x);
  r.metadata["anchored"] = spec.anchored ? "true" : "false";

  std::vector<Family> families;
  for (std::size_t i = 0; i < spec.polys.size(); ++i) {
    const MultiPoly& g = spec.polys[i];
    const std::string name = "g" + std::to_string(i + 1);
    if (g.num_vars() != d)
      throw UsageError(name + " has " + std::to_string(g.num_vars()) +
                       " variables but the path has dimension " + std::to_string(d));
    if (g.degree() + cfg.L > cfg.K)
      throw ConfigError(name + " has degree " + std::to_string(g.degree()) + ": needs K >= " +
                        std::to_string(g.degree() + cfg.L) + " for word length " +
                        std::to_string(cfg.L));
    const MultiPoly gt = translate(g, anchor);
    TensorElem form(di);
    for (std::size_t j = 1; j <= d; ++j)
      form += concat(phi(partial(gt, j)), Word::letter(static_cast<Letter>(j), di));
    r.metadata[name] = to_string(g);
    r.metadata[name + "~ functional"] = to_string(form);
    families.push_back(family_from(name, form));
  }
  evaluate_families(r, families, x, cfg);
  if (spec.anchored)
    for (std::size_t i = 0; i < spec.polys.size(); ++i)
      add_point_row(r, "g" + std::to_string(i + 1) + "(X(a))",
                    eval_exact(spec.polys[i], anchor).get_d());
  finalize(r, cfg);
  return r;
}

ResidualReport holonomy_check(const PreparedPath& x, std::size_t r, std::size_t l,
                              const CheckConfig& cfg) {
  cfg.validate();
  if (r < 1) throw UsageError("holonomy needs r >= 1");
  require_dimension(x, 1 + r * (l + 1), "(" + std::to_string(r) + "," + std::to_string(l) +
                                            ")-holonomy");
  ResidualReport rep = new_report("holonomy", cfg, x);
  rep.metadata["r"] = std::to_string(r);
  rep.metadata["l"] = std::to_string(l);
  std::vector<Family> families;
  for (std::size_t i = 2; i <= r * l + 1; ++i) {
    const auto li = static_cast<Letter>(i);
    const auto lr = static_cast<Letter>(i + r);
    families.push_back(Family{"i=" + std::to_string(i),
                              {{1.0, letters({lr, 1})},
                               {-1.0, letters({li})},
                               {x.start[i + r - 1], letters({1})}}});
  }
  if (families.empty()) rep.metadata["vacuous"] = "true";
  evaluate_families(rep, families, x, cfg);
  finalize(rep, cfg);
  return rep;
}

ResidualReport variety_check(const PathModel& x, const VarietySpec& spec, const CheckConfig& cfg) {
  cfg.validate();
  return variety_check(PreparedPath::make(x, cfg.K), spec, cfg);
}

ResidualReport holonomy_check(const PathModel& x, std::size_t r, std::size_t l,
                              const CheckConfig& cfg) {
  cfg.validate();
  return holonomy_check(PreparedPath::make(x, cfg.K), r, l, cfg);
}

ResidualReport legendrian_check(const PathModel& x, const CheckConfig& cfg) {
  if (dimension(x) != 3)
    throw UsageError("Legendrian check needs a path in R^3, got dimension " +
                     std::to_string(dimension(x)));
  ResidualReport r = holonomy_check(x, 1, 1, cfg);
  r.condition = "legendrian";
  return r;
}

ProjectableReport projectable_check(const PathModel& x, double tol) {
  const auto t = time_grid(x);
  const auto& v = nodes(x);
  ProjectableReport rep;
  rep.tol = tol;
  for (std::size_t k = 0; k < t.size(); ++k)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(v[k][0] - t[k]));
  rep.projectable = rep.max_deviation <= tol;
  return rep;
}

ResidualReport cauchy_check(const PathModel& path, const CauchyProblem& prob,
                            const CheckConfig& cfg) {
  cfg.validate();
  if (prob.r < 1) throw UsageError("Cauchy problem needs r >= 1");
  const std::size_t d = 1 + prob.r * (prob.l + 1);
  if (dimension(path) != d)
    throw UsageError("Cauchy problem with r=" + std::to_string(prob.r) +
                     ", l=" + std::to_string(prob.l) + " needs a path in R^" + std::to_string(d));
  if (prob.init.size() != prob.l)
    throw UsageError("Cauchy problem needs " + std::to_string(prob.l) + " initial vectors");
  for (const auto& v : prob.init)
    if (v.size() != prob.r)
      throw UsageError("initial vectors must have length " + std::to_string(prob.r));

  const PreparedPath x = PreparedPath::make(path, cfg.K);
  const Point x0 = value_at_zero(x);

  std::vector<double> target{0.0};
  for (const auto& v : prob.init) target.insert(target.end(), v.begin(), v.end());

  ResidualReport rep = new_report("cauchy", cfg, x);
  rep.metadata["r"] = std::to_string(prob.r);
  rep.metadata["l"] = std::to_string(prob.l);
  rep.children.push_back(initial_data_report(x, target, cfg));
  rep.children.push_back(holonomy_check(x, prob.r, prob.l, cfg));
  rep.children.push_back(variety_check(x, VarietySpec{prob.F, false}, cfg));

  for (std::size_t i = 0; i < prob.F.size(); ++i)
    rep.metadata["F" + std::to_string(i + 1) + "(X(0))"] = num(eval(prob.F[i], x0));
  const ProjectableReport proj = projectable_check(path, cfg.tol_pass);
  rep.metadata["projectable"] = proj.projectable ? "true" : "false";
  rep.metadata["projectable_max_deviation"] = num(proj.max_deviation);
  rep.metadata["classification"] = proj.projectable ? "solution" : "generalized solution";
  if (prob.l >= 2 && !(x.a < 0))
    rep.metadata["warning"] = "l >= 2 requires the domain to start strictly before 0";
  finalize(rep, cfg);
  return rep;
}

ResidualReport linear_vf_check(const PathModel& path, const std::vector<std::vector<double>>& A,
                               const std::vector<double>& p, const CheckConfig& cfg) {
  cfg.validate();
  const std::size_t r = p.size();
  if (r == 0) throw UsageError("linear vector field needs a nonempty initial vector");
  require_square(A, r, "matrix A");
  if (dimension(path) != 1 + 2 * r)
    throw UsageError("linear vector field of size " + std::to_string(r) +
                     " needs a path in R^" + std::to_string(1 + 2 * r));

  const PreparedPath x = PreparedPath::make(path, cfg.K);
  std::vector<double> target{0.0};
  target.insert(target.end(), p.begin(), p.end());
  const auto ap = mat_vec(A, p);
  target.insert(target.end(), ap.begin(), ap.end());

  ResidualReport field = new_report("vector-field", cfg, x);
  std::vector<Family> families;
  for (std::size_t i = 1; i <= r; ++i) {
    Family f{"i=" + std::to_string(i), {}};
    for (std::size_t j = 1; j <= r; ++j)
      if (A[i - 1][j - 1] != 0.0)
        f.terms.emplace_back(A[i - 1][j - 1], letters({static_cast<Letter>(1 + j)}));
    f.terms.emplace_back(-1.0, letters({static_cast<Letter>(1 + r + i)}));
    families.push_back(std::move(f));
  }
  evaluate_families(field, families, x, cfg);
  finalize(field, cfg);

  ResidualReport rep = new_report("linear-vf", cfg, x);
  rep.children.push_back(initial_data_report(x, target, cfg));
  rep.children.push_back(std::move(field));
  rep.children.push_back(holonomy_check(x, r, 1, cfg));
  finalize(rep, cfg);
  return rep;
}

ResidualReport hamiltonian_check(const PathModel& path, const HamiltonianProblem& prob,
                                 const CheckConfig& cfg) {
  cfg.validate();
  const std::size_t s = prob.v.size();
  if (s == 0) throw UsageError("Hamiltonian problem needs s >= 1");
  require_square(prob.A, s, "matrix A");
  if (prob.x0.size() != s || prob.p0.size() != s)
    throw UsageError("x0 and p0 must have length " + std::to_string(s));
  double scale = 0;
  for (const auto& row : prob.A)
    for (double a : row) scale = std::max(scale, std::abs(a));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(prob.A[i][j] - prob.A[j][i]) > 1e-12 * (1 + scale))
        throw UsageError("matrix A must be symmetric");
  if (dimension(path) != 1 + 4 * s)
    throw UsageError("Hamiltonian problem with s=" + std::to_string(s) + " needs a path in R^" +
                     std::to_string(1 + 4 * s));

  const PreparedPath x = PreparedPath::make(path, cfg.K);
  std::vector<double> target{0.0};
  target.insert(target.end(), prob.x0.begin(), prob.x0.end());
  target.insert(target.end(), prob.p0.begin(), prob.p0.end());
  const auto y0 = mat_vec(prob.A, prob.strict_literal ? prob.x0 : prob.p0);
  target.insert(target.end(), y0.begin(), y0.end());
  for (double vi : prob.v) target.push_back(-vi);

  ResidualReport dx = new_report("dynamics-x", cfg, x);
  ResidualReport dp = new_report("dynamics-p", cfg, x);
  std::vector<Family> fx, fp;
  for (std::size_t i = 1; i <= s; ++i) {
    Family f{"i=" + std::to_string(i), {}};
    for (std::size_t h = 1; h <= s; ++h)
      if (prob.A[i - 1][h - 1] != 0.0)
        f.terms.emplace_back(prob.A[i - 1][h - 1], letters({static_cast<Letter>(1 + s + h)}));
    f.terms.emplace_back(-1.0, letters({static_cast<Letter>(1 + 2 * s + i)}));
    fx.push_back(std::move(f));
    fp.push_back(Family{"i=" + std::to_string(i), {{1.0, letters({static_cast<Letter>(1 + 3 * s + i)})}}});
  }
  evaluate_families(dx, fx, x, cfg);
  evaluate_families(dp, fp, x, cfg);
  finalize(dx, cfg);
  finalize(dp, cfg);

  ResidualReport rep = new_report("hamiltonian", cfg, x);
  rep.metadata["s"] = std::to_string(s);
  rep.metadata["initial_point"] =
      prob.strict_literal ? "(0, x0, p0, A*x0, -v) (strict literal mode)"
                          : "(0, x0, p0, A*p0, -v)";
  rep.metadata["initial_point_note"] =
      "x' = A p forces y(0) = A*p0; the A*x0 variant is a suspected misprint, available "
      "via strict literal mode";
  rep.children.push_back(initial_data_report(x, target, cfg));
  rep.children.push_back(std::move(dx));
  rep.children.push_back(std::move(dp));
  rep.children.push_back(holonomy_check(x, 2 * s, 1, cfg));
  finalize(rep, cfg);
  return rep;
}

ResidualReport sphere_invariant_check(const PathModel& path, const CheckConfig& cfg) {
  cfg.validate();
  const PreparedPath x = PreparedPath::make(path, cfg.K);
  const std::size_t d = x.sig.dimension();
  MultiPoly g(d);
  Rational radius2 = 0;
  for (std::size_t i = 0; i < d; ++i) {
    Exponents e(d, 0);
    e[i] = 2;
    g.add_term(e, 1);
    const Rational c = exact_rational(x.start[i]);
    radius2 += c * c;
  }
  g.add_term(Exponents(d, 0), -radius2);
  ResidualReport rep = variety_check(x, VarietySpec{{g}, true}, cfg);
  rep.condition = "sphere";
  rep.metadata["note"] = "lying on the sphere is necessary, not sufficient, for a rotation";
  return rep;
}

}  // namespace sigcert
