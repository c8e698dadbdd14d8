#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "sigcert/certify.hpp"
#include "sigcert/errors.hpp"

using namespace sigcert;

namespace {

const double kPi = std::numbers::pi;

CheckConfig sampled_cfg(std::size_t K = 5, std::size_t L = 2) {
  CheckConfig c;
  c.K = K;
  c.L = L;
  return c;
}

PathModel paraboloid_path(double perturb, std::size_t n = 1000) {
  return sample_path(
      [&](double t) {
        return Point{std::sin(t), t, 2 * std::sin(t) * std::sin(t) - t * t + perturb * t};
      },
      0.0, 1.0, n);
}

PathModel constant_path(Point p, double a = 0.0, double b = 1.0) {
  return SampledPath::make({a, (a + b) / 2, b}, {p, p, p});
}

VarietySpec single(const std::string& g, std::size_t d, bool anchored) {
  return VarietySpec{{parse_poly(g, d)}, anchored};
}

// <S, w> for a word given as letters over d
double entry(const TruncSig& s, std::vector<Letter> w) {
  return s.at(Word(std::move(w), static_cast<int>(s.dimension())));
}

}  // namespace

TEST_CASE("config validation") {
  CheckConfig c;
  c.tol_pass = 1e-3;
  c.tol_fail = 1e-5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = CheckConfig{};
  c.L = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(CheckConfig::defaults_for(PiecewiseLinearPath::make({{0.0}, {1.0}})).tol_pass == 1e-9);
  CHECK(CheckConfig::defaults_for(constant_path({0.0})).tol_fail == 1e-3);
  CHECK(classify(1e-6, CheckConfig{}) == Verdict::Pass);
  CHECK(classify(1e-4, CheckConfig{}) == Verdict::Inconclusive);
  CHECK(classify(1e-2, CheckConfig{}) == Verdict::Fail);
  CHECK(classify(std::nan(""), CheckConfig{}) == Verdict::Fail);
}

TEST_CASE("paraboloid: functional instantiates the hand-derived condition") {
  // g = 2x1^2 - x2^2 - x3 at c: 4[1,1] + 4c1[1] - 2[2,2] - 2c2[2] - [3]
  PathModel x = SampledPath::make({0.0, 1.0}, {{0.5, -1.0, 0.0}, {0.5, -1.0, 0.0}});
  auto r = variety_check(x, single("2*x1^2 - x2^2 - x3", 3, false), sampled_cfg());
  CHECK(r.metadata.at("g1~ functional") == "2*[1] + 2*[2] - 1*[3] + 4*[1,1] - 2*[2,2]");
}

TEST_CASE("paraboloid example passes; perturbation fails") {
  auto good = variety_check(paraboloid_path(0.0), single("2*x1^2 - x2^2 - x3", 3, true),
                            sampled_cfg());
  CHECK(good.verdict == Verdict::Pass);
  CHECK(good.max_abs_residual <= 1e-6);
  CHECK(good.rows.size() == 13 + 1);

  auto bad = variety_check(paraboloid_path(0.1), single("2*x1^2 - x2^2 - x3", 3, true),
                           sampled_cfg());
  CHECK(bad.verdict == Verdict::Fail);
  CHECK(bad.max_abs_residual >= 1e-3);
  // at w = empty the residual is -<S,[3]> contribution of the 0.1 t term
  CHECK(bad.residual("g1", "[]") == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("variety residual at the empty word is g~ of the increment") {
  // for g linear the functional is the gradient, so residual(∅) = g(X(b)) - g(X(a))
  auto x = PiecewiseLinearPath::make({{0.0, 0.0}, {1.0, 2.0}, {3.0, -1.0}});
  auto r = variety_check(x, single("3*x1 + x2 + 7", 2, false), CheckConfig::defaults_for(x));
  CHECK(r.residual("g1", "[]") == doctest::Approx(3 * 3 - 1));
}

TEST_CASE("constant path on the variety: residuals exactly zero") {
  auto r = variety_check(constant_path({1.0, 1.0, 1.0}), single("2*x1^2 - x2^2 - x3", 3, true),
                         sampled_cfg());
  CHECK(r.max_abs_residual == 0.0);
  CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("anchored variety reports g(X(a))") {
  auto r = variety_check(constant_path({1.0, 0.0}), single("x1^2 + x2^2 - 4", 2, true),
                         sampled_cfg());
  CHECK(r.residual("g1(X(a))", "") == -3.0);
  CHECK(r.verdict == Verdict::Fail);
  auto u = variety_check(constant_path({1.0, 0.0}), single("x1^2 + x2^2 - 4", 2, false),
                         sampled_cfg());
  CHECK(u.verdict == Verdict::Pass);
}

TEST_CASE("variety configuration and usage errors") {
  CHECK_THROWS_AS(variety_check(paraboloid_path(0), single("x1^4", 3, false), sampled_cfg(5, 2)),
                  ConfigError);
  CHECK_NOTHROW(variety_check(paraboloid_path(0), single("x1^3", 3, false), sampled_cfg(5, 2)));
  CHECK_THROWS_AS(variety_check(paraboloid_path(0), single("x1", 2, false), sampled_cfg()),
                  UsageError);
}

TEST_CASE("holonomy: analytic jet passes") {
  auto x = sample_path([](double t) { return Point{t, t * t / 2, t}; }, 0.0, 1.0, 2000);
  auto r = holonomy_check(x, 1, 1, sampled_cfg());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.max_abs_residual <= 1e-6);
}

TEST_CASE("holonomy: (t, t, t) fails with the hand-evaluated residual") {
  PathModel x = PiecewiseLinearPath::make({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}});
  auto r = holonomy_check(x, 1, 1, CheckConfig::defaults_for(x));
  TruncSig s = signature(x, 5);
  const double hand = entry(s, {3, 1}) - entry(s, {2}) + 0.0 * entry(s, {1});
  CHECK(r.residual("i=2", "[]") == doctest::Approx(hand));
  // single segment of (1,1,1): <S,[3,1]> = 1/2, <S,[2]> = 1
  CHECK(hand == doctest::Approx(-0.5));
  CHECK(r.verdict == Verdict::Fail);
}

TEST_CASE("holonomy: vacuous for l = 0, errors on wrong dimension or K") {
  PathModel x = PiecewiseLinearPath::make({{0.0, 3.0}, {2.0, -1.0}});
  auto r = holonomy_check(x, 1, 0, CheckConfig::defaults_for(x));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.rows.empty());
  CHECK_THROWS_AS(holonomy_check(x, 1, 1, CheckConfig::defaults_for(x)), UsageError);
  auto j = sample_path([](double t) { return Point{t, t * t / 2, t}; }, 0.0, 1.0, 50);
  CHECK_THROWS_AS(holonomy_check(j, 1, 1, sampled_cfg(3, 2)), ConfigError);
}

TEST_CASE("legendrian is holonomy with r = l = 1, bit for bit") {
  auto x = sample_path([](double t) {
    return Point{std::cos(t), 0.5 * (std::sin(t) * std::cos(t) - t), std::sin(t)};
  }, 0.0, kPi, 500);
  auto a = legendrian_check(x, sampled_cfg());
  auto b = holonomy_check(x, 1, 1, sampled_cfg());
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].residual == b.rows[i].residual);
    CHECK(a.rows[i].word == b.rows[i].word);
  }
  CHECK(a.verdict == b.verdict);
  CHECK_THROWS_AS(legendrian_check(constant_path({0.0, 0.0}), sampled_cfg()), UsageError);
}

TEST_CASE("cylinder path on a subinterval passes") {
  auto x = sample_path([](double t) {
    return Point{std::cos(t), 0.5 * (std::sin(t) * std::cos(t) - t), std::sin(t)};
  }, 0.0, kPi / 2, 2000);
  auto r = legendrian_check(x, sampled_cfg());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.max_abs_residual <= 1e-6);
}

TEST_CASE("projectable check") {
  auto f = sample_path([](double t) { return Point{std::sin(t)}; }, 0.0, 1.0, 50);
  auto jet = jet_extend(f, 1);
  CHECK(projectable_check(jet, 0.0).projectable);
  auto cyl = sample_path([](double t) { return Point{std::cos(t), 0.0, std::sin(t)}; }, 0.0, 1.0, 50);
  CHECK_FALSE(projectable_check(cyl, 1e-6).projectable);
  CHECK_FALSE(projectable_check(constant_path({0.0}), 1e-6).projectable);
}

TEST_CASE("cauchy: x' = t with x(0) = 0") {
  auto x = sample_path([](double t) { return Point{t, t * t / 2, t}; }, 0.0, 1.0, 2000);
  CauchyProblem p{1, 1, {parse_poly("x3 - x1", 3)}, {{0.0}}};
  auto r = cauchy_check(x, p, sampled_cfg());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.children.size() == 3);
  CHECK(r.child("initial-data").verdict == Verdict::Pass);
  CHECK(r.child("holonomy").verdict == Verdict::Pass);
  CHECK(r.child("variety").verdict == Verdict::Pass);
  CHECK(r.child("variety").metadata.at("anchored") == "false");
  CHECK(r.metadata.at("classification") == "solution");
  CHECK(r.max_abs_residual <= 1e-6);
}

TEST_CASE("cauchy: constant path off the initial set fails the initial-data check") {
  CauchyProblem p{1, 1, {parse_poly("x3 - x1", 3)}, {{0.0}}};
  auto r = cauchy_check(constant_path({0.0, 2.0, 0.0}), p, sampled_cfg());
  CHECK(r.child("initial-data").verdict == Verdict::Fail);
  CHECK(r.child("initial-data").residual("X(0)[2]", "") == 2.0);
  CHECK(r.verdict == Verdict::Fail);
}

TEST_CASE("cauchy: sphere ODE instantiates the hand-derived condition") {
  CauchyProblem p{1, 1, {parse_poly("(x1 - 1)^2 + x2^2 + x3^2 - 1", 3)}, {{0.0}}};
  // anchored at X(0) = (0, 0, c3): 2[1,1] + 2[2,2] + 2[3,3] - 2[1] + 2 c3 [3]
  auto r = cauchy_check(constant_path({0.0, 0.0, 0.5}, 0.0, 1.0), p, sampled_cfg());
  CHECK(r.child("variety").metadata.at("g1~ functional") ==
        "-2*[1] + 1*[3] + 2*[1,1] + 2*[2,2] + 2*[3,3]");
}

TEST_CASE("cauchy: errors and warnings") {
  CauchyProblem p{1, 1, {parse_poly("x3 - x1", 3)}, {{0.0}}};
  auto late = sample_path([](double t) { return Point{t, t * t / 2, t}; }, 0.5, 1.0, 50);
  CHECK_THROWS_AS(cauchy_check(late, p, sampled_cfg()), UsageError);
  CauchyProblem wrong{1, 2, {}, {{0.0}, {0.0}}};
  CHECK_THROWS_AS(cauchy_check(late, wrong, sampled_cfg()), UsageError);
  CauchyProblem short_init{1, 1, {parse_poly("x3", 3)}, {}};
  CHECK_THROWS_AS(cauchy_check(late, short_init, sampled_cfg()), UsageError);

  // l = 2 starting at 0: x'' = 1, f = t^2/2, jet (t, f, f', f'')
  auto x = sample_path([](double t) { return Point{t, t * t / 2, t, 1.0}; }, 0.0, 1.0, 400);
  CauchyProblem p2{1, 2, {parse_poly("x4 - 1", 4)}, {{0.0}, {0.0}}};
  auto r = cauchy_check(x, p2, sampled_cfg());
  CHECK(r.metadata.count("warning") == 1);
  CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("linear vector field") {
  auto rot = sample_path([](double t) {
    return Point{t, std::cos(t), -std::sin(t), -std::sin(t), -std::cos(t)};
  }, 0.0, 1.0, 2000);
  std::vector<std::vector<double>> A{{0, 1}, {-1, 0}};
  auto r = linear_vf_check(rot, A, {1, 0}, sampled_cfg());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.max_abs_residual <= 1e-6);

  auto flipped = sample_path([](double t) {
    return Point{t, std::cos(t), std::sin(t), -std::sin(t), std::cos(t)};
  }, 0.0, 1.0, 2000);
  auto f = linear_vf_check(flipped, A, {1, 0}, sampled_cfg());
  CHECK(f.verdict == Verdict::Fail);
  // residual(1, ∅) = <[3]> - <[4]> = (sin 1 - 0) - (-sin 1 - 0)
  CHECK(f.child("vector-field").residual("i=1", "[]") == doctest::Approx(2 * std::sin(1.0)));

  std::vector<std::vector<double>> Z{{0, 0}, {0, 0}};
  auto c = linear_vf_check(constant_path({0.0, 1.0, 2.0, 0.0, 0.0}, -1.0, 1.0), Z, {1, 2},
                           sampled_cfg());
  CHECK(c.max_abs_residual == 0.0);
  CHECK_THROWS_AS(linear_vf_check(rot, {{0, 1}}, {1, 0}, sampled_cfg()), UsageError);
  CHECK_THROWS_AS(linear_vf_check(rot, {{0}}, {1}, sampled_cfg()), UsageError);
}

TEST_CASE("hamiltonian: exact trajectory, perturbation, literal mode") {
  HamiltonianProblem h{{{1.0}}, {1.0}, {0.0}, {0.0}, false};
  auto x = sample_path([](double t) { return Point{t, -t * t / 2, -t, -t, -1.0}; }, 0.0, 1.0, 2000);
  auto r = hamiltonian_check(x, h, sampled_cfg());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.max_abs_residual <= 1e-6);

  auto bad = sample_path([](double t) { return Point{t, -t * t / 2, -t, -t, -1.0 + 0.05 * t}; },
                         0.0, 1.0, 2000);
  auto rb = hamiltonian_check(bad, h, sampled_cfg());
  CHECK(rb.child("dynamics-p").verdict == Verdict::Fail);
  CHECK(rb.child("dynamics-p").residual("i=1", "[]") == doctest::Approx(0.05).epsilon(1e-9));

  // with x0 = 1, p0 = 2: A p0 = 2 but A x0 = 1, so only the default mode passes
  HamiltonianProblem h2{{{1.0}}, {1.0}, {1.0}, {2.0}, false};
  auto x2 = sample_path([](double t) {
    return Point{t, 1 + 2 * t - t * t / 2, 2 - t, 2 - t, -1.0};
  }, 0.0, 1.0, 2000);
  CHECK(hamiltonian_check(x2, h2, sampled_cfg()).verdict == Verdict::Pass);
  h2.strict_literal = true;
  auto lit = hamiltonian_check(x2, h2, sampled_cfg());
  CHECK(lit.child("initial-data").verdict == Verdict::Fail);
  CHECK(lit.metadata.at("initial_point").find("A*x0") != std::string::npos);

  HamiltonianProblem asym{{{0, 1}, {2, 0}}, {0, 0}, {0, 0}, {0, 0}, false};
  auto x9 = constant_path(Point(9, 0.0));
  CHECK_THROWS_AS(hamiltonian_check(x9, asym, sampled_cfg()), UsageError);
  HamiltonianProblem zero{{{0, 0}, {0, 0}}, {0, 0}, {1, 2}, {3, 4}, false};
  auto c = hamiltonian_check(constant_path({0, 1, 2, 3, 4, 0, 0, 0, 0}, -1, 1), zero,
                             sampled_cfg());
  CHECK(c.max_abs_residual == 0.0);
  CHECK(c.verdict == Verdict::Pass);
}

TEST_CASE("sphere invariant") {
  auto rot = sample_path([](double t) { return Point{std::cos(t), std::sin(t)}; }, 0.0, 2.0, 2000);
  auto r = sphere_invariant_check(rot, sampled_cfg());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.max_abs_residual <= 1e-6);
  CHECK(sphere_invariant_check(constant_path({0.3, 0.4}), sampled_cfg()).max_abs_residual == 0.0);
  auto spiral = sample_path([](double t) {
    return Point{std::exp(-t) * std::cos(t), std::exp(-t) * std::sin(t)};
  }, 0.0, 2.0, 2000);
  auto s = sphere_invariant_check(spiral, sampled_cfg());
  CHECK(s.verdict == Verdict::Fail);
  // residual(∅) = |X(b)|^2 - |X(a)|^2 = e^-4 - 1 (up to chordal error)
  CHECK(s.residual("g1", "[]") == doctest::Approx(std::exp(-4.0) - 1).epsilon(1e-5));
}

TEST_CASE("monotonicity in L") {
  auto x = paraboloid_path(0.01);
  double last = 0;
  for (std::size_t L = 1; L <= 3; ++L) {
    auto r = variety_check(x, single("2*x1^2 - x2^2 - x3", 3, true), sampled_cfg(5, L));
    CHECK(r.max_abs_residual >= last);
    last = r.max_abs_residual;
  }
}

TEST_CASE("report JSON is deterministic and complete") {
  auto x = paraboloid_path(0.0, 200);
  auto a = to_json_text(variety_check(x, single("2*x1^2 - x2^2 - x3", 3, true), sampled_cfg()));
  auto b = to_json_text(variety_check(x, single("2*x1^2 - x2^2 - x3", 3, true), sampled_cfg()));
  CHECK(a == b);
  auto j = nlohmann::json::parse(a);
  for (const char* key : {"condition", "K", "L", "tolerances", "rows", "max_abs_residual",
                          "verdict", "metadata", "children"})
    CHECK(j.contains(key));
  CHECK(j["rows"][0].contains("word"));
  CHECK(j["rows"][0].contains("residual"));
  CHECK(j["metadata"].contains("path_digest"));
}
