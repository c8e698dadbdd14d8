#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sigcert/errors.hpp"
#include "sigcert/pushforward.hpp"
#include "sigcert/signature.hpp"

using namespace sigcert;

namespace {

GraphMapSpec paraboloid(std::vector<Rational> anchor = {0, 0}) {
  return GraphMapSpec::make(parse_poly("x1^2 + x2^2", 2), std::move(anchor));
}

Word W(std::vector<Letter> l, int d = 3) { return Word(std::move(l), d); }

Word random_word(std::mt19937& rng, int d, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<Letter> letter(1, d);
  std::vector<Letter> l(len(rng));
  for (auto& x : l) x = letter(rng);
  return Word(l, d);
}

}  // namespace

TEST_CASE("graph map validation") {
  CHECK_THROWS_AS(GraphMapSpec::make(parse_poly("x1", 2), {0}), UsageError);
  GraphMapSpec s = GraphMapSpec::make(parse_poly("x1*x2", 2));
  CHECK(s.d == 2);
  CHECK(s.anchor == std::vector<Rational>{0, 0});
}

TEST_CASE("Jacobian rows") {
  GraphMapSpec s = paraboloid();
  auto r1 = jacobian_row(s, 1);
  CHECK(r1[0] == MultiPoly::constant(2, 1));
  CHECK(r1[1].is_zero());
  auto r3 = jacobian_row(s, 3);
  CHECK(r3[0] == parse_poly("2*x1", 2));
  CHECK(r3[1] == parse_poly("2*x2", 2));
  // anchored at (1, -2): gradient of g(x + c) = (2x1 + 2, 2x2 - 4)
  auto r3a = jacobian_row(paraboloid({1, -2}), 3);
  CHECK(r3a[0] == parse_poly("2*x1 + 2", 2));
  CHECK(r3a[1] == parse_poly("2*x2 - 4", 2));
  // linear g: constant gradient
  auto lin = jacobian_row(GraphMapSpec::make(parse_poly("3*x1 - x2", 2)), 3);
  CHECK(lin[0] == MultiPoly::constant(2, 3));
  CHECK(lin[1] == MultiPoly::constant(2, -1));
  CHECK_THROWS_AS(jacobian_row(s, 0), UsageError);
  CHECK_THROWS_AS(jacobian_row(s, 4), UsageError);
}

TEST_CASE("m_push on short words") {
  GraphMapSpec s = paraboloid();
  CHECK(m_push(W({}), s) == TensorElem::unit(2));
  CHECK(m_push(W({1}), s) == parse_tensor("[1]", 2));
  CHECK(m_push(W({2}), s) == parse_tensor("[2]", 2));
  CHECK(m_push(W({3}), s) == parse_tensor("2*[1,1] + 2*[2,2]", 2));
  // [1,3] = M([3]) ⧢ M([1]) - M([3,1])
  PushForward M(s);
  CHECK(M(W({1, 3})) == shuffle(M(W({3})), M(W({1}))) - M(W({3, 1})));
  CHECK_THROWS_AS(M(Word({1}, 2)), UsageError);
}

TEST_CASE("letter identities hold exactly") {
  PushForward M(paraboloid({Rational(1, 3), Rational(-1, 2)}));
  for (Letter i = 1; i <= 2; ++i) CHECK(M(W({i})) == TensorElem(Word({i}, 2)));
  for (const Word& v : all_words(3, 3))
    for (Letter i = 1; i <= 2; ++i)
      CHECK(M(concat(v, W({i}))) == concat(M(v), Word({i}, 2)));
  // M((d+1).w) = sum_j phi(dg~/dx_j).j.w for w over d letters
  auto grad = jacobian_row(M.spec(), 3);
  for (const Word& w2 : all_words(2, 2)) {
    TensorElem expect(2);
    for (Letter j = 1; j <= 2; ++j)
      expect += concat(concat(phi(grad[j - 1]), Word({j}, 2)), TensorElem(w2));
    CHECK(M(concat(W({3}), w2.with_alphabet(3))) == expect);
  }
}

TEST_CASE("shuffle and half-shuffle homomorphism on random words") {
  PushForward M(paraboloid({2, -1}));
  std::mt19937 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    Word a = random_word(rng, 3, 0, 3), b = random_word(rng, 3, 1, 3);
    CHECK(M(shuffle(a, b)) == shuffle(M(a), M(b)));
    CHECK(M(half_shuffle(a, b)) == half_shuffle(M(a), M(b)));
  }
}

TEST_CASE("memoisation does not change results") {
  GraphMapSpec s = GraphMapSpec::make(parse_poly("x1^3 - x1*x2", 2), {Rational(1, 2), 3});
  PushForward warm(s);
  for (const Word& v : all_words(3, 3)) warm(v);
  CHECK(warm.cache_size() == all_words(3, 3).size());
  for (const Word& v : all_words(3, 3)) CHECK(warm(v) == m_push(v, s));
}

TEST_CASE("single-occurrence reduction: worked example [3,3]") {
  GraphMapSpec s = paraboloid({Rational(1, 2), -1});
  const TensorElem e = single_occurrence_reduce(W({3, 3}), s);
  // sum_j 2([3,j,j] + [j,3,j]) + 2 X_j(a) [3,j]
  const TensorElem expect =
      parse_tensor("2*[3,1,1] + 2*[1,3,1] + 2*[3,2,2] + 2*[2,3,2] + 1*[3,1] - 2*[3,2]", 3);
  CHECK(e == expect);
  for (const auto& [w, c] : e.terms()) CHECK(w.count(3) == 1);
  PushForward M(s);
  CHECK(M(e) == M(W({3, 3})));
}

TEST_CASE("single-occurrence reduction with linear g") {
  GraphMapSpec s = GraphMapSpec::make(parse_poly("2*x1 - x2", 2));
  const TensorElem e = single_occurrence_reduce(W({3, 3}), s);
  CHECK(e == parse_tensor("2*[3,1] - [3,2]", 3));
  PushForward M(s);
  CHECK(M(e) == M(W({3, 3})));
}

TEST_CASE("single-occurrence reduction on longer words") {
  GraphMapSpec s = paraboloid({1, 2});
  PushForward M(s);
  for (const Word& v : all_words(3, 4)) {
    if (v.count(3) < 2) {
      CHECK_THROWS_AS(single_occurrence_reduce(v, s), DomainError);
      continue;
    }
    const TensorElem e = single_occurrence_reduce(v, s);
    for (const auto& [w, c] : e.terms()) CHECK(w.count(3) == 1);
    CHECK(M(e) == M(v));
  }
}

TEST_CASE("pushforward identity on a polyline") {
  // <sig(p o X), v> = <sig(X), M(v)> with p(x) = (x, x1 x2), anchor X(a)
  const std::vector<Point> pts{{0.5, -0.25}, {1.0, 0.5}, {0.0, 1.0}};
  GraphMapSpec s = GraphMapSpec::make(parse_poly("x1*x2", 2), exact_rationals(pts[0]));
  TruncSig sx = sig_pl(PiecewiseLinearPath::make(pts), 5);
  std::vector<double> bp{0.0, 1.0, 2.0};
  auto vel = [&](std::size_t k, double t, std::span<double> out) {
    const double s0 = t - static_cast<double>(k);
    const double dx = pts[k + 1][0] - pts[k][0], dy = pts[k + 1][1] - pts[k][1];
    const double x = pts[k][0] + s0 * dx, y = pts[k][1] + s0 * dy;
    out[0] = dx;
    out[1] = dy;
    out[2] = y * dx + x * dy;
  };
  TruncSig sp = sig_ode_oracle(vel, bp, 3, 3, 2000);
  PushForward M(s);
  for (const Word& v : all_words(3, 2))
    CHECK(std::abs(sp.at(v) - pair(sx, M(v))) < 1e-9);
}
