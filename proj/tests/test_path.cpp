#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sigcert/errors.hpp"
#include "sigcert/path.hpp"

using namespace sigcert;

namespace {

PiecewiseLinearPath pl(std::vector<Point> pts) { return PiecewiseLinearPath::make(std::move(pts)); }

}  // namespace

TEST_CASE("construction validates shape") {
  CHECK_THROWS_AS(pl({{0.0, 0.0}}), UsageError);
  CHECK_THROWS_AS(pl({{0.0, 0.0}, {1.0}}), UsageError);
  CHECK_THROWS_AS(pl({{}, {}}), UsageError);
  CHECK_THROWS_AS(pl({{0.0}, {NAN}}), DomainError);
  CHECK_THROWS_AS(PiecewiseLinearPath::make({{0.0}, {1.0}}, std::vector<double>{1.0, 1.0}),
                  DomainError);
  CHECK_THROWS_AS(SampledPath::make({0.0, 1.0}, {{0.0}}), UsageError);
  auto x = pl({{0.0}, {1.0}, {3.0}});
  CHECK(x.time_grid() == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("value_at interpolates and rejects times outside the domain") {
  PathModel x = SampledPath::make({0.0, 1.0, 3.0}, {{0.0, 0.0}, {1.0, 2.0}, {1.0, 6.0}});
  CHECK(value_at(x, 2.0) == Point{1.0, 4.0});
  CHECK(value_at(x, 0.5) == Point{0.5, 1.0});
  CHECK(value_at(x, 3.0) == Point{1.0, 6.0});
  CHECK_THROWS_AS(value_at(x, -0.1), UsageError);
  CHECK_THROWS_AS(value_at(x, 3.5), UsageError);
}

TEST_CASE("inverse reverses nodes on the same domain") {
  auto s = SampledPath::make({0.0, 1.0, 3.0}, {{0.0}, {1.0}, {5.0}});
  auto r = inverse(s);
  CHECK(r.times == std::vector<double>{0.0, 2.0, 3.0});
  CHECK(r.values == std::vector<Point>{{5.0}, {1.0}, {0.0}});
  CHECK(inverse(r).times == s.times);
  CHECK(inverse(r).values == s.values);
  auto p = pl({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
  CHECK(inverse(p).points.front() == Point{1.0, 1.0});
  CHECK_FALSE(inverse(p).times.has_value());
}

TEST_CASE("concatenation") {
  PathModel a = pl({{0.0, 0.0}, {1.0, 0.0}});
  PathModel b = pl({{1.0, 0.0}, {1.0, 1.0}});
  PathModel c = concat_paths(a, b);
  REQUIRE(std::holds_alternative<PiecewiseLinearPath>(c));
  CHECK(nodes(c).size() == 3);
  CHECK_THROWS_AS(concat_paths(a, pl({{2.0, 0.0}, {3.0, 0.0}})), DomainError);
  CHECK_THROWS_AS(concat_paths(a, pl({{1.0}, {2.0}})), UsageError);

  PathModel s = SampledPath::make({0.0, 2.0}, {{1.0, 0.0}, {1.0, 1.0}});
  PathModel m = concat_paths(a, s);
  REQUIRE(std::holds_alternative<SampledPath>(m));
  CHECK(time_grid(m) == std::vector<double>{0.0, 1.0, 3.0});
}

TEST_CASE("backtrack reduction removes retracing") {
  // out and back along the x axis, then up
  auto x = pl({{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
  auto r = backtrack_reduce(x);
  CHECK(r.points == std::vector<Point>{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});

  // a full excursion X * X^-1 collapses to the start point
  auto y = pl({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}});
  auto ry = backtrack_reduce(y);
  REQUIRE(ry.points.size() == 1);
  CHECK(ry.points[0] == Point{0.0, 0.0});

  // a square has nothing to remove
  auto sq = pl({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}});
  CHECK(backtrack_reduce(sq).points == sq.points);
  // forward collinear segments are not backtracks
  auto line = pl({{0.0}, {1.0}, {2.0}});
  CHECK(backtrack_reduce(line).points.size() == 3);
}

TEST_CASE("projection") {
  PathModel x = pl({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
  std::vector<std::size_t> idx{3, 1};
  PathModel p = project(x, idx);
  CHECK(dimension(p) == 2);
  CHECK(nodes(p)[1] == Point{6.0, 4.0});
  std::vector<std::size_t> bad{4};
  CHECK_THROWS_AS(project(x, bad), UsageError);
  CHECK_THROWS_AS(project(x, std::vector<std::size_t>{}), UsageError);
}

TEST_CASE("differentiation is exact on quadratics (2nd order) and quartics (4th order)") {
  auto quad = sample_path([](double t) { return Point{3 * t * t - t}; }, 0.0, 2.0, 21);
  auto d2 = differentiate(quad, DiffScheme::Central2);
  for (std::size_t k = 0; k < quad.times.size(); ++k)
    CHECK(d2[k][0] == doctest::Approx(6 * quad.times[k] - 1).epsilon(1e-10));
  auto quart = sample_path([](double t) { return Point{t * t * t * t}; }, -1.0, 1.0, 41);
  auto d4 = differentiate(quart, DiffScheme::Central4);
  for (std::size_t k = 0; k < quart.times.size(); ++k)
    CHECK(d4[k][0] == doctest::Approx(4 * std::pow(quart.times[k], 3)).epsilon(1e-8).scale(1));
  CHECK_THROWS_AS(differentiate(SampledPath::make({0.0, 1.0}, {{0.0}, {1.0}})), DomainError);
  CHECK_THROWS_AS(differentiate(SampledPath::make({0.0, 1.0, 3.0}, {{0.0}, {1.0}, {2.0}})),
                  DomainError);
}

TEST_CASE("jet extension layout") {
  auto f = sample_path([](double t) { return Point{t * t / 2}; }, 0.0, 1.0, 11);
  auto j = jet_extend(f, 2);
  CHECK(j.dimension == 4);
  for (std::size_t k = 0; k < j.times.size(); ++k) {
    CHECK(j.values[k][0] == j.times[k]);
    CHECK(j.values[k][2] == doctest::Approx(j.times[k]));
    CHECK(j.values[k][3] == doctest::Approx(1.0));
  }
}

TEST_CASE("CSV round trip and errors with line numbers") {
  auto x = sample_path([](double t) { return Point{std::sin(t), std::exp(t)}; }, 0.0, 1.0, 7);
  std::stringstream ss;
  write_csv_path(ss, x);
  auto y = read_csv_path(ss);
  CHECK(y.times == x.times);
  CHECK(y.values == x.values);

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_csv_path(in);
    } catch (const ParseError& e) {
      return e.position();
    }
    return 0;
  };
  CHECK(line_of("") == 1);
  CHECK(line_of("t,y1\n0,1\n1,2\n") == 1);
  CHECK(line_of("t,x1\n0,1\n1,abc\n") == 3);
  CHECK(line_of("t,x1\n0,1\n\n1,2,3\n") == 4);
  CHECK(line_of("t,x1\n0,1\n0,2\n") == 3);
  CHECK(line_of("t,x1\n0,1\n") == 2);
}

TEST_CASE("JSON piecewise-linear round trip") {
  auto x = PiecewiseLinearPath::make({{0.0, 1.0}, {0.5, -2.0}, {1.0, 0.25}},
                                     std::vector<double>{0.0, 0.1, 2.0});
  std::istringstream in(to_json_text(x));
  auto y = read_json_path(in);
  CHECK(y.points == x.points);
  CHECK(y.times == x.times);
  std::istringstream bad(R"({"points": [[0, 1], [2]]})");
  CHECK_THROWS(read_json_path(bad));
  std::istringstream broken("{\"points\": [");
  CHECK_THROWS_AS(read_json_path(broken), ParseError);
}

TEST_CASE("digest depends on every node") {
  PathModel a = pl({{0.0}, {1.0}});
  PathModel b = pl({{0.0}, {1.0000000001}});
  CHECK(path_digest(a) != path_digest(b));
  CHECK(path_digest(a) == path_digest(pl({{0.0}, {1.0}})));
  CHECK(path_digest(a).size() == 16);
}
