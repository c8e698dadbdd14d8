#pragma once

// Path representations: piecewise-linear vertex chains and uniformly or
// irregularly sampled paths, plus the constructions used by the checks
// (inverse, concatenation, backtracking reduction, projection, jets).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sigcert {

using Point = std::vector<double>;

/// Vertex chain in R^d. Without explicit times the vertices are spaced
/// uniformly over [0, 1].
struct PiecewiseLinearPath {
  std::size_t dimension = 0;
  std::vector<Point> points;
  std::optional<std::vector<double>> times;

  /// Validates shape: >= 2 points of length `dimension`, times strictly
  /// increasing when present.
  static PiecewiseLinearPath make(std::vector<Point> points,
                                  std::optional<std::vector<double>> times = std::nullopt);

  std::vector<double> time_grid() const;
};

/// Samples t_0 < ... < t_n of a path in R^d.
struct SampledPath {
  std::size_t dimension = 0;
  std::vector<double> times;
  std::vector<Point> values;

  static SampledPath make(std::vector<double> times, std::vector<Point> values);
};

using PathModel = std::variant<PiecewiseLinearPath, SampledPath>;

std::size_t dimension(const PathModel& x);
/// Vertex/sample times of the path (the default uniform grid for untimed
/// piecewise-linear paths).
std::vector<double> time_grid(const PathModel& x);
/// Vertex or sample values.
const std::vector<Point>& nodes(const PathModel& x);
double start_time(const PathModel& x);
double end_time(const PathModel& x);
const Point& start_point(const PathModel& x);
const Point& end_point(const PathModel& x);
/// Linear interpolation between nodes; throws UsageError outside the domain.
Point value_at(const PathModel& x, double t);

/// Drops consecutive duplicate vertices (and their times). A fully constant
/// chain collapses to a single vertex.
PiecewiseLinearPath normalize(const PiecewiseLinearPath& x);

/// Time reversal on the same domain: X^-1(t) = X(a + b - t).
PathModel inverse(const PathModel& x);
PiecewiseLinearPath inverse(const PiecewiseLinearPath& x);
SampledPath inverse(const SampledPath& x);

inline constexpr double kDefaultJoinTolerance = 1e-9;

/// X followed by Y. Y's clock is shifted to start where X ends. Two
/// piecewise-linear paths splice into one normalized vertex chain; any
/// sampled operand makes the result sampled.
PathModel concat_paths(const PathModel& x, const PathModel& y,
                       double join_tolerance = kDefaultJoinTolerance);

/// Repeatedly removes the middle vertex of any two consecutive collinear
/// segments pointing in opposite directions (a backtrack), then normalizes.
/// This is the piecewise-linear part of tree-like reduction only.
PiecewiseLinearPath backtrack_reduce(const PiecewiseLinearPath& x, double tolerance = 1e-12);

/// Coordinate selection with 1-based indices; same time structure.
PathModel project(const PathModel& x, std::span<const std::size_t> indices);

enum class DiffScheme {
  /// Second-order central differences, second-order one-sided at the ends.
  Central2,
  /// Fourth-order central differences, fourth-order one-sided near the ends.
  Central4,
};

/// First derivative of uniformly spaced samples. Throws DomainError on a
/// non-uniform grid or too few samples for the stencil.
std::vector<Point> differentiate(const SampledPath& f, DiffScheme scheme = DiffScheme::Central2);

/// (t, f, f', ..., f^(l)) from samples of f: [a,b] -> R^r. The first channel
/// is the time grid itself, so the result is projectable by construction.
SampledPath jet_extend(const SampledPath& f, std::size_t order,
                       DiffScheme scheme = DiffScheme::Central2);

/// Samples `fn` on a uniform grid of n points over [a, b].
template <typename Fn>
SampledPath sample_path(Fn&& fn, double a, double b, std::size_t n) {
  std::vector<double> times(n);
  std::vector<Point> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    times[k] = (k + 1 == n) ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    values[k] = fn(times[k]);
  }
  return SampledPath::make(std::move(times), std::move(values));
}

// ---------------------------------------------------------------- I/O

/// CSV with header "t,x1,...,xd" and one row per sample.
SampledPath read_csv_path(std::istream& in);
void write_csv_path(std::ostream& out, const SampledPath& x);

/// {"dimension": d, "points": [[...], ...], "times": [...] (optional)}
PiecewiseLinearPath read_json_path(std::istream& in);
std::string to_json_text(const PiecewiseLinearPath& x);

/// Reads a path file, choosing the format by content: JSON objects start with
/// '{', anything else is CSV.
PathModel read_path_file(const std::string& filename);

/// 64-bit FNV-1a digest of the node data, as 16 hex digits.
std::string path_digest(const PathModel& x);

}  // namespace sigcert
