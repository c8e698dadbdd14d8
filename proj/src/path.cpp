#include "sigcert/path.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sigcert/errors.hpp"

namespace sigcert {

namespace {

void check_points(const std::vector<Point>& points, std::size_t dim) {
  for (const auto& p : points) {
    if (p.size() != dim)
      throw UsageError("point of length " + std::to_string(p.size()) + " in a path of dimension " +
                       std::to_string(dim));
    for (double v : p)
      if (!std::isfinite(v)) throw DomainError("non-finite path coordinate");
  }
}

void check_times(const std::vector<double>& times) {
  for (double t : times)
    if (!std::isfinite(t)) throw DomainError("non-finite time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("times must be strictly increasing");
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) t.back() = 1.0;
  return t;
}

Point lerp(const Point& a, const Point& b, double s) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * (b[i] - a[i]);
  return out;
}

double distance(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

SampledPath to_sampled(const PathModel& x) {
  if (auto* s = std::get_if<SampledPath>(&x)) return *s;
  const auto& pl = std::get<PiecewiseLinearPath>(x);
  SampledPath out;
  out.dimension = pl.dimension;
  out.times = pl.time_grid();
  out.values = pl.points;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- types

PiecewiseLinearPath PiecewiseLinearPath::make(std::vector<Point> points,
                                              std::optional<std::vector<double>> times) {
  if (points.size() < 2) throw UsageError("a piecewise-linear path needs at least two points");
  PiecewiseLinearPath x;
  x.dimension = points.front().size();
  if (x.dimension == 0) throw UsageError("path dimension must be positive");
  check_points(points, x.dimension);
  if (times) {
    if (times->size() != points.size()) throw UsageError("times and points differ in length");
    check_times(*times);
  }
  x.points = std::move(points);
  x.times = std::move(times);
  return x;
}

std::vector<double> PiecewiseLinearPath::time_grid() const {
  return times ? *times : uniform_grid(points.size());
}

SampledPath SampledPath::make(std::vector<double> times, std::vector<Point> values) {
  if (times.size() < 2) throw UsageError("a sampled path needs at least two samples");
  if (times.size() != values.size()) throw UsageError("times and values differ in length");
  SampledPath x;
  x.dimension = values.front().size();
  if (x.dimension == 0) throw UsageError("path dimension must be positive");
  check_points(values, x.dimension);
  check_times(times);
  x.times = std::move(times);
  x.values = std::move(values);
  return x;
}

std::size_t dimension(const PathModel& x) {
  return std::visit([](const auto& p) { return p.dimension; }, x);
}

std::vector<double> time_grid(const PathModel& x) {
  if (auto* s = std::get_if<SampledPath>(&x)) return s->times;
  return std::get<PiecewiseLinearPath>(x).time_grid();
}

const std::vector<Point>& nodes(const PathModel& x) {
  if (auto* s = std::get_if<SampledPath>(&x)) return s->values;
  return std::get<PiecewiseLinearPath>(x).points;
}

double start_time(const PathModel& x) { return time_grid(x).front(); }
double end_time(const PathModel& x) { return time_grid(x).back(); }
const Point& start_point(const PathModel& x) { return nodes(x).front(); }
const Point& end_point(const PathModel& x) { return nodes(x).back(); }

Point value_at(const PathModel& x, double t) {
  const auto grid = time_grid(x);
  const auto& pts = nodes(x);
  const double span = grid.back() - grid.front();
  const double slack = 1e-12 * std::max(1.0, std::abs(span));
  if (t < grid.front() - slack || t > grid.back() + slack)
    throw UsageError("time " + std::to_string(t) + " outside path domain");
  if (pts.size() == 1 || t <= grid.front()) return pts.front();
  if (t >= grid.back()) return pts.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
  if (grid[k] == t) return pts[k];
  return lerp(pts[k], pts[k + 1], (t - grid[k]) / (grid[k + 1] - grid[k]));
}

PiecewiseLinearPath normalize(const PiecewiseLinearPath& x) {
  PiecewiseLinearPath out;
  out.dimension = x.dimension;
  const auto grid = x.time_grid();
  std::vector<double> times;
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    if (!out.points.empty() && out.points.back() == x.points[i]) continue;
    out.points.push_back(x.points[i]);
    times.push_back(grid[i]);
  }
  if (x.times) out.times = std::move(times);
  return out;
}

// ---------------------------------------------------------------- inverse

PiecewiseLinearPath inverse(const PiecewiseLinearPath& x) {
  PiecewiseLinearPath out = x;
  std::reverse(out.points.begin(), out.points.end());
  if (x.times) {
    const double a = x.times->front(), b = x.times->back();
    std::vector<double> t(x.times->rbegin(), x.times->rend());
    for (double& v : t) v = a + b - v;
    out.times = std::move(t);
  }
  return out;
}

SampledPath inverse(const SampledPath& x) {
  SampledPath out = x;
  std::reverse(out.values.begin(), out.values.end());
  const double a = x.times.front(), b = x.times.back();
  std::vector<double> t(x.times.rbegin(), x.times.rend());
  for (double& v : t) v = a + b - v;
  // keep the endpoints bit-exact
  t.front() = a;
  t.back() = b;
  out.times = std::move(t);
  return out;
}

PathModel inverse(const PathModel& x) {
  return std::visit([](const auto& p) -> PathModel { return inverse(p); }, x);
}

// ---------------------------------------------------------------- concat

PathModel concat_paths(const PathModel& x, const PathModel& y, double join_tolerance) {
  if (dimension(x) != dimension(y)) throw UsageError("cannot concatenate paths of different dimension");
  const double gap = distance(end_point(x), start_point(y));
  if (gap > join_tolerance)
    throw DomainError("end point of the first path is " + std::to_string(gap) +
                      " away from the start of the second");

  const auto* px = std::get_if<PiecewiseLinearPath>(&x);
  const auto* py = std::get_if<PiecewiseLinearPath>(&y);
  if (px && py) {
    PiecewiseLinearPath out;
    out.dimension = px->dimension;
    out.points = px->points;
    out.points.insert(out.points.end(), py->points.begin() + 1, py->points.end());
    if (px->times || py->times) {
      std::vector<double> tx = px->time_grid(), ty = py->time_grid();
      const double offset = tx.back() - ty.front();
      for (std::size_t i = 1; i < ty.size(); ++i) tx.push_back(ty[i] + offset);
      out.times = std::move(tx);
    } else {
      // untimed chains stay untimed: uniform spacing over the joined vertices
      out.times.reset();
    }
    return normalize(out);
  }

  SampledPath sx = to_sampled(x), sy = to_sampled(y);
  const double offset = sx.times.back() - sy.times.front();
  for (std::size_t i = 1; i < sy.times.size(); ++i) {
    sx.times.push_back(sy.times[i] + offset);
    sx.values.push_back(sy.values[i]);
  }
  return sx;
}

// ---------------------------------------------------------------- reduction

PiecewiseLinearPath backtrack_reduce(const PiecewiseLinearPath& x, double tolerance) {
  PiecewiseLinearPath cur = normalize(x);
  const std::size_t d = cur.dimension;
  auto grid = cur.time_grid();
  bool timed = cur.times.has_value();

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 2 < cur.points.size(); ++i) {
      const Point& p0 = cur.points[i];
      const Point& p1 = cur.points[i + 1];
      const Point& p2 = cur.points[i + 2];
      double dot = 0, n1 = 0, n2 = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const double s1 = p1[k] - p0[k], s2 = p2[k] - p1[k];
        dot += s1 * s2;
        n1 += s1 * s1;
        n2 += s2 * s2;
      }
      if (dot >= 0 || n1 == 0 || n2 == 0) continue;
      // distance of s2 from the line spanned by s1
      const double lambda = dot / n1;
      double off = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const double r = (p2[k] - p1[k]) - lambda * (p1[k] - p0[k]);
        off += r * r;
      }
      if (std::sqrt(off) > tolerance * std::max(std::sqrt(n1), std::sqrt(n2))) continue;

      cur.points.erase(cur.points.begin() + static_cast<std::ptrdiff_t>(i + 1));
      grid.erase(grid.begin() + static_cast<std::ptrdiff_t>(i + 1));
      if (cur.points[i] == cur.points[i + 1] ||
          distance(cur.points[i], cur.points[i + 1]) <= tolerance * std::sqrt(n1)) {
        // full cancellation: p2 returns onto p0
        cur.points.erase(cur.points.begin() + static_cast<std::ptrdiff_t>(i + 1));
        grid.erase(grid.begin() + static_cast<std::ptrdiff_t>(i + 1));
      }
      changed = true;
      break;
    }
  }
  if (timed) cur.times = grid;
  return normalize(cur);
}

// ---------------------------------------------------------------- projection

PathModel project(const PathModel& x, std::span<const std::size_t> indices) {
  const std::size_t d = dimension(x);
  if (indices.empty()) throw UsageError("projection needs at least one index");
  for (std::size_t i : indices)
    if (i < 1 || i > d)
      throw UsageError("projection index " + std::to_string(i) + " outside 1.." + std::to_string(d));
  auto select = [&](const std::vector<Point>& pts) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
      Point q;
      q.reserve(indices.size());
      for (std::size_t i : indices) q.push_back(p[i - 1]);
      out.push_back(std::move(q));
    }
    return out;
  };
  if (auto* s = std::get_if<SampledPath>(&x)) {
    SampledPath out = *s;
    out.dimension = indices.size();
    out.values = select(s->values);
    return out;
  }
  PiecewiseLinearPath out = std::get<PiecewiseLinearPath>(x);
  out.dimension = indices.size();
  out.points = select(out.points);
  return out;
}

// ---------------------------------------------------------------- jets

std::vector<Point> differentiate(const SampledPath& f, DiffScheme scheme) {
  const std::size_t n = f.times.size();
  const std::size_t need = scheme == DiffScheme::Central2 ? 3 : 5;
  if (n < need)
    throw DomainError("finite-difference stencil needs at least " + std::to_string(need) +
                      " samples, got " + std::to_string(n));
  const double h = (f.times.back() - f.times.front()) / static_cast<double>(n - 1);
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((f.times[k] - f.times[k - 1]) - h) > 1e-8 * std::abs(h))
      throw DomainError("finite differences require a uniform time grid");

  const std::size_t r = f.dimension;
  std::vector<Point> out(n, Point(r, 0.0));
  const auto& v = f.values;
  for (std::size_t c = 0; c < r; ++c) {
    auto at = [&](std::size_t k) { return v[k][c]; };
    if (scheme == DiffScheme::Central2) {
      out[0][c] = (-3 * at(0) + 4 * at(1) - at(2)) / (2 * h);
      for (std::size_t k = 1; k + 1 < n; ++k) out[k][c] = (at(k + 1) - at(k - 1)) / (2 * h);
      out[n - 1][c] = (3 * at(n - 1) - 4 * at(n - 2) + at(n - 3)) / (2 * h);
    } else {
      out[0][c] = (-25 * at(0) + 48 * at(1) - 36 * at(2) + 16 * at(3) - 3 * at(4)) / (12 * h);
      out[1][c] = (-3 * at(0) - 10 * at(1) + 18 * at(2) - 6 * at(3) + at(4)) / (12 * h);
      for (std::size_t k = 2; k + 2 < n; ++k)
        out[k][c] = (-at(k + 2) + 8 * at(k + 1) - 8 * at(k - 1) + at(k - 2)) / (12 * h);
      out[n - 2][c] =
          (3 * at(n - 1) + 10 * at(n - 2) - 18 * at(n - 3) + 6 * at(n - 4) - at(n - 5)) / (12 * h);
      out[n - 1][c] = (25 * at(n - 1) - 48 * at(n - 2) + 36 * at(n - 3) - 16 * at(n - 4) +
                       3 * at(n - 5)) /
                      (12 * h);
    }
  }
  return out;
}

SampledPath jet_extend(const SampledPath& f, std::size_t order, DiffScheme scheme) {
  const std::size_t n = f.times.size();
  const std::size_t r = f.dimension;
  std::vector<Point> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k].reserve(1 + r * (order + 1));
    values[k].push_back(f.times[k]);
    values[k].insert(values[k].end(), f.values[k].begin(), f.values[k].end());
  }
  SampledPath current = f;
  for (std::size_t j = 1; j <= order; ++j) {
    current.values = differentiate(current, scheme);
    for (std::size_t k = 0; k < n; ++k)
      values[k].insert(values[k].end(), current.values[k].begin(), current.values[k].end());
  }
  SampledPath out;
  out.dimension = 1 + r * (order + 1);
  out.times = f.times;
  out.values = std::move(values);
  return out;
}

// ---------------------------------------------------------------- I/O

SampledPath read_csv_path(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto split = [&](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    header = split(trim(line));
    break;
  }
  if (header.empty()) throw ParseError("empty path file", lineno == 0 ? 1 : lineno);
  if (header.size() < 2 || header[0] != "t")
    throw ParseError("line " + std::to_string(lineno) + ": header must be t,x1,...,xd", lineno);
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "x" + std::to_string(i))
      throw ParseError("line " + std::to_string(lineno) + ": expected column x" +
                           std::to_string(i) + ", found '" + header[i] + "'",
                       lineno);
  const std::size_t d = header.size() - 1;

  std::vector<double> times;
  std::vector<Point> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(trim(line));
    if (cells.size() != d + 1)
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(d + 1) +
                           " fields, found " + std::to_string(cells.size()),
                       lineno);
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size() || !std::isfinite(v))
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" + c + "'", lineno);
      row.push_back(v);
    }
    if (!times.empty() && !(row[0] > times.back()))
      throw ParseError("line " + std::to_string(lineno) + ": times must be strictly increasing",
                       lineno);
    times.push_back(row[0]);
    values.emplace_back(row.begin() + 1, row.end());
  }
  if (times.size() < 2)
    throw ParseError("path file needs at least two samples", lineno == 0 ? 1 : lineno);
  return SampledPath::make(std::move(times), std::move(values));
}

void write_csv_path(std::ostream& out, const SampledPath& x) {
  out << "t";
  for (std::size_t i = 1; i <= x.dimension; ++i) out << ",x" << i;
  out << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < x.times.size(); ++k) {
    out << x.times[k];
    for (double v : x.values[k]) out << "," << v;
    out << "\n";
  }
}

PiecewiseLinearPath read_json_path(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON path: ") + e.what(), e.byte);
  }
  try {
    std::vector<Point> points = j.at("points").get<std::vector<Point>>();
    std::optional<std::vector<double>> times;
    if (j.contains("times") && !j.at("times").is_null()) times = j.at("times").get<std::vector<double>>();
    auto x = PiecewiseLinearPath::make(std::move(points), std::move(times));
    if (j.contains("dimension") && j.at("dimension").get<std::size_t>() != x.dimension)
      throw ParseError("declared dimension does not match the points", 0);
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON path: ") + e.what(), 0);
  }
}

std::string to_json_text(const PiecewiseLinearPath& x) {
  nlohmann::json j;
  j["dimension"] = x.dimension;
  j["points"] = x.points;
  if (x.times) j["times"] = *x.times;
  return j.dump();
}

PathModel read_path_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw UsageError("cannot open path file '" + filename + "'");
  char first = '\0';
  while (in.get(first) && std::isspace(static_cast<unsigned char>(first))) {
  }
  if (!in) throw ParseError("empty path file '" + filename + "'", 1);
  in.clear();
  in.seekg(0);
  if (first == '{') return read_json_path(in);
  return read_csv_path(in);
}

std::string path_digest(const PathModel& x) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  };
  for (double t : time_grid(x)) mix(t);
  for (const auto& p : nodes(x))
    for (double v : p) mix(v);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace sigcert
