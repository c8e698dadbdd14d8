#include "sigcert/signature.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "sigcert/errors.hpp"
#include "sigcert/parallel.hpp"

namespace sigcert {

namespace {

std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= base;
  return r;
}

void check_displacement(std::size_t d, std::size_t len) {
  if (len != d)
    throw UsageError("displacement of length " + std::to_string(len) + " for dimension " +
                     std::to_string(d));
}

}  // namespace

// ---------------------------------------------------------------- TruncSig

TruncSig::TruncSig(std::size_t dimension, std::size_t depth) : dimension_(dimension) {
  if (dimension == 0) throw UsageError("signature dimension must be positive");
  levels_.resize(depth + 1);
  for (std::size_t k = 0; k <= depth; ++k) levels_[k].assign(ipow(dimension, k), 0.0);
  levels_[0][0] = 1.0;
}

TruncSig TruncSig::from_levels(std::size_t dimension, std::vector<std::vector<double>> levels) {
  if (levels.empty()) throw UsageError("signature needs level 0");
  TruncSig s(dimension, levels.size() - 1);
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k].size() != s.levels_[k].size())
      throw UsageError("level " + std::to_string(k) + " has " + std::to_string(levels[k].size()) +
                       " entries, expected " + std::to_string(s.levels_[k].size()));
  if (levels[0][0] != 1.0) throw DomainError("level 0 of a signature must be exactly 1");
  s.levels_ = std::move(levels);
  return s;
}

std::size_t word_index(const Word& w) {
  std::size_t idx = 0;
  const auto d = static_cast<std::size_t>(w.alphabet_size());
  for (Letter l : w.letters()) idx = idx * d + static_cast<std::size_t>(l - 1);
  return idx;
}

double TruncSig::at(const Word& w) const {
  if (static_cast<std::size_t>(w.alphabet_size()) != dimension_)
    throw UsageError("word alphabet " + std::to_string(w.alphabet_size()) +
                     " does not match signature dimension " + std::to_string(dimension_));
  if (w.size() > depth())
    throw TruncationError("word " + to_string(w) + " of length " + std::to_string(w.size()) +
                          " exceeds truncation level " + std::to_string(depth()));
  return levels_[w.size()][word_index(w)];
}

double TruncSig::max_abs(std::size_t k) const {
  if (k >= levels_.size()) return 0.0;
  double m = 0;
  for (double v : levels_[k]) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------- kernels

void append_segment(TruncSig& s, std::span<const double> v) {
  const std::size_t d = s.dimension();
  check_displacement(d, v.size());
  const std::size_t depth = s.depth();
  std::vector<double> acc, next;
  acc.reserve(ipow(d, depth));
  next.reserve(ipow(d, depth));
  // Horner: new S_k = S_k + (((S_0 v/k + S_1) v/(k-1) + ...) + S_{k-1}) v/1
  for (std::size_t k = depth; k >= 1; --k) {
    acc.assign(1, s.level(0)[0]);
    for (std::size_t i = 1; i <= k; ++i) {
      const double scale = 1.0 / static_cast<double>(k - i + 1);
      next.resize(acc.size() * d);
      for (std::size_t a = 0; a < acc.size(); ++a) {
        const double base = acc[a] * scale;
        double* out = next.data() + a * d;
        for (std::size_t b = 0; b < d; ++b) out[b] = base * v[b];
      }
      acc.swap(next);
      if (i < k) {
        auto lvl = s.level(i);
        for (std::size_t a = 0; a < acc.size(); ++a) acc[a] += lvl[a];
      }
    }
    auto lvl = s.level(k);
    for (std::size_t a = 0; a < acc.size(); ++a) lvl[a] += acc[a];
  }
}

TruncSig segment_sig(std::span<const double> displacement, std::size_t depth) {
  TruncSig s(displacement.size(), depth);
  append_segment(s, displacement);
  return s;
}

TruncSig chen_mul(const TruncSig& a, const TruncSig& b, std::size_t depth) {
  if (a.dimension() != b.dimension())
    throw UsageError("Chen product of signatures with dimensions " + std::to_string(a.dimension()) +
                     " and " + std::to_string(b.dimension()));
  if (a.depth() < depth || b.depth() < depth)
    throw TruncationError("Chen product requested at level " + std::to_string(depth) +
                          " beyond a factor's truncation");
  TruncSig out(a.dimension(), depth);
  for (std::size_t k = 1; k <= depth; ++k) {
    auto dst = out.level(k);
    for (std::size_t i = 0; i <= k; ++i) {
      auto la = a.level(i);
      auto lb = b.level(k - i);
      for (std::size_t x = 0; x < la.size(); ++x) {
        const double ax = la[x];
        if (ax == 0.0) continue;
        double* row = dst.data() + x * lb.size();
        for (std::size_t y = 0; y < lb.size(); ++y) row[y] += ax * lb[y];
      }
    }
  }
  return out;
}

namespace {

TruncSig fold_vertices(const std::vector<Point>& pts, std::size_t d, std::size_t depth) {
  const std::size_t segments = pts.size() > 1 ? pts.size() - 1 : 0;
  auto fold_range = [&](std::size_t first, std::size_t last) {
    TruncSig s(d, depth);
    Point v(d);
    for (std::size_t i = first; i < last; ++i) {
      bool zero = true;
      for (std::size_t c = 0; c < d; ++c) {
        v[c] = pts[i + 1][c] - pts[i][c];
        zero = zero && v[c] == 0.0;
      }
      if (!zero) append_segment(s, v);
    }
    return s;
  };
  if (segments <= kChenBlock) return fold_range(0, segments);

  const std::size_t blocks = (segments + kChenBlock - 1) / kChenBlock;
  std::vector<TruncSig> partial(blocks, TruncSig(d, depth));
  parallel_for(blocks, [&](std::size_t b) {
    partial[b] = fold_range(b * kChenBlock, std::min(segments, (b + 1) * kChenBlock));
  });
  TruncSig acc = std::move(partial[0]);
  for (std::size_t b = 1; b < blocks; ++b) acc = chen_mul(acc, partial[b], depth);
  return acc;
}

}  // namespace

TruncSig sig_pl(const PiecewiseLinearPath& x, std::size_t depth) {
  return fold_vertices(x.points, x.dimension, depth);
}

TruncSig sig_sampled(const SampledPath& x, std::size_t depth) {
  return fold_vertices(x.values, x.dimension, depth);
}

TruncSig signature(const PathModel& x, std::size_t depth) {
  return std::visit([&](const auto& p) { return fold_vertices(nodes(x), p.dimension, depth); }, x);
}

// ---------------------------------------------------------------- oracle

namespace {

// levels of dS = S (x) v, level 0 is zero
void tensor_rhs(const std::vector<std::vector<double>>& s, std::span<const double> v,
                std::vector<std::vector<double>>& out) {
  const std::size_t d = v.size();
  std::fill(out[0].begin(), out[0].end(), 0.0);
  for (std::size_t k = 1; k < s.size(); ++k) {
    const auto& prev = s[k - 1];
    auto& dst = out[k];
    for (std::size_t a = 0; a < prev.size(); ++a)
      for (std::size_t b = 0; b < d; ++b) dst[a * d + b] = prev[a] * v[b];
  }
}

}  // namespace

TruncSig sig_ode_oracle(const VelocityField& velocity, std::span<const double> breakpoints,
                        std::size_t dimension, std::size_t depth, std::size_t steps) {
  if (breakpoints.size() < 2) throw UsageError("oracle needs at least two breakpoints");
  TruncSig result(dimension, depth);
  std::vector<std::vector<double>> s = result.levels();
  auto k1 = s, k2 = s, k3 = s, k4 = s, tmp = s;
  Point v(dimension);

  std::size_t iv = 0;
  auto eval = [&](double t, const std::vector<std::vector<double>>& state,
                  std::vector<std::vector<double>>& out) {
    velocity(iv, t, v);
    tensor_rhs(state, v, out);
  };
  auto axpy = [&](const std::vector<std::vector<double>>& base, double h,
                  const std::vector<std::vector<double>>& k) {
    for (std::size_t l = 0; l < base.size(); ++l)
      for (std::size_t i = 0; i < base[l].size(); ++i) tmp[l][i] = base[l][i] + h * k[l][i];
  };

  const std::size_t intervals = breakpoints.size() - 1;
  const std::size_t per = std::max<std::size_t>(1, (steps + intervals - 1) / intervals);
  for (; iv < intervals; ++iv) {
    const double t0 = breakpoints[iv], t1 = breakpoints[iv + 1];
    const double h = (t1 - t0) / static_cast<double>(per);
    for (std::size_t n = 0; n < per; ++n) {
      const double t = t0 + h * static_cast<double>(n);
      const double tm = t + 0.5 * h;
      const double te = (n + 1 == per) ? t1 : t + h;
      eval(t, s, k1);
      axpy(s, 0.5 * h, k1);
      eval(tm, tmp, k2);
      axpy(s, 0.5 * h, k2);
      eval(tm, tmp, k3);
      axpy(s, h, k3);
      eval(te, tmp, k4);
      for (std::size_t l = 1; l < s.size(); ++l)
        for (std::size_t i = 0; i < s[l].size(); ++i)
          s[l][i] += h / 6.0 * (k1[l][i] + 2.0 * k2[l][i] + 2.0 * k3[l][i] + k4[l][i]);
    }
  }
  return TruncSig::from_levels(dimension, std::move(s));
}

TruncSig sig_ode_oracle(const SampledPath& x, std::size_t depth, std::size_t steps) {
  const std::size_t n = x.times.size();
  const std::size_t d = x.dimension;
  const auto& t = x.times;
  const auto& y = x.values;
  std::vector<Point> node_v(n, Point(d, 0.0));
  if (n == 2) {
    for (std::size_t c = 0; c < d; ++c) node_v[0][c] = node_v[1][c] = (y[1][c] - y[0][c]) / (t[1] - t[0]);
  } else {
    // derivative at t_m of the quadratic through three nodes
    auto quad_slope = [&](std::size_t i0, std::size_t i1, std::size_t i2, double at, std::size_t c) {
      const double x0 = t[i0], x1 = t[i1], x2 = t[i2];
      const double l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
      const double l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
      const double l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
      return l0 * y[i0][c] + l1 * y[i1][c] + l2 * y[i2][c];
    };
    for (std::size_t c = 0; c < d; ++c) {
      node_v[0][c] = quad_slope(0, 1, 2, t[0], c);
      for (std::size_t k = 1; k + 1 < n; ++k) node_v[k][c] = quad_slope(k - 1, k, k + 1, t[k], c);
      node_v[n - 1][c] = quad_slope(n - 3, n - 2, n - 1, t[n - 1], c);
    }
  }
  // breakpoints are the sample times
  VelocityField velocity = [&](std::size_t k, double at, std::span<double> out) {
    const double s = (at - t[k]) / (t[k + 1] - t[k]);
    for (std::size_t c = 0; c < d; ++c) out[c] = node_v[k][c] + s * (node_v[k + 1][c] - node_v[k][c]);
  };
  return sig_ode_oracle(velocity, t, d, depth, steps);
}

// ---------------------------------------------------------------- pairing

double pair(const TruncSig& s, const Word& w) { return s.at(w); }

double pair(const TruncSig& s, const TensorElem& e) {
  if (static_cast<std::size_t>(e.alphabet_size()) != s.dimension())
    throw UsageError("tensor alphabet " + std::to_string(e.alphabet_size()) +
                     " does not match signature dimension " + std::to_string(s.dimension()));
  double total = 0.0;
  for (const auto& [w, c] : e.terms()) total += c.get_d() * s.at(w);
  return total;
}

// ---------------------------------------------------------------- JSON

std::string to_json_text(const TruncSig& s) {
  nlohmann::json j;
  j["d"] = s.dimension();
  j["K"] = s.depth();
  j["levels"] = s.levels();
  return j.dump();
}

TruncSig sig_from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    const auto d = j.at("d").get<std::size_t>();
    const auto k = j.at("K").get<std::size_t>();
    auto levels = j.at("levels").get<std::vector<std::vector<double>>>();
    if (levels.size() != k + 1) throw ParseError("signature dump has wrong number of levels", 0);
    return TruncSig::from_levels(d, std::move(levels));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed signature JSON: ") + e.what(), 0);
  }
}

}  // namespace sigcert
