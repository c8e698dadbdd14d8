#pragma once

// Truncated signatures: exact (up to rounding) for piecewise-linear paths via
// segment exponentials and Chen's identity, chordal for sampled paths, and an
// independent Runge-Kutta oracle that integrates S' = S (x) dX/dt.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigcert/path.hpp"
#include "sigcert/words.hpp"

namespace sigcert {

/// Levels 0..K of the signature of a path in R^d. Level k is a dense array of
/// d^k entries; the entry for the word (i_1, ..., i_k) sits at
/// sum_j (i_j - 1) d^(k-j), i.e. row-major with i_1 varying slowest.
class TruncSig {
 public:
  /// The trivial signature (1, 0, 0, ...).
  TruncSig(std::size_t dimension, std::size_t depth);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t depth() const noexcept { return levels_.size() - 1; }

  std::span<const double> level(std::size_t k) const { return levels_.at(k); }
  std::span<double> level(std::size_t k) { return levels_.at(k); }
  const std::vector<std::vector<double>>& levels() const noexcept { return levels_; }

  /// Entry for a word; throws TruncationError past the depth.
  double at(const Word& w) const;
  /// Largest absolute entry of level k (0 past the depth).
  double max_abs(std::size_t k) const;

  /// Builds a signature from raw level data, validating the shape and the
  /// unit at level 0.
  static TruncSig from_levels(std::size_t dimension, std::vector<std::vector<double>> levels);

 private:
  std::size_t dimension_;
  std::vector<std::vector<double>> levels_;
};

/// Flat offset of a word inside its level.
std::size_t word_index(const Word& w);

/// exp(v) truncated at K: level k holds v^(x)k / k!.
TruncSig segment_sig(std::span<const double> displacement, std::size_t depth);

/// Chen product, truncated at `depth` (both factors must reach it).
TruncSig chen_mul(const TruncSig& a, const TruncSig& b, std::size_t depth);
inline TruncSig chen_mul(const TruncSig& a, const TruncSig& b) {
  return chen_mul(a, b, std::min(a.depth(), b.depth()));
}

/// In-place right multiplication by the exponential of one segment.
void append_segment(TruncSig& s, std::span<const double> displacement);

/// Segments are grouped into fixed blocks of this many; blocks are folded
/// independently (possibly in parallel) and combined left to right, so the
/// floating-point result does not depend on the thread count.
inline constexpr std::size_t kChenBlock = 1024;

TruncSig sig_pl(const PiecewiseLinearPath& x, std::size_t depth);
/// Signature of the polyline through the samples.
TruncSig sig_sampled(const SampledPath& x, std::size_t depth);
TruncSig signature(const PathModel& x, std::size_t depth);

/// dX/dt at time t, written into `out` (length d). `interval` is the index of
/// the breakpoint interval being integrated, so one-sided derivatives at a
/// kink are unambiguous: t = t_{k+1} with interval k means the left limit.
using VelocityField = std::function<void(std::size_t interval, double t, std::span<double> out)>;

/// Classical fourth-order Runge-Kutta on S' = S (x) v(t) over [t_0, t_m],
/// never stepping across a breakpoint. `steps` is the total step budget,
/// split evenly over the breakpoint intervals (at least one each).
TruncSig sig_ode_oracle(const VelocityField& velocity, std::span<const double> breakpoints,
                        std::size_t dimension, std::size_t depth, std::size_t steps);

/// Oracle for sampled data: node velocities from three-point (second-order)
/// differences, interpolated linearly in time between nodes.
TruncSig sig_ode_oracle(const SampledPath& x, std::size_t depth, std::size_t steps);

/// <S, e> = sum of coefficient * entry; the empty word pairs to 1.
double pair(const TruncSig& s, const TensorElem& e);
double pair(const TruncSig& s, const Word& w);

/// {"d":..,"K":..,"levels":[[1],[...],...]}
std::string to_json_text(const TruncSig& s);
TruncSig sig_from_json(std::string_view text);

}  // namespace sigcert
