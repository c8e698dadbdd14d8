#pragma once

// Symbolic pushforward of words along a graph map p(x) = (x, g(x)).
//
// With p~(x) = p(x + X(a)) - p(X(a)) and J its Jacobian, M sends words over
// d+1 letters to tensor elements over d letters so that
// <sig(p o X), v> = <sig(X), M(v)> for every path X starting at X(a).

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "sigcert/poly.hpp"
#include "sigcert/words.hpp"

namespace sigcert {

struct GraphMapSpec {
  std::size_t d = 0;
  MultiPoly g{1};
  std::vector<Rational> anchor;

  /// Validates that g has d = anchor.size() variables.
  static GraphMapSpec make(MultiPoly g, std::vector<Rational> anchor);
  /// Anchor at the origin.
  static GraphMapSpec make(MultiPoly g);
};

/// Row i (1-based, 1 <= i <= d+1) of the Jacobian of p~: the unit row for
/// i <= d, the gradient of g(x + anchor) for i = d+1.
std::vector<MultiPoly> jacobian_row(const GraphMapSpec& spec, std::size_t i);

/// Memoizing evaluator of M. Results for every prefix computed along the way
/// are cached; the cache is shared between threads under a reader/writer lock
/// and its contents never depend on evaluation order.
class PushForward {
 public:
  explicit PushForward(GraphMapSpec spec);

  const GraphMapSpec& spec() const noexcept { return spec_; }

  /// M(v) for a word over d+1 letters.
  TensorElem operator()(const Word& v) const;
  /// Linear extension.
  TensorElem operator()(const TensorElem& v) const;

  std::size_t cache_size() const;

 private:
  GraphMapSpec spec_;
  // phi of the last Jacobian row, one entry per letter j
  std::vector<TensorElem> gradient_words_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::vector<Letter>, TensorElem> cache_;
};

/// One-shot M(v); builds a fresh evaluator.
TensorElem m_push(const Word& v, const GraphMapSpec& spec);

/// For v containing the letter d+1 at least twice, returns a combination of
/// words over d+1 letters, each containing d+1 exactly once, whose image
/// under M equals M(v). Splits v at the last d+1, v = u.(d+1).q, and uses
/// M(v) = sum_j M((u ⧢ phi(dg~/dx_j)).j.q) until one copy remains.
/// Throws DomainError when d+1 occurs fewer than twice.
TensorElem single_occurrence_reduce(const Word& v, const GraphMapSpec& spec);

}  // namespace sigcert
