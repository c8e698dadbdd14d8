#pragma once

// Sparse multivariate polynomials with exact rational coefficients.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigcert/rational.hpp"
#include "sigcert/words.hpp"

namespace sigcert {

using Exponents = std::vector<unsigned>;

/// Monomial order used for storage and printing: higher total degree first,
/// then lexicographically larger exponent vectors first.
struct MonomialOrder {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class MultiPoly {
 public:
  using Terms = std::map<Exponents, Rational, MonomialOrder>;

  /// The zero polynomial in `num_vars` variables.
  explicit MultiPoly(std::size_t num_vars);

  static MultiPoly constant(std::size_t num_vars, const Rational& c);
  /// The variable x_j, 1-based.
  static MultiPoly variable(std::size_t num_vars, std::size_t j);
  static MultiPoly monomial(const Exponents& exps, const Rational& c);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const Terms& terms() const& noexcept { return terms_; }
  Terms terms() && noexcept { return std::move(terms_); }
  bool is_zero() const noexcept { return terms_.empty(); }
  unsigned degree() const;
  Rational coefficient(const Exponents& exps) const;
  Rational constant_term() const { return coefficient(Exponents(num_vars_, 0)); }

  void add_term(const Exponents& exps, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Rational(-1); }
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t num_vars_;
  Terms terms_;
};

MultiPoly pow(const MultiPoly& p, unsigned e);

/// Value at x with coefficients rounded to double.
double eval(const MultiPoly& p, std::span<const double> x);
/// Exact value at a rational point.
Rational eval_exact(const MultiPoly& p, std::span<const Rational> x);

/// Formal derivative with respect to x_j (1-based).
MultiPoly partial(const MultiPoly& p, std::size_t j);
std::vector<MultiPoly> gradient(const MultiPoly& p);

/// q(x) = p(x + c) - p(c). The constant term of q is exactly zero.
MultiPoly translate(const MultiPoly& p, std::span<const Rational> c);
/// Floating shifts are converted to their exact binary rationals first.
MultiPoly translate(const MultiPoly& p, std::span<const double> c);
/// p(x + c), without removing the constant.
MultiPoly shift(const MultiPoly& p, std::span<const Rational> c);

/// Ring homomorphism into the shuffle algebra sending x_i to the word [i]
/// and constants to multiples of the empty word.
TensorElem phi(const MultiPoly& p);

/// Grammar: sums/differences of products of factors; factors are rational or
/// decimal numbers, variables x1..xN, parenthesised expressions, each with an
/// optional non-negative integer exponent "^k". With num_vars = 0 the number
/// of variables is the largest index that appears (at least 1).
MultiPoly parse_poly(std::string_view text, std::size_t num_vars = 0);

/// Canonical text, e.g. "2*x1^2 - x2^2 - x3"; zero prints as "0".
std::string to_string(const MultiPoly& p);

}  // namespace sigcert
