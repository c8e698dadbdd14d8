#pragma once

// Words over the alphabet {1..d} and exact elements of the tensor algebra
// T(R^d): concatenation, shuffle, right half-shuffle and the decomposition
// that moves a chosen letter to the front of a word.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sigcert/rational.hpp"

namespace sigcert {

using Letter = int;

/// A finite sequence of letters drawn from 1..alphabet_size.
class Word {
 public:
  /// The empty word over an alphabet of the given size.
  explicit Word(int alphabet_size);
  Word(std::vector<Letter> letters, int alphabet_size);

  static Word letter(Letter i, int alphabet_size) { return Word({i}, alphabet_size); }

  int alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }

  /// Letters in [begin, end).
  Word slice(std::size_t begin, std::size_t end) const;
  std::size_t count(Letter a) const;
  bool contains(Letter a) const { return count(a) > 0; }

  /// Same letters over a different alphabet; every letter must still fit.
  Word with_alphabet(int alphabet_size) const;

  friend bool operator==(const Word& a, const Word& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.letters_ == b.letters_;
  }
  /// Canonical order: shorter words first, then lexicographic on letters.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
    return a.letters_ < b.letters_;
  }

 private:
  std::vector<Letter> letters_;
  int alphabet_size_;
};

/// Finite linear combination of words with exact rational coefficients.
/// Zero coefficients are never stored; iteration follows the canonical word
/// order, which makes printing and equality deterministic.
class TensorElem {
 public:
  using Terms = std::map<Word, Rational>;

  /// The zero element.
  explicit TensorElem(int alphabet_size);
  TensorElem(const Word& w, const Rational& coefficient = 1);

  /// The empty word, unit of both concatenation and shuffle.
  static TensorElem unit(int alphabet_size) { return TensorElem(Word(alphabet_size)); }

  int alphabet_size() const noexcept { return alphabet_size_; }
  const Terms& terms() const& noexcept { return terms_; }
  Terms terms() && noexcept { return std::move(terms_); }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  Rational coefficient(const Word& w) const;
  std::size_t max_length() const;
  bool has_empty_word() const;

  void add_term(const Word& w, const Rational& c);
  TensorElem with_alphabet(int alphabet_size) const;

  TensorElem& operator+=(const TensorElem& other);
  TensorElem& operator-=(const TensorElem& other);
  TensorElem& operator*=(const Rational& c);

  friend TensorElem operator+(TensorElem a, const TensorElem& b) { return a += b; }
  friend TensorElem operator-(TensorElem a, const TensorElem& b) { return a -= b; }
  friend TensorElem operator*(TensorElem a, const Rational& c) { return a *= c; }
  friend TensorElem operator*(const Rational& c, TensorElem a) { return a *= c; }
  friend TensorElem operator-(TensorElem a) { return a *= Rational(-1); }
  friend bool operator==(const TensorElem& a, const TensorElem& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.terms_ == b.terms_;
  }

 private:
  int alphabet_size_;
  Terms terms_;
};

Word concat(const Word& a, const Word& b);
/// Bilinear concatenation.
TensorElem concat(const TensorElem& a, const TensorElem& b);
TensorElem concat(const TensorElem& a, const Word& suffix);

TensorElem shuffle(const Word& a, const Word& b);
TensorElem shuffle(const TensorElem& a, const TensorElem& b);

/// Right half-shuffle: a > i = a.i and a > (v.i) = (a > v + v > a).i.
/// The right operand may not contain the empty word.
TensorElem half_shuffle(const Word& a, const Word& b);
TensorElem half_shuffle(const TensorElem& a, const TensorElem& b);

/// One summand coefficient * ((letter . q) shuffle r).
struct FrontTerm {
  Rational coefficient;
  Word q;
  Word r;
};

/// Writes `w` as a linear combination of shuffles (a.q_i) ⧢ r_i, by induction
/// on the position of the first occurrence of `a`. Throws DomainError when the
/// letter does not occur in `w`. Terms with equal (q, r) are merged.
std::vector<FrontTerm> front_decompose(const Word& w, Letter a);

/// Expands a decomposition back into a tensor element.
TensorElem recombine(const std::vector<FrontTerm>& terms, Letter a, int alphabet_size);

/// Every word of length <= max_length, in canonical order (empty word first).
std::vector<Word> all_words(int alphabet_size, std::size_t max_length);

/// "[3,1,2]"; the empty word prints as "[]".
std::string to_string(const Word& w);
/// "c1*[..] + c2*[..]" in canonical order; zero prints as "0".
std::string to_string(const TensorElem& t);

Word parse_word(std::string_view text, int alphabet_size);
TensorElem parse_tensor(std::string_view text, int alphabet_size);

}  // namespace sigcert
