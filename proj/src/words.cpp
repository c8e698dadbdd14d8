#include "sigcert/words.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "sigcert/errors.hpp"

namespace sigcert {

namespace {

void check_letter(Letter l, int alphabet_size) {
  if (l < 1 || l > alphabet_size)
    throw UsageError("letter " + std::to_string(l) + " outside alphabet 1.." +
                     std::to_string(alphabet_size));
}

void check_same_alphabet(int a, int b) {
  if (a != b)
    throw UsageError("alphabet mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

struct LettersHash {
  std::size_t operator()(const std::vector<Letter>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : v) {
      h ^= static_cast<std::size_t>(l);
      h *= 1099511628211ull;
    }
    return h ^ v.size();
  }
};

// Sums coefficients of words produced by interleavings before they are moved
// into the ordered TensorElem representation.
class Accumulator {
 public:
  explicit Accumulator(int alphabet_size) : alphabet_size_(alphabet_size) {}

  void add(const std::vector<Letter>& letters, const Rational& c) {
    auto it = sums_.find(letters);
    if (it == sums_.end())
      sums_.emplace(letters, c);
    else
      it->second += c;
  }

  TensorElem finish() && {
    TensorElem out(alphabet_size_);
    for (auto& [letters, c] : sums_)
      if (c != 0) out.add_term(Word(letters, alphabet_size_), c);
    return out;
  }

 private:
  int alphabet_size_;
  std::unordered_map<std::vector<Letter>, Rational, LettersHash> sums_;
};

// Enumerates every interleaving of a[ia..] and b[ib..] after the prefix
// already written into buf[0..pos).
void interleave(const std::vector<Letter>& a, std::size_t ia, const std::vector<Letter>& b,
                std::size_t ib, std::vector<Letter>& buf, std::size_t pos, const Rational& c,
                Accumulator& acc) {
  if (ia == a.size()) {
    std::copy(b.begin() + static_cast<std::ptrdiff_t>(ib), b.end(),
              buf.begin() + static_cast<std::ptrdiff_t>(pos));
    acc.add(buf, c);
    return;
  }
  if (ib == b.size()) {
    std::copy(a.begin() + static_cast<std::ptrdiff_t>(ia), a.end(),
              buf.begin() + static_cast<std::ptrdiff_t>(pos));
    acc.add(buf, c);
    return;
  }
  buf[pos] = a[ia];
  interleave(a, ia + 1, b, ib, buf, pos + 1, c, acc);
  buf[pos] = b[ib];
  interleave(a, ia, b, ib + 1, buf, pos + 1, c, acc);
}

void shuffle_into(const std::vector<Letter>& a, const std::vector<Letter>& b, const Rational& c,
                  Accumulator& acc) {
  std::vector<Letter> buf(a.size() + b.size());
  interleave(a, 0, b, 0, buf, 0, c, acc);
}

// a > (v.i) = (a ⧢ v).i, written directly into the accumulator.
void half_shuffle_into(const std::vector<Letter>& a, const std::vector<Letter>& b,
                       const Rational& c, Accumulator& acc) {
  std::vector<Letter> v(b.begin(), b.end() - 1);
  std::vector<Letter> buf(a.size() + b.size());
  buf.back() = b.back();
  interleave(a, 0, v, 0, buf, 0, c, acc);
}

}  // namespace

// ---------------------------------------------------------------- Word

Word::Word(int alphabet_size) : alphabet_size_(alphabet_size) {
  if (alphabet_size < 1) throw UsageError("alphabet size must be positive");
}

Word::Word(std::vector<Letter> letters, int alphabet_size)
    : letters_(std::move(letters)), alphabet_size_(alphabet_size) {
  if (alphabet_size < 1) throw UsageError("alphabet size must be positive");
  for (Letter l : letters_) check_letter(l, alphabet_size_);
}

Word Word::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, letters_.size());
  begin = std::min(begin, end);
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(begin),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(end)),
              alphabet_size_);
}

std::size_t Word::count(Letter a) const {
  return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), a));
}

Word Word::with_alphabet(int alphabet_size) const { return Word(letters_, alphabet_size); }

// ---------------------------------------------------------------- TensorElem

TensorElem::TensorElem(int alphabet_size) : alphabet_size_(alphabet_size) {
  if (alphabet_size < 1) throw UsageError("alphabet size must be positive");
}

TensorElem::TensorElem(const Word& w, const Rational& coefficient)
    : alphabet_size_(w.alphabet_size()) {
  if (coefficient != 0) terms_.emplace(w, coefficient);
}

Rational TensorElem::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::size_t TensorElem::max_length() const {
  // canonical order puts the longest words last
  return terms_.empty() ? 0 : terms_.rbegin()->first.size();
}

bool TensorElem::has_empty_word() const {
  return !terms_.empty() && terms_.begin()->first.empty();
}

void TensorElem::add_term(const Word& w, const Rational& c) {
  check_same_alphabet(alphabet_size_, w.alphabet_size());
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) {
    it->second.canonicalize();  // callers may pass an unreduced p/q
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TensorElem TensorElem::with_alphabet(int alphabet_size) const {
  TensorElem out(alphabet_size);
  for (const auto& [w, c] : terms_) out.terms_.emplace(w.with_alphabet(alphabet_size), c);
  return out;
}

TensorElem& TensorElem::operator+=(const TensorElem& other) {
  check_same_alphabet(alphabet_size_, other.alphabet_size_);
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

TensorElem& TensorElem::operator-=(const TensorElem& other) {
  check_same_alphabet(alphabet_size_, other.alphabet_size_);
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

TensorElem& TensorElem::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coef] : terms_) coef *= c;
  return *this;
}

// ---------------------------------------------------------------- products

Word concat(const Word& a, const Word& b) {
  check_same_alphabet(a.alphabet_size(), b.alphabet_size());
  std::vector<Letter> letters = a.letters();
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return Word(std::move(letters), a.alphabet_size());
}

TensorElem concat(const TensorElem& a, const TensorElem& b) {
  check_same_alphabet(a.alphabet_size(), b.alphabet_size());
  TensorElem out(a.alphabet_size());
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) out.add_term(concat(wa, wb), ca * cb);
  return out;
}

TensorElem concat(const TensorElem& a, const Word& suffix) {
  check_same_alphabet(a.alphabet_size(), suffix.alphabet_size());
  TensorElem out(a.alphabet_size());
  for (const auto& [w, c] : a.terms()) out.add_term(concat(w, suffix), c);
  return out;
}

TensorElem shuffle(const Word& a, const Word& b) {
  check_same_alphabet(a.alphabet_size(), b.alphabet_size());
  Accumulator acc(a.alphabet_size());
  shuffle_into(a.letters(), b.letters(), Rational(1), acc);
  return std::move(acc).finish();
}

TensorElem shuffle(const TensorElem& a, const TensorElem& b) {
  check_same_alphabet(a.alphabet_size(), b.alphabet_size());
  Accumulator acc(a.alphabet_size());
  Rational c;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      c = ca * cb;
      shuffle_into(wa.letters(), wb.letters(), c, acc);
    }
  return std::move(acc).finish();
}

TensorElem half_shuffle(const Word& a, const Word& b) {
  check_same_alphabet(a.alphabet_size(), b.alphabet_size());
  if (b.empty()) throw DomainError("half-shuffle with the empty word on the right is undefined");
  Accumulator acc(a.alphabet_size());
  half_shuffle_into(a.letters(), b.letters(), Rational(1), acc);
  return std::move(acc).finish();
}

TensorElem half_shuffle(const TensorElem& a, const TensorElem& b) {
  check_same_alphabet(a.alphabet_size(), b.alphabet_size());
  if (b.has_empty_word())
    throw DomainError("half-shuffle with the empty word on the right is undefined");
  Accumulator acc(a.alphabet_size());
  Rational c;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      c = ca * cb;
      half_shuffle_into(wa.letters(), wb.letters(), c, acc);
    }
  return std::move(acc).finish();
}

// ---------------------------------------------------------------- front letter

namespace {

void front_decompose_into(const Word& w, Letter a, const Rational& scale,
                          std::map<std::pair<Word, Word>, Rational>& out) {
  const auto& l = w.letters();
  const auto first = static_cast<std::size_t>(std::find(l.begin(), l.end(), a) - l.begin());
  if (first == 0) {
    auto key = std::make_pair(w.slice(1, w.size()), Word(w.alphabet_size()));
    out[key] += scale;
    return;
  }
  // w = w0 a w1 with a not in w0; w0 ⧢ (a w1) = w + (words whose first a
  // sits strictly earlier), so w = (a w1) ⧢ w0 - rest.
  Word w0 = w.slice(0, first);
  Word w1 = w.slice(first + 1, w.size());
  out[std::make_pair(w1, w0)] += scale;
  TensorElem rest = shuffle(w0, concat(Word::letter(a, w.alphabet_size()), w1));
  rest.add_term(w, Rational(-1));
  for (const auto& [u, c] : rest.terms()) front_decompose_into(u, a, -scale * c, out);
}

}  // namespace

std::vector<FrontTerm> front_decompose(const Word& w, Letter a) {
  check_letter(a, w.alphabet_size());
  if (!w.contains(a))
    throw DomainError("letter " + std::to_string(a) + " does not occur in " + to_string(w));
  std::map<std::pair<Word, Word>, Rational> collected;
  front_decompose_into(w, a, Rational(1), collected);

  std::vector<FrontTerm> out;
  for (auto& [key, c] : collected)
    if (c != 0) out.push_back(FrontTerm{c, key.first, key.second});
  return out;
}

TensorElem recombine(const std::vector<FrontTerm>& terms, Letter a, int alphabet_size) {
  TensorElem out(alphabet_size);
  for (const auto& t : terms)
    out += shuffle(concat(Word::letter(a, alphabet_size), t.q), t.r) * t.coefficient;
  return out;
}

std::vector<Word> all_words(int alphabet_size, std::size_t max_length) {
  std::vector<Word> out{Word(alphabet_size)};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (Letter l = 1; l <= alphabet_size; ++l) {
        std::vector<Letter> letters = out[i].letters();
        letters.push_back(l);
        out.emplace_back(std::move(letters), alphabet_size);
      }
    level_begin = level_end;
  }
  return out;
}

// ---------------------------------------------------------------- text

std::string to_string(const Word& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(w[i]);
  }
  return s + "]";
}

std::string to_string(const TensorElem& t) {
  if (t.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : t.terms()) {
    if (first) {
      s += to_string(c);
    } else {
      s += sgn(c) < 0 ? " - " : " + ";
      s += to_string(Rational(abs(c)));
    }
    s += "*" + to_string(w);
    first = false;
  }
  return s;
}

namespace {

class TextCursor {
 public:
  explicit TextCursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }
  std::size_t pos() const { return pos_; }

  std::string_view take_while(bool (*pred)(char)) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && pred(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_number_char(char c) { return is_digit(c) || c == '.' || c == '/' || c == 'e' || c == 'E'; }

Word parse_word_at(TextCursor& cur, int alphabet_size) {
  cur.expect('[');
  std::vector<Letter> letters;
  if (!cur.accept(']')) {
    do {
      auto digits = cur.take_while(is_digit);
      if (digits.empty()) cur.fail("expected letter");
      if (digits.size() > 9) cur.fail("letter out of range");
      Letter l = std::stoi(std::string(digits));
      if (l < 1 || l > alphabet_size)
        throw ParseError("letter " + std::to_string(l) + " outside alphabet 1.." +
                             std::to_string(alphabet_size),
                         cur.pos());
      letters.push_back(l);
    } while (cur.accept(','));
    cur.expect(']');
  }
  return Word(std::move(letters), alphabet_size);
}

}  // namespace

Word parse_word(std::string_view text, int alphabet_size) {
  TextCursor cur(text);
  Word w = parse_word_at(cur, alphabet_size);
  if (!cur.at_end()) cur.fail("trailing characters");
  return w;
}

TensorElem parse_tensor(std::string_view text, int alphabet_size) {
  TextCursor cur(text);
  TensorElem out(alphabet_size);
  if (cur.at_end()) cur.fail("empty tensor expression");
  bool first = true;
  while (!cur.at_end()) {
    Rational sign = 1;
    if (cur.accept('-'))
      sign = -1;
    else if (!cur.accept('+') && !first)
      cur.fail("expected '+' or '-'");
    first = false;

    Rational coef = 1;
    if (is_digit(cur.peek()) || cur.peek() == '.') {
      std::size_t at = cur.pos();
      auto num = cur.take_while(is_number_char);
      try {
        coef = parse_rational(num);
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " at position " + std::to_string(at), at);
      }
      if (!cur.accept('*')) {
        // bare scalar: only "0" is meaningful as a whole expression
        if (coef == 0 && cur.at_end()) continue;
        // a bare scalar multiplies the empty word
        out.add_term(Word(alphabet_size), sign * coef);
        continue;
      }
    }
    Word w = parse_word_at(cur, alphabet_size);
    out.add_term(w, sign * coef);
  }
  return out;
}

}  // namespace sigcert
