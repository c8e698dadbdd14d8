#include "sigcert/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "sigcert/errors.hpp"

namespace sigcert {

namespace {

unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

void check_vars(std::size_t a, std::size_t b) {
  if (a != b)
    throw UsageError("polynomial variable count mismatch: " + std::to_string(a) + " vs " +
                     std::to_string(b));
}

}  // namespace

bool MonomialOrder::operator()(const Exponents& a, const Exponents& b) const {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

MultiPoly::MultiPoly(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw UsageError("polynomial needs at least one variable");
}

MultiPoly MultiPoly::constant(std::size_t num_vars, const Rational& c) {
  MultiPoly p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t num_vars, std::size_t j) {
  if (j < 1 || j > num_vars)
    throw UsageError("variable index " + std::to_string(j) + " out of range 1.." +
                     std::to_string(num_vars));
  Exponents e(num_vars, 0);
  e[j - 1] = 1;
  return monomial(e, 1);
}

MultiPoly MultiPoly::monomial(const Exponents& exps, const Rational& c) {
  MultiPoly p(exps.size());
  p.add_term(exps, c);
  return p;
}

unsigned MultiPoly::degree() const {
  return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
}

Rational MultiPoly::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPoly::add_term(const Exponents& exps, const Rational& c) {
  check_vars(num_vars_, exps.size());
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (inserted) {
    it->second.canonicalize();  // callers may pass an unreduced p/q
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check_vars(num_vars_, other.num_vars_);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  check_vars(num_vars_, other.num_vars_);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coef] : terms_) coef *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  check_vars(a.num_vars_, b.num_vars_);
  MultiPoly out(a.num_vars_);
  Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

MultiPoly pow(const MultiPoly& p, unsigned e) {
  MultiPoly result = MultiPoly::constant(p.num_vars(), 1);
  MultiPoly base = p;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

double eval(const MultiPoly& p, std::span<const double> x) {
  check_vars(p.num_vars(), x.size());
  double total = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double m = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
    total += m;
  }
  return total;
}

Rational eval_exact(const MultiPoly& p, std::span<const Rational> x) {
  check_vars(p.num_vars(), x.size());
  Rational total = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational m = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
    total += m;
  }
  return total;
}

MultiPoly partial(const MultiPoly& p, std::size_t j) {
  if (j < 1 || j > p.num_vars())
    throw UsageError("variable index " + std::to_string(j) + " out of range 1.." +
                     std::to_string(p.num_vars()));
  MultiPoly out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    if (e[j - 1] == 0) continue;
    Exponents d = e;
    d[j - 1] -= 1;
    out.add_term(d, c * e[j - 1]);
  }
  return out;
}

std::vector<MultiPoly> gradient(const MultiPoly& p) {
  std::vector<MultiPoly> g;
  g.reserve(p.num_vars());
  for (std::size_t j = 1; j <= p.num_vars(); ++j) g.push_back(partial(p, j));
  return g;
}

MultiPoly shift(const MultiPoly& p, std::span<const Rational> c) {
  check_vars(p.num_vars(), c.size());
  const std::size_t n = p.num_vars();
  // powers[i][k] = (x_i + c_i)^k, built on demand
  std::vector<std::vector<MultiPoly>> powers(n);
  auto power = [&](std::size_t i, unsigned k) -> const MultiPoly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(MultiPoly::constant(n, 1));
    while (cache.size() <= k) {
      MultiPoly lin = MultiPoly::variable(n, i + 1) + MultiPoly::constant(n, c[i]);
      cache.push_back(cache.back() * lin);
    }
    return cache[k];
  };
  MultiPoly out(n);
  for (const auto& [e, coef] : p.terms()) {
    MultiPoly term = MultiPoly::constant(n, coef);
    for (std::size_t i = 0; i < n; ++i)
      if (e[i]) term = term * power(i, e[i]);
    out += term;
  }
  return out;
}

MultiPoly translate(const MultiPoly& p, std::span<const Rational> c) {
  MultiPoly out = shift(p, c);
  out.add_term(Exponents(p.num_vars(), 0), -out.constant_term());
  return out;
}

MultiPoly translate(const MultiPoly& p, std::span<const double> c) {
  auto exact = exact_rationals(c);
  return translate(p, std::span<const Rational>(exact));
}

TensorElem phi(const MultiPoly& p) {
  const int d = static_cast<int>(p.num_vars());
  TensorElem out(d);
  for (const auto& [e, c] : p.terms()) {
    TensorElem m = TensorElem::unit(d);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k)
        m = shuffle(m, TensorElem(Word::letter(static_cast<Letter>(i + 1), d)));
    out += m * c;
  }
  return out;
}

// ---------------------------------------------------------------- text

std::string to_string(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool negative = sgn(c) < 0;
    const Rational mag = abs(c);
    if (first)
      s += negative ? "-" : "";
    else
      s += negative ? " - " : " + ";
    first = false;

    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      s += to_string(mag);
    else if (mag == 1)
      s += mono;
    else
      s += to_string(mag) + "*" + mono;
  }
  return s;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t num_vars) : text_(text), num_vars_(num_vars) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg + " at position " + std::to_string(at), at);
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (peek() == '*') {
      ++pos_;
      acc = acc * factor();
    }
    if (peek() == '/') fail("division is only supported between integer literals");
    return acc;
  }

  MultiPoly factor() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '+') {
      ++pos_;
      return factor();
    }
    MultiPoly base = primary();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '-') fail("negative exponent");
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      if (pos_ - start > 4) fail_at("exponent too large", start);
      base = pow(base, static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  MultiPoly primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return variable();
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view scan_decimal() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits();
      else
        pos_ = save;
    }
    return text_.substr(start, pos_ - start);
  }

  MultiPoly number() {
    std::size_t start = pos_;
    std::string lit(scan_decimal());
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_ws();
      std::size_t den_start = pos_;
      std::string den(scan_decimal());
      if (den.empty()) fail("expected denominator");
      if (lit.find_first_not_of("0123456789") != std::string::npos ||
          den.find_first_not_of("0123456789") != std::string::npos)
        fail_at("division is only supported between integer literals", den_start);
      lit += "/" + den;
    }
    try {
      return MultiPoly::constant(num_vars_, parse_rational(lit));
    } catch (const ParseError& e) {
      fail_at(e.what(), start);
    }
  }

  MultiPoly variable() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name.size() < 2 || name[0] != 'x' ||
        name.substr(1).find_first_not_of("0123456789") != std::string_view::npos ||
        name.size() > 8)
      fail_at("unknown variable '" + std::string(name) + "'", start);
    std::size_t j = std::stoul(std::string(name.substr(1)));
    if (j < 1 || j > num_vars_) fail_at("unknown variable '" + std::string(name) + "'", start);
    return MultiPoly::variable(num_vars_, j);
  }

  std::string_view text_;
  std::size_t num_vars_;
  std::size_t pos_ = 0;
};

std::size_t infer_num_vars(std::string_view text) {
  std::size_t best = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 'x') continue;
    if (i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_'))
      continue;
    std::size_t j = i + 1, v = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) && j - i < 8)
      v = v * 10 + static_cast<std::size_t>(text[j++] - '0');
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

MultiPoly parse_poly(std::string_view text, std::size_t num_vars) {
  if (num_vars == 0) num_vars = infer_num_vars(text);
  return PolyParser(text, num_vars).parse();
}

}  // namespace sigcert
