#include "sigcert/rational.hpp"

#include <cctype>
#include <cmath>

#include "sigcert/errors.hpp"

namespace sigcert {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p);
  return Rational(mpz_class(1), p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ParseError("empty number", 0);

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed rational '" + std::string(text) + "'", 0);
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash);
    value = Rational(n, d);
    value.canonicalize();
  } else {
    // decimal: digits [. digits] [e|E [+-] digits]
    std::string_view mant = s, expo;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mant = s.substr(0, e);
      expo = s.substr(e + 1);
    }
    std::string_view ip = mant, fp;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
      ip = mant.substr(0, dot);
      fp = mant.substr(dot + 1);
    }
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      throw ParseError("malformed number '" + std::string(text) + "'", 0);
    long e10 = 0;
    if (!expo.empty() || s.find_first_of("eE") != std::string_view::npos) {
      bool eneg = false;
      if (!expo.empty() && (expo.front() == '-' || expo.front() == '+')) {
        eneg = expo.front() == '-';
        expo.remove_prefix(1);
      }
      if (!all_digits(expo) || expo.size() > 6)
        throw ParseError("malformed exponent in '" + std::string(text) + "'", 0);
      e10 = std::stol(std::string(expo));
      if (eneg) e10 = -e10;
    }
    std::string digits = std::string(ip) + std::string(fp);
    mpz_class n(digits.empty() ? std::string("0") : digits, 10);
    value = Rational(n) * pow10(e10 - static_cast<long>(fp.size()));
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value cannot be made rational");
  return Rational(x);
}

std::vector<Rational> exact_rationals(std::span<const double> xs) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(exact_rational(x));
  return out;
}

}  // namespace sigcert
