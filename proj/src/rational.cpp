#include "intertwine/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace intertwine {

std::string to_string(const Rational& r) { return r.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  std::string owned(s.front() == '+' ? s.substr(1) : s);
  return Integer(owned, 10);
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    exponent = parse_integer(exp_part).get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed decimal");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed decimal");
    digits = std::string(s);
  }
  Rational value(Integer(digits, 10));
  Integer ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    value *= ten_power;
  } else {
    value /= ten_power;
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      Integer num = parse_integer(text.substr(0, slash));
      std::string_view den_text = text.substr(slash + 1);
      if (!den_text.empty() && den_text.front() == '-') throw std::invalid_argument("negative denominator");
      Integer den = parse_integer(den_text);
      if (den == 0) throw std::invalid_argument("zero denominator");
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    return parse_decimal(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("cannot parse rational '" + std::string(text) + "'");
  }
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double has no rational value");
  return Rational(value);
}

double to_double(const Rational& r) { return r.get_d(); }

Integer factorial(unsigned long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(std::labs(e)));
  if (e >= 0) return Rational(p);
  Rational r(1, 1);
  r /= p;
  return r;
}

int sign(const Rational& r) { return sgn(r); }

}  // namespace intertwine
