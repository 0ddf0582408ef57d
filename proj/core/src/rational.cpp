#include "cfsem/rational.hpp"

#include <cctype>
#include <cstddef>

#include "cfsem/errors.hpp"

namespace cfsem {

namespace {

Integer pow10(unsigned n) {
  Integer r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
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
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed fraction '" + std::string(text) + "'", 0);
    Integer d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0);
    value = Rational(Integer(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty())
      throw ParseError("malformed number '" + std::string(text) + "'", 0);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
      throw ParseError("malformed number '" + std::string(text) + "'", 0);
    Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
    Integer f = frac.empty() ? Integer(0) : Integer(std::string(frac));
    Integer scale = pow10(static_cast<unsigned>(frac.size()));
    value = Rational(w * scale + f, scale);
  } else {
    if (!all_digits(s)) throw ParseError("malformed number '" + std::string(text) + "'", 0);
    value = Rational(Integer(std::string(s)));
  }
  return negative ? -value : value;
}

std::string format_fraction(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational round_half_even(const Rational& r, unsigned digits) {
  Integer scale = pow10(digits);
  Rational scaled = r * scale;
  Integer num = numerator(scaled);
  Integer den = denominator(scaled);  // > 0
  Integer q = num / den;              // truncates toward zero
  Integer rem = num - q * den;
  if (rem < 0) {
    q -= 1;
    rem += den;
  }
  // q = floor, rem in [0, den)
  Integer twice = rem * 2;
  if (twice > den || (twice == den && (q % 2 != 0)))
    q += 1;
  return Rational(q, scale);
}

std::string format_decimal(const Rational& r, unsigned digits) {
  Rational rounded = round_half_even(r, digits);
  Integer scale = pow10(digits);
  Integer units = numerator(rounded) * (scale / denominator(rounded));
  bool negative = units < 0;
  if (negative) units = -units;
  Integer whole = units / scale;
  Integer frac = units % scale;
  std::string out = negative ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += "." + std::string(digits - f.size(), '0') + f;
  }
  return out;
}

}  // namespace cfsem
