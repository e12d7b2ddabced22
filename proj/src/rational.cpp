#include "lopact/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace lopact {

std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal_string(const Rational& q, int digits) {
  if (digits < 1) digits = 1;
  if (q == 0) return "0";
  Rational a = abs(q);
  // Find e with 10^e <= a < 10^(e+1).
  long e = static_cast<long>(a.get_num().get_str().size()) -
           static_cast<long>(a.get_den().get_str().size());
  auto ten_pow = [](long k) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    return k < 0 ? Rational(Integer(1), p) : Rational(p);
  };
  while (a < ten_pow(e)) --e;
  while (a >= ten_pow(e + 1)) ++e;
  Integer scaled = round_of(a * ten_pow(digits - 1 - e));
  Integer limit;
  mpz_ui_pow_ui(limit.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  if (scaled >= limit) {  // rounding carried into a new digit
    scaled /= 10;
    ++e;
  }
  std::string ds = scaled.get_str();
  std::string out = q < 0 ? "-" : "";
  out += ds.substr(0, 1);
  if (ds.size() > 1) {
    std::string tail = ds.substr(1);
    while (!tail.empty() && tail.back() == '0') tail.pop_back();
    if (!tail.empty()) out += "." + tail;
  }
  out += "e";
  out += e < 0 ? "-" : "+";
  std::string es = std::to_string(e < 0 ? -e : e);
  if (es.size() < 2) es = "0" + es;
  return out + es;
}

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') i = 1;
  if (i == s.size()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto epos = text.find_first_of("eE"); epos != std::string_view::npos) {
    mantissa = text.substr(0, epos);
    Integer ex = parse_integer(text.substr(epos + 1), text);
    if (!ex.fits_slong_p()) throw std::invalid_argument("exponent out of range");
    exponent = ex.get_si();
  }
  std::string digits;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view frac_part = mantissa.substr(dot + 1);
    digits = std::string(mantissa.substr(0, dot)) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("malformed number");
  } else {
    digits = std::string(mantissa);
  }
  Rational q(parse_integer(digits, text));
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent < 0) q /= p; else q *= p;
  q.canonicalize();
  return q;
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer round_of(const Rational& q) { return floor_of(q + Rational(1, 2)); }

Rational frac(const Rational& q) { return q - Rational(floor_of(q)); }

Rational distance_to_integer(const Rational& q) {
  Rational f = frac(q);
  Rational g = Rational(1) - f;
  return f < g ? f : g;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1u) out *= b;
    b *= b;
    exponent >>= 1u;
  }
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace lopact
