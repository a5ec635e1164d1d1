#include "bce/rational.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cctype>
#include <cstdio>

namespace bce {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_big(const std::string& digits, const std::string& original) {
  if (!all_digits(digits)) throw ParseError("malformed rational: '" + original + "'");
  // mpz string parsing treats a leading 0 as octal
  size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return BigInt(0);
  return BigInt(digits.substr(first));
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  // trim
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ParseError("empty rational");

  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    s.erase(s.begin());
  }
  if (s.empty()) throw ParseError("malformed rational: '" + text + "'");

  auto slash = s.find('/');
  auto dot = s.find('.');
  Rat value;
  if (slash != std::string::npos) {
    if (dot != std::string::npos) throw ParseError("malformed rational: '" + text + "'");
    BigInt num = parse_big(s.substr(0, slash), text);
    BigInt den = parse_big(s.substr(slash + 1), text);
    if (den == 0) throw ParseError("nonpositive denominator in '" + text + "'");
    value = Rat(num, den);  // mpq canonicalizes
  } else if (dot != std::string::npos) {
    std::string int_part = s.substr(0, dot);
    std::string frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw ParseError("malformed rational: '" + text + "'");
    if (int_part.empty()) int_part = "0";
    if (frac_part.empty()) frac_part = "0";
    BigInt scaled = parse_big(int_part + frac_part, text);
    BigInt den = 1;
    for (size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    value = Rat(scaled, den);
  } else {
    value = Rat(parse_big(s, text), BigInt(1));
  }
  return negative ? Rat(-value) : value;
}

std::string rat_to_string(const Rat& value) {
  // operands created through Rat(num, den) stay canonical; str() is then "p/q" or "p"
  return value.str();
}

std::string rat_to_decimal(const Rat& value, int significant_digits) {
  double approx = value.convert_to<double>();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, approx);
  return buf;
}

RatVector rat_vector(std::initializer_list<Rat> values) {
  RatVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const Rat& x : values) v(i++) = x;
  return v;
}

Rat primitive_scale(const RatVector& v) {
  BigInt den_lcm = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(v(i)));
  }
  BigInt num_gcd = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Rat scaled = v(i) * den_lcm;
    num_gcd = boost::multiprecision::gcd(num_gcd, numerator(scaled));
  }
  if (num_gcd == 0) return Rat(1);
  return Rat(den_lcm, num_gcd);
}

RatVector primitive_vector(const RatVector& v) {
  Rat scale = primitive_scale(v);
  RatVector out = v;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= scale;
  return out;
}

bool lex_less(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace bce
