#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace bce {

using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

using RatVector = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "p/q", integer strings, and finite decimals ("0.25" -> 1/4).
// Decimals convert exactly, never through binary floating point.
Rat parse_rational(const std::string& text);

// Canonical rendering: "p/q" in lowest terms, "p" when the denominator is 1.
std::string rat_to_string(const Rat& value);

// Approximate decimal rendering, for display only.
std::string rat_to_decimal(const Rat& value, int significant_digits = 12);

RatVector rat_vector(std::initializer_list<Rat> values);

// Scales a nonzero rational vector to coprime integers, preserving direction.
RatVector primitive_vector(const RatVector& v);

// Scale factor used by primitive_vector; 1 for the zero vector.
Rat primitive_scale(const RatVector& v);

bool lex_less(const RatVector& a, const RatVector& b);

}  // namespace bce
