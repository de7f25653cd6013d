#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mhv {

/// Arbitrary-precision rational; every probability in the library is one.
using Rational = mpq_class;

/// Always "p/q" in lowest terms, including "0/1" and "1/1".
std::string formatRational(const Rational& value);

/// Accepts "p/q" or an integer. Throws std::invalid_argument.
Rational parseRational(std::string_view text);

Rational power(const Rational& base, unsigned exponent);

/// 2^-exponent
Rational inversePowerOfTwo(unsigned exponent);

}  // namespace mhv
