#include "mhv/rational.hpp"

#include <stdexcept>

namespace mhv {

std::string formatRational(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rational parseRational(std::string_view text) {
  auto isInteger = [](std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!isInteger(num) || !isInteger(den) || den.front() == '-') {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  }
  Rational result{mpz_class(std::string(num)), mpz_class(std::string(den))};
  if (result.get_den() == 0) throw std::invalid_argument("zero denominator");
  result.canonicalize();
  return result;
}

Rational power(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

Rational inversePowerOfTwo(unsigned exponent) {
  mpz_class den = 1;
  den <<= exponent;
  return Rational(mpz_class(1), den);
}

}  // namespace mhv
