#include "ceei/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace ceei {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  BigInt n(std::string(num), 10);
  BigInt d(std::string(den), 10);
  if (d == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  return Rational(value);
}

}  // namespace ceei
