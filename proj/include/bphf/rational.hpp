#pragma once

// Exact unbounded-precision integers and rationals. Certificates are compared
// with exact arithmetic only; doubles appear solely in reports and display.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>

#include "bphf/errors.hpp"

namespace bphf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// Smallest integer >= r.
inline Int ceil_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);  // d > 0 canonical
  Int q = n / d;
  if (n % d != 0 && n > 0) ++q;
  return q;
}

// Largest integer <= r.
inline Int floor_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);
  Int q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline Rat pow_rat(const Rat& base, unsigned e) {
  Rat acc(1);
  Rat b = base;
  unsigned n = e;
  while (n != 0) {
    if (n & 1u) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

inline Int pow_int(Int base, unsigned e) {
  Int acc(1);
  while (e != 0) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// Exact rational upper bound on sqrt(r), r >= 0: isqrt-based, tight to one ulp
// of the integer square root of num*den.
inline Rat sqrt_rat_upper(const Rat& r) {
  if (r < 0) throw parameter_error("sqrt of negative rational");
  Int n = numerator(r), d = denominator(r);
  Int nd = n * d;
  Int s = boost::multiprecision::sqrt(nd);  // floor sqrt
  if (s * s < nd) ++s;                      // now s >= sqrt(n*d)
  return Rat(s, d);
}

inline double rat_to_double(const Rat& r) { return r.template convert_to<double>(); }

// Serializes as "<num>/<den>" with the denominator always present.
inline std::string rat_to_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "7", "-3/4" and decimal strings like "1.5" (parsed exactly: 3/2).
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw parameter_error("empty rational literal");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      Int n(text.substr(0, slash));
      Int d(text.substr(slash + 1));
      if (d == 0) throw parameter_error("zero denominator in '" + text + "'");
      return Rat(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rat(Int(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || dot == 0) throw parameter_error("malformed decimal '" + text + "'");
    for (std::size_t i = (digits[0] == '-' || digits[0] == '+') ? 1 : 0; i < digits.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(digits[i])))
        throw parameter_error("malformed decimal '" + text + "'");
    return Rat(Int(digits), pow_int(Int(10), static_cast<unsigned>(frac_len)));
  } catch (const std::exception& e) {
    throw parameter_error("cannot parse rational '" + text + "': " + e.what());
  }
}

// Decimal rendering with the given number of significant digits (display only).
inline std::string rat_to_decimal(const Rat& r, int sig_digits = 6) {
  if (r == 0) return "0";
  std::ostringstream os;
  double v = rat_to_double(r);
  os.precision(sig_digits);
  os << v;
  return os.str();
}

}  // namespace bphf
