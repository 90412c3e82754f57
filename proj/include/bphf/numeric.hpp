#pragma once

// Directed (conservative) evaluation of the transcendental quantities the
// sizing formulas need: ln n, exp, sqrt(2*pi), rational roots of delta.
// Strategy: evaluate in ~200-bit software floats, convert the binary float to
// an exact rational, then pad by a relative margin far above the evaluation
// error. Family sizes get rounded up; bracketing bounds get rounded outward.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bphf/errors.hpp"
#include "bphf/rational.hpp"

namespace bphf {

using HighFloat = boost::multiprecision::cpp_bin_float_50;  // ~168 bits

namespace detail {

// cpp_bin_float -> exact rational (binary floats are dyadic).
inline Rat to_rat_exact(const HighFloat& v) { return v.template convert_to<Rat>(); }

// Relative padding margin; the underlying functions are correct to a few ulps
// (~2^-165), so 2^-120 dominates any evaluation error at this precision.
inline const Rat& pad_margin() {
  static const Rat m = Rat(1, pow_int(Int(2), 120));
  return m;
}

inline Rat pad_up(const HighFloat& v) {
  Rat r = to_rat_exact(v);
  return r + abs(r) * pad_margin();
}

inline Rat pad_down(const HighFloat& v) {
  Rat r = to_rat_exact(v);
  return r - abs(r) * pad_margin();
}

inline HighFloat to_high(const Rat& r) { return r.template convert_to<HighFloat>(); }

}  // namespace detail

// Certified bounds lo <= ln(n) <= hi.
inline std::pair<Rat, Rat> ln_bounds(const Int& n) {
  if (n < 1) throw parameter_error("ln_bounds requires n >= 1");
  HighFloat v = log(HighFloat(n));
  return {detail::pad_down(v), detail::pad_up(v)};
}

// Certified bounds for exp(x), x rational.
inline std::pair<Rat, Rat> exp_bounds(const Rat& x) {
  HighFloat v = exp(detail::to_high(x));
  return {detail::pad_down(v), detail::pad_up(v)};
}

// Certified bounds for sqrt(2*pi).
inline std::pair<Rat, Rat> sqrt_two_pi_bounds() {
  HighFloat v = sqrt(2 * boost::math::constants::pi<HighFloat>());
  return {detail::pad_down(v), detail::pad_up(v)};
}

// Certified bounds for n^(1/2), n integer >= 0.
inline std::pair<Rat, Rat> sqrt_bounds(const Int& n) {
  HighFloat v = sqrt(HighFloat(n));
  return {detail::pad_down(v), detail::pad_up(v)};
}

// Rational r with 1 <= r <= x^(1/m), verified exactly (r^m <= x). Used to
// split a delta budget into factors whose exact product provably stays <= x.
inline Rat root_below(const Rat& x, unsigned m) {
  if (x < 1) throw parameter_error("root_below requires x >= 1");
  if (m == 0) throw parameter_error("root_below requires m >= 1");
  HighFloat v = exp(log(detail::to_high(x)) / m);
  Rat r = detail::pad_down(v);
  if (r < 1) return Rat(1);
  // The pad is vastly larger than the evaluation error, but the exactness of
  // the certificate rests on this check, so enforce it.
  while (pow_rat(r, m) > x) r -= r * detail::pad_margin();
  return r;
}

}  // namespace bphf
