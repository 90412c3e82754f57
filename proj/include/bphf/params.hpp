#pragma once

// Exact success probabilities, family-size formulas and Robbins' factorial
// brackets. Sizes are evaluated with upward-directed rounding so a returned M
// never undershoots the analytic value; Robbins bounds round outward.

#include <cmath>

#include "bphf/combinatorics.hpp"
#include "bphf/errors.hpp"
#include "bphf/family.hpp"
#include "bphf/numeric.hpp"
#include "bphf/rational.hpp"

namespace bphf {

inline void validate_delta(const Rat& delta) {
  if (delta <= 1 || delta > 2)
    throw parameter_error("delta must lie in (1, 2], got " + rat_to_string(delta));
}

// k!/k^k: probability a uniform function [k]->[k] is a bijection on k fixed
// elements.
inline Rat p_perfect(int k) {
  if (k < 1) throw parameter_error("p_perfect requires k >= 1");
  return Rat(factorial(static_cast<unsigned>(k)), pow_int(Int(k), static_cast<unsigned>(k)));
}

// l!/((l-k)! l^k): probability of injectivity on k fixed elements, k <= l.
inline Rat p_injective(int k, int l) {
  if (k < 1 || k > l) throw parameter_error("p_injective requires 1 <= k <= l");
  return Rat(falling_factorial(static_cast<unsigned>(l), static_cast<unsigned>(k)),
             pow_int(Int(l), static_cast<unsigned>(k)));
}

// Probability a uniform function achieves the required split on k fixed
// elements: injectivity for k <= l, exact part sizes otherwise.
inline Rat p_pattern(int k, int l) {
  if (k < 1 || l < 1) throw parameter_error("p_pattern requires k >= 1 and l >= 1");
  if (k <= l) return p_injective(k, l);
  Int ways = factorial(static_cast<unsigned>(k));
  for (int s : part_sizes(k, l)) ways /= factorial(static_cast<unsigned>(s));
  return Rat(ways, pow_int(Int(l), static_cast<unsigned>(k)));
}

namespace detail {

inline Int size_with_constant(int constant, int n, int k, const Rat& p, const Rat& delta) {
  if (n < 1 || k < 1) throw parameter_error("size formula requires n >= 1 and k >= 1");
  if (p <= 0 || p > 1) throw parameter_error("success probability must lie in (0, 1]");
  validate_delta(delta);
  Rat ln_up = ln_bounds(Int(n)).second;
  Rat numerator = Rat(constant) * (Rat(k) * ln_up + 1);
  Rat m = numerator / (p * pow_rat(delta - 1, 2));
  Int result = ceil_rat(m);
  return result < 1 ? Int(1) : result;
}

}  // namespace detail

// ceil(8 (k ln n + 1) / (p (delta-1)^2)), the Monte Carlo family size.
inline Int size_probabilistic(int n, int k, const Rat& p, const Rat& delta) {
  return detail::size_with_constant(8, n, k, p, delta);
}

// Same with constant 16, the greedy derandomization size.
inline Int size_derandomized(int n, int k, const Rat& p, const Rat& delta) {
  return detail::size_with_constant(16, n, k, p, delta);
}

// Certified rationals lower < n! < upper:
//   sqrt(2 pi) n^(n+1/2) e^(-n + 1/(12n+1))  <  n!  <  same with 1/(12n).
inline std::pair<Rat, Rat> robbins_bounds(int n) {
  if (n < 1) throw parameter_error("robbins_bounds requires n >= 1");
  Int npow = pow_int(Int(n), static_cast<unsigned>(n));  // n^n, exact
  auto s2pi = sqrt_two_pi_bounds();
  auto sqn = sqrt_bounds(Int(n));
  auto e_lo = exp_bounds(Rat(1, 12 * Int(n) + 1) - n);
  auto e_hi = exp_bounds(Rat(1, 12 * Int(n)) - n);
  Rat lower = s2pi.first * Rat(npow) * sqn.first * e_lo.first;
  Rat upper = s2pi.second * Rat(npow) * sqn.second * e_hi.second;
  return {lower, upper};
}

// Bundle of the quantities the builders share. lambda = (delta-1)/4; the
// derived eps = e^lambda - 1 is only ever needed as a float.
struct ConstructionParams {
  int n = 0;
  int k = 0;
  int l = 0;
  Rat delta;
  Rat p;
  Int M;

  Rat lambda() const { return (delta - 1) / 4; }
  double epsilon_from_lambda() const { return std::expm1(rat_to_double(lambda())); }

  void validate() const {
    if (n < 1 || k < 1 || k > n) throw parameter_error("require 1 <= k <= n");
    validate_delta(delta);
    if (p <= 0 || p > 1) throw parameter_error("success probability must lie in (0, 1]");
    if (M < 1) throw parameter_error("family size must be >= 1");
  }
};

}  // namespace bphf
