#pragma once

// GF(2)[x] arithmetic on bit-packed polynomials (bit d = coefficient of x^d)
// and binary fields GF(2^m) for m <= 24. The irreducible modulus is found by
// exhaustive ascending search with Rabin's irreducibility test, so the field
// for a given m is canonical and reproducible.

#include <cstdint>

#include "bphf/errors.hpp"

namespace bphf {

inline int poly_degree(std::uint64_t p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

// Carry-less product; operand degrees must stay below 32.
inline std::uint64_t poly_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t f) {
  int df = poly_degree(f);
  for (int d = poly_degree(a); d >= df; d = poly_degree(a)) a ^= f << (d - df);
  return a;
}

inline std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
  return poly_mod(poly_mul(a, b), f);
}

inline std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return a;
}

// x^(2^e) mod f by repeated squaring.
inline std::uint64_t poly_x_pow_pow2(int e, std::uint64_t f) {
  std::uint64_t u = poly_mod(0b10, f);
  for (int i = 0; i < e; ++i) u = poly_mulmod(u, u, f);
  return u;
}

// Rabin: f of degree m is irreducible iff x^(2^m) == x (mod f) and for every
// prime divisor p of m, gcd(x^(2^(m/p)) - x mod f, f) = 1.
inline bool poly_irreducible(std::uint64_t f, int m) {
  if (poly_degree(f) != m || (f & 1) == 0) return false;
  if (poly_x_pow_pow2(m, f) != poly_mod(0b10, f)) return false;
  int rest = m;
  for (int p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    if (poly_gcd(poly_x_pow_pow2(m / p, f) ^ 0b10, f) != 1) return false;
  }
  if (rest > 1)  // remaining prime divisor (possibly m itself)
    if (poly_gcd(poly_x_pow_pow2(m / rest, f) ^ 0b10, f) != 1) return false;
  return true;
}

// Numerically smallest irreducible polynomial of degree m.
inline std::uint32_t find_irreducible_poly(int m) {
  if (m < 1 || m > 24) throw parameter_error("field degree must lie in [1, 24]");
  if (m == 1) return 0b10;  // x
  for (std::uint64_t f = (1ull << m) | 1; f < (2ull << m); f += 2)
    if (poly_irreducible(f, m)) return static_cast<std::uint32_t>(f);
  throw construction_error("no irreducible polynomial found");  // unreachable
}

struct GF2m {
  int m = 1;
  std::uint32_t poly = 0b10;

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(poly_mulmod(a, b, poly));
  }
};

}  // namespace bphf
