#include <catch2/catch_amalgamated.hpp>

#include "bphf/params.hpp"
#include "oracles.hpp"

using namespace bphf;

TEST_CASE("success probabilities, exact") {
  CHECK(p_perfect(1) == Rat(1));
  CHECK(p_perfect(3) == Rat(2, 9));
  CHECK(p_perfect(4) == Rat(3, 32));

  CHECK(p_injective(2, 2) == p_perfect(2));
  CHECK(p_injective(2, 4) == Rat(3, 4));
  CHECK(p_injective(1, 5) == Rat(1));
  CHECK_THROWS_AS(p_injective(3, 2), parameter_error);

  CHECK(p_pattern(2, 2) == Rat(1, 2));
  CHECK(p_pattern(3, 2) == Rat(3, 8));
  CHECK(p_pattern(4, 2) == Rat(6, 16));
}

TEST_CASE("p_pattern equals enumeration for k,l <= 4") {
  for (int k = 1; k <= 4; ++k)
    for (int l = 1; l <= 4; ++l)
      CHECK(p_pattern(k, l) == oracle::split_probability(k, l));
}

TEST_CASE("p_pattern times l^k is a positive function count for k,l <= 8") {
  for (int k = 1; k <= 8; ++k)
    for (int l = 1; l <= 8; ++l) {
      Rat scaled = p_pattern(k, l) * Rat(pow_int(Int(l), static_cast<unsigned>(k)));
      CHECK(denominator(scaled) == 1);
      CHECK(numerator(scaled) > 0);
    }
}

TEST_CASE("family sizes with upward rounding") {
  CHECK(size_probabilistic(10, 3, Rat(2, 9), Rat(2)) == 285);
  CHECK(size_derandomized(10, 3, Rat(2, 9), Rat(2)) == 570);
  // n = 1: k ln n = 0
  CHECK(size_probabilistic(1, 1, Rat(1), Rat(2)) == 8);
  CHECK(size_derandomized(1, 1, Rat(1), Rat(2)) == 16);
}

TEST_CASE("size scaling in (delta-1)") {
  // doubling delta-1 divides M by 4, up to ceiling effects
  Int m2 = size_probabilistic(10, 3, Rat(2, 9), Rat(2));       // delta-1 = 1
  Int m15 = size_probabilistic(10, 3, Rat(2, 9), Rat(3, 2));   // delta-1 = 1/2
  CHECK(m15 <= 4 * m2);
  CHECK(m15 > 4 * m2 - 4);
  Int d2 = size_derandomized(10, 3, Rat(2, 9), Rat(2));
  CHECK(d2 <= 2 * m2);
  CHECK(d2 > 2 * m2 - 2);
}

TEST_CASE("sizes are antitone in p") {
  Rat delta(3, 2);
  Int prev;
  bool first = true;
  for (int num = 1; num <= 10; ++num) {
    Int m = size_probabilistic(20, 3, Rat(num, 10), delta);
    if (!first) CHECK(m <= prev);
    prev = m;
    first = false;
  }
}

TEST_CASE("robbins brackets n! for n <= 20") {
  for (int n = 1; n <= 20; ++n) {
    auto [lo, hi] = robbins_bounds(n);
    Rat f(factorial(static_cast<unsigned>(n)));
    CHECK(lo < f);
    CHECK(f < hi);
  }
}

TEST_CASE("delta domain is enforced") {
  CHECK_THROWS_AS(validate_delta(Rat(1)), parameter_error);
  CHECK_THROWS_AS(validate_delta(Rat(5, 2)), parameter_error);
  CHECK_NOTHROW(validate_delta(Rat(2)));
  CHECK_NOTHROW(validate_delta(Rat(101, 100)));
}

TEST_CASE("construction params accessors") {
  ConstructionParams p{10, 3, 3, Rat(3, 2), Rat(2, 9), Int(100)};
  p.validate();
  CHECK(p.lambda() == Rat(1, 8));
  CHECK(p.epsilon_from_lambda() == Catch::Approx(std::expm1(0.125)));
}
