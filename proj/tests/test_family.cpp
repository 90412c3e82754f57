#include <catch2/catch_amalgamated.hpp>

#include "bphf/family.hpp"
#include "bphf/prng.hpp"
#include "oracles.hpp"

using namespace bphf;

TEST_CASE("part_sizes") {
  CHECK(part_sizes(5, 3) == std::vector<int>{2, 2, 1});
  CHECK(part_sizes(4, 2) == std::vector<int>{2, 2});
  CHECK(part_sizes(7, 2) == std::vector<int>{4, 3});
  CHECK(part_sizes(2, 4) == std::vector<int>{1, 1, 0, 0});
  CHECK_THROWS_AS(part_sizes(0, 2), parameter_error);
}

TEST_CASE("family invariants are enforced") {
  CHECK_THROWS_AS(FunctionFamily(2, 2, {0, 2, 1, 0}), parameter_error);  // value out of range
  CHECK_THROWS_AS(FunctionFamily(2, 2, {0, 1, 0}), parameter_error);     // ragged storage
  CHECK_THROWS_AS(FunctionFamily(2, 2, {}), parameter_error);            // M = 0
  CHECK_THROWS_AS(FunctionFamily::from_functions(3, 2, {{0, 1}}), parameter_error);
}

TEST_CASE("count_for_subset on tiny exhaustive cases") {
  auto all22 = oracle::all_functions(2, 2);
  std::vector<int> s01{0, 1};
  CHECK(count_for_subset(all22, s01, SplitPattern::make(2, 2)) == 2);  // the two bijections

  FunctionFamily constant = FunctionFamily::constant_zero(3, 3);
  std::vector<int> s012{0, 1, 2};
  CHECK(count_for_subset(constant, s012, SplitPattern::make(3, 3)) == 0);

  auto all32 = oracle::all_functions(3, 2);
  auto pat = SplitPattern::make(3, 2);  // parts (2,1)
  CHECK(count_for_subset(all32, s012, pat) == 3);
  CHECK(oracle::pattern_count(all32, s012, pat) == 3);
}

TEST_CASE("count_for_subset validates its inputs") {
  auto fam = oracle::all_functions(3, 2);
  std::vector<int> s{0, 1};
  CHECK_THROWS_AS(count_for_subset(fam, s, SplitPattern::make(3, 2)), parameter_error);
  std::vector<int> dup{1, 1, 2};
  CHECK_THROWS_AS(count_for_subset(fam, dup, SplitPattern::make(3, 2)), parameter_error);
  std::vector<int> oob{0, 1, 7};
  CHECK_THROWS_AS(count_for_subset(fam, oob, SplitPattern::make(3, 2)), parameter_error);
  CHECK_THROWS_AS(count_for_subset(fam, s, SplitPattern::make(2, 3)), parameter_error);
}

TEST_CASE("count_for_subset equals the naive recheck on random families") {
  SeededRng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + static_cast<int>(rng.next_below(4));  // 3..6
    int l = 2 + static_cast<int>(rng.next_below(3));  // 2..4
    int k = 2 + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(std::min(n, 5) - 1)));
    if (k > n) k = n;
    std::uint64_t m = 1 + rng.next_below(20);
    std::vector<color_t> flat(m * static_cast<std::uint64_t>(n));
    for (auto& v : flat) v = rng.next_below(static_cast<std::uint32_t>(l));
    FunctionFamily fam(n, l, std::move(flat));
    auto pattern = SplitPattern::make(k, l);
    for_each_subset(n, k, [&](const std::vector<int>& s) {
      CHECK(fam.count_on_subset(s, pattern) == oracle::pattern_count(fam, s, pattern));
    });
  }
}

TEST_CASE("verify_balance on the family of all functions") {
  // all k^n functions with n=4, k=2: every S has inj(S) = 2 * 2^2 = 8
  auto fam = oracle::all_functions(4, 2);
  auto rep = verify_balance(fam, SplitPattern::make(2, 2));
  CHECK(rep.min_count == 8);
  CHECK(rep.max_count == 8);
  CHECK(rep.best_delta() == 1.0);
}

TEST_CASE("exhaustive-family identity for n <= 5, k <= 3") {
  for (int k = 1; k <= 3; ++k)
    for (int n = k; n <= 5; ++n) {
      auto fam = oracle::all_functions(n, k);
      auto rep = verify_balance(fam, SplitPattern::make(k, k));
      Int expect = factorial(static_cast<unsigned>(k)) *
                   pow_int(Int(k), static_cast<unsigned>(n - k));
      CHECK(rep.min_count == expect);
      CHECK(rep.max_count == expect);
    }
}

TEST_CASE("exhaustive-family identity with k < l") {
  // all l^n functions: inj(S) = l(l-1)...(l-k+1) l^(n-k) for every S
  for (int l = 2; l <= 3; ++l)
    for (int k = 1; k < l; ++k)
      for (int n = k; n <= 4; ++n) {
        auto fam = oracle::all_functions(n, l);
        auto rep = verify_balance(fam, SplitPattern::make(k, l));
        Int expect = falling_factorial(static_cast<unsigned>(l), static_cast<unsigned>(k)) *
                     pow_int(Int(l), static_cast<unsigned>(n - k));
        CHECK(rep.min_count == expect);
        CHECK(rep.max_count == expect);
      }
}

TEST_CASE("verify_balance on a single identity function") {
  auto fam = FunctionFamily::identity_injection(3, 3);
  auto rep = verify_balance(fam, SplitPattern::make(3, 3));
  CHECK(rep.min_count == 1);
  CHECK(rep.max_count == 1);
  CHECK(rep.best_delta() == 1.0);
}

TEST_CASE("zero-count subset means no finite certificate") {
  FunctionFamily fam(3, 2, {0, 0, 1});
  auto rep = verify_balance(fam, SplitPattern::make(2, 2));
  CHECK(rep.min_count == 0);
  CHECK(rep.max_count == 1);
  CHECK(rep.arg_min == std::vector<int>{0, 1});
  CHECK(std::isinf(rep.best_delta()));
  CHECK_THROWS_AS(certificate_from_report(rep, SplitPattern::make(2, 2)), parameter_error);
}

TEST_CASE("verify_balance budgets are hard errors") {
  auto fam = FunctionFamily::constant_zero(30, 2);
  VerifyOptions opts;
  opts.subset_budget = 100;
  CHECK_THROWS_AS(verify_balance(fam, SplitPattern::make(10, 2), opts), budget_error);

  auto small = oracle::all_functions(5, 2);
  VerifyOptions ops_capped;
  ops_capped.ops_budget = 3;  // C(5,2) * 32 estimated ops exceed this
  CHECK_THROWS_AS(verify_balance(small, SplitPattern::make(2, 2), ops_capped), budget_error);
}

TEST_CASE("verify_balance is independent of the thread count") {
  SeededRng rng(11);
  std::vector<color_t> flat(40 * 7);
  for (auto& v : flat) v = rng.next_below(3);
  FunctionFamily fam(7, 3, std::move(flat));
  auto pattern = SplitPattern::make(3, 3);
  VerifyOptions one, four;
  one.threads = 1;
  four.threads = 4;
  auto a = verify_balance(fam, pattern, one);
  auto b = verify_balance(fam, pattern, four);
  CHECK(a.min_count == b.min_count);
  CHECK(a.max_count == b.max_count);
  CHECK(a.arg_min == b.arg_min);
  CHECK(a.arg_max == b.arg_max);
}

TEST_CASE("certificate_from_report is exactly valid and tight") {
  SeededRng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + static_cast<int>(rng.next_below(3));
    int k = 2;
    std::vector<color_t> flat((10 + rng.next_below(15)) * static_cast<std::uint64_t>(n));
    for (auto& v : flat) v = rng.next_below(2);
    FunctionFamily fam(n, 2, std::move(flat));
    auto pattern = SplitPattern::make(k, 2);
    auto rep = verify_balance(fam, pattern);
    if (rep.min_count == 0) continue;
    auto cert = certificate_from_report(rep, pattern);
    CHECK(certificate_holds(cert, rep));
  }
}
