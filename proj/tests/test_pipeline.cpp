#include <catch2/catch_amalgamated.hpp>

#include "bphf/pipeline.hpp"

using namespace bphf;

TEST_CASE("delta roots are exact rational under-approximations") {
  Rat d(2);
  Rat r3 = root_below(d, 3);
  CHECK(r3 > 1);
  CHECK(pow_rat(r3, 3) <= d);
  CHECK(rat_to_double(r3) == Catch::Approx(std::cbrt(2.0)).epsilon(1e-12));
  Rat r6 = root_below(d, 6);
  CHECK(pow_rat(r6, 6) <= d);
  CHECK(root_below(Rat(1), 5) == Rat(1));
}

TEST_CASE("pipeline plan: k = 2 degenerates to a single part") {
  auto plan = plan_pipeline(8, 2, Rat(2));
  CHECK(plan.l == 1);
  CHECK(plan.splitter_size == 1);
  CHECK(plan.kj == std::vector<int>{2});
  CHECK(plan.predicted_delta <= Rat(2));
}

TEST_CASE("pipeline plan: k = 3 and k = 4 shapes") {
  auto p3 = plan_pipeline(30, 3, Rat(2));
  CHECK(p3.l == 2);
  CHECK(p3.kj == std::vector<int>{2, 1});
  CHECK(pow_rat(p3.delta_prime, 3) <= Rat(2));
  CHECK(pow_rat(p3.delta_prime2, 6) <= Rat(2));
  CHECK(p3.delta_prime2 - 1 >= (Rat(2) - 1) / 12);
  CHECK(p3.predicted_size ==
        Int(1) * p3.splitter_size * p3.part_sizes_m[0] * p3.part_sizes_m[1]);

  auto p4 = plan_pipeline(40, 4, Rat(2));
  CHECK(p4.l == 2);
  CHECK(p4.kj == std::vector<int>{2, 2});
}

TEST_CASE("predicted size is the product of the component sizes") {
  auto plan = plan_pipeline(12, 2, Rat(3, 2));
  Int expect = (plan.code.t == 1 ? Int(1) : Int(plan.code.q)) * plan.splitter_size;
  for (const auto& m : plan.part_sizes_m) expect *= m;
  CHECK(predicted_size(plan) == expect);
}

TEST_CASE("eps-bias provider plans honestly report infeasible sizes") {
  auto plan = plan_pipeline(30, 3, Rat(2), SplitterProvider::eps_bias);
  CHECK(plan.predicted_size > 1'000'000);
  PipelineOptions opts;
  CHECK_THROWS_AS(build_pipeline(plan, opts), budget_error);
  try {
    build_pipeline(plan, opts);
  } catch (const budget_error& e) {
    CHECK(std::string(e.what()).find("derand-greedy") != std::string::npos);
  }
}

TEST_CASE("degenerate pipeline end-to-end: n=8, k=2") {
  auto plan = plan_pipeline(8, 2, Rat(2));
  auto res = build_pipeline(plan);
  REQUIRE(res.exact_verified);
  CHECK(Int(res.certified.family.size()) == plan.predicted_size);
  CHECK(res.certified.certificate.delta <= Rat(2));
  CHECK(certificate_holds(res.certified.certificate, *res.report));
  CHECK(res.certified.family.range_size() == 2);
  CHECK(res.certified.family.domain_size() == 8);
}

TEST_CASE("degenerate pipeline at delta = 1.5") {
  auto plan = plan_pipeline(12, 2, Rat(3, 2));
  auto res = build_pipeline(plan);
  REQUIRE(res.exact_verified);
  CHECK(certificate_holds(res.certified.certificate, *res.report));
  CHECK(res.certified.certificate.delta <= Rat(3, 2));
}

TEST_CASE("over-budget verification yields an analytic certificate") {
  auto plan = plan_pipeline(8, 2, Rat(2));
  PipelineOptions opts;
  opts.verify.subset_budget = 1;  // C(8,2) = 28 exceeds this
  auto res = build_pipeline(plan, opts);
  CHECK(!res.exact_verified);
  CHECK(!res.report.has_value());
  CHECK(res.certified.certificate.T == plan.predicted_T);
  // the certificate still holds; confirm with a default-budget verification
  auto rep = verify_balance(res.certified.family, res.certified.certificate.pattern);
  CHECK(certificate_holds(res.certified.certificate, rep));
}

TEST_CASE("pipeline parameter validation") {
  CHECK_THROWS_AS(plan_pipeline(5, 1, Rat(2)), parameter_error);
  CHECK_THROWS_AS(plan_pipeline(2, 3, Rat(2)), parameter_error);
  CHECK_THROWS_AS(plan_pipeline(8, 2, Rat(1)), parameter_error);
}
