#include "test_support.hpp"

using namespace gsconvex;
using testsup::box1;
using testsup::one_point;
using testsup::plan_of;

namespace {

auto throws_code(Errc want) {
  return Catch::Matchers::Predicate<Error>(
      [want](const Error& e) { return e.code() == want; });
}

}  // namespace

TEST_CASE("epigraph check agrees with the function check on a certified case") {
  EquivalenceReport rep = epigraph_equivalence(parse("x1^2+1", 1), one_point("2*sigma", 1),
                                               box1(-3.0, 3.0), plan_of(64, 1.0));
  CHECK(rep.function_report.verdict == Verdict::certified_on_samples);
  CHECK(rep.set_report.verdict == Verdict::certified_on_samples);
  CHECK(rep.agree);
}

TEST_CASE("epigraph check agrees with the function check on a refuted case") {
  EquivalenceReport rep = epigraph_equivalence(parse("-x1^2", 1), one_point("0", 1),
                                               box1(-5.0, 5.0), plan_of(64, 1.0));
  CHECK(rep.function_report.verdict == Verdict::refuted);
  CHECK(rep.set_report.verdict == Verdict::refuted);
  CHECK(rep.agree);
  // the zero-offset pair reproduces the function-level margin exactly
  CHECK(rep.set_report.worst_margin == rep.function_report.worst_margin);
  CHECK(rep.set_report.witness.b1 == rep.function_report.witness.b1);
  CHECK(rep.set_report.witness.sigma == rep.function_report.witness.sigma);
}

TEST_CASE("larger beta offsets cannot hide a violation") {
  // offsets add sigma^s*off1 + (1-sigma)^s*off2 >= 0 to the margin, and the
  // check keeps the minimum over all offset pairs including (0, 0)
  SetSpec spec{{parse("-x1^2", 1)}, one_point("0", 1), 1.0};
  CheckReport base = set_check(spec, box1(-5.0, 5.0), plan_of(64, 1.0), {0.0});
  CheckReport wide = set_check(spec, box1(-5.0, 5.0), plan_of(64, 1.0), {0.0, 1.0, 7.5});
  CHECK(base.verdict == Verdict::refuted);
  CHECK(wide.verdict == Verdict::refuted);
  CHECK(wide.worst_margin == base.worst_margin);
}

TEST_CASE("set check validates spec and offsets") {
  SetSpec spec{{parse("x1^2", 1)}, one_point("sigma", 1), 1.0};
  CHECK_THROWS_MATCHES(set_check(SetSpec{{}, one_point("0", 1), 1.0}, box1(0, 1),
                                 plan_of(8, 1.0), {0.0}),
                       Error, throws_code(Errc::empty_list));
  CHECK_THROWS_MATCHES(set_check(spec, box1(0, 1), plan_of(8, 1.0), {}), Error,
                       throws_code(Errc::empty_list));
  CHECK_THROWS_MATCHES(set_check(spec, box1(0, 1), plan_of(8, 1.0), {0.0, -1.0}), Error,
                       throws_code(Errc::invalid_plan));
  // spec says s=1 but the plan runs s=0.5
  CHECK_THROWS_MATCHES(set_check(spec, box1(0, 1), plan_of(8, 0.5), {0.0}), Error,
                       throws_code(Errc::mismatched_s));
}

TEST_CASE("intersection of two certified epigraphs is certified") {
  SetSpec a{{parse("x1^2", 1)}, one_point("sigma*(1+x1^2)", 1), 1.0};
  SetSpec b{{parse("(x1-1)^2", 1)}, one_point("sigma*(1+x1^2)", 1), 1.0};
  CheckReport rep = intersect_check({a, b}, box1(-3.0, 3.0), plan_of(64, 1.0));
  CHECK(rep.definition == "set-intersection");
  CHECK(rep.verdict == Verdict::certified_on_samples);
}

TEST_CASE("intersection matches a single spec carrying both components") {
  ModifierMap shared = one_point("sigma*(1+x1^2)", 1);
  SetSpec a{{parse("x1^2", 1)}, shared, 1.0};
  SetSpec b{{parse("(x1-1)^2", 1)}, shared, 1.0};
  SetSpec both{{parse("x1^2", 1), parse("(x1-1)^2", 1)}, shared, 1.0};
  CheckReport merged = intersect_check({a, b}, box1(-3.0, 3.0), plan_of(64, 1.0));
  CheckReport direct = set_check(both, box1(-3.0, 3.0), plan_of(64, 1.0), {0.0, 1.0});
  CHECK(merged.verdict == direct.verdict);
  CHECK(merged.worst_margin == direct.worst_margin);
}

TEST_CASE("intersection rejects incompatible specs") {
  SetSpec a{{parse("x1^2", 1)}, one_point("sigma", 1), 1.0};
  SetSpec other_map{{parse("x1^2", 1)}, one_point("2*sigma", 1), 1.0};
  SetSpec other_s{{parse("x1^2", 1)}, one_point("sigma", 1), 0.5};
  CHECK_THROWS_MATCHES(intersect_check({}, box1(0, 1), plan_of(8, 1.0)), Error,
                       throws_code(Errc::empty_list));
  CHECK_THROWS_MATCHES(intersect_check({a, other_map}, box1(0, 1), plan_of(8, 1.0)), Error,
                       throws_code(Errc::mixed_modifier_maps));
  CHECK_THROWS_MATCHES(intersect_check({a, other_s}, box1(0, 1), plan_of(8, 1.0)), Error,
                       throws_code(Errc::mismatched_s));
}
