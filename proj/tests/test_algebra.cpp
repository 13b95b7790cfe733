#include "test_support.hpp"

#include <cmath>

using namespace gsconvex;
using testsup::box1;
using testsup::one_point;
using testsup::plan_of;
using testsup::two_point;

namespace {

CertifiedInstance instance_f() {
  return certify_instance(parse("x1^2", 1), one_point("sigma*(1+x1^2)", 1), box1(-3.0, 3.0),
                          plan_of(64, 1.0));
}

CertifiedInstance instance_g() {
  return certify_instance(parse("(x1-1)^2", 1), one_point("2*sigma", 1), box1(-3.0, 3.0),
                          plan_of(64, 1.0));
}

auto throws_code(Errc want) {
  return Catch::Matchers::Predicate<Error>(
      [want](const Error& e) { return e.code() == want; });
}

}  // namespace

TEST_CASE("certify_instance packages a certified check") {
  CertifiedInstance a = instance_f();
  CHECK(a.report.verdict == Verdict::certified_on_samples);
  CHECK(a.s == 1.0);
  CHECK(eval(a.h, {2.0}) == 4.0);
}

TEST_CASE("certify_instance rejects non-certified operands") {
  CHECK_THROWS_MATCHES(certify_instance(parse("-x1^2", 1), one_point("0", 1), box1(-3.0, 3.0),
                                        plan_of(64, 1.0)),
                       Error, throws_code(Errc::operand_not_certified));
}

TEST_CASE("sum of certified instances re-certifies with the summed map") {
  CertifiedInstance a = instance_f(), b = instance_g();
  CombineResult sum = combine_sum(a, b);
  CHECK(sum.report.verdict == Verdict::certified_on_samples);
  REQUIRE(sum.notes.size() == 1);
  CHECK(sum.notes[0].find("sum of the operand maps") != std::string::npos);
  // combined trees are literal sums
  CHECK(eval(sum.h, {2.0}) == eval(a.h, {2.0}) + eval(b.h, {2.0}));
  CHECK(eval(sum.theta.expr, {2.0}, 0.25) ==
        eval(a.theta.expr, {2.0}, 0.25) + eval(b.theta.expr, {2.0}, 0.25));
}

TEST_CASE("scaling preserves certification and scales the worst margin") {
  CertifiedInstance a = instance_f();
  const double alpha = 2.5;
  CombineResult scaled = combine_scale(a, alpha);
  CHECK(scaled.report.verdict == Verdict::certified_on_samples);
  // margins are positively homogeneous in the function-map pair
  CHECK_THAT(scaled.report.worst_margin,
             Catch::Matchers::WithinRel(alpha * a.report.worst_margin, 1e-12) ||
                 Catch::Matchers::WithinAbs(alpha * a.report.worst_margin, 1e-15));
}

TEST_CASE("scale by one returns the operand trees untouched") {
  CertifiedInstance a = instance_f();
  CombineResult same = combine_scale(a, 1.0);
  CHECK(structural_equal(same.h, a.h));
  CHECK(structural_equal(same.theta.expr, a.theta.expr));
}

TEST_CASE("scale by zero collapses to the zero instance") {
  CombineResult zero = combine_scale(instance_f(), 0.0);
  CHECK(zero.report.verdict == Verdict::certified_on_samples);
  CHECK(eval(zero.h, {1.7}) == 0.0);
}

TEST_CASE("negative scale factor is rejected") {
  CertifiedInstance a = instance_f();
  CHECK_THROWS_MATCHES(combine_scale(a, -0.5), Error, throws_code(Errc::negative_alpha));
}

TEST_CASE("unit-weight weighted sum builds the same trees as combine_sum") {
  CertifiedInstance a = instance_f(), b = instance_g();
  CombineResult w = combine_weighted_sum({a, b}, {1.0, 1.0});
  CombineResult sum = combine_sum(a, b);
  CHECK(structural_equal(w.h, sum.h));
  CHECK(structural_equal(w.theta.expr, sum.theta.expr));
  CHECK(w.report.verdict == Verdict::certified_on_samples);
  CHECK(w.report.worst_margin == sum.report.worst_margin);
}

TEST_CASE("weighted sum validates its inputs") {
  CertifiedInstance a = instance_f(), b = instance_g();
  CHECK_THROWS_MATCHES(combine_weighted_sum({}, {}), Error, throws_code(Errc::empty_list));
  CHECK_THROWS_MATCHES(combine_weighted_sum({a, b}, {1.0}), Error, throws_code(Errc::empty_list));
  CHECK_THROWS_MATCHES(combine_weighted_sum({a, b}, {1.0, -2.0}), Error,
                       throws_code(Errc::negative_alpha));
}

TEST_CASE("operands with different s or domain cannot be combined") {
  CertifiedInstance a = instance_f();
  CertifiedInstance half = certify_instance(parse("x1^2+1", 1), one_point("sigma*(1+x1^2)", 1),
                                            box1(-3.0, 3.0), plan_of(64, 0.5));
  CHECK_THROWS_MATCHES(combine_sum(a, half), Error, throws_code(Errc::mismatched_s));

  CertifiedInstance narrow = certify_instance(parse("(x1-1)^2", 1), one_point("2*sigma", 1),
                                              box1(-1.0, 1.0), plan_of(64, 1.0));
  CHECK_THROWS_MATCHES(combine_sum(a, narrow), Error, throws_code(Errc::mismatched_domain));
}

TEST_CASE("pointwise max re-checks and discloses it") {
  CombineResult m = combine_max({instance_f(), instance_g()});
  CHECK(m.report.verdict == Verdict::certified_on_samples);
  REQUIRE(m.notes.size() == 1);
  CHECK(m.notes[0].find("re-checked empirically") != std::string::npos);
  CHECK(eval(m.h, {-2.0}) == std::max(4.0, 9.0));
}

TEST_CASE("composition with non-negative slope keeps certification") {
  CertifiedInstance a = instance_f();
  CombineResult plain = combine_composition(a, 3.0, 0.0);
  CHECK(plain.report.verdict == Verdict::certified_on_samples);
  CHECK(plain.notes.empty());
  CHECK(eval(plain.h, {2.0}) == 12.0);

  CombineResult shifted = combine_composition(a, 1.0, 5.0);
  REQUIRE(shifted.notes.size() == 1);
  CHECK(shifted.notes[0].find("intercept") != std::string::npos);
  CHECK(eval(shifted.h, {2.0}) == 9.0);

  CHECK_THROWS_MATCHES(combine_composition(a, -1.0, 0.0), Error,
                       throws_code(Errc::decreasing_composition));
}

TEST_CASE("sup requires one shared modifier map") {
  CertifiedInstance a = instance_f(), b = instance_g();
  CHECK_THROWS_MATCHES(combine_sup({a, b}), Error, throws_code(Errc::mixed_modifier_maps));

  CertifiedInstance c = certify_instance(parse("(x1-1)^2", 1), one_point("sigma*(1+x1^2)", 1),
                                         box1(-3.0, 3.0), plan_of(64, 1.0));
  CombineResult sup = combine_sup({a, c});
  CHECK(sup.report.verdict == Verdict::certified_on_samples);
  CHECK(structural_equal(sup.theta.expr, a.theta.expr));
}
