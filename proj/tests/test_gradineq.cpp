#include "test_support.hpp"

#include <cmath>

using namespace gsconvex;
using testsup::box1;
using testsup::one_point;
using testsup::plan_of;

TEST_CASE("dyadic limit is exact for maps linear in sigma") {
  LimitEstimate lin = limit_theta_over_sigma(one_point("sigma*(2*x1+6)", 1), {2.0});
  CHECK(lin.status == LimitEstimate::Status::converged);
  CHECK(lin.value == 10.0);
  CHECK(lin.converged_at == 2);

  LimitEstimate unit = limit_theta_over_sigma(one_point("sigma", 1), {0.0});
  CHECK(unit.status == LimitEstimate::Status::converged);
  CHECK(unit.value == 1.0);
}

TEST_CASE("quadratic-in-sigma maps converge to zero") {
  LimitEstimate est = limit_theta_over_sigma(one_point("sigma^2*x1", 1), {3.0});
  CHECK(est.status == LimitEstimate::Status::converged);
  CHECK(std::fabs(est.value) < 1e-11);
  CHECK(est.converged_at > 0);
}

TEST_CASE("square-root maps are flagged divergent") {
  LimitEstimate est = limit_theta_over_sigma(one_point("sigma^0.5", 1), {0.0});
  CHECK(est.status == LimitEstimate::Status::divergent);
  CHECK(est.converged_at == -1);
}

TEST_CASE("negative sigma(1-sigma) map converges to its slope at zero") {
  LimitEstimate est = limit_theta_over_sigma(one_point("-0.1*sigma*(1-sigma)", 1), {1.0});
  CHECK(est.status == LimitEstimate::Status::converged);
  CHECK_THAT(est.value, Catch::Matchers::WithinAbs(-0.1, 1e-10));
}

TEST_CASE("gradient upper bounds hold on a smooth fractional-s instance") {
  // x1^2+1 with map -0.1*sigma*(1-sigma) at s=1/2 is certified, and both
  // bounds hold with a wide margin (hand bound: >= 0.8 over the box)
  Expr h = parse("x1^2+1", 1);
  ModifierMap theta = one_point("-0.1*sigma*(1-sigma)", 1);
  GradIneqReport rep = check_gradient_bounds(h, theta, box1(-3.0, 3.0), plan_of(64, 0.5));
  REQUIRE(rep.inequalities.size() == 2);
  CHECK(rep.inequalities[0].name == "sum_bound");
  CHECK(rep.inequalities[1].name == "diff_bound");
  for (const IneqResult& ineq : rep.inequalities) {
    INFO(ineq.name);
    CHECK(ineq.hypotheses_met);
    CHECK(ineq.n_evaluated > 0);
    REQUIRE(ineq.worst.has);
    CHECK(ineq.worst.margin > 0.0);
  }
  CHECK(rep.flags.h_nonneg_on_samples);
  CHECK(rep.flags.theta_nonpos_on_samples);
  CHECK(rep.n_domain_errors == 0);
  CHECK(rep.n_divergent_limits == 0);
  CHECK_FALSE(rep.grad_flags.fd_fallback);
}

TEST_CASE("nonpos-map bound degrades for fractional s and is reported, not enforced") {
  // same certified instance: sigma^(s-1) amplifies h(b1)-h(b2) without the
  // h(b2)/sigma cushion, so small sigma drives the margin negative; the
  // report carries the violation next to hypotheses_met = true
  Expr h = parse("x1^2+1", 1);
  ModifierMap theta = one_point("-0.1*sigma*(1-sigma)", 1);
  GradIneqReport rep =
      check_gradient_bound_nonpos_map(h, theta, box1(-3.0, 3.0), plan_of(64, 0.5));
  REQUIRE(rep.inequalities.size() == 1);
  CHECK(rep.inequalities[0].name == "nonpos_map_bound");
  CHECK(rep.inequalities[0].hypotheses_met);
  REQUIRE(rep.inequalities[0].worst.has);
  CHECK(rep.inequalities[0].worst.margin < -0.09);
}

TEST_CASE("nonpos-map bound holds for a plain convex instance at s = 1") {
  GradIneqReport rep = check_gradient_bound_nonpos_map(parse("x1^2+1", 1), one_point("0", 1),
                                                       box1(-3.0, 3.0), plan_of(64, 1.0));
  REQUIRE(rep.inequalities.size() == 1);
  CHECK(rep.inequalities[0].hypotheses_met);
  CHECK(rep.inequalities[0].worst.margin >= 0.0);
}

TEST_CASE("gap bounds hold for a nonnegative convex instance at s = 1") {
  GradIneqReport rep = check_gradient_gap_bounds(parse("x1^2+1", 1), one_point("0", 1),
                                                 box1(-3.0, 3.0), plan_of(64, 1.0));
  REQUIRE(rep.inequalities.size() == 3);
  CHECK(rep.inequalities[0].name == "gap_bound");
  CHECK(rep.inequalities[1].name == "gap_bound_alt");
  CHECK(rep.inequalities[2].name == "gap_bound_negative");
  CHECK(rep.inequalities[0].hypotheses_met);
  CHECK(rep.inequalities[0].worst.margin >= 0.0);
  CHECK(rep.inequalities[1].hypotheses_met);
  CHECK(rep.inequalities[1].worst.margin >= 0.0);
  // h >= 1 here, so the negative-function variant is informational only
  CHECK_FALSE(rep.inequalities[2].hypotheses_met);
}

TEST_CASE("negative-function gap bound holds when its hypotheses are met") {
  // x1^2-10 stays negative on [-1,1]; the gap of a convex function is
  // -2(b1-b2)^2 <= 0 = 2*limit
  GradIneqReport rep = check_gradient_gap_bounds(parse("x1^2-10", 1), one_point("0", 1),
                                                 box1(-1.0, 1.0), plan_of(64, 1.0));
  REQUIRE(rep.inequalities.size() == 3);
  CHECK(rep.flags.h_negative_on_samples);
  CHECK(rep.flags.theta_nonpos_on_samples);
  CHECK_FALSE(rep.flags.h_nonneg_on_samples);
  CHECK_FALSE(rep.inequalities[0].hypotheses_met);
  CHECK_FALSE(rep.inequalities[1].hypotheses_met);
  CHECK(rep.inequalities[2].hypotheses_met);
  CHECK(rep.inequalities[2].worst.margin >= 0.0);
}

TEST_CASE("divergent limits are counted and skip the pair") {
  GradIneqReport rep = check_gradient_bounds(parse("x1^2", 1), one_point("sigma^0.5", 1),
                                             box1(-1.0, 1.0), plan_of(8, 0.5));
  CHECK(rep.n_divergent_limits == 8);
  CHECK(rep.inequalities[0].n_evaluated == 0);
  CHECK_FALSE(rep.inequalities[0].worst.has);
}

TEST_CASE("non-differentiable points fall back to finite differences") {
  // |x1| has no symbolic derivative; the gradient evaluator discloses the
  // finite-difference fallback in the flags
  GradIneqReport rep = check_gradient_bounds(parse("abs(x1)+2", 1), one_point("0", 1),
                                             box1(-2.0, 2.0), plan_of(16, 1.0));
  CHECK(rep.grad_flags.fd_fallback);
  CHECK(rep.inequalities[0].n_evaluated > 0);
}
