#include "test_support.hpp"

#include <cmath>
#include <vector>

using namespace gsconvex;
using testsup::Rng;

TEST_CASE("parse and evaluate basic expressions") {
  Expr h = parse("((x1-1)^2+(x1-1))^0.5", 1);
  CHECK(eval(h, {1.0}) == 0.0);
  CHECK_THAT(eval(h, {2.0}), Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-15));

  Expr t = parse("sigma*(2*x1+6)", 1);
  CHECK(eval(t, {2.0}, 0.5) == 5.0);

  CHECK_THROWS_MATCHES(eval(h, {0.5}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::domain; }));
}

TEST_CASE("syntax and arity errors carry positions") {
  try {
    parse("x1 +* 2", 1);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::syntax);
    CHECK(e.position() != std::string::npos);
  }

  CHECK_THROWS_MATCHES(parse("x3", 2), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::arity;
                       }));
  CHECK_THROWS_MATCHES(parse("x0", 1), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::arity;
                       }));
  CHECK_THROWS_MATCHES(parse("foo(2)", 1), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::syntax; }));
  CHECK_THROWS_MATCHES(parse("2+", 1), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::syntax;
                       }));
  CHECK_THROWS_MATCHES(parse("max()", 1), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::syntax; }));
}

TEST_CASE("sigma outside a sigma-aware context is an error") {
  Expr t = parse("sigma*x1", 1);
  CHECK_THROWS_MATCHES(eval(t, {1.0}), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::missing_sigma;
                       }));
}

TEST_CASE("power edge cases") {
  CHECK(eval(parse("0^0", 1), {0.0}) == 1.0);
  CHECK(eval(parse("x1^3", 1), {-2.0}) == -8.0);
  CHECK_THROWS_AS(eval(parse("x1^0.5", 1), {-2.0}), Error);
  CHECK_THROWS_AS(eval(parse("0^(-1)", 1), {0.0}), Error);
  CHECK(eval(parse("x1^(-2)", 1), {2.0}) == 0.25);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval(parse("2+3*4", 1), {0.0}) == 14.0);
  CHECK(eval(parse("2-3-4", 1), {0.0}) == -5.0);
  CHECK(eval(parse("24/4/2", 1), {0.0}) == 3.0);
  CHECK(eval(parse("2^3^2", 1), {0.0}) == 512.0);  // right-assoc
  CHECK(eval(parse("-2^2", 1), {0.0}) == -4.0);    // unary minus binds looser than ^
  CHECK(eval(parse("(-2)^2", 1), {0.0}) == 4.0);
  CHECK(eval(parse("2^-2", 1), {0.0}) == 0.25);
  CHECK(eval(parse("max(1, min(5, 3), 2)", 1), {0.0}) == 3.0);
  CHECK(eval(parse("abs(-3)+exp(0)+log(1)+sqrt(9)", 1), {0.0}) == 7.0);
}

namespace {

// Random expression tree built through the public constructors, so any
// constant folding they apply is already reflected in the tree handed to the
// printer.
Expr random_expr(Rng& rng, int arity, int depth, bool allow_sigma) {
  if (depth <= 0) {
    switch (rng.below(3)) {
      case 0: return constant(std::round(rng.uniform(-50.0, 50.0) * 8.0) / 8.0);
      case 1: return var(rng.below(arity));
      default:
        return allow_sigma ? sigma_ref() : constant(std::round(rng.uniform(-8.0, 8.0)));
    }
  }
  auto sub = [&](int d) { return random_expr(rng, arity, d, allow_sigma); };
  switch (rng.below(12)) {
    case 0: return add(sub(depth - 1), sub(depth - 1));
    case 1: return gsconvex::sub(sub(depth - 1), sub(depth - 1));
    case 2: return mul(sub(depth - 1), sub(depth - 1));
    case 3: return div(sub(depth - 1), sub(depth - 1));
    case 4: return pow(sub(depth - 2), sub(depth - 2));
    case 5: return negate(sub(depth - 1));
    case 6: return gsconvex::abs(sub(depth - 1));
    case 7: return gsconvex::exp(sub(depth - 2));
    case 8: return gsconvex::log(sub(depth - 2));
    case 9: return gsconvex::sqrt(sub(depth - 1));
    case 10: {
      std::vector<Expr> items{sub(depth - 1), sub(depth - 1)};
      if (rng.below(2)) items.push_back(sub(depth - 2));
      return max_of(std::move(items));
    }
    default: {
      std::vector<Expr> items{sub(depth - 1), sub(depth - 1)};
      return min_of(std::move(items));
    }
  }
}

}  // namespace

TEST_CASE("print then parse round-trips structurally") {
  Rng rng(2024);
  for (int iter = 0; iter < 300; ++iter) {
    Expr e = random_expr(rng, 2, 3, true);
    std::string text = to_string(e);
    INFO("printed: " << text);
    Expr back = parse(text, 2);
    CHECK(structural_equal(e, back));
  }
}

namespace {

// Smooth random polynomials for derivative checks: sums/products/powers only.
Expr random_poly(Rng& rng, int arity, int depth) {
  if (depth <= 0) {
    if (rng.below(2)) return constant(std::round(rng.uniform(-2.0, 2.0) * 4.0) / 4.0);
    return var(rng.below(arity));
  }
  switch (rng.below(4)) {
    case 0: return add(random_poly(rng, arity, depth - 1), random_poly(rng, arity, depth - 1));
    case 1:
      return gsconvex::sub(random_poly(rng, arity, depth - 1),
                           random_poly(rng, arity, depth - 1));
    case 2: return mul(random_poly(rng, arity, depth - 1), random_poly(rng, arity, depth - 1));
    default:
      return pow(random_poly(rng, arity, depth - 1), constant(1.0 + rng.below(3)));
  }
}

}  // namespace

TEST_CASE("symbolic derivative matches central differences on smooth expressions") {
  Rng rng(99);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    Expr e = random_poly(rng, 2, 3);
    REQUIRE(is_differentiable(e));
    for (int wrt = 0; wrt < 2; ++wrt) {
      Expr d = differentiate(e, wrt);
      std::vector<double> p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      double sym, fd;
      try {
        sym = eval(d, p);
        fd = central_difference(e, p, {}, wrt, 1e-5 * std::max(1.0, std::fabs(p[wrt])));
      } catch (const Error&) {
        continue;  // hit a pole of some x^-k term; skip the point
      }
      INFO("expr: " << to_string(e) << " wrt x" << wrt + 1 << " at (" << p[0] << ", " << p[1]
                    << ")");
      CHECK(std::fabs(sym - fd) <= 1e-5 * std::max(1.0, std::fabs(sym)));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("derivative of the running example matches its closed form") {
  Expr h = parse("((x1-1)^2+(x1-1))^0.5", 1);
  Expr d = differentiate(h, 0);
  for (double x : {1.5, 2.0, 3.0, 7.5}) {
    double closed = (2.0 * (x - 1.0) + 1.0) / (2.0 * std::sqrt((x - 1.0) * (x - 1.0) + (x - 1.0)));
    CHECK_THAT(eval(d, {x}), Catch::Matchers::WithinRel(closed, 1e-12));
  }
  // at the left edge the symbolic form hits 0^(-1/2)
  CHECK_THROWS_AS(eval(d, {1.0}), Error);
}

TEST_CASE("differentiate rejects non-smooth nodes") {
  CHECK_THROWS_MATCHES(differentiate(parse("abs(x1)", 1), 0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::non_differentiable;
                       }));
  CHECK_FALSE(is_differentiable(parse("max(x1, 0)", 1)));
  CHECK(is_differentiable(parse("exp(x1)*log(x1+2)", 1)));
}

TEST_CASE("substitution rebuilds two-point lifts correctly") {
  Expr t = parse("sigma*(2*x1+6)", 1);
  ModifierMap lifted = lift_to_two_point({t, MapKind::one_point}, 1, 0.5);
  CHECK(lifted.kind == MapKind::two_point);
  // at sigma = 0.25, b1 = 2, b2 = 4:
  //   0.25^0.5 * theta(2) + 0.75^0.5 * theta(4) + theta(3)
  double expect = std::pow(0.25, 0.5) * (0.25 * 10.0) + std::pow(0.75, 0.5) * (0.25 * 14.0) +
                  0.25 * 12.0;
  CHECK_THAT(eval(lifted.expr, {2.0, 4.0}, 0.25), Catch::Matchers::WithinRel(expect, 1e-14));
}

TEST_CASE("canonical double formatting survives a round trip") {
  Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    double v = rng.uniform(-1e6, 1e6);
    Expr e = constant(v);
    Expr back = parse(to_string(e), 1);
    REQUIRE(back.kind() == NodeKind::constant);
    CHECK(back.constant_value() == v);
  }
}
