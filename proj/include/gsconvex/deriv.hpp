#pragma once

// Symbolic partial derivatives plus the finite-difference quotients used as
// fallbacks and test oracles. No CAS ambitions: the only rewriting is constant
// folding and identity elimination that cannot change domain behaviour
// (x+0, x*1, u^1). In particular 0*u is never folded to 0, because u may
// carry a domain restriction the derivative tree must keep.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "gsconvex/expr.hpp"

namespace gsconvex {

namespace detail {

inline bool is_const(const Expr& e, double v) {
  return e.kind() == NodeKind::constant && e.constant_value() == v;
}

inline bool both_const(const Expr& a, const Expr& b) {
  return a.kind() == NodeKind::constant && b.kind() == NodeKind::constant;
}

inline Expr dadd(Expr a, Expr b) {
  if (both_const(a, b)) {
    double v = a.constant_value() + b.constant_value();
    if (std::isfinite(v)) return constant(v);
  }
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return add(std::move(a), std::move(b));
}

inline Expr dsub(Expr a, Expr b) {
  if (both_const(a, b)) {
    double v = a.constant_value() - b.constant_value();
    if (std::isfinite(v)) return constant(v);
  }
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return negate(std::move(b));
  return sub(std::move(a), std::move(b));
}

inline Expr dmul(Expr a, Expr b) {
  if (both_const(a, b)) {
    double v = a.constant_value() * b.constant_value();
    if (std::isfinite(v)) return constant(v);
  }
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return mul(std::move(a), std::move(b));
}

inline Expr ddiv(Expr a, Expr b) {
  if (both_const(a, b) && b.constant_value() != 0.0) {
    double v = a.constant_value() / b.constant_value();
    if (std::isfinite(v)) return constant(v);
  }
  if (is_const(b, 1.0)) return a;
  return div(std::move(a), std::move(b));
}

inline Expr dpow(Expr base, Expr exponent) {
  if (exponent.kind() == NodeKind::constant && exponent.constant_value() == 1.0) return base;
  if (both_const(base, exponent)) {
    try {
      return constant(checked_pow(base.constant_value(), exponent.constant_value()));
    } catch (const Error&) {
      // leave unfolded; the error belongs to eval time
    }
  }
  return pow(std::move(base), std::move(exponent));
}

}  // namespace detail

inline bool is_differentiable(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::abs:
    case NodeKind::max:
    case NodeKind::min:
      return false;
    default:
      break;
  }
  for (const Expr& a : e.args())
    if (!is_differentiable(a)) return false;
  return true;
}

// Partial derivative with respect to x(wrt+1); sigma is treated as an
// independent parameter (its derivative is zero). Throws
// Error(Errc::non_differentiable) on abs/max/min.
inline Expr differentiate(const Expr& e, int wrt) {
  using namespace detail;
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::sigma:
      return constant(0.0);
    case NodeKind::variable:
      return constant(e.var_index() == wrt ? 1.0 : 0.0);
    case NodeKind::negate:
      return negate(differentiate(e.args()[0], wrt));
    case NodeKind::add:
      return dadd(differentiate(e.args()[0], wrt), differentiate(e.args()[1], wrt));
    case NodeKind::sub:
      return dsub(differentiate(e.args()[0], wrt), differentiate(e.args()[1], wrt));
    case NodeKind::mul: {
      const Expr& u = e.args()[0];
      const Expr& v = e.args()[1];
      return dadd(dmul(differentiate(u, wrt), v), dmul(u, differentiate(v, wrt)));
    }
    case NodeKind::div: {
      const Expr& u = e.args()[0];
      const Expr& v = e.args()[1];
      // (u'v - uv') / v^2
      return ddiv(dsub(dmul(differentiate(u, wrt), v), dmul(u, differentiate(v, wrt))),
                  dmul(v, v));
    }
    case NodeKind::pow: {
      const Expr& u = e.args()[0];
      const Expr& v = e.args()[1];
      if (v.kind() == NodeKind::constant) {
        double c = v.constant_value();
        if (c == 0.0) return constant(0.0);  // u^0 is constant wherever it evaluates
        return dmul(dmul(constant(c), dpow(u, constant(c - 1.0))), differentiate(u, wrt));
      }
      if (u.kind() == NodeKind::constant)
        return dmul(e, dmul(log(u), differentiate(v, wrt)));  // a^v ln(a) v'
      // u^v (v' ln u + v u'/u)
      return dmul(e, dadd(dmul(differentiate(v, wrt), log(u)),
                          ddiv(dmul(v, differentiate(u, wrt)), u)));
    }
    case NodeKind::exp:
      return dmul(e, differentiate(e.args()[0], wrt));
    case NodeKind::log:
      return ddiv(differentiate(e.args()[0], wrt), e.args()[0]);
    case NodeKind::sqrt:
      return ddiv(differentiate(e.args()[0], wrt), dmul(constant(2.0), e));
    case NodeKind::abs:
      throw Error(Errc::non_differentiable, "abs is not differentiable; use a finite-difference quotient");
    case NodeKind::max:
      throw Error(Errc::non_differentiable, "max is not differentiable; use a finite-difference quotient");
    case NodeKind::min:
      throw Error(Errc::non_differentiable, "min is not differentiable; use a finite-difference quotient");
  }
  throw Error(Errc::domain, "corrupt expression node");
}

// --- difference quotients ------------------------------------------------------

inline double central_difference(const Expr& f, std::span<const double> b,
                                 std::optional<double> sigma, int i, double step) {
  std::vector<double> p(b.begin(), b.end());
  p[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] + step;
  double above = eval(f, p, sigma);
  p[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - step;
  double below = eval(f, p, sigma);
  return (above - below) / (2.0 * step);
}

// One-sided quotient [f(b + step*e_i) - f(b)] / step; pass a negative step for
// the backward direction.
inline double one_sided_difference(const Expr& f, std::span<const double> b,
                                   std::optional<double> sigma, int i, double step) {
  std::vector<double> p(b.begin(), b.end());
  double at = eval(f, p, sigma);
  p[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] + step;
  double shifted = eval(f, p, sigma);
  return (shifted - at) / step;
}

}  // namespace gsconvex
