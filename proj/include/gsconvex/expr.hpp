#pragma once

// Immutable expression trees over variables x1..xm and the interpolation
// parameter sigma. Nodes are shared (cheap copies); evaluation either returns
// a finite double or throws Error(Errc::domain) identifying the node.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsconvex/errors.hpp"

namespace gsconvex {

enum class NodeKind {
  constant,
  variable,  // x1.. stored 0-based in index
  sigma,
  negate,
  abs,
  exp,
  log,
  sqrt,
  add,
  sub,
  mul,
  div,
  pow,
  max,  // n-ary
  min,  // n-ary
};

struct ExprNode;

class Expr {
 public:
  Expr() = default;

  bool valid() const { return node_ != nullptr; }
  const ExprNode& node() const { return *node_; }
  NodeKind kind() const;
  double constant_value() const;
  int var_index() const;
  const std::vector<Expr>& args() const;

  static Expr make(ExprNode&& n);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // payload for constant
  int index = -1;      // payload for variable (0-based)
  std::vector<Expr> args;
};

inline Expr Expr::make(ExprNode&& n) {
  Expr e;
  e.node_ = std::make_shared<const ExprNode>(std::move(n));
  return e;
}

inline NodeKind Expr::kind() const { return node_->kind; }
inline double Expr::constant_value() const { return node_->value; }
inline int Expr::var_index() const { return node_->index; }
inline const std::vector<Expr>& Expr::args() const { return node_->args; }

// --- builders ---------------------------------------------------------------

inline Expr constant(double v) { return Expr::make({.kind = NodeKind::constant, .value = v}); }

inline Expr var(int index) {
  if (index < 0) throw Error(Errc::arity, "variable index must be non-negative");
  return Expr::make({.kind = NodeKind::variable, .index = index});
}

inline Expr sigma_ref() { return Expr::make({.kind = NodeKind::sigma}); }

inline Expr unary(NodeKind k, Expr a) {
  ExprNode n{.kind = k};
  n.args.push_back(std::move(a));
  return Expr::make(std::move(n));
}

inline Expr binary(NodeKind k, Expr a, Expr b) {
  ExprNode n{.kind = k};
  n.args.push_back(std::move(a));
  n.args.push_back(std::move(b));
  return Expr::make(std::move(n));
}

// negate folds constants so that "-2.5" and constant(-2.5) are the same tree;
// the printer relies on this for round-tripping negative literals.
inline Expr negate(Expr a) {
  if (a.kind() == NodeKind::constant) return constant(-a.constant_value());
  return unary(NodeKind::negate, std::move(a));
}

inline Expr abs(Expr a) { return unary(NodeKind::abs, std::move(a)); }
inline Expr exp(Expr a) { return unary(NodeKind::exp, std::move(a)); }
inline Expr log(Expr a) { return unary(NodeKind::log, std::move(a)); }
inline Expr sqrt(Expr a) { return unary(NodeKind::sqrt, std::move(a)); }

inline Expr add(Expr a, Expr b) { return binary(NodeKind::add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return binary(NodeKind::sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return binary(NodeKind::mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return binary(NodeKind::div, std::move(a), std::move(b)); }
inline Expr pow(Expr base, Expr exponent) {
  return binary(NodeKind::pow, std::move(base), std::move(exponent));
}

inline Expr nary(NodeKind k, std::vector<Expr> items) {
  if (items.empty()) throw Error(Errc::empty_list, "max/min need at least one argument");
  if (items.size() == 1) return items.front();
  ExprNode n{.kind = k};
  n.args = std::move(items);
  return Expr::make(std::move(n));
}

inline Expr max_of(std::vector<Expr> items) { return nary(NodeKind::max, std::move(items)); }
inline Expr min_of(std::vector<Expr> items) { return nary(NodeKind::min, std::move(items)); }

inline Expr operator+(Expr a, Expr b) { return add(std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return sub(std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return mul(std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return div(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return negate(std::move(a)); }
inline Expr operator+(double a, Expr b) { return add(constant(a), std::move(b)); }
inline Expr operator+(Expr a, double b) { return add(std::move(a), constant(b)); }
inline Expr operator-(double a, Expr b) { return sub(constant(a), std::move(b)); }
inline Expr operator-(Expr a, double b) { return sub(std::move(a), constant(b)); }
inline Expr operator*(double a, Expr b) { return mul(constant(a), std::move(b)); }
inline Expr operator*(Expr a, double b) { return mul(std::move(a), constant(b)); }
inline Expr operator/(double a, Expr b) { return div(constant(a), std::move(b)); }
inline Expr operator/(Expr a, double b) { return div(std::move(a), constant(b)); }

// --- evaluation --------------------------------------------------------------

struct EvalPoint {
  std::span<const double> b;
  std::optional<double> sigma;
};

namespace detail {

inline bool is_integer_valued(double x) {
  return std::floor(x) == x && std::fabs(x) <= 9.007199254740992e15;
}

[[noreturn]] inline void domain_fail(const char* what) {
  throw Error(Errc::domain, std::string("domain error: ") + what);
}

inline double ensure_finite(double v, const char* op) {
  if (!std::isfinite(v)) domain_fail((std::string(op) + " produced a non-finite value").c_str());
  return v;
}

// pow with explicit domain rules: 0^positive = 0, 0^0 = 1, zero base with a
// negative exponent and negative base with a fractional exponent are domain
// errors rather than NaN/inf.
inline double checked_pow(double base, double e) {
  if (base > 0.0) return ensure_finite(std::pow(base, e), "pow");
  if (base == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    domain_fail("zero base raised to a negative exponent");
  }
  if (!is_integer_valued(e)) domain_fail("negative base raised to a non-integer exponent");
  return ensure_finite(std::pow(base, e), "pow");
}

}  // namespace detail

inline double eval(const Expr& e, const EvalPoint& p) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::constant:
      return n.value;
    case NodeKind::variable:
      if (n.index < 0 || static_cast<std::size_t>(n.index) >= p.b.size())
        throw Error(Errc::arity,
                    "variable x" + std::to_string(n.index + 1) + " outside point of dimension " +
                        std::to_string(p.b.size()));
      return p.b[static_cast<std::size_t>(n.index)];
    case NodeKind::sigma:
      if (!p.sigma) throw Error(Errc::missing_sigma, "expression references sigma but none was supplied");
      return *p.sigma;
    case NodeKind::negate:
      return -eval(n.args[0], p);
    case NodeKind::abs:
      return std::fabs(eval(n.args[0], p));
    case NodeKind::exp:
      return detail::ensure_finite(std::exp(eval(n.args[0], p)), "exp");
    case NodeKind::log: {
      double a = eval(n.args[0], p);
      if (a <= 0.0) detail::domain_fail("log of a non-positive value");
      return detail::ensure_finite(std::log(a), "log");
    }
    case NodeKind::sqrt: {
      double a = eval(n.args[0], p);
      if (a < 0.0) detail::domain_fail("sqrt of a negative value");
      return std::sqrt(a);
    }
    case NodeKind::add:
      return detail::ensure_finite(eval(n.args[0], p) + eval(n.args[1], p), "add");
    case NodeKind::sub:
      return detail::ensure_finite(eval(n.args[0], p) - eval(n.args[1], p), "sub");
    case NodeKind::mul:
      return detail::ensure_finite(eval(n.args[0], p) * eval(n.args[1], p), "mul");
    case NodeKind::div: {
      double a = eval(n.args[0], p);
      double b = eval(n.args[1], p);
      if (b == 0.0) detail::domain_fail("division by zero");
      return detail::ensure_finite(a / b, "div");
    }
    case NodeKind::pow:
      return detail::checked_pow(eval(n.args[0], p), eval(n.args[1], p));
    case NodeKind::max: {
      double best = eval(n.args[0], p);
      for (std::size_t i = 1; i < n.args.size(); ++i) best = std::max(best, eval(n.args[i], p));
      return best;
    }
    case NodeKind::min: {
      double best = eval(n.args[0], p);
      for (std::size_t i = 1; i < n.args.size(); ++i) best = std::min(best, eval(n.args[i], p));
      return best;
    }
  }
  throw Error(Errc::domain, "corrupt expression node");
}

inline double eval(const Expr& e, std::span<const double> b, std::optional<double> sigma = {}) {
  return eval(e, EvalPoint{b, sigma});
}

inline double eval(const Expr& e, std::initializer_list<double> b, std::optional<double> sigma = {}) {
  return eval(e, EvalPoint{std::span<const double>(b.begin(), b.size()), sigma});
}

// --- structural helpers -------------------------------------------------------

namespace detail {
inline bool bits_equal(double a, double b) {
  std::uint64_t x, y;
  std::memcpy(&x, &a, sizeof x);
  std::memcpy(&y, &b, sizeof y);
  return x == y;
}
}  // namespace detail

inline bool structural_equal(const Expr& a, const Expr& b) {
  if (!a.valid() || !b.valid()) return a.valid() == b.valid();
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::constant:
      return detail::bits_equal(a.constant_value(), b.constant_value());
    case NodeKind::variable:
      return a.var_index() == b.var_index();
    case NodeKind::sigma:
      return true;
    default:
      break;
  }
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!structural_equal(a.args()[i], b.args()[i])) return false;
  return true;
}

inline bool references_sigma(const Expr& e) {
  if (e.kind() == NodeKind::sigma) return true;
  for (const Expr& a : e.args())
    if (references_sigma(a)) return true;
  return false;
}

// Largest 0-based variable index used, or -1 for variable-free expressions.
inline int max_var_index(const Expr& e) {
  if (e.kind() == NodeKind::variable) return e.var_index();
  int best = -1;
  for (const Expr& a : e.args()) best = std::max(best, max_var_index(a));
  return best;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const Expr& a : e.args()) n += node_count(a);
  return n;
}

// Rebuilds e with every variable x(i+1) replaced by repl(i). Sigma and
// constants pass through untouched.
template <typename Fn>
inline Expr substitute_vars(const Expr& e, Fn&& repl) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::sigma:
      return e;
    case NodeKind::variable:
      return repl(e.var_index());
    default:
      break;
  }
  ExprNode n{.kind = e.kind()};
  n.args.reserve(e.args().size());
  for (const Expr& a : e.args()) n.args.push_back(substitute_vars(a, repl));
  return Expr::make(std::move(n));
}

}  // namespace gsconvex
