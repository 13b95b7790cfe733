#pragma once

// Text <-> Expr. The grammar (EBNF in the README) is whitespace-insensitive
// infix with ^ for powers and call syntax for abs/exp/log/sqrt/max/min.
// to_string() emits the minimal parenthesization that parses back to a
// structurally identical tree; the round-trip property test leans on that.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "gsconvex/expr.hpp"

namespace gsconvex {

namespace detail {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok type;
  double num = 0.0;
  std::string text;
  std::size_t pos = 0;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src.data() + i;
      char* after = nullptr;
      double v = std::strtod(begin, &after);
      if (after == begin)
        throw Error(Errc::syntax, "malformed number at offset " + std::to_string(start), start);
      i += static_cast<std::size_t>(after - begin);
      out.push_back({Tok::number, v, std::string(src.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Tok::ident, 0.0, std::string(src.substr(start, i - start)), start});
      continue;
    }
    Tok t;
    switch (c) {
      case '+': t = Tok::plus; break;
      case '-': t = Tok::minus; break;
      case '*': t = Tok::star; break;
      case '/': t = Tok::slash; break;
      case '^': t = Tok::caret; break;
      case '(': t = Tok::lparen; break;
      case ')': t = Tok::rparen; break;
      case ',': t = Tok::comma; break;
      default:
        throw Error(Errc::syntax,
                    std::string("unexpected character '") + c + "' at offset " + std::to_string(start),
                    start);
    }
    out.push_back({t, 0.0, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::end, 0.0, "", src.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, int arity) : toks_(lex(src)), arity_(arity) {}

  Expr run() {
    Expr e = expr();
    expect(Tok::end, "end of input");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  int arity_;

  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }

  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    std::string got = t.type == Tok::end ? "end of input" : "'" + t.text + "'";
    throw Error(Errc::syntax,
                "expected " + expected + " but found " + got + " at offset " + std::to_string(t.pos),
                t.pos);
  }

  void expect(Tok t, const char* what) {
    if (peek().type != t) fail(what);
    ++at_;
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().type == Tok::plus || peek().type == Tok::minus) {
      Tok op = take().type;
      Expr rhs = term();
      lhs = op == Tok::plus ? add(std::move(lhs), std::move(rhs)) : sub(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().type == Tok::star || peek().type == Tok::slash) {
      Tok op = take().type;
      Expr rhs = unary();
      lhs = op == Tok::star ? mul(std::move(lhs), std::move(rhs)) : div(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr unary() {
    if (peek().type == Tok::minus) {
      take();
      return negate(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().type == Tok::caret) {
      take();
      // right-associative; exponent may carry its own unary minus (x^-2)
      return pow(std::move(base), unary());
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.type == Tok::number) return constant(take().num);
    if (t.type == Tok::lparen) {
      take();
      Expr inner = expr();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.type == Tok::ident) return ident();
    fail("a number, name, or '('");
  }

  Expr ident() {
    Token t = take();
    const std::string& name = t.text;
    if (name == "sigma") return sigma_ref();
    if (name.size() > 1 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
      for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i])))
          throw Error(Errc::syntax, "unknown name '" + name + "' at offset " + std::to_string(t.pos),
                      t.pos);
      long idx = std::strtol(name.c_str() + 1, nullptr, 10);
      if (idx < 1)
        throw Error(Errc::arity, "variables are numbered from x1; got '" + name + "'", t.pos);
      if (idx > arity_)
        throw Error(Errc::arity,
                    "variable '" + name + "' exceeds declared arity " + std::to_string(arity_),
                    t.pos);
      return var(static_cast<int>(idx - 1));
    }
    bool is_call = peek().type == Tok::lparen;
    if (!is_call)
      throw Error(Errc::syntax, "unknown name '" + name + "' at offset " + std::to_string(t.pos),
                  t.pos);
    take();  // '('
    std::vector<Expr> args;
    args.push_back(expr());
    while (peek().type == Tok::comma) {
      take();
      args.push_back(expr());
    }
    expect(Tok::rparen, "')'");
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw Error(Errc::syntax,
                    name + " expects " + std::to_string(n) + " argument(s), got " +
                        std::to_string(args.size()),
                    t.pos);
    };
    if (name == "abs") { need(1); return gsconvex::abs(std::move(args[0])); }
    if (name == "exp") { need(1); return gsconvex::exp(std::move(args[0])); }
    if (name == "log") { need(1); return gsconvex::log(std::move(args[0])); }
    if (name == "sqrt") { need(1); return gsconvex::sqrt(std::move(args[0])); }
    if (name == "max") return max_of(std::move(args));
    if (name == "min") return min_of(std::move(args));
    throw Error(Errc::syntax, "unknown function '" + name + "' at offset " + std::to_string(t.pos),
                t.pos);
  }
};

}  // namespace detail

// arity = number of allowed variables (x1..x<arity>).
inline Expr parse(std::string_view text, int arity) {
  return detail::Parser(text, arity).run();
}

// --- printing -----------------------------------------------------------------

namespace detail {

// 17 significant digits: enough to reproduce any double exactly on re-parse.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::negate: return 3;
    case NodeKind::pow: return 4;
    default: return 5;  // leaves and calls
  }
}

inline void print_expr(const Expr& e, std::string& out);

inline void print_child(const Expr& child, int min_prec, std::string& out) {
  bool parens = precedence(child) < min_prec;
  if (parens) out += '(';
  print_expr(child, out);
  if (parens) out += ')';
}

inline void print_call(const char* name, const Expr& e, std::string& out) {
  out += name;
  out += '(';
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) out += ',';
    print_expr(e.args()[i], out);
  }
  out += ')';
}

inline void print_expr(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::constant:
      out += format_double(e.constant_value());
      return;
    case NodeKind::variable:
      out += 'x';
      out += std::to_string(e.var_index() + 1);
      return;
    case NodeKind::sigma:
      out += "sigma";
      return;
    case NodeKind::negate:
      out += '-';
      print_child(e.args()[0], 4, out);  // -(a+b), -(a*b), -(-a); but -x^2 stays bare
      return;
    case NodeKind::add:
      print_child(e.args()[0], 1, out);
      out += '+';
      print_child(e.args()[1], 2, out);
      return;
    case NodeKind::sub:
      print_child(e.args()[0], 1, out);
      out += '-';
      print_child(e.args()[1], 2, out);
      return;
    case NodeKind::mul:
      print_child(e.args()[0], 2, out);
      out += '*';
      print_child(e.args()[1], 3, out);
      return;
    case NodeKind::div:
      print_child(e.args()[0], 2, out);
      out += '/';
      print_child(e.args()[1], 3, out);
      return;
    case NodeKind::pow: {
      // left side must be an atom: (a^b)^c, (-a)^b, and (-2)^x all need parens
      const Expr& base = e.args()[0];
      bool base_parens = precedence(base) < 5 ||
                         (base.kind() == NodeKind::constant &&
                          std::signbit(base.constant_value()));
      if (base_parens) out += '(';
      print_expr(base, out);
      if (base_parens) out += ')';
      out += '^';
      print_child(e.args()[1], 3, out);  // exponent may be unary minus or tighter
      return;
    }
    case NodeKind::abs: print_call("abs", e, out); return;
    case NodeKind::exp: print_call("exp", e, out); return;
    case NodeKind::log: print_call("log", e, out); return;
    case NodeKind::sqrt: print_call("sqrt", e, out); return;
    case NodeKind::max: print_call("max", e, out); return;
    case NodeKind::min: print_call("min", e, out); return;
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_expr(e, out);
  return out;
}

}  // namespace gsconvex
