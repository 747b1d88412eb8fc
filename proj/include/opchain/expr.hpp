#pragma once

/**
 * @file expr.hpp
 * @brief AST, parser and printer for the join-algebra expression language.
 *
 * Grammar, loosest to tightest binding:
 *
 *   join    := sum   ( ('\/' | 'v' | U+2228) sum )*
 *   sum     := term  ( ('+' | '-') term )*
 *   term    := power ( ('*' | '/') power )*
 *   power   := unary ( '^' power )?                       right-associative
 *   unary   := '-' unary | primary
 *   primary := number | number 'i' | 'i' | 'e' | 'pi' | '-inf' | ident
 *            | fn '(' join ')'
 *            | 'oplus' '[' int ']' '(' join ',' join ')'
 *            | 'inv' '[' int ']' '(' join ')'
 *            | 'D' '[' int ']' '(' join ')'
 *            | '(' join ')'
 *
 * '+' binds more closely than the join, so "a + n*z \/ b" is (a + n*z) \/ b.
 * Unary minus binds more closely than '^', so -x^2 is (-x)^2; write -(x^2)
 * for the other reading. A minus sign directly in front of a numeric literal
 * (or 'inf') is folded into the constant. Implicit multiplication is
 * rejected.
 */

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "chain.hpp"
#include "errors.hpp"
#include "numtower.hpp"

namespace opchain {

enum class BinOp { add, sub, mul, div, pow, join };
enum class Fn { exp, log, sin, cos, cosh, sinh, tanh };

inline constexpr std::array<std::pair<Fn, std::string_view>, 7> function_names{{
    {Fn::exp, "exp"},
    {Fn::log, "log"},
    {Fn::sin, "sin"},
    {Fn::cos, "cos"},
    {Fn::cosh, "cosh"},
    {Fn::sinh, "sinh"},
    {Fn::tanh, "tanh"},
}};

inline std::string_view name_of(Fn fn) {
  for (auto [f, name] : function_names)
    if (f == fn) return name;
  return "?";
}

inline std::optional<Fn> function_named(std::string_view name) {
  for (auto [f, n] : function_names)
    if (n == name) return f;
  return std::nullopt;
}

// Immutable expression tree with shared subtrees.
class Expr {
 public:
  struct Node;

  explicit Expr(Node node);

  const Node& node() const { return *node_; }

  template <class T>
  const T* as() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Const {
  JoinComplex value;
};
struct Var {
  std::string name;
};
struct Neg {
  Expr arg;
};
struct Binary {
  BinOp op;
  Expr lhs;
  Expr rhs;
};
struct OplusN {
  int level;
  Expr lhs;
  Expr rhs;
};
struct InvN {
  int level;
  Expr arg;
};
struct Apply {
  Fn fn;
  Expr arg;
};
struct DerivN {
  int level;
  Expr arg;
};

struct Expr::Node {
  std::variant<Const, Var, Neg, Binary, OplusN, InvN, Apply, DerivN> v;
};

inline Expr::Expr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

template <class T>
const T* Expr::as() const {
  return std::get_if<T>(&node_->v);
}

// Builders.
namespace ex {

inline Expr constant(JoinComplex c) { return Expr({Const{c}}); }
inline Expr num(double re, double im = 0.0) { return constant(JoinComplex(re, im)); }
inline Expr bottom() { return constant(JoinComplex::bottom()); }
inline Expr var(std::string name) { return Expr({Var{std::move(name)}}); }
inline Expr neg(Expr a) { return Expr({Neg{std::move(a)}}); }
inline Expr binary(BinOp op, Expr a, Expr b) { return Expr({Binary{op, std::move(a), std::move(b)}}); }
inline Expr add(Expr a, Expr b) { return binary(BinOp::add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return binary(BinOp::sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return binary(BinOp::mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return binary(BinOp::div, std::move(a), std::move(b)); }
inline Expr pow(Expr a, Expr b) { return binary(BinOp::pow, std::move(a), std::move(b)); }
inline Expr join(Expr a, Expr b) { return binary(BinOp::join, std::move(a), std::move(b)); }
inline Expr oplus(int n, Expr a, Expr b) { return Expr({OplusN{n, std::move(a), std::move(b)}}); }
inline Expr inv(int n, Expr a) { return Expr({InvN{n, std::move(a)}}); }
inline Expr apply(Fn fn, Expr a) { return Expr({Apply{fn, std::move(a)}}); }
inline Expr exp(Expr a) { return apply(Fn::exp, std::move(a)); }
inline Expr log(Expr a) { return apply(Fn::log, std::move(a)); }
inline Expr deriv(int n, Expr a) { return Expr({DerivN{n, std::move(a)}}); }

}  // namespace ex

// Structural equality; constants compare by exact value.
inline bool operator==(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = *b.as<T>();
        if constexpr (std::is_same_v<T, Const>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, Var>) return x.name == y.name;
        else if constexpr (std::is_same_v<T, Neg>) return x.arg == y.arg;
        else if constexpr (std::is_same_v<T, Binary>) return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        else if constexpr (std::is_same_v<T, OplusN>) return x.level == y.level && x.lhs == y.lhs && x.rhs == y.rhs;
        else if constexpr (std::is_same_v<T, InvN>) return x.level == y.level && x.arg == y.arg;
        else if constexpr (std::is_same_v<T, Apply>) return x.fn == y.fn && x.arg == y.arg;
        else return x.level == y.level && x.arg == y.arg;
      },
      a.node().v);
}

namespace detail {

inline void collect_variables(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Var>) out.insert(x.name);
        else if constexpr (std::is_same_v<T, Neg> || std::is_same_v<T, InvN> ||
                           std::is_same_v<T, Apply> || std::is_same_v<T, DerivN>)
          collect_variables(x.arg, out);
        else if constexpr (std::is_same_v<T, Binary> || std::is_same_v<T, OplusN>) {
          collect_variables(x.lhs, out);
          collect_variables(x.rhs, out);
        }
      },
      e.node().v);
}

}  // namespace detail

inline std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  detail::collect_variables(e, out);
  return out;
}

inline bool depends_on(const Expr& e, const std::string& var) {
  return free_variables(e).count(var) > 0;
}

// The variable a univariate operator (D[n], diff) differentiates against:
// z if present, else the sole identifier, else x, else z.
inline std::string default_variable(const Expr& e) {
  auto vars = free_variables(e);
  if (vars.count("z")) return "z";
  if (vars.size() == 1) return *vars.begin();
  if (vars.count("x")) return "x";
  return "z";
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline std::string format_const(const JoinComplex& c) {
  if (c.is_bottom()) return "-inf";
  double re = c.re(), im = c.im();
  if (im == 0.0) {
    if (re == std::numbers::e) return "e";
    if (re == std::numbers::pi) return "pi";
    return format_double(re);
  }
  if (re == 0.0) return im == 1.0 ? "i" : format_double(im) + "i";
  std::string sign = im < 0.0 ? " - " : " + ";
  return "(" + format_double(re) + sign + format_double(std::abs(im)) + "i)";
}

enum Prec { prec_join = 1, prec_sum = 2, prec_term = 3, prec_power = 4, prec_unary = 5, prec_atom = 6 };

inline int binop_prec(BinOp op) {
  switch (op) {
    case BinOp::join: return prec_join;
    case BinOp::add:
    case BinOp::sub: return prec_sum;
    case BinOp::mul:
    case BinOp::div: return prec_term;
    case BinOp::pow: return prec_power;
  }
  return prec_atom;
}

inline std::string_view binop_token(BinOp op) {
  switch (op) {
    case BinOp::add: return " + ";
    case BinOp::sub: return " - ";
    case BinOp::mul: return "*";
    case BinOp::div: return "/";
    case BinOp::pow: return "^";
    case BinOp::join: return " \\/ ";
  }
  return "?";
}

inline int precedence(const Expr& e) {
  if (auto* b = e.as<Binary>()) return binop_prec(b->op);
  if (e.as<Neg>()) return prec_unary;
  if (auto* c = e.as<Const>()) {
    std::string s = format_const(c->value);
    if (s.front() == '-') return prec_unary;
    if (s.front() == '(') return prec_sum;
  }
  return prec_atom;
}

// True when the printed constant is a bare numeric literal that a leading
// minus would fold into.
inline bool prints_as_unsigned_literal(const Expr& e) {
  auto* c = e.as<Const>();
  if (!c) return false;
  std::string s = format_const(c->value);
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.');
}

inline std::string print_impl(const Expr& e);

inline std::string wrap(const Expr& e, bool paren) {
  std::string s = print_impl(e);
  return paren ? "(" + s + ")" : s;
}

inline std::string print_impl(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const>) {
          return format_const(x.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Neg>) {
          bool paren = precedence(x.arg) < prec_unary || prints_as_unsigned_literal(x.arg);
          return "-" + wrap(x.arg, paren);
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = binop_prec(x.op);
          bool lp, rp;
          if (x.op == BinOp::pow) {
            lp = precedence(x.lhs) <= p;
            rp = precedence(x.rhs) < p;
          } else {
            lp = precedence(x.lhs) < p;
            rp = precedence(x.rhs) <= p;
          }
          return wrap(x.lhs, lp) + std::string(binop_token(x.op)) + wrap(x.rhs, rp);
        } else if constexpr (std::is_same_v<T, OplusN>) {
          return "oplus[" + std::to_string(x.level) + "](" + print_impl(x.lhs) + ", " +
                 print_impl(x.rhs) + ")";
        } else if constexpr (std::is_same_v<T, InvN>) {
          return "inv[" + std::to_string(x.level) + "](" + print_impl(x.arg) + ")";
        } else if constexpr (std::is_same_v<T, Apply>) {
          return std::string(name_of(x.fn)) + "(" + print_impl(x.arg) + ")";
        } else {
          return "D[" + std::to_string(x.level) + "](" + print_impl(x.arg) + ")";
        }
      },
      e.node().v);
}

}  // namespace detail

/// Minimal-parenthesis rendering; parse(to_string(e)) == e for every tree
/// the parser can produce.
inline std::string to_string(const Expr& e) { return detail::print_impl(e); }

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok { number, imag, ident, join, plus, minus, star, slash, caret, lparen, rparen, lbracket, rbracket, comma, end };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::end, start, ""};
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
      return number(start);
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      return {Tok::ident, start, std::string(src_.substr(start, pos_ - start))};
    }
    if (src_.substr(pos_, 2) == "\\/") {
      pos_ += 2;
      return {Tok::join, start, "\\/"};
    }
    if (src_.substr(pos_, 3) == "\xE2\x88\xA8") {
      pos_ += 3;
      return {Tok::join, start, "\xE2\x88\xA8"};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::plus, start, "+"};
      case '-': return {Tok::minus, start, "-"};
      case '*': return {Tok::star, start, "*"};
      case '/': return {Tok::slash, start, "/"};
      case '^': return {Tok::caret, start, "^"};
      case '(': return {Tok::lparen, start, "("};
      case ')': return {Tok::rparen, start, ")"};
      case '[': return {Tok::lbracket, start, "["};
      case ']': return {Tok::rbracket, start, "]"};
      case ',': return {Tok::comma, start, ","};
      default: break;
    }
    throw parse_error(start, "a token", std::string(1, c));
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits();
      else
        pos_ = save;  // "2e" is the number 2 followed by the identifier e
    }
    std::string_view lexeme = src_.substr(start, pos_ - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
    if (ec != std::errc() || ptr != lexeme.data() + lexeme.size() || !std::isfinite(v))
      throw parse_error(start, "a finite number", std::string(lexeme));
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
      ++pos_;
      return {Tok::imag, start, std::string(src_.substr(start, pos_ - start)), v};
    }
    return {Tok::number, start, std::string(lexeme), v};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  Expr parse_all() {
    Expr e = parse_join();
    if (tok_.kind != Tok::end) throw parse_error(tok_.pos, "an operator or end of input", tok_.text);
    return e;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) throw parse_error(tok_.pos, what, tok_.text);
    advance();
  }

  bool at_join() const {
    return tok_.kind == Tok::join || (tok_.kind == Tok::ident && tok_.text == "v");
  }

  Expr parse_join() {
    Expr lhs = parse_sum();
    while (at_join()) {
      advance();
      lhs = ex::join(lhs, parse_sum());
    }
    return lhs;
  }

  Expr parse_sum() {
    Expr lhs = parse_term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      BinOp op = tok_.kind == Tok::plus ? BinOp::add : BinOp::sub;
      advance();
      lhs = ex::binary(op, lhs, parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_power();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      BinOp op = tok_.kind == Tok::star ? BinOp::mul : BinOp::div;
      advance();
      lhs = ex::binary(op, lhs, parse_power());
    }
    return lhs;
  }

  Expr parse_power() {
    Expr base = parse_unary();
    if (tok_.kind == Tok::caret) {
      advance();
      return ex::pow(base, parse_power());
    }
    return base;
  }

  Expr parse_unary() {
    if (tok_.kind != Tok::minus) return parse_primary();
    advance();
    if (tok_.kind == Tok::number) {
      double v = tok_.number;
      advance();
      return ex::num(-v);
    }
    if (tok_.kind == Tok::imag) {
      double v = tok_.number;
      advance();
      return ex::num(0.0, -v);
    }
    if (tok_.kind == Tok::ident && tok_.text == "inf") {
      advance();
      return ex::bottom();
    }
    return ex::neg(parse_unary());
  }

  int parse_level() {
    expect(Tok::lbracket, "'['");
    bool negative = false;
    if (tok_.kind == Tok::minus) {
      negative = true;
      advance();
    }
    if (tok_.kind != Tok::number || tok_.number != std::floor(tok_.number))
      throw parse_error(tok_.pos, "an integer level", tok_.text);
    double v = negative ? -tok_.number : tok_.number;
    if (v < hard_level_min || v > hard_level_max)
      throw parse_error(tok_.pos, "a level in [-8, 8]", tok_.text);
    advance();
    expect(Tok::rbracket, "']'");
    return static_cast<int>(v);
  }

  Expr parse_parenthesized() {
    expect(Tok::lparen, "'('");
    Expr e = parse_join();
    expect(Tok::rparen, "')'");
    return e;
  }

  Expr parse_primary() {
    Token t = tok_;
    switch (t.kind) {
      case Tok::number: advance(); return ex::num(t.number);
      case Tok::imag: advance(); return ex::num(0.0, t.number);
      case Tok::lparen: return parse_parenthesized();
      case Tok::ident: break;
      default: throw parse_error(t.pos, "an expression", t.text);
    }
    advance();
    const std::string& id = t.text;
    if (id == "i") return ex::num(0.0, 1.0);
    if (id == "e") return ex::num(std::numbers::e);
    if (id == "pi") return ex::num(std::numbers::pi);
    if (id == "inf") throw parse_error(t.pos, "an expression ('inf' is only valid as -inf)", id);
    if (auto fn = function_named(id)) return ex::apply(*fn, parse_parenthesized());
    if (id == "oplus") {
      int n = parse_level();
      expect(Tok::lparen, "'('");
      Expr a = parse_join();
      expect(Tok::comma, "','");
      Expr b = parse_join();
      expect(Tok::rparen, "')'");
      return ex::oplus(n, a, b);
    }
    if (id == "inv") {
      int n = parse_level();
      return ex::inv(n, parse_parenthesized());
    }
    if (id == "D") {
      int n = parse_level();
      return ex::deriv(n, parse_parenthesized());
    }
    return ex::var(id);
  }

  Lexer lex_;
  Token tok_{Tok::end, 0, ""};
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace opchain
