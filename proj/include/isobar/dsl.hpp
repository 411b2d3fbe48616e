#pragma once

// Text surface: expressions, declarations, facts, and derivation scripts.
//
// Expression grammar (ASCII mapping of the usual notation):
//   expr    := term   ( "(+)" term )*                  direct sum
//   term    := factor ( "(x)" factor )*                Rankin-Selberg product
//   factor  := unary  ( "*"  unary )*                  twist / char product
//   unary   := "~" unary | postfix
//   postfix := primary ( "^" (int | "theta"+int?) )*   char powers, Galois
//   primary := "Sym[" k "](" expr ")" | "Ad(" expr ")" | "A3(" expr ")"
//            | "A4(" expr ")" | "BC[" K "](" expr ")" | "Ind[" K "](" expr ")"
//            | "(" expr ")" | "1" | identifier
// "(+)" and "(x)" are single tokens (no interior spaces); "#" starts a line
// comment. Twist binds tighter than (x), which binds tighter than (+).

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "isobar/facts.hpp"
#include "isobar/rep.hpp"

namespace isobar::dsl {

struct Token {
  enum Kind { Ident, Int, LParen, RParen, LBrack, RBrack, BoxPlus, BoxTimes,
              Star, Tilde, Caret, Comma, Semicolon, End } kind;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\n') { ++line_; col_ = 1; ++pos_; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++pos_; ++col_; continue; }
      break;
    }
    if (pos_ >= src_.size()) {
      tok_ = {Token::End, "", line_, col_};
      return;
    }
    int line = line_, col = col_;
    char c = src_[pos_];
    auto mk = [&](Token::Kind k, std::string s) {
      pos_ += s.size();
      col_ += int(s.size());
      tok_ = {k, std::move(s), line, col};
    };
    if (c == '(') {
      if (pos_ + 2 < src_.size() && src_[pos_ + 2] == ')') {
        if (src_[pos_ + 1] == '+') return mk(Token::BoxPlus, "(+)");
        if (src_[pos_ + 1] == 'x') return mk(Token::BoxTimes, "(x)");
      }
      return mk(Token::LParen, "(");
    }
    switch (c) {
      case ')': return mk(Token::RParen, ")");
      case '[': return mk(Token::LBrack, "[");
      case ']': return mk(Token::RBrack, "]");
      case '*': return mk(Token::Star, "*");
      case '~': return mk(Token::Tilde, "~");
      case '^': return mk(Token::Caret, "^");
      case ',': return mk(Token::Comma, ",");
      case ';': return mk(Token::Semicolon, ";");
      default: break;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      size_t e = pos_ + 1;
      while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e])))
        ++e;
      return mk(Token::Int, src_.substr(pos_, e - pos_));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t e = pos_;
      while (e < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[e])) ||
              src_[e] == '_'))
        ++e;
      return mk(Token::Ident, src_.substr(pos_, e - pos_));
    }
    throw parse_error(std::string("unexpected character '") + c + "'", line, col);
  }

  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// Parses expressions against a declaration table; identifiers must resolve
// to declared atoms or characters.
class ExprParser {
 public:
  ExprParser(const Symtab& st, std::string src, std::string ground)
      : st_(st), lex_(std::move(src)), ground_(std::move(ground)) {}

  Rep parse_expr() {
    Rep r = parse_term();
    while (lex_.peek().kind == Token::BoxPlus) {
      lex_.next();
      r = make_boxplus(r, parse_term());
    }
    return r;
  }

  bool at_end() const { return lex_.peek().kind == Token::End; }
  const Token& peek() const { return lex_.peek(); }

  CharExpr parse_char() {
    Rep e = parse_expr();
    CharExpr c = char_of(e);
    return c;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& want) {
    throw parse_error("expected " + want + ", found '" +
                          (t.kind == Token::End ? "<end>" : t.text) + "'",
                      t.line, t.col);
  }

  CharExpr char_of(const Rep& e) {
    if (e->kind == RepExpr::CharK) return e->chr;
    if (e->kind == RepExpr::TwistK) {
      CharExpr inner = char_of(e->a);
      return inner.times(st_, e->chr);
    }
    throw parse_error("expected a character expression", 1, 1);
  }

  Rep parse_term() {
    Rep r = parse_factor();
    while (lex_.peek().kind == Token::BoxTimes) {
      lex_.next();
      r = make_boxtimes(r, parse_factor());
    }
    return r;
  }

  Rep parse_factor() {
    Rep r = parse_unary();
    while (lex_.peek().kind == Token::Star) {
      lex_.next();
      Rep rhs = parse_unary();
      if (r->kind == RepExpr::CharK && rhs->kind != RepExpr::CharK) {
        r = make_twist(st_, rhs, r->chr);
      } else if (rhs->kind == RepExpr::CharK) {
        if (r->kind == RepExpr::CharK)
          r = make_char(r->chr.times(st_, rhs->chr));
        else
          r = make_twist(st_, r, rhs->chr);
      } else {
        fail(lex_.peek(), "a character on one side of '*'");
      }
    }
    return r;
  }

  Rep parse_unary() {
    if (lex_.peek().kind == Token::Tilde) {
      lex_.next();
      return make_dual(parse_unary());
    }
    return parse_postfix();
  }

  Rep parse_postfix() {
    Rep r = parse_primary();
    while (lex_.peek().kind == Token::Caret) {
      lex_.next();
      Token t = lex_.next();
      if (r->kind != RepExpr::CharK)
        fail(t, "'^' on a character expression");
      if (t.kind == Token::Ident && t.text.rfind("theta", 0) == 0) {
        int j = t.text.size() > 5 ? std::stoi(t.text.substr(5)) : 1;
        r = make_char(r->chr.galois(st_, j));
      } else if (t.kind == Token::Int) {
        r = make_char(r->chr.pow(st_, std::stoi(t.text)));
      } else {
        fail(t, "an exponent or 'theta'");
      }
    }
    return r;
  }

  std::string bracket_arg() {
    Token t = lex_.next();
    if (t.kind != Token::LBrack) fail(t, "'['");
    Token n = lex_.next();
    if (n.kind != Token::Ident && n.kind != Token::Int) fail(n, "a name");
    Token c = lex_.next();
    if (c.kind != Token::RBrack) fail(c, "']'");
    return n.text;
  }

  Rep paren_arg() {
    Token t = lex_.next();
    if (t.kind != Token::LParen) fail(t, "'('");
    Rep r = parse_expr();
    Token c = lex_.next();
    if (c.kind != Token::RParen) fail(c, "')'");
    return r;
  }

  Rep parse_primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::LParen) {
      lex_.next();
      Rep r = parse_expr();
      Token c = lex_.next();
      if (c.kind != Token::RParen) fail(c, "')'");
      return r;
    }
    if (t.kind == Token::Int && t.text == "1") {
      lex_.next();
      return make_trivial(ground_);
    }
    if (t.kind != Token::Ident) fail(t, "an expression");
    Token id = lex_.next();
    if (id.text == "Sym") {
      std::string k = bracket_arg();
      return make_sym(std::stoi(k), paren_arg());
    }
    if (id.text == "Ad") return make_ad(paren_arg());
    if (id.text == "A3") return make_a3(paren_arg());
    if (id.text == "A4") return make_a4(paren_arg());
    if (id.text == "BC") {
      std::string K = bracket_arg();
      return make_base_change(st_, K, paren_arg());
    }
    if (id.text == "Ind") {
      std::string K = bracket_arg();
      Rep inner = paren_arg();
      return make_induce(st_, st_.field(K).base, inner);
    }
    if (st_.atoms.count(id.text)) return make_atom(st_, id.text);
    if (st_.chars.count(id.text))
      return make_char(CharExpr::atom(st_, id.text));
    throw parse_error("undeclared identifier: " + id.text, id.line, id.col);
  }

  const Symtab& st_;
  Lexer lex_;
  std::string ground_;
};

inline Rep parse_expr(const Symtab& st, const std::string& src,
                      const std::string& ground) {
  ExprParser p(st, src, ground);
  Rep r = p.parse_expr();
  if (!p.at_end())
    throw parse_error("trailing input after expression", p.peek().line, p.peek().col);
  return r;
}

inline CharExpr parse_char(const Symtab& st, const std::string& src,
                           const std::string& ground) {
  ExprParser p(st, src, ground);
  CharExpr c = p.parse_char();
  if (!p.at_end())
    throw parse_error("trailing input after character expression", p.peek().line, p.peek().col);
  return c;
}

// --- pretty printer --------------------------------------------------------

inline std::string print_char(const CharExpr& c) {
  if (c.is_syntactically_trivial()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, x] : c.factors()) {
    if (!first) os << " * ";
    first = false;
    os << k.atom;
    for (const auto& s : k.path)
      os << (s.kind == CharStep::Restrict ? "|" : "!") << s.field;
    if (k.theta_pow) os << "^theta" << (k.theta_pow > 1 ? std::to_string(k.theta_pow) : "");
    if (x != 1) os << "^" << x;
  }
  return os.str();
}

// prec: 0 = sum context, 1 = product context, 2 = twist context
inline void print_rep(std::ostream& os, const Rep& e, int prec) {
  auto wrap = [&](int inner, auto&& body) {
    bool paren = inner < prec;
    if (paren) os << "(";
    body();
    if (paren) os << ")";
  };
  switch (e->kind) {
    case RepExpr::AtomK: os << e->atom; break;
    case RepExpr::CharK: {
      std::string s = print_char(e->chr);
      bool multi = s.find(' ') != std::string::npos;
      if (multi && prec >= 2) os << "(" << s << ")";
      else os << s;
      break;
    }
    case RepExpr::TwistK:
      wrap(2, [&] {
        print_rep(os, e->a, 2);
        os << " * ";
        std::string s = print_char(e->chr);
        os << s;
      });
      break;
    case RepExpr::DualK:
      os << "~";
      print_rep(os, e->a, 3);
      break;
    case RepExpr::BoxPlusK:
      wrap(0, [&] {
        print_rep(os, e->a, 0);
        os << " (+) ";
        print_rep(os, e->b, 1);
      });
      break;
    case RepExpr::BoxTimesK:
      wrap(1, [&] {
        print_rep(os, e->a, 1);
        os << " (x) ";
        print_rep(os, e->b, 2);
      });
      break;
    case RepExpr::SymK:
      os << "Sym[" << e->sym_k << "](";
      print_rep(os, e->a, 0);
      os << ")";
      break;
    case RepExpr::AdK:
      os << "Ad(";
      print_rep(os, e->a, 0);
      os << ")";
      break;
    case RepExpr::A3K:
      os << "A3(";
      print_rep(os, e->a, 0);
      os << ")";
      break;
    case RepExpr::A4K:
      os << "A4(";
      print_rep(os, e->a, 0);
      os << ")";
      break;
    case RepExpr::BaseChangeK:
      os << "BC[" << e->target_field << "](";
      print_rep(os, e->a, 0);
      os << ")";
      break;
    case RepExpr::InduceK:
      os << "Ind[" << e->a->field << "](";
      print_rep(os, e->a, 0);
      os << ")";
      break;
  }
}

inline std::string print_rep(const Rep& e) {
  std::ostringstream os;
  print_rep(os, e, 0);
  return os.str();
}

}  // namespace isobar::dsl
