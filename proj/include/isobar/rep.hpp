#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "isobar/chars.hpp"
#include "isobar/errors.hpp"

namespace isobar {

// Expression tree over the representation calculus. Nodes are immutable and
// shared; degree and field are computed at construction so malformed shapes
// (Sym of a non-GL2 operand, base change to a non-extension, ...) fail early.
class RepExpr;
using Rep = std::shared_ptr<const RepExpr>;

class RepExpr {
 public:
  enum Kind {
    AtomK,       // cuspidal atom pi
    CharK,       // CharRep(chi); TrivialRep is CharRep(1)
    TwistK,      // e (x) chi
    DualK,       // ~e
    BoxPlusK,    // e (+) f
    BoxTimesK,   // e (x) f
    SymK,        // Sym[k](pi-expr), operand degree 2; k >= 5 is opaque
    AdK, A3K, A4K,
    BaseChangeK, // BC[K](e), K extends field of e
    InduceK,     // Ind[F](e), field of e extends F with prime degree
  };

  Kind kind;
  std::string atom;             // AtomK
  CharExpr chr;                 // CharK payload / TwistK character
  Rep a, b;                     // children
  int sym_k = 0;                // SymK
  std::string target_field;     // BaseChangeK / InduceK target

  int degree = 0;
  std::string field;

  static Rep make_atom(const Symtab& st, const std::string& name) {
    auto r = std::make_shared<RepExpr>();
    const auto& info = st.atom(name);
    r->kind = AtomK; r->atom = name;
    r->degree = info.degree; r->field = info.field;
    return r;
  }
  static Rep make_char(const CharExpr& c) {
    auto r = std::make_shared<RepExpr>();
    r->kind = CharK; r->chr = c; r->degree = 1; r->field = c.field();
    return r;
  }
  static Rep make_trivial(const std::string& field) {
    return make_char(CharExpr::trivial(field));
  }
  static Rep make_twist(const Symtab& st, const Rep& e, const CharExpr& c) {
    if (!c.field().empty() && c.field() != e->field)
      throw structural_error("twist character lives on " + c.field() +
                             ", operand on " + e->field);
    if (c.is_syntactically_trivial()) return e;
    if (e->kind == CharK) return make_char(e->chr.times(st, c));
    if (e->kind == TwistK) return make_twist(st, e->a, e->chr.times(st, c));
    auto r = std::make_shared<RepExpr>();
    r->kind = TwistK; r->a = e; r->chr = c;
    r->degree = e->degree; r->field = e->field;
    return r;
  }
  static Rep make_dual(const Rep& e) {
    auto r = std::make_shared<RepExpr>();
    r->kind = DualK; r->a = e; r->degree = e->degree; r->field = e->field;
    return r;
  }
  static Rep make_boxplus(const Rep& x, const Rep& y) {
    require_same_field(x, y, "(+)");
    auto r = std::make_shared<RepExpr>();
    r->kind = BoxPlusK; r->a = x; r->b = y;
    r->degree = x->degree + y->degree; r->field = x->field;
    return r;
  }
  static Rep make_boxtimes(const Rep& x, const Rep& y) {
    require_same_field(x, y, "(x)");
    auto r = std::make_shared<RepExpr>();
    r->kind = BoxTimesK; r->a = x; r->b = y;
    r->degree = x->degree * y->degree; r->field = x->field;
    return r;
  }
  static Rep make_sym(int k, const Rep& e) {
    require_gl2(e, "Sym");
    if (k < 2) throw structural_error("Sym[k] needs k >= 2");
    auto r = std::make_shared<RepExpr>();
    r->kind = SymK; r->sym_k = k; r->a = e;
    r->degree = k + 1; r->field = e->field;
    return r;
  }
  static Rep make_ad(const Rep& e) {
    require_gl2(e, "Ad");
    auto r = std::make_shared<RepExpr>();
    r->kind = AdK; r->a = e; r->degree = 3; r->field = e->field;
    return r;
  }
  static Rep make_a3(const Rep& e) {
    require_gl2(e, "A3");
    auto r = std::make_shared<RepExpr>();
    r->kind = A3K; r->a = e; r->degree = 4; r->field = e->field;
    return r;
  }
  static Rep make_a4(const Rep& e) {
    require_gl2(e, "A4");
    auto r = std::make_shared<RepExpr>();
    r->kind = A4K; r->a = e; r->degree = 5; r->field = e->field;
    return r;
  }
  static Rep make_base_change(const Symtab& st, const std::string& K,
                              const Rep& e) {
    if (st.field(K).base != e->field)
      throw structural_error("BC[" + K + "] applied to a representation on " +
                             e->field);
    auto r = std::make_shared<RepExpr>();
    r->kind = BaseChangeK; r->a = e; r->target_field = K;
    r->degree = e->degree; r->field = K;
    return r;
  }
  static Rep make_induce(const Symtab& st, const std::string& F,
                         const Rep& e) {
    const auto& src = st.field(e->field);
    if (src.base != F)
      throw structural_error("Ind[" + F + "] applied to a representation on " +
                             e->field + " which does not extend it directly");
    auto r = std::make_shared<RepExpr>();
    r->kind = InduceK; r->a = e; r->target_field = F;
    r->degree = e->degree * src.ext_degree; r->field = F;
    return r;
  }

 private:
  static void require_same_field(const Rep& x, const Rep& y, const char* op) {
    if (x->field != y->field)
      throw structural_error(std::string(op) + " across fields: " + x->field +
                             " vs " + y->field);
  }
  static void require_gl2(const Rep& e, const char* op) {
    if (e->degree != 2)
      throw structural_error(std::string(op) +
                             " applied to an operand of degree " +
                             std::to_string(e->degree));
  }
};

inline Rep make_atom(const Symtab& st, const std::string& n) { return RepExpr::make_atom(st, n); }
inline Rep make_char(const CharExpr& c) { return RepExpr::make_char(c); }
inline Rep make_trivial(const std::string& f) { return RepExpr::make_trivial(f); }
inline Rep make_twist(const Symtab& st, const Rep& e, const CharExpr& c) { return RepExpr::make_twist(st, e, c); }
inline Rep make_dual(const Rep& e) { return RepExpr::make_dual(e); }
inline Rep make_boxplus(const Rep& x, const Rep& y) { return RepExpr::make_boxplus(x, y); }
inline Rep make_boxtimes(const Rep& x, const Rep& y) { return RepExpr::make_boxtimes(x, y); }
inline Rep make_sym(int k, const Rep& e) { return RepExpr::make_sym(k, e); }
inline Rep make_ad(const Rep& e) { return RepExpr::make_ad(e); }
inline Rep make_a3(const Rep& e) { return RepExpr::make_a3(e); }
inline Rep make_a4(const Rep& e) { return RepExpr::make_a4(e); }
inline Rep make_base_change(const Symtab& st, const std::string& K, const Rep& e) { return RepExpr::make_base_change(st, K, e); }
inline Rep make_induce(const Symtab& st, const std::string& F, const Rep& e) { return RepExpr::make_induce(st, F, e); }

inline int degree(const Rep& e) { return e->degree; }

// Central character, computed structurally. For a GL2 atom pi with central
// character w: w(Sym^k pi) = w^{k(k+1)/2}, so Ad and A4 have trivial central
// character and A3 has w^2.
inline CharExpr central_character(const Symtab& st, const Rep& e) {
  switch (e->kind) {
    case RepExpr::AtomK:
      return CharExpr::atom(st, st.atom(e->atom).central_char);
    case RepExpr::CharK:
      return e->chr;
    case RepExpr::TwistK:
      return central_character(st, e->a)
          .times(st, e->chr.pow(st, e->degree));
    case RepExpr::DualK:
      return central_character(st, e->a).inverse(st);
    case RepExpr::BoxPlusK:
      return central_character(st, e->a).times(st, central_character(st, e->b));
    case RepExpr::BoxTimesK:
      return central_character(st, e->a).pow(st, e->b->degree)
          .times(st, central_character(st, e->b).pow(st, e->a->degree));
    case RepExpr::SymK: {
      int k = e->sym_k;
      return central_character(st, e->a).pow(st, k * (k + 1) / 2);
    }
    case RepExpr::AdK:
      return CharExpr::trivial(e->field);
    case RepExpr::A3K:
      return central_character(st, e->a).pow(st, 2);
    case RepExpr::A4K:
      return CharExpr::trivial(e->field);
    case RepExpr::BaseChangeK:
      return central_character(st, e->a).restrict_to(st, e->target_field);
    case RepExpr::InduceK: {
      const auto& src = st.field(e->a->field);
      CharExpr eta = src.assoc_char.empty()
                         ? CharExpr::trivial(e->target_field)
                         : CharExpr::atom(st, src.assoc_char);
      return eta.pow(st, e->a->degree)
          .times(st, central_character(st, e->a).transfer_to_base(st));
    }
  }
  throw structural_error("unreachable central_character kind");
}

// Push Dual down to atoms: the contragredient commutes with every functorial
// construction, inverts twists, and cancels against itself. Ad and A4 are
// self-dual; for A3 and Sym^k the GL2 identity dual(pi) = pi (x) w^-1 turns
// the dual of the operand into a twist of the lift.
inline Rep dual_pushdown(const Symtab& st, const Rep& e, bool dualize = false) {
  switch (e->kind) {
    case RepExpr::AtomK:
      return dualize ? RepExpr::make_dual(e) : e;
    case RepExpr::CharK:
      return dualize ? RepExpr::make_char(e->chr.inverse(st)) : e;
    case RepExpr::TwistK:
      return RepExpr::make_twist(st, dual_pushdown(st, e->a, dualize),
                                 dualize ? e->chr.inverse(st) : e->chr);
    case RepExpr::DualK:
      return dual_pushdown(st, e->a, !dualize);
    case RepExpr::BoxPlusK:
      return RepExpr::make_boxplus(dual_pushdown(st, e->a, dualize),
                                   dual_pushdown(st, e->b, dualize));
    case RepExpr::BoxTimesK:
      return RepExpr::make_boxtimes(dual_pushdown(st, e->a, dualize),
                                    dual_pushdown(st, e->b, dualize));
    case RepExpr::SymK: case RepExpr::AdK: case RepExpr::A3K:
    case RepExpr::A4K: {
      // Reduce the GL2 operand to bare form using Ad(pi (x) chi) = Ad(pi),
      // Sym^k(pi (x) chi) = Sym^k(pi) (x) chi^k, and dual(pi) = pi (x) w^-1.
      Rep op = dual_pushdown(st, e->a, dualize);
      CharExpr c = CharExpr::trivial(e->field);
      if (op->kind == RepExpr::TwistK) { c = op->chr; op = op->a; }
      if (op->kind == RepExpr::DualK) {
        c = c.times(st, central_character(st, op->a).inverse(st));
        op = op->a;
      }
      switch (e->kind) {
        case RepExpr::AdK: return RepExpr::make_ad(op);
        case RepExpr::A4K: return RepExpr::make_a4(op);
        case RepExpr::A3K:
          return RepExpr::make_twist(st, RepExpr::make_a3(op), c);
        default:
          return RepExpr::make_twist(st, RepExpr::make_sym(e->sym_k, op),
                                     c.pow(st, e->sym_k));
      }
    }
    case RepExpr::BaseChangeK:
      return RepExpr::make_base_change(st, e->target_field,
                                       dual_pushdown(st, e->a, dualize));
    case RepExpr::InduceK:
      return RepExpr::make_induce(st, e->target_field,
                                  dual_pushdown(st, e->a, dualize));
  }
  throw structural_error("unreachable dual_pushdown kind");
}

namespace detail {
inline void key_rec(const Rep& e, std::ostringstream& os);

inline std::vector<std::string> flat_keys(const Rep& e, RepExpr::Kind k) {
  std::vector<std::string> out;
  if (e->kind == k) {
    auto l = flat_keys(e->a, k), r = flat_keys(e->b, k);
    out.insert(out.end(), l.begin(), l.end());
    out.insert(out.end(), r.begin(), r.end());
  } else {
    std::ostringstream os;
    key_rec(e, os);
    out.push_back(os.str());
  }
  return out;
}

inline void key_rec(const Rep& e, std::ostringstream& os) {
  switch (e->kind) {
    case RepExpr::AtomK: os << e->atom; return;
    case RepExpr::CharK: os << "[" << e->chr.key() << "]"; return;
    case RepExpr::TwistK:
      key_rec(e->a, os);
      os << "@" << e->chr.key();
      return;
    case RepExpr::DualK:
      os << "~";
      key_rec(e->a, os);
      return;
    case RepExpr::BoxPlusK: case RepExpr::BoxTimesK: {
      auto ks = flat_keys(e, e->kind);
      std::sort(ks.begin(), ks.end());
      os << "(";
      for (size_t i = 0; i < ks.size(); ++i)
        os << (i ? (e->kind == RepExpr::BoxPlusK ? "+" : "*") : "") << ks[i];
      os << ")";
      return;
    }
    case RepExpr::SymK:
      os << "Sym" << e->sym_k << "(";
      key_rec(e->a, os);
      os << ")";
      return;
    case RepExpr::AdK: case RepExpr::A3K: case RepExpr::A4K:
      os << (e->kind == RepExpr::AdK ? "Ad(" : e->kind == RepExpr::A3K ? "A3(" : "A4(");
      key_rec(e->a, os);
      os << ")";
      return;
    case RepExpr::BaseChangeK:
      os << "BC[" << e->target_field << "](";
      key_rec(e->a, os);
      os << ")";
      return;
    case RepExpr::InduceK:
      // brackets name the extension the payload lives on, as in I_K^F
      os << "Ind[" << e->a->field << "](";
      key_rec(e->a, os);
      os << ")";
      return;
  }
}
}  // namespace detail

// Deterministic structural key after dual pushdown; box sums and products are
// flattened and sorted so alpha-variant spellings collide.
inline std::string rep_key(const Symtab& st, const Rep& e) {
  std::ostringstream os;
  detail::key_rec(dual_pushdown(st, e), os);
  return os.str();
}

}  // namespace isobar
