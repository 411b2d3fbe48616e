#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "isobar/chars.hpp"
#include "isobar/errors.hpp"
#include "isobar/rep.hpp"

namespace isobar {

enum class Tri { Yes, No, Unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

enum class PolyType { Dihedral, Tetrahedral, Octahedral, NonSolvable };

inline const char* to_string(PolyType t) {
  switch (t) {
    case PolyType::Dihedral: return "dihedral";
    case PolyType::Tetrahedral: return "tetrahedral";
    case PolyType::Octahedral: return "octahedral";
    default: return "non-solvable";
  }
}

struct Fact {
  enum Kind {
    Iso, NotIso,            // a ~ b as keys
    TwistEq, NotTwistEq,    // a, b atoms (or keys); via = witness when known
    Cuspidal, NotCuspidal,  // a = rep key
    SelfDual, NotSelfDual,  // a = rep key
    Poly, NotPoly,          // a = atom; ptype; dihedral carries (field, chi)
    MonomialVia,            // a = rep key; via = the fixing character
    CharTrivial, CharNotTrivial,  // via = the character
    CharOrder,              // via; order
    Assumption,             // name
  };

  Kind kind;
  std::string a, b;
  CharExpr via;
  bool has_via = false;
  PolyType ptype = PolyType::Dihedral;
  std::string ind_field;  // dihedral: inducing quadratic extension
  std::string ind_char;   // dihedral: inducing character atom on ind_field
  int order = 0;
  std::string name;       // assumption flag
  std::string provenance; // rule id or "user axiom"

  // Identity key: provenance and the twist-eq witness are not part of it, so
  // re-deriving a fact through a second rule is a no-op.
  std::string id() const {
    std::string s = std::to_string(int(kind)) + "|" + a + "|" + b;
    switch (kind) {
      case MonomialVia: case CharTrivial: case CharNotTrivial:
        s += "|" + via.key();
        break;
      case CharOrder:
        s += "|" + via.key() + "|" + std::to_string(order);
        break;
      case Poly: case NotPoly:
        s += "|" + std::string(to_string(ptype));
        break;
      case Assumption:
        s += "|" + name;
        break;
      default:
        break;
    }
    return s;
  }

  bool operator<(const Fact& o) const { return id() < o.id(); }
};

namespace factmk {
inline Fact sym2(const std::string& a, const std::string& b, Fact::Kind k) {
  Fact f; f.kind = k;
  f.a = std::min(a, b); f.b = std::max(a, b);
  return f;
}
inline Fact iso(const std::string& a, const std::string& b) { return sym2(a, b, Fact::Iso); }
inline Fact not_iso(const std::string& a, const std::string& b) { return sym2(a, b, Fact::NotIso); }
inline Fact twist_eq(const std::string& a, const std::string& b,
                     std::optional<CharExpr> via = std::nullopt) {
  Fact f = sym2(a, b, Fact::TwistEq);
  if (via) { f.via = *via; f.has_via = true; }
  return f;
}
inline Fact not_twist_eq(const std::string& a, const std::string& b) { return sym2(a, b, Fact::NotTwistEq); }
inline Fact unary(Fact::Kind k, const std::string& a) { Fact f; f.kind = k; f.a = a; return f; }
inline Fact poly(const std::string& atom, PolyType t, std::string fld = "",
                 std::string chi = "") {
  Fact f; f.kind = Fact::Poly; f.a = atom; f.ptype = t;
  f.ind_field = std::move(fld); f.ind_char = std::move(chi);
  return f;
}
inline Fact not_poly(const std::string& atom, PolyType t) {
  Fact f; f.kind = Fact::NotPoly; f.a = atom; f.ptype = t;
  return f;
}
inline Fact monomial_via(const std::string& key, const CharExpr& via) {
  Fact f; f.kind = Fact::MonomialVia; f.a = key; f.via = via; f.has_via = true;
  return f;
}
inline Fact char_fact(Fact::Kind k, const CharExpr& c) {
  Fact f; f.kind = k; f.via = c; f.has_via = true;
  return f;
}
inline Fact char_order(const CharExpr& c, int n) {
  Fact f; f.kind = Fact::CharOrder; f.via = c; f.has_via = true; f.order = n;
  return f;
}
inline Fact assumption(const std::string& name) {
  Fact f; f.kind = Fact::Assumption; f.name = name;
  return f;
}
}  // namespace factmk

std::string describe(const Fact& f);

// The fact set, closed under the inference rules C1-C8. Values are immutable:
// assert_fact and closure return new environments.
class HypothesisEnv {
 public:
  HypothesisEnv() = default;

  const std::set<Fact>& facts() const { return facts_; }
  bool closed() const { return closed_; }

  HypothesisEnv assert_fact(const Symtab& st, Fact f) const {
    if (f.provenance.empty()) f.provenance = "user axiom";
    HypothesisEnv r = *this;
    r.closed_ = false;
    r.insert(st, std::move(f));
    return r;
  }

  HypothesisEnv closure(const Symtab& st) const {
    HypothesisEnv r = *this;
    r.close(st);
    return r;
  }

  // --- queries -----------------------------------------------------------

  bool has(const Fact& f) const { return facts_.count(f) != 0; }

  Tri query_pair(const Symtab& st, Fact::Kind yes, Fact::Kind no,
                 const std::string& a, const std::string& b) const {
    if (has(factmk::sym2(a, b, yes))) return Tri::Yes;
    if (has(factmk::sym2(a, b, no))) return Tri::No;
    return Tri::Unknown;
  }

  Tri query_twist_eq(const Symtab& st, const std::string& a,
                     const std::string& b) const {
    if (a == b) return Tri::Yes;
    return query_pair(st, Fact::TwistEq, Fact::NotTwistEq, a, b);
  }

  // Witness character for a known twist-equivalence, if one was recorded.
  std::optional<CharExpr> twist_eq_via(const std::string& a,
                                       const std::string& b) const {
    Fact probe = factmk::twist_eq(a, b);
    auto it = facts_.find(probe);
    if (it == facts_.end() || !it->has_via) return std::nullopt;
    // via is recorded as: min(a,b)-subject twisted by via gives the other.
    return it->via;
  }

  Tri query_cuspidal_key(const std::string& key) const {
    Fact y = factmk::unary(Fact::Cuspidal, key);
    Fact n = factmk::unary(Fact::NotCuspidal, key);
    if (has(y)) return Tri::Yes;
    if (has(n)) return Tri::No;
    return Tri::Unknown;
  }

  Tri query_self_dual_key(const std::string& key) const {
    Fact y = factmk::unary(Fact::SelfDual, key);
    Fact n = factmk::unary(Fact::NotSelfDual, key);
    if (has(y)) return Tri::Yes;
    if (has(n)) return Tri::No;
    return Tri::Unknown;
  }

  Tri query_poly(const std::string& atom, PolyType t) const {
    for (const auto& f : facts_) {
      if (f.kind == Fact::Poly && f.a == atom)
        return f.ptype == t ? Tri::Yes : Tri::No;
    }
    if (has(factmk::not_poly(atom, t))) return Tri::No;
    return Tri::Unknown;
  }

  std::optional<PolyType> poly_of(const std::string& atom) const {
    for (const auto& f : facts_)
      if (f.kind == Fact::Poly && f.a == atom) return f.ptype;
    return std::nullopt;
  }

  // Dihedral inducing data (K, chi) if declared.
  std::optional<std::pair<std::string, std::string>> dihedral_data(
      const std::string& atom) const {
    for (const auto& f : facts_)
      if (f.kind == Fact::Poly && f.a == atom &&
          f.ptype == PolyType::Dihedral && !f.ind_field.empty())
        return std::make_pair(f.ind_field, f.ind_char);
    return std::nullopt;
  }

  // Is key known monomial via the character c?
  Tri query_monomial_via(const Symtab& st, const std::string& key,
                         const CharExpr& c) const {
    if (has(factmk::monomial_via(key, c))) return Tri::Yes;
    return Tri::Unknown;
  }

  std::vector<CharExpr> monomial_witnesses(const std::string& key) const {
    std::vector<CharExpr> out;
    for (const auto& f : facts_)
      if (f.kind == Fact::MonomialVia && f.a == key) out.push_back(f.via);
    return out;
  }

  // Triviality of a character: syntactic, then atom-order arithmetic, then
  // declared facts (checked on the expression and its inverse).
  Tri query_char_trivial(const Symtab& st, const CharExpr& c) const {
    if (c.is_syntactically_trivial()) return Tri::Yes;
    int ord = c.order(st);
    if (ord == 1) return Tri::Yes;
    if (ord > 1) return Tri::No;
    for (const CharExpr& probe : {c, c.inverse(st)}) {
      if (has(factmk::char_fact(Fact::CharTrivial, probe))) return Tri::Yes;
      if (has(factmk::char_fact(Fact::CharNotTrivial, probe))) return Tri::No;
      for (const auto& f : facts_)
        if (f.kind == Fact::CharOrder && f.via == probe)
          return f.order == 1 ? Tri::Yes : Tri::No;
    }
    return Tri::Unknown;
  }

  Tri query_char_eq(const Symtab& st, const CharExpr& a,
                    const CharExpr& b) const {
    return query_char_trivial(st, a.times(st, b.inverse(st)));
  }

  // Real means quadratic or trivial.
  Tri query_char_real(const Symtab& st, const CharExpr& c) const {
    int ord = c.order(st);
    if (ord == 1 || ord == 2) return Tri::Yes;
    if (ord > 2) return Tri::No;
    for (const CharExpr& probe : {c, c.inverse(st)}) {
      for (const auto& f : facts_)
        if (f.kind == Fact::CharOrder && f.via == probe)
          return f.order <= 2 ? Tri::Yes : Tri::No;
    }
    return query_char_trivial(st, c.pow(st, 2));
  }

  bool assumed(const std::string& name) const {
    return has(factmk::assumption(name));
  }

  std::vector<std::string> assumptions() const {
    std::vector<std::string> out;
    for (const auto& f : facts_)
      if (f.kind == Fact::Assumption) out.push_back(f.name);
    return out;
  }

 private:
  static std::optional<Fact::Kind> negation_of(Fact::Kind k) {
    switch (k) {
      case Fact::Iso: return Fact::NotIso;
      case Fact::NotIso: return Fact::Iso;
      case Fact::TwistEq: return Fact::NotTwistEq;
      case Fact::NotTwistEq: return Fact::TwistEq;
      case Fact::Cuspidal: return Fact::NotCuspidal;
      case Fact::NotCuspidal: return Fact::Cuspidal;
      case Fact::SelfDual: return Fact::NotSelfDual;
      case Fact::NotSelfDual: return Fact::SelfDual;
      case Fact::CharTrivial: return Fact::CharNotTrivial;
      case Fact::CharNotTrivial: return Fact::CharTrivial;
      default: return std::nullopt;
    }
  }

  void check_consistent(const Symtab& st, const Fact& f) const {
    if (auto neg = negation_of(f.kind)) {
      Fact n = f;
      n.kind = *neg;
      auto it = facts_.find(n);
      if (it != facts_.end())
        throw inconsistency_error(describe(f), describe(*it));
    }
    if (f.kind == Fact::TwistEq && f.has_via) {
      // TwistEq via trivial is Iso; clash with NotIso.
      // (handled by closure inserting Iso, checked here for direct asserts)
    }
    if (f.kind == Fact::Poly) {
      if (auto t = poly_of(f.a); t && *t != f.ptype) {
        Fact other = factmk::poly(f.a, *t);
        throw inconsistency_error(describe(f), describe(*facts_.find(other)));
      }
      if (has(factmk::not_poly(f.a, f.ptype))) {
        throw inconsistency_error(describe(f),
                                  describe(factmk::not_poly(f.a, f.ptype)));
      }
    }
    if (f.kind == Fact::NotPoly) {
      if (auto t = poly_of(f.a); t && *t == f.ptype)
        throw inconsistency_error(describe(f), describe(factmk::poly(f.a, *t)));
    }
  }

  bool insert(const Symtab& st, Fact f) {
    check_consistent(st, f);
    return facts_.insert(std::move(f)).second;
  }

  void close(const Symtab& st);

  std::set<Fact> facts_;
  bool closed_ = false;

  friend class ClosureEngine;
};

}  // namespace isobar

#include "isobar/facts_closure.hpp"
