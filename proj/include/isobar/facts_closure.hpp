#pragma once

// Closure rules for HypothesisEnv. Split out of facts.hpp because the rules
// need the expression builders of rep.hpp to form normal-form subject keys.

#include <string>
#include <vector>

#include "isobar/facts.hpp"

namespace isobar {

inline std::string describe(const Fact& f) {
  auto pair = [&](const char* rel) { return f.a + " " + rel + " " + f.b; };
  switch (f.kind) {
    case Fact::Iso: return pair("iso");
    case Fact::NotIso: return pair("not-iso");
    case Fact::TwistEq:
      return pair("twist-eq") + (f.has_via ? " via " + f.via.key() : "");
    case Fact::NotTwistEq: return pair("not-twist-eq");
    case Fact::Cuspidal: return "cuspidal " + f.a;
    case Fact::NotCuspidal: return "not-cuspidal " + f.a;
    case Fact::SelfDual: return "self-dual " + f.a;
    case Fact::NotSelfDual: return "not-self-dual " + f.a;
    case Fact::Poly:
      return "polytype " + f.a + " " + to_string(f.ptype) +
             (f.ind_field.empty() ? "" : " via " + f.ind_field + "," + f.ind_char);
    case Fact::NotPoly:
      return "not-polytype " + f.a + " " + to_string(f.ptype);
    case Fact::MonomialVia: return "monomial " + f.a + " via " + f.via.key();
    case Fact::CharTrivial: return "char-trivial " + f.via.key();
    case Fact::CharNotTrivial: return "char-not-trivial " + f.via.key();
    case Fact::CharOrder:
      return "char-order " + f.via.key() + " = " + std::to_string(f.order);
    case Fact::Assumption: return "assume " + f.name;
  }
  return "?";
}

// Runs the rule set C1-C8 (plus the equivalence-relation bookkeeping for
// Iso/TwistEq) to a fixpoint. Rules are instantiated over declared atoms
// only; casework scripts assert facts about composites directly by key.
class ClosureEngine {
 public:
  ClosureEngine(const Symtab& st, HypothesisEnv& env) : st_(st), env_(env) {}

  void run() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Fact> snapshot(env_.facts_.begin(), env_.facts_.end());
      changed |= rule_equivalences(snapshot);
      changed |= rule_dual();
      changed |= rule_c1(snapshot);
      changed |= rule_c2_c3_c4();
      changed |= rule_c5();
      changed |= rule_c6();
      changed |= rule_c7();
      changed |= rule_c8();
    }
    env_.closed_ = true;
  }

 private:
  bool add(Fact f, const char* rule) {
    f.provenance = rule;
    return env_.insert(st_, std::move(f));
  }

  // Tri-state: is this declared GL(2) atom known non-dihedral?
  Tri non_dihedral(const std::string& atom) const {
    if (auto t = env_.poly_of(atom))
      return *t == PolyType::Dihedral ? Tri::No : Tri::Yes;
    if (env_.has(factmk::not_poly(atom, PolyType::Dihedral))) return Tri::Yes;
    return Tri::Unknown;
  }

  std::vector<std::string> gl2_atoms() const {
    std::vector<std::string> out;
    for (const auto& [n, a] : st_.atoms)
      if (a.degree == 2) out.push_back(n);
    return out;
  }
  std::vector<std::string> gl3_keys() const {
    std::vector<std::string> out;
    for (const auto& [n, a] : st_.atoms) {
      if (a.degree == 3) out.push_back(rep_key(st_, make_atom(st_, n)));
      if (a.degree == 2)
        out.push_back(rep_key(st_, make_ad(make_atom(st_, n))));
    }
    return out;
  }

  std::string ad_key(const std::string& atom) const {
    return rep_key(st_, make_ad(make_atom(st_, atom)));
  }
  std::string twist_key(const std::string& atom, const CharExpr& c) const {
    return rep_key(st_, make_twist(st_, make_atom(st_, atom), c));
  }

  // Iso/TwistEq are equivalence relations; TwistEq via trivial is Iso;
  // Iso transports NotIso across the class.
  bool rule_equivalences(const std::vector<Fact>& fs) {
    bool ch = false;
    for (const auto& f : fs) {
      if (f.kind == Fact::Iso) ch |= add(factmk::twist_eq(f.a, f.b), "Iso=>TwistEq");
      if (f.kind == Fact::TwistEq && f.has_via &&
          f.via.is_syntactically_trivial())
        ch |= add(factmk::iso(f.a, f.b), "TwistEq(1)=>Iso");
      if (f.kind == Fact::NotTwistEq)
        ch |= add(factmk::not_iso(f.a, f.b), "NotTwistEq=>NotIso");
    }
    for (auto k : {Fact::Iso, Fact::TwistEq}) {
      const char* rule = k == Fact::Iso ? "Iso transitivity" : "TwistEq transitivity";
      for (const auto& f : fs) {
        if (f.kind != k) continue;
        for (const auto& g : fs) {
          if (g.kind != k || f.id() == g.id()) continue;
          std::string c;
          if (g.a == f.a || g.a == f.b) c = g.b;
          else if (g.b == f.a || g.b == f.b) c = g.a;
          else continue;
          std::string other = (g.a == f.a || g.b == f.a) ? f.b : f.a;
          if (c != other) ch |= add(factmk::sym2(other, c, k), rule);
        }
      }
    }
    for (const auto& f : fs) {
      if (f.kind != Fact::Iso) continue;
      for (const auto& g : fs) {
        if (g.kind != Fact::NotIso) continue;
        // a iso b, one of them not-iso c  =>  the other not-iso c
        std::string c, shared;
        if (g.a == f.a || g.a == f.b) { shared = g.a; c = g.b; }
        else if (g.b == f.a || g.b == f.b) { shared = g.b; c = g.a; }
        else continue;
        std::string other = shared == f.a ? f.b : f.a;
        if (other != c) ch |= add(factmk::not_iso(other, c), "Iso transports NotIso");
      }
    }
    return ch;
  }

  // Contragredience is functorial: pi_1 iso pi_2 (x) chi holds iff the same
  // relation holds between the duals (with chi^-1), so (Not)Iso and
  // (Not)TwistEq transport between declared atoms and their duals.
  bool rule_dual() {
    bool ch = false;
    // Subjects with a syntactic dual key: atoms dualize to ~atom, and the
    // adjoint of any GL(2) atom is self-dual (C8), so Ad keys are fixed.
    std::vector<std::pair<std::string, std::string>> subj;
    for (const auto& [n, a] : st_.atoms) {
      subj.emplace_back(n, rep_key(st_, make_dual(make_atom(st_, n))));
      if (a.degree == 2) subj.emplace_back(ad_key(n), ad_key(n));
    }
    for (size_t i = 0; i < subj.size(); ++i)
      for (size_t j = i + 1; j < subj.size(); ++j) {
        const auto& [a, da] = subj[i];
        const auto& [b, db] = subj[j];
        for (auto k : {Fact::Iso, Fact::NotIso, Fact::TwistEq,
                       Fact::NotTwistEq}) {
          if (env_.has(factmk::sym2(a, b, k)))
            ch |= add(factmk::sym2(da, db, k), "dual transport");
          if (env_.has(factmk::sym2(da, db, k)))
            ch |= add(factmk::sym2(a, b, k), "dual transport");
        }
      }
    return ch;
  }

  // C1 (Lemma 2.5): for non-dihedral pi_1, pi_2,
  // TwistEq(pi_1, pi_2) <=> TwistEq(Ad(pi_1), Ad(pi_2)).
  bool rule_c1(const std::vector<Fact>& fs) {
    bool ch = false;
    auto g2 = gl2_atoms();
    for (size_t i = 0; i < g2.size(); ++i)
      for (size_t j = i + 1; j < g2.size(); ++j) {
        const auto& a = g2[i];
        const auto& b = g2[j];
        if (non_dihedral(a) != Tri::Yes || non_dihedral(b) != Tri::Yes)
          continue;
        std::string ka = ad_key(a), kb = ad_key(b);
        if (env_.has(factmk::twist_eq(a, b)))
          ch |= add(factmk::twist_eq(ka, kb), "C1");
        if (env_.has(factmk::twist_eq(ka, kb)))
          ch |= add(factmk::twist_eq(a, b), "C1");
        if (env_.has(factmk::not_twist_eq(a, b)))
          ch |= add(factmk::not_twist_eq(ka, kb), "C1");
        if (env_.has(factmk::not_twist_eq(ka, kb)))
          ch |= add(factmk::not_twist_eq(a, b), "C1");
      }
    return ch;
  }

  // C2-C4 (Lemma 2.3): cuspidality of Sym^k(pi) versus the polyhedral type.
  // The four types are exhaustive for a cuspidal GL(2) atom, so elimination
  // is sound: e.g. Sym^3 cuspidal kills dihedral and tetrahedral.
  bool rule_c2_c3_c4() {
    bool ch = false;
    for (const auto& a : gl2_atoms()) {
      Rep pi = make_atom(st_, a);
      std::string s2 = rep_key(st_, make_sym(2, pi));
      std::string s3 = rep_key(st_, make_sym(3, pi));
      std::string s4 = rep_key(st_, make_sym(4, pi));
      auto t = env_.poly_of(a);
      if (t) {
        bool d = *t == PolyType::Dihedral;
        bool te = *t == PolyType::Tetrahedral;
        bool oc = *t == PolyType::Octahedral;
        ch |= add(factmk::unary(d ? Fact::NotCuspidal : Fact::Cuspidal, s2), "C2");
        ch |= add(factmk::unary(d || te ? Fact::NotCuspidal : Fact::Cuspidal, s3), "C3");
        ch |= add(factmk::unary(d || te || oc ? Fact::NotCuspidal : Fact::Cuspidal, s4), "C4");
      }
      if (env_.query_cuspidal_key(s2) == Tri::Yes)
        ch |= add(factmk::not_poly(a, PolyType::Dihedral), "C2");
      if (env_.query_cuspidal_key(s2) == Tri::No)
        ch |= add(factmk::poly(a, PolyType::Dihedral), "C2");
      if (env_.query_cuspidal_key(s3) == Tri::Yes) {
        ch |= add(factmk::not_poly(a, PolyType::Dihedral), "C3");
        ch |= add(factmk::not_poly(a, PolyType::Tetrahedral), "C3");
      }
      if (env_.query_cuspidal_key(s4) == Tri::Yes)
        ch |= add(factmk::poly(a, PolyType::NonSolvable), "C4");
      // elimination: not dihedral + Sym^3 not cuspidal => tetrahedral
      if (env_.query_cuspidal_key(s3) == Tri::No &&
          non_dihedral(a) == Tri::Yes)
        ch |= add(factmk::poly(a, PolyType::Tetrahedral), "C3");
      // not solvable in the first three ways + Sym^4 not cuspidal => octahedral
      if (env_.query_cuspidal_key(s4) == Tri::No &&
          non_dihedral(a) == Tri::Yes &&
          env_.has(factmk::not_poly(a, PolyType::Tetrahedral)))
        ch |= add(factmk::poly(a, PolyType::Octahedral), "C4");
    }
    return ch;
  }

  // C5 (Lemma 2.2(1) and the dihedral definition): pi = I_K^F(chi) gives
  // MonomialVia(pi, eta_{K/F}), which in turn is Iso(pi, pi (x) eta).
  bool rule_c5() {
    bool ch = false;
    for (const auto& a : gl2_atoms()) {
      if (auto dd = env_.dihedral_data(a)) {
        const FieldLabel& K = st_.field(dd->first);
        if (!K.assoc_char.empty())
          ch |= add(factmk::monomial_via(a, CharExpr::atom(st_, K.assoc_char)),
                    "C5");
      }
      for (const auto& via : env_.monomial_witnesses(a))
        ch |= add(factmk::iso(a, twist_key(a, via)), "C5");
    }
    return ch;
  }

  // C6 (Lemma 2.2(4)): BaseChange_K(pi) cuspidal <=> pi not iso pi (x) eta.
  bool rule_c6() {
    bool ch = false;
    for (const auto& a : gl2_atoms()) {
      const std::string& F = st_.atom(a).field;
      for (const auto& [kn, K] : st_.fields) {
        if (K.base != F || K.ext_degree != 2 || K.assoc_char.empty()) continue;
        CharExpr eta = CharExpr::atom(st_, K.assoc_char);
        std::string bc = rep_key(st_, make_base_change(st_, kn, make_atom(st_, a)));
        Fact self_tw_yes = factmk::iso(a, twist_key(a, eta));
        Fact self_tw_no = factmk::not_iso(a, twist_key(a, eta));
        if (env_.has(self_tw_no))
          ch |= add(factmk::unary(Fact::Cuspidal, bc), "C6");
        if (env_.has(self_tw_yes))
          ch |= add(factmk::unary(Fact::NotCuspidal, bc), "C6");
        if (env_.query_cuspidal_key(bc) == Tri::Yes)
          ch |= add(self_tw_no, "C6");
        if (env_.query_cuspidal_key(bc) == Tri::No)
          ch |= add(self_tw_yes, "C6");
      }
    }
    return ch;
  }

  // C7 (Lemma 2.4): cuspidality of GL(2)xGL(2) and GL(2)xGL(3) products
  // against twist-equivalence, for non-dihedral factors.
  bool rule_c7() {
    bool ch = false;
    auto g2 = gl2_atoms();
    for (size_t i = 0; i < g2.size(); ++i)
      for (size_t j = i + 1; j < g2.size(); ++j) {
        const auto& a = g2[i];
        const auto& b = g2[j];
        if (st_.atom(a).field != st_.atom(b).field) continue;
        if (non_dihedral(a) != Tri::Yes || non_dihedral(b) != Tri::Yes)
          continue;
        std::string k = rep_key(
            st_, make_boxtimes(make_atom(st_, a), make_atom(st_, b)));
        if (env_.has(factmk::not_twist_eq(a, b)))
          ch |= add(factmk::unary(Fact::Cuspidal, k), "C7.1a");
        if (env_.has(factmk::twist_eq(a, b)))
          ch |= add(factmk::unary(Fact::NotCuspidal, k), "C7.1a");
        if (env_.query_cuspidal_key(k) == Tri::Yes)
          ch |= add(factmk::not_twist_eq(a, b), "C7.1a");
        if (env_.query_cuspidal_key(k) == Tri::No)
          ch |= add(factmk::twist_eq(a, b), "C7.1a");
      }
    for (const auto& a : g2) {
      if (non_dihedral(a) != Tri::Yes) continue;
      std::string ad = ad_key(a);
      for (const auto& t3 : gl3_keys()) {
        // rebuild the GL(3) Rep for the product key
        Rep pi3;
        for (const auto& [n, info] : st_.atoms) {
          if (info.degree == 3 && rep_key(st_, make_atom(st_, n)) == t3)
            pi3 = make_atom(st_, n);
          if (info.degree == 2 &&
              rep_key(st_, make_ad(make_atom(st_, n))) == t3)
            pi3 = make_ad(make_atom(st_, n));
        }
        if (!pi3) continue;
        std::string k =
            rep_key(st_, make_boxtimes(make_atom(st_, a), pi3));
        if (env_.has(factmk::twist_eq(t3, ad)))
          ch |= add(factmk::unary(Fact::NotCuspidal, k), "C7.2a");
        if (env_.has(factmk::not_twist_eq(t3, ad)))
          ch |= add(factmk::unary(Fact::Cuspidal, k), "C7.2a");
        if (env_.query_cuspidal_key(k) == Tri::Yes)
          ch |= add(factmk::not_twist_eq(t3, ad), "C7.2a");
        if (env_.query_cuspidal_key(k) == Tri::No)
          ch |= add(factmk::twist_eq(t3, ad), "C7.2a");
      }
    }
    return ch;
  }

  // C8 (Lemma 2.3(1)): Ad(pi) is self-dual for every GL(2) atom.
  bool rule_c8() {
    bool ch = false;
    for (const auto& a : gl2_atoms())
      ch |= add(factmk::unary(Fact::SelfDual, ad_key(a)), "C8");
    return ch;
  }

  const Symtab& st_;
  HypothesisEnv& env_;
};

inline void HypothesisEnv::close(const Symtab& st) {
  ClosureEngine(st, *this).run();
}

}  // namespace isobar
