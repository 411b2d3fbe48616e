#pragma once

// Rankin-Selberg pairing: bilinear expansion of L(s, A x B) into factor
// groups, pole-order counting at s=1, the Sigma e_j^2 budget, and the
// positivity witnesses. Diagonal factors (a constituent against its own
// contragredient) are kept closed; off-diagonal factors are opened by the
// rewrite rules, which is what produces the grouped factor displays.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isobar/normalize.hpp"

namespace isobar {

enum class PoleMode {
  Exact,  // an undecidable pole query raises case_split_required
  Bound,  // an undecidable pole query counts as a potential pole
};

struct FactorGroup {
  Constituent merged;       // product multiset of both sides
  long exponent = 0;
  bool diagonal = false;    // c x dual(c) for a single constituent c
  Tri diag_cusp = Tri::Unknown;
  std::string display;      // "L(left x right)" of one representative
};

struct FactorList {
  std::string field;
  std::vector<FactorGroup> groups;  // sorted by merged key
  std::vector<std::string> assumptions;

  long total_degree(const Symtab& st) const {
    long d = 0;
    for (const auto& g : groups) d += g.exponent * g.merged.degree(st);
    return d;
  }
  const FactorGroup* find(const std::string& key) const {
    for (const auto& g : groups)
      if (g.merged.key() == key) return &g;
    return nullptr;
  }
};

// Isomorphy of two constituents: structural equality, degree arithmetic,
// then environment facts (Iso/NotIso directly, NotTwistEq on the untwisted
// kernels rules out every twist at once).
inline Tri query_iso_const(Symtab& st, const HypothesisEnv& env,
                           const Constituent& a, const Constituent& b) {
  if (a.degree(st) != b.degree(st)) return Tri::No;
  Constituent ua = a, ub = b;
  ua.twist = CharExpr::trivial(a.field);
  ub.twist = CharExpr::trivial(b.field);
  if (ua.key() == ub.key()) {
    // same kernel: isomorphic iff the twist ratio is trivial
    return env.query_char_trivial(st,
                                  a.twist.times(st, b.twist.inverse(st)));
  }
  std::string ka = a.key(), kb = b.key();
  Tri direct = env.query_pair(st, Fact::Iso, Fact::NotIso, std::min(ka, kb),
                              std::max(ka, kb));
  if (direct != Tri::Unknown) return direct;
  std::string ua_k = ua.key(), ub_k = ub.key();
  Tri bare = env.query_pair(st, Fact::Iso, Fact::NotIso, std::min(ua_k, ub_k),
                            std::max(ua_k, ub_k));
  if (bare == Tri::No) return Tri::No;
  if (bare == Tri::Yes && a.twist == b.twist) return Tri::Yes;
  if (env.query_twist_eq(st, std::min(ua_k, ub_k), std::max(ua_k, ub_k)) ==
      Tri::No)
    return Tri::No;
  return Tri::Unknown;
}

// Pole order at s=1 of L(s, c) for a fully opened product constituent.
inline Tri constituent_pole(Symtab& st, const HypothesisEnv& env,
                            const Constituent& c) {
  if (c.is_char()) return env.query_char_trivial(st, c.twist);
  if (c.comps.size() == 1) {
    const Comp& p = c.comps[0];
    if (p.kind == Comp::IndC && p.inner->is_char()) {
      // L(s, Ind_K(xi) (x) t) = L(s, xi . t|K) over K
      CharExpr over_k =
          p.inner->twist.times(st, c.twist.restrict_to(st, p.ext));
      return env.query_char_trivial(st, over_k);
    }
    return Tri::No;  // standard L-function of a nontrivial kernel
  }
  if (c.comps.size() == 2) {
    // L(s, X x Y (x) t): pole iff Y ~ dual(X) (x) t^-1
    Constituent x = nf::comp_const(c.field, c.comps[0]);
    Constituent y = nf::comp_const(c.field, c.comps[1]);
    Constituent want = nf::twisted(st, nf::dual_const(st, x),
                                   c.twist.inverse(st));
    return query_iso_const(st, env, y, want);
  }
  // three or more closed kernels: no constituent can match the contragredient
  // of the complementary product (this is how the source treats them)
  return Tri::No;
}

inline int tri_pole(Tri t, PoleMode mode, const std::string& query) {
  switch (t) {
    case Tri::Yes: return 1;
    case Tri::No: return 0;
    default:
      if (mode == PoleMode::Bound) return 1;
      throw case_split_required(query);
  }
}

inline int factor_pole(Symtab& st, const HypothesisEnv& env,
                       const FactorGroup& g, PoleMode mode) {
  if (g.diagonal && g.diag_cusp == Tri::Yes) return 1;
  // open the product (diagonals with unknown cuspidality included) and sum
  int total = 0;
  for (const auto& piece : nf::open_all(st, env, g.merged))
    total += tri_pole(constituent_pole(st, env, piece), mode,
                      "pole of " + piece.key());
  return total;
}

inline int pole_order_at_1(Symtab& st, const HypothesisEnv& env,
                           const FactorList& fl, PoleMode mode) {
  long total = 0;
  for (const auto& g : fl.groups)
    total += g.exponent * factor_pole(st, env, g, mode);
  return int(total);
}

// Bilinear expansion of L(s, A x B) from two normal forms, where B is passed
// as the literal second argument (so pair(Pi, dual(Pi)) feeds the dualized
// constituents here). Diagonal factors stay closed; everything else is
// opened by the rewrite rules and grouped by product key.
inline FactorList pair_nf(Symtab& st, const HypothesisEnv& env,
                          const IsobaricNF& A, const IsobaricNF& B) {
  std::map<std::string, FactorGroup> grouped;
  auto add = [&](const Constituent& merged, long exp, bool diag,
                 Tri diag_cusp, const std::string& display) {
    auto [it, fresh] = grouped.try_emplace(merged.key());
    FactorGroup& g = it->second;
    if (fresh) {
      g.merged = merged;
      g.display = display;
    }
    g.exponent += exp;
    if (diag) {
      g.diagonal = true;
      g.diag_cusp = diag_cusp;
    }
  };
  for (const auto& ia : A.items)
    for (const auto& ib : B.items) {
      long exp = ia.mult * ib.mult;
      std::string display = "L(" + ia.c.key() + " x " + ib.c.key() + ")";
      bool diag = ib.c.key() == nf::dual_const(st, ia.c).key();
      Constituent merged = nf::merge(st, ia.c, ib.c);
      if (diag) {
        auto [cusp, why] = cuspidality(st, env, ia.c);
        add(merged, exp, true, cusp, display);
      } else {
        for (const auto& piece : nf::open_all(st, env, merged))
          add(piece, exp, false, Tri::Unknown, display);
      }
    }
  FactorList fl;
  fl.field = A.field;
  for (auto& [k, g] : grouped) fl.groups.push_back(std::move(g));
  return fl;
}

inline FactorList pair(Symtab& st, const HypothesisEnv& env, const Rep& A,
                       const Rep& B) {
  IsobaricNF na = normalize(st, env, A);
  IsobaricNF nb = normalize(st, env, B);
  FactorList fl = pair_nf(st, env, na, nb);
  if (fl.total_degree(st) != long(A->degree) * B->degree)
    throw structural_error("pairing expansion lost degree");
  return fl;
}

// Sigma e_j^2 over pairwise non-isomorphic constituents.
inline int siegel_budget(Symtab& st, const HypothesisEnv& env,
                         const IsobaricNF& Pi) {
  for (size_t i = 0; i < Pi.items.size(); ++i)
    for (size_t j = i + 1; j < Pi.items.size(); ++j) {
      Tri t = query_iso_const(st, env, Pi.items[i].c, Pi.items[j].c);
      if (t == Tri::Yes)
        throw structural_error("budget requires merged constituents: " +
                               Pi.items[i].c.key() + " ~ " +
                               Pi.items[j].c.key());
      if (t == Tri::Unknown)
        throw case_split_required("Iso(" + Pi.items[i].c.key() + ", " +
                                  Pi.items[j].c.key() + ")?");
    }
  long e = 0;
  for (const auto& it : Pi.items) e += it.mult * it.mult;
  return int(e);
}

// Attempt to decide NotIso(c_i, c_j) the way the source does: expand the
// cross pairing c_i x dual(c_j); if every opened piece provably has no pole
// at s=1, the two cuspidal constituents cannot be isomorphic.
inline bool derive_not_iso(Symtab& st, const HypothesisEnv& env,
                           const Constituent& a, const Constituent& b) {
  Constituent cross = nf::merge(st, a, nf::dual_const(st, b));
  for (const auto& piece : nf::open_all(st, env, cross))
    if (constituent_pole(st, env, piece) != Tri::No) return false;
  return true;
}

struct PositivityWitness {
  enum Kind { Square, CharacterGroup } kind;
  std::string description;
};

// Square witness: every constituent of Pi is self-dual, so the Dirichlet
// coefficients of L(s, Pi x dual(Pi)) are |sum of real coefficients|^2 >= 0.
inline std::optional<PositivityWitness> positivity_witness(
    Symtab& st, const HypothesisEnv& env, const IsobaricNF& Pi) {
  bool square = !Pi.items.empty();
  for (const auto& it : Pi.items)
    square = square && nf::dual_const(st, it.c).key() == it.c.key();
  if (square) {
    std::string d = "square witness: all constituents self-dual in ";
    for (size_t i = 0; i < Pi.items.size(); ++i)
      d += (i ? " (+) " : "") + std::to_string(Pi.items[i].mult) + "." +
           Pi.items[i].c.key();
    return PositivityWitness{PositivityWitness::Square, d};
  }
  return std::nullopt;
}

// Group witness: a multiset of characters closed under product and inverse
// carries the nonnegative-coefficient Dirichlet series of the group zeta.
inline std::optional<PositivityWitness> character_group_witness(
    Symtab& st, const HypothesisEnv& env, const std::vector<CharExpr>& chars) {
  for (const auto& a : chars) {
    bool inv = false;
    for (const auto& b : chars)
      inv = inv || env.query_char_eq(st, a.inverse(st), b) == Tri::Yes;
    if (!inv) return std::nullopt;
    for (const auto& b : chars) {
      CharExpr ab = a.times(st, b);
      bool closed = false;
      for (const auto& c : chars)
        closed = closed || env.query_char_eq(st, ab, c) == Tri::Yes;
      if (!closed) return std::nullopt;
    }
  }
  std::string d = "character group witness: {";
  for (size_t i = 0; i < chars.size(); ++i)
    d += (i ? ", " : "") + chars[i].key();
  d += "} closed under product and inverse";
  return PositivityWitness{PositivityWitness::CharacterGroup, d};
}

}  // namespace isobar
