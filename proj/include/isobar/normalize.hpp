#pragma once

// Isobaric normal form. A RepExpr is flattened into a boxplus-sum of
// Constituents; each Constituent is a boxtimes-product of prime kernels
// (atoms, adjoint-type lifts, inductions, base changes) carrying one merged
// character twist. The rewrite rules R1-R12 plus the two high symmetric-power
// openings act on this form.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "isobar/facts.hpp"
#include "isobar/rep.hpp"

namespace isobar {

struct Constituent;
using ConstPtr = std::shared_ptr<const Constituent>;

// One prime kernel inside a constituent. Duals are canonicalized away on
// every kind except bare atoms (Ad and A4 are self-dual; duals of A3 and
// Sym^k are twists; duals of Ind/BC dualize the payload), so `dual` is a
// formal contragredient marker on atoms only.
struct Comp {
  enum Kind { AtomC, AdC, A3C, A4C, SymC, IndC, BCC };
  Kind kind = AtomC;
  std::string atom;  // AtomC..SymC: the underlying cuspidal atom
  bool dual = false; // AtomC only
  int k = 0;         // SymC
  std::string ext;   // IndC: source extension; BCC: field the payload lives on
  ConstPtr inner;    // IndC / BCC payload

  std::string key() const;
  int degree(const Symtab& st) const;
};

struct Constituent {
  std::string field;
  std::vector<Comp> comps;  // sorted by key; empty = pure character
  CharExpr twist;           // on `field`

  Constituent() : Constituent(std::string()) {}
  explicit Constituent(std::string f)
      : field(f), twist(CharExpr::trivial(f)) {}
  Constituent(std::string f, std::vector<Comp> cs, CharExpr t)
      : field(std::move(f)), comps(std::move(cs)), twist(std::move(t)) {
    sort();
  }

  void sort() {
    std::sort(comps.begin(), comps.end(),
              [](const Comp& a, const Comp& b) { return a.key() < b.key(); });
  }
  bool is_char() const { return comps.empty(); }
  int degree(const Symtab& st) const {
    int d = 1;
    for (const auto& c : comps) d *= c.degree(st);
    return d;
  }
  // Matches the rep_key serialization so facts asserted by expression key
  // and facts queried by constituent key coincide.
  std::string key() const {
    std::ostringstream os;
    if (comps.empty()) {
      os << "[" << twist.key() << "]";
      return os.str();
    }
    if (comps.size() > 1) os << "(";
    for (size_t i = 0; i < comps.size(); ++i) os << (i ? "*" : "") << comps[i].key();
    if (comps.size() > 1) os << ")";
    if (!twist.is_syntactically_trivial()) os << "@" << twist.key();
    return os.str();
  }
};

inline std::string Comp::key() const {
  std::ostringstream os;
  switch (kind) {
    case AtomC: os << (dual ? "~" : "") << atom; break;
    case AdC: os << "Ad(" << atom << ")"; break;
    case A3C: os << "A3(" << atom << ")"; break;
    case A4C: os << "A4(" << atom << ")"; break;
    case SymC: os << "Sym" << k << "(" << atom << ")"; break;
    case IndC: os << "Ind[" << ext << "](" << inner->key() << ")"; break;
    case BCC: os << "BC[" << ext << "](" << inner->key() << ")"; break;
  }
  return os.str();
}

inline int Comp::degree(const Symtab& st) const {
  switch (kind) {
    case AtomC: return st.atom(atom).degree;
    case AdC: return 3;
    case A3C: return 4;
    case A4C: return 5;
    case SymC: return k + 1;
    case IndC: return inner->degree(st) * st.field(ext).ext_degree;
    case BCC: return inner->degree(st);
  }
  return 0;
}

namespace nf {

inline CharExpr omega(const Symtab& st, const std::string& atom) {
  return CharExpr::atom(st, st.atom(atom).central_char);
}

inline Constituent char_const(const CharExpr& c) {
  return Constituent(c.field(), {}, c);
}
inline Constituent comp_const(const std::string& field, Comp c) {
  return Constituent(field, {std::move(c)}, CharExpr::trivial(field));
}
inline Comp atom_comp(const std::string& name, bool dual = false) {
  Comp c; c.kind = Comp::AtomC; c.atom = name; c.dual = dual;
  return c;
}
inline Comp lift_comp(Comp::Kind k, const std::string& atom, int symk = 0) {
  Comp c; c.kind = k; c.atom = atom; c.k = symk;
  return c;
}

inline Constituent twisted(const Symtab& st, Constituent c, const CharExpr& t) {
  c.twist = c.twist.times(st, t);
  return c;
}

inline Constituent merge(const Symtab& st, const Constituent& x,
                         const Constituent& y) {
  std::vector<Comp> cs = x.comps;
  cs.insert(cs.end(), y.comps.begin(), y.comps.end());
  return Constituent(x.field, std::move(cs), x.twist.times(st, y.twist));
}

// Central character of a constituent (degree-weighted twist included).
inline CharExpr omega_of(const Symtab& st, const Constituent& c) {
  CharExpr w = CharExpr::trivial(c.field);
  int deg_rest = c.degree(st);
  for (const auto& comp : c.comps) {
    int d = comp.degree(st);
    CharExpr wc = CharExpr::trivial(c.field);
    switch (comp.kind) {
      case Comp::AtomC:
        wc = CharExpr::atom(st, st.atom(comp.atom).central_char);
        if (comp.dual) wc = wc.inverse(st);
        break;
      case Comp::AdC: case Comp::A4C: break;
      case Comp::A3C: wc = omega(st, comp.atom).pow(st, 2); break;
      case Comp::SymC:
        wc = omega(st, comp.atom).pow(st, comp.k * (comp.k + 1) / 2);
        break;
      case Comp::IndC: {
        const auto& src = st.field(comp.ext);
        CharExpr eta = src.assoc_char.empty()
                           ? CharExpr::trivial(c.field)
                           : CharExpr::atom(st, src.assoc_char);
        wc = eta.pow(st, comp.inner->degree(st))
                 .times(st, omega_of(st, *comp.inner).transfer_to_base(st));
        break;
      }
      case Comp::BCC:
        wc = omega_of(st, *comp.inner).restrict_to(st, c.field);
        break;
    }
    // omega of a product: each side raised to the complementary degree
    w = w.times(st, wc.pow(st, c.degree(st) / d));
    (void)deg_rest;
  }
  return w.times(st, c.twist.pow(st, c.degree(st)));
}

// Formal contragredient: flip atom markers, invert twists, and use the
// GL(2) identities dual(A3) = A3 (x) omega^-2, dual(Sym^k) = Sym^k (x)
// omega^-k; Ad and A4 are self-dual.
inline Constituent dual_const(const Symtab& st, const Constituent& c) {
  Constituent r(c.field);
  r.twist = c.twist.inverse(st);
  for (Comp comp : c.comps) {
    switch (comp.kind) {
      case Comp::AtomC: comp.dual = !comp.dual; break;
      case Comp::AdC: case Comp::A4C: break;
      case Comp::A3C:
        // A3 = Sym3 (x) omega^-1 and Sym3(~pi) = Sym3(pi) (x) omega^-3,
        // so the contragredient of A3 is A3 (x) omega^-1.
        r.twist = r.twist.times(st, omega(st, comp.atom).inverse(st));
        break;
      case Comp::SymC:
        r.twist = r.twist.times(st, omega(st, comp.atom).pow(st, -comp.k));
        break;
      case Comp::IndC: case Comp::BCC:
        comp.inner = std::make_shared<Constituent>(dual_const(st, *comp.inner));
        break;
    }
    r.comps.push_back(std::move(comp));
  }
  r.sort();
  return r;
}

// Apply the Galois generator of the (prime-cyclic) extension the constituent
// lives on. Only meaningful for character constituents, which is the only
// place the rules need it (R7, R10, R12 orbits).
inline Constituent galois_const(const Symtab& st, const Constituent& c, int j) {
  if (!c.is_char())
    throw structural_error("Galois action on a non-character constituent: " +
                           c.key());
  return char_const(c.twist.galois(st, j));
}

// The tetrahedral cubic character nu with Ad(pi) = Ad(pi) (x) nu, and the
// octahedral data (K, chi). Both ride on the PolyType fact; a missing
// tetrahedral witness is auto-declared as a fresh cubic character.
inline CharExpr tetra_cubic(Symtab& st, const HypothesisEnv& env,
                            const std::string& atom) {
  for (const auto& f : env.facts())
    if (f.kind == Fact::Poly && f.a == atom &&
        f.ptype == PolyType::Tetrahedral && !f.ind_char.empty())
      return CharExpr::atom(st, f.ind_char);
  std::string name = "nu_" + atom;
  if (!st.chars.count(name))
    st.declare_char({name, st.atom(atom).field, 3});
  return CharExpr::atom(st, name);
}

struct OctaData { std::string K; CharExpr chi; };
inline std::optional<OctaData> octa_data(const Symtab& st,
                                         const HypothesisEnv& env,
                                         const std::string& atom) {
  for (const auto& f : env.facts())
    if (f.kind == Fact::Poly && f.a == atom &&
        f.ptype == PolyType::Octahedral && !f.ind_field.empty())
      return OctaData{f.ind_field, CharExpr::atom(st, f.ind_char)};
  return std::nullopt;
}

std::vector<Constituent> open_all(Symtab& st, const HypothesisEnv& env,
                                  const Constituent& c);
std::vector<Constituent> base_change_const(Symtab& st, const HypothesisEnv& env,
                                           const Constituent& c,
                                           const std::string& K);
std::vector<Constituent> induce_const(Symtab& st, const HypothesisEnv& env,
                                      const Constituent& c,
                                      const std::string& F);

inline std::vector<Constituent> mul_const(Symtab& st, const HypothesisEnv& env,
                                          const Constituent& x,
                                          const Constituent& y) {
  if (x.is_char()) return {twisted(st, y, x.twist)};
  if (y.is_char()) return {twisted(st, x, y.twist)};
  return open_all(st, env, merge(st, x, y));
}

// One rewrite step on a product constituent; nullopt when irreducible.
// Unary decompositions (R4, R5, R6, R8) come first, then the pair openings
// (R1-R3, R9 and the Sym^5 / Sym^6 Clebsch-Gordan splits). Atom markers must
// agree for an opening to fire; formally dualized pairs stay closed, which is
// exactly how the source derivations treat them.
inline std::optional<std::vector<Constituent>>
open_once(Symtab& st, const HypothesisEnv& env, const Constituent& c) {
  auto rest_of = [&](size_t i, size_t j) {
    std::vector<Comp> rest;
    for (size_t t = 0; t < c.comps.size(); ++t)
      if (t != i && t != j) rest.push_back(c.comps[t]);
    return rest;
  };
  auto emit = [&](const std::vector<Comp>& rest,
                  const std::vector<Constituent>& repl) {
    std::vector<Constituent> out;
    for (const auto& r : repl) {
      std::vector<Comp> cs = rest;
      cs.insert(cs.end(), r.comps.begin(), r.comps.end());
      out.emplace_back(c.field, std::move(cs), c.twist.times(st, r.twist));
    }
    return out;
  };

  // unary rules
  for (size_t i = 0; i < c.comps.size(); ++i) {
    const Comp& p = c.comps[i];
    if (p.kind == Comp::A3C &&
        env.query_poly(p.atom, PolyType::Tetrahedral) == Tri::Yes) {
      // R4: A3(pi) = (pi (x) nu) (+) (pi (x) nu^2)
      CharExpr nu = tetra_cubic(st, env, p.atom);
      std::vector<Constituent> repl;
      for (int j = 1; j <= 2; ++j)
        repl.push_back(twisted(st, comp_const(c.field, atom_comp(p.atom)),
                               nu.pow(st, j)));
      return emit(rest_of(i, i), repl);
    }
    if (p.kind == Comp::A4C &&
        env.query_poly(p.atom, PolyType::Tetrahedral) == Tri::Yes) {
      // R5: A4(pi) = Ad(pi) (+) nu (+) nu^2
      CharExpr nu = tetra_cubic(st, env, p.atom);
      std::vector<Constituent> repl = {
          comp_const(c.field, lift_comp(Comp::AdC, p.atom)),
          char_const(nu), char_const(nu.pow(st, 2))};
      return emit(rest_of(i, i), repl);
    }
    if (p.kind == Comp::A4C &&
        env.query_poly(p.atom, PolyType::Octahedral) == Tri::Yes) {
      if (auto od = octa_data(st, env, p.atom)) {
        // R6: A4(pi) = Ind_K(chi^-1) (+) (Ad(pi) (x) eta)
        const FieldLabel& K = st.field(od->K);
        Comp ind; ind.kind = Comp::IndC; ind.ext = od->K;
        ind.inner = std::make_shared<Constituent>(
            char_const(od->chi.inverse(st)));
        CharExpr eta = CharExpr::atom(st, K.assoc_char);
        std::vector<Constituent> repl = {
            comp_const(c.field, std::move(ind)),
            twisted(st, comp_const(c.field, lift_comp(Comp::AdC, p.atom)), eta)};
        return emit(rest_of(i, i), repl);
      }
    }
    if (p.kind == Comp::IndC) {
      // R8: Ind_K(BC_K(pi)) = (+)_j pi (x) eta^j
      const Constituent& in = *p.inner;
      bool all_bc = !in.comps.empty() && in.twist.is_syntactically_trivial();
      for (const auto& ic : in.comps)
        all_bc = all_bc && ic.kind == Comp::BCC && ic.inner->field == c.field;
      const FieldLabel& K = st.field(p.ext);
      if (all_bc && !K.assoc_char.empty()) {
        Constituent unwrapped(c.field);
        for (const auto& ic : in.comps)
          unwrapped = merge(st, unwrapped, *ic.inner);
        CharExpr eta = CharExpr::atom(st, K.assoc_char);
        std::vector<Constituent> repl;
        for (int j = 0; j < K.ext_degree; ++j)
          repl.push_back(twisted(st, unwrapped, eta.pow(st, j)));
        return emit(rest_of(i, i), repl);
      }
    }
  }

  // pair rules
  auto deg2atom = [&](const Comp& p) {
    return p.kind == Comp::AtomC && st.atom(p.atom).degree == 2;
  };
  for (size_t i = 0; i < c.comps.size(); ++i)
    for (size_t j = 0; j < c.comps.size(); ++j) {
      if (i == j) continue;
      const Comp& p = c.comps[i];
      const Comp& q = c.comps[j];
      if (j < i && p.kind == q.kind) continue;  // visit unordered pairs once

      // R1 (self): pi (x) pi = (Ad(pi) (x) om) (+) om; dualized verbatim.
      if (i < j && deg2atom(p) && q.kind == Comp::AtomC && q.atom == p.atom &&
          q.dual == p.dual) {
        CharExpr w = omega(st, p.atom).pow(st, p.dual ? -1 : 1);
        std::vector<Constituent> repl = {
            twisted(st, comp_const(c.field, lift_comp(Comp::AdC, p.atom)), w),
            char_const(w)};
        return emit(rest_of(i, j), repl);
      }
      // R1 (twist-equivalent pair): pi_b = pi_a (x) eta with a recorded
      // witness; only undualized-against-undualized (or both dualized) opens.
      if (i < j && deg2atom(p) && deg2atom(q) && p.atom != q.atom &&
          p.dual == q.dual &&
          env.query_twist_eq(st, std::min(p.atom, q.atom),
                             std::max(p.atom, q.atom)) == Tri::Yes) {
        if (auto via = env.twist_eq_via(std::min(p.atom, q.atom),
                                        std::max(p.atom, q.atom))) {
          const std::string& base = std::min(p.atom, q.atom);
          CharExpr w = omega(st, base).times(st, *via);
          if (p.dual) w = w.inverse(st);
          std::vector<Constituent> repl = {
              twisted(st, comp_const(c.field, lift_comp(Comp::AdC, base)), w),
              char_const(w)};
          return emit(rest_of(i, j), repl);
        }
      }
      // R2: pi (x) Ad(pi) = pi (+) A3(pi); the dualized form follows by
      // contragredience: ~pi (x) Ad(pi) = ~pi (+) (A3(pi) * om^-1).
      if (deg2atom(p) && q.kind == Comp::AdC && q.atom == p.atom) {
        Constituent a3 = comp_const(c.field, lift_comp(Comp::A3C, p.atom));
        if (p.dual)
          a3 = twisted(st, a3, omega(st, p.atom).inverse(st));
        std::vector<Constituent> repl = {
            comp_const(c.field, atom_comp(p.atom, p.dual)), a3};
        return emit(rest_of(i, j), repl);
      }
      // R3: Ad(pi) (x) Ad(pi) = A4(pi) (+) Ad(pi) (+) 1
      if (i < j && p.kind == Comp::AdC && q.kind == Comp::AdC &&
          p.atom == q.atom) {
        std::vector<Constituent> repl = {
            comp_const(c.field, lift_comp(Comp::A4C, p.atom)),
            comp_const(c.field, lift_comp(Comp::AdC, p.atom)),
            char_const(CharExpr::trivial(c.field))};
        return emit(rest_of(i, j), repl);
      }
      // Clebsch-Gordan opening: Ad(pi) (x) A3(pi) = A3 (+) pi (+) Sym5 (x) om^-2
      if (p.kind == Comp::AdC && q.kind == Comp::A3C && p.atom == q.atom) {
        std::vector<Constituent> repl = {
            comp_const(c.field, lift_comp(Comp::A3C, p.atom)),
            comp_const(c.field, atom_comp(p.atom)),
            twisted(st, comp_const(c.field, lift_comp(Comp::SymC, p.atom, 5)),
                    omega(st, p.atom).pow(st, -2))};
        return emit(rest_of(i, j), repl);
      }
      // Clebsch-Gordan opening: A4(pi) (x) Ad(pi) = A4 (+) Ad (+) Sym6 (x) om^-3
      if (p.kind == Comp::A4C && q.kind == Comp::AdC && p.atom == q.atom) {
        std::vector<Constituent> repl = {
            comp_const(c.field, lift_comp(Comp::A4C, p.atom)),
            comp_const(c.field, lift_comp(Comp::AdC, p.atom)),
            twisted(st, comp_const(c.field, lift_comp(Comp::SymC, p.atom, 6)),
                    omega(st, p.atom).pow(st, -3))};
        return emit(rest_of(i, j), repl);
      }
      // R9: Ind_K(alpha) (x) X = Ind_K(alpha (x) BC_K(X))
      if (p.kind == Comp::IndC) {
        std::vector<Constituent> out;
        for (const auto& bcx : base_change_const(
                 st, env, comp_const(c.field, q), p.ext))
          for (const auto& prod : mul_const(st, env, *p.inner, bcx))
            for (const auto& ind : induce_const(st, env, prod, c.field))
              out.push_back(ind);
        return emit(rest_of(i, j), out);
      }
    }
  return std::nullopt;
}

inline std::vector<Constituent> open_all(Symtab& st, const HypothesisEnv& env,
                                         const Constituent& c) {
  std::vector<Constituent> out, work = {c};
  while (!work.empty()) {
    Constituent cur = work.back();
    work.pop_back();
    if (auto opened = open_once(st, env, cur))
      work.insert(work.end(), opened->begin(), opened->end());
    else
      out.push_back(std::move(cur));
  }
  return out;
}

inline std::vector<Constituent> base_change_const(Symtab& st,
                                                  const HypothesisEnv& env,
                                                  const Constituent& c,
                                                  const std::string& K) {
  const FieldLabel& kf = st.field(K);
  if (kf.base != c.field)
    throw structural_error("base change of a constituent on " + c.field +
                           " to " + K);
  if (c.is_char()) return {char_const(c.twist.restrict_to(st, K))};
  std::vector<Constituent> acc = {char_const(c.twist.restrict_to(st, K))};
  auto cross = [&](const std::vector<Constituent>& parts) {
    std::vector<Constituent> next;
    for (const auto& a : acc)
      for (const auto& p : parts)
        for (const auto& m : mul_const(st, env, a, p)) next.push_back(m);
    acc = next;
  };
  for (const auto& comp : c.comps) {
    if (comp.kind == Comp::IndC && comp.ext == K) {
      // R7: BC_K(Ind_K(alpha)) = (+)_j alpha o theta^j
      std::vector<Constituent> orbit;
      for (int j = 0; j < kf.ext_degree; ++j)
        orbit.push_back(galois_const(st, *comp.inner, j));
      cross(orbit);
      continue;
    }
    if (comp.kind == Comp::AtomC) {
      if (auto dd = env.dihedral_data(comp.atom); dd && dd->first == K) {
        // R10: BC_K of pi = Ind_K(chi) is chi (+) chi^theta
        CharExpr chi = CharExpr::atom(st, dd->second);
        if (comp.dual) chi = chi.inverse(st);
        cross({char_const(chi), char_const(chi.galois(st, 1))});
        continue;
      }
    }
    Comp wrapped; wrapped.kind = Comp::BCC; wrapped.ext = K;
    wrapped.inner = std::make_shared<Constituent>(
        comp_const(c.field, comp));
    cross({comp_const(K, std::move(wrapped))});
  }
  return acc;
}

inline std::vector<Constituent> induce_const(Symtab& st,
                                             const HypothesisEnv& env,
                                             const Constituent& c,
                                             const std::string& F) {
  if (st.field(c.field).base != F)
    throw structural_error("induction of a constituent on " + c.field +
                           " to " + F);
  Comp ind; ind.kind = Comp::IndC; ind.ext = c.field;
  ind.inner = std::make_shared<Constituent>(c);
  return open_all(st, env, comp_const(F, std::move(ind)));
}

}  // namespace nf

// ---------------------------------------------------------------------------

struct NFItem {
  Constituent c;
  long mult = 1;
  Tri cusp = Tri::Unknown;
  std::string cusp_reason;
};

struct IsobaricNF {
  std::string field;
  std::vector<NFItem> items;  // sorted by constituent key

  int total_degree(const Symtab& st) const {
    long d = 0;
    for (const auto& it : items) d += it.mult * it.c.degree(st);
    return int(d);
  }
};

// Cuspidality of a single constituent, with the criterion used as reason.
inline std::pair<Tri, std::string> cuspidality(const Symtab& st,
                                               const HypothesisEnv& env,
                                               const Constituent& c) {
  if (c.is_char()) return {Tri::Yes, "unitary Hecke character"};
  // Declared cuspidality facts; cuspidality is invariant under twisting by a
  // unitary Hecke character, so consult the untwisted key as well.
  {
    Tri t = env.query_cuspidal_key(c.key());
    if (t == Tri::Unknown && !c.twist.is_syntactically_trivial()) {
      Constituent bare = c;
      bare.twist = CharExpr::trivial(bare.twist.field());
      t = env.query_cuspidal_key(bare.key());
    }
    if (t != Tri::Unknown) return {t, "declared"};
  }
  if (c.comps.size() == 1) {
    const Comp& p = c.comps[0];
    switch (p.kind) {
      case Comp::AtomC: return {Tri::Yes, "declared cuspidal atom"};
      case Comp::AdC: {
        Tri d = env.query_poly(p.atom, PolyType::Dihedral);
        if (d == Tri::Yes) return {Tri::No, "Sym^2 of a dihedral form splits"};
        if (d == Tri::No) return {Tri::Yes, "Gelbart-Jacquet: non-dihedral"};
        return {Tri::Unknown, "PolyType(" + p.atom + ", dihedral)?"};
      }
      case Comp::A3C: {
        if (auto t = env.poly_of(p.atom)) {
          if (*t == PolyType::Dihedral || *t == PolyType::Tetrahedral)
            return {Tri::No, "Kim-Shahidi: solvable type <= tetrahedral"};
          return {Tri::Yes, "Kim-Shahidi: beyond tetrahedral type"};
        }
        if (env.has(factmk::not_poly(p.atom, PolyType::Dihedral)) &&
            env.has(factmk::not_poly(p.atom, PolyType::Tetrahedral)))
          return {Tri::Yes, "Kim-Shahidi: beyond tetrahedral type"};
        return {Tri::Unknown, "PolyType(" + p.atom + ")?"};
      }
      case Comp::A4C: {
        if (auto t = env.poly_of(p.atom))
          return *t == PolyType::NonSolvable
                     ? std::pair<Tri, std::string>{Tri::Yes,
                           "Kim: Sym^4 cuspidal beyond solvable type"}
                     : std::pair<Tri, std::string>{Tri::No,
                           "Kim: Sym^4 splits for solvable type"};
        return {Tri::Unknown, "PolyType(" + p.atom + ")?"};
      }
      case Comp::SymC:
        return {Tri::Unknown, "no cuspidality criterion for Sym^" +
                                  std::to_string(p.k)};
      case Comp::IndC: {
        if (p.inner->is_char()) {
          const FieldLabel& K = st.field(p.ext);
          if (!K.theta.empty()) {
            Tri fixed = env.query_char_eq(st, p.inner->twist,
                                          p.inner->twist.galois(st, 1));
            if (fixed == Tri::No)
              return {Tri::Yes, "induced character not Galois-fixed"};
            if (fixed == Tri::Yes)
              return {Tri::No, "induced character is Galois-fixed"};
          }
        }
        return {Tri::Unknown, "Iso(" + p.inner->key() + ", Galois conjugate)?"};
      }
      case Comp::BCC: {
        Tri t = env.query_cuspidal_key(c.key());
        if (t != Tri::Unknown)
          return {t, "Arthur-Clozel base change criterion"};
        return {Tri::Unknown,
                "Iso(" + p.inner->key() + ", self-twist by eta)?"};
      }
    }
  }
  if (c.comps.size() == 2) {
    const Comp& p = c.comps[0];
    const Comp& q = c.comps[1];
    auto is_a2 = [&](const Comp& x) {
      return x.kind == Comp::AtomC && st.atom(x.atom).degree == 2;
    };
    // GL(2) x GL(2): cuspidal iff non-dihedral factors not twist-equivalent
    if (is_a2(p) && is_a2(q) && p.atom != q.atom) {
      bool nd = env.has(factmk::not_poly(p.atom, PolyType::Dihedral)) &&
                env.has(factmk::not_poly(q.atom, PolyType::Dihedral));
      Tri te = env.query_twist_eq(st, std::min(p.atom, q.atom),
                                  std::max(p.atom, q.atom));
      if (nd && te == Tri::No)
        return {Tri::Yes, "Ramakrishnan: non-dihedral, not twist-equivalent"};
      if (nd && te == Tri::Yes)
        return {Tri::No, "Ramakrishnan: twist-equivalent pair"};
      return {Tri::Unknown,
              "TwistEq(" + p.atom + ", " + q.atom + ")?"};
    }
    // GL(2) x GL(3): not cuspidal iff the GL(3) factor is a twist of Ad
    const Comp* a2 = is_a2(p) ? &p : is_a2(q) ? &q : nullptr;
    const Comp* g3 = nullptr;
    if (a2) {
      const Comp& other = a2 == &p ? q : p;
      if (other.degree(st) == 3) g3 = &other;
    }
    if (a2 && g3) {
      std::string ad = "Ad(" + a2->atom + ")";
      std::string ok = g3->key();
      if (env.has(factmk::not_poly(a2->atom, PolyType::Dihedral))) {
        Tri te = g3->kind == Comp::AdC && g3->atom == a2->atom
                     ? Tri::Yes
                     : env.query_twist_eq(st, std::min(ok, ad),
                                          std::max(ok, ad));
        if (te == Tri::No)
          return {Tri::Yes,
                  "Ramakrishnan-Wang: GL(3) factor not a twist of Ad"};
        if (te == Tri::Yes)
          return {Tri::No, "Ramakrishnan-Wang: GL(3) factor is a twist of Ad"};
      }
      return {Tri::Unknown, "TwistEq(" + ok + ", " + ad + ")?"};
    }
  }
  Tri t = env.query_cuspidal_key(c.key());
  if (t != Tri::Unknown) return {t, "declared"};
  return {Tri::Unknown, "no criterion for " + c.key()};
}

namespace nf {

inline std::vector<Constituent> norm_rec(Symtab& st, const HypothesisEnv& env,
                                         const Rep& e) {
  switch (e->kind) {
    case RepExpr::AtomK:
      return {comp_const(e->field, atom_comp(e->atom))};
    case RepExpr::CharK:
      return {char_const(e->chr.field().empty() ? CharExpr::trivial(e->field)
                                                : e->chr)};
    case RepExpr::TwistK: {
      std::vector<Constituent> out;
      for (const auto& c : norm_rec(st, env, e->a))
        out.push_back(twisted(st, c, e->chr));
      return out;
    }
    case RepExpr::DualK: {
      std::vector<Constituent> out;
      for (const auto& c : norm_rec(st, env, e->a))
        out.push_back(dual_const(st, c));
      return out;
    }
    case RepExpr::BoxPlusK: {
      auto out = norm_rec(st, env, e->a);
      auto r = norm_rec(st, env, e->b);
      out.insert(out.end(), r.begin(), r.end());
      return out;
    }
    case RepExpr::BoxTimesK: {
      std::vector<Constituent> out;
      for (const auto& x : norm_rec(st, env, e->a))
        for (const auto& y : norm_rec(st, env, e->b))
          for (const auto& m : mul_const(st, env, x, y)) out.push_back(m);
      return out;
    }
    case RepExpr::AdK: case RepExpr::A3K: case RepExpr::A4K:
    case RepExpr::SymK: {
      // dual_pushdown has reduced the operand to a bare atom
      Rep op = e->a;
      if (op->kind != RepExpr::AtomK)
        throw structural_error("lift of a non-atomic operand: run pushdown");
      Comp::Kind k = e->kind == RepExpr::AdK   ? Comp::AdC
                     : e->kind == RepExpr::A3K ? Comp::A3C
                     : e->kind == RepExpr::A4K ? Comp::A4C
                                               : Comp::SymC;
      CharExpr t = CharExpr::trivial(e->field);
      if (e->kind == RepExpr::SymK) {
        // canonicalize Sym^2..4 onto the adjoint-type kernels
        if (e->sym_k == 2) { k = Comp::AdC; t = omega(st, op->atom); }
        else if (e->sym_k == 3) { k = Comp::A3C; t = omega(st, op->atom); }
        else if (e->sym_k == 4) { k = Comp::A4C; t = omega(st, op->atom).pow(st, 2); }
      }
      Comp comp = lift_comp(k, op->atom, k == Comp::SymC ? e->sym_k : 0);
      return open_all(st, env, twisted(st, comp_const(e->field, comp), t));
    }
    case RepExpr::BaseChangeK: {
      std::vector<Constituent> out;
      for (const auto& c : norm_rec(st, env, e->a))
        for (const auto& b : base_change_const(st, env, c, e->target_field))
          out.push_back(b);
      return out;
    }
    case RepExpr::InduceK: {
      std::vector<Constituent> out;
      for (const auto& c : norm_rec(st, env, e->a))
        for (const auto& r : induce_const(st, env, c, e->target_field))
          out.push_back(r);
      return out;
    }
  }
  throw structural_error("unreachable norm_rec kind");
}

}  // namespace nf

inline IsobaricNF group_items(const Symtab& st, const HypothesisEnv& env,
                              const std::string& field,
                              const std::vector<Constituent>& cs) {
  std::map<std::string, NFItem> grouped;
  for (const auto& c : cs) {
    auto [it, fresh] = grouped.try_emplace(c.key(), NFItem{c, 0});
    it->second.mult++;
  }
  IsobaricNF out;
  out.field = field;
  for (auto& [k, item] : grouped) {
    auto [t, why] = cuspidality(st, env, item.c);
    item.cusp = t;
    item.cusp_reason = why;
    out.items.push_back(std::move(item));
  }
  return out;
}

inline IsobaricNF normalize(Symtab& st, const HypothesisEnv& env,
                            const Rep& e) {
  Rep p = dual_pushdown(st, e);
  auto cs = nf::norm_rec(st, env, p);
  IsobaricNF out = group_items(st, env, e->field, cs);
  if (out.total_degree(st) != e->degree)
    throw structural_error("degree not conserved by normalization: " +
                           std::to_string(e->degree) + " -> " +
                           std::to_string(out.total_degree(st)));
  return out;
}

// Machine-readable rule catalog for docs and proof logs.
struct RuleInfo {
  std::string id, pattern, side_condition, source;
};

inline const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> rules = {
      {"R1", "pi (x) (pi * eta) -> (Ad(pi) * om.eta) (+) om.eta",
       "TwistEq witness or identical atoms", "Gelbart-Jacquet symmetric square"},
      {"R2", "pi (x) Ad(pi) -> pi (+) A3(pi)", "",
       "Kim-Shahidi cube lift"},
      {"R3", "Ad(pi) (x) Ad(pi) -> A4(pi) (+) Ad(pi) (+) 1", "",
       "Kim fourth symmetric power"},
      {"R4", "A3(pi) -> (pi * nu) (+) (pi * nu^2)", "pi tetrahedral",
       "Kim-Shahidi, tetrahedral decomposition"},
      {"R5", "A4(pi) -> Ad(pi) (+) nu (+) nu^2", "pi tetrahedral",
       "Kim, tetrahedral decomposition"},
      {"R6", "A4(pi) -> Ind[K](chi^-1) (+) (Ad(pi) * eta)", "pi octahedral",
       "Kim, octahedral decomposition"},
      {"R7", "BC[K](Ind[K](alpha)) -> (+)_j alpha o theta^j", "",
       "Arthur-Clozel"},
      {"R8", "Ind[K](BC[K](pi)) -> (+)_j pi * eta^j", "",
       "Arthur-Clozel"},
      {"R9", "Ind[K](alpha) (x) X -> Ind[K](alpha (x) BC[K](X))", "",
       "projection formula / adjointness"},
      {"R10", "BC[K](Ind[K](chi)) for dihedral pi -> chi (+) chi^theta",
       "dihedral inducing data declared", "Labesse-Langlands"},
      {"R11", "(x) and * distribute over (+)", "", "bilinearity"},
      {"R12", "Ind[K](xi2) (x) Ind[K](xi3) -> Ind(xi2.xi3) (+) Ind(xi2.xi3^theta)",
       "composite of R9 and R7", "Labesse-Langlands"},
      {"CG5", "Ad(pi) (x) A3(pi) -> A3 (+) pi (+) Sym5 * om^-2", "",
       "Clebsch-Gordan"},
      {"CG6", "A4(pi) (x) Ad(pi) -> A4 (+) Ad (+) Sym6 * om^-3", "",
       "Clebsch-Gordan"},
  };
  return rules;
}

}  // namespace isobar
