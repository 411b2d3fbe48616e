#pragma once

// Certificate construction. A certificate records one complete argument that
// a given L-function has no Landau-Siegel zero (or at most k real zeros near
// s=1), in one of five shapes:
//
//   BudgetRoute        multiplicity a+b of the target factor inside
//                      L(s, Pi x dual(Pi)) exceeds the budget Sigma e_j^2
//   PositivityPoleRoute  nonnegative Dirichlet coefficients + target
//                      multiplicity m > pole order r at s=1
//   StandardLemma      standard L-function criteria (non-self-dual,
//                      monomial, or small degree)
//   RSLemma            Rankin-Selberg criteria for a product of two cuspidals
//   CharacterRoute     the real/complex casework for four Hecke characters
//
// Serialization is deterministic: sections and keys appear in a fixed order.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "isobar/pairing.hpp"

namespace isobar {

enum class Route {
  BudgetRoute,
  PositivityPoleRoute,
  StandardLemma,
  RSLemma,
  CharacterRoute,
};

inline const char* to_string(Route r) {
  switch (r) {
    case Route::BudgetRoute: return "budget";
    case Route::PositivityPoleRoute: return "positivity-pole";
    case Route::StandardLemma: return "standard-lemma";
    case Route::RSLemma: return "rankin-selberg-lemma";
    case Route::CharacterRoute: return "character";
  }
  return "?";
}

struct Verdict {
  enum Kind { NoLSZero, AtMost, ConditionalNoLSZero, Inconclusive } kind;
  int at_most = 0;     // AtMost only
  std::string reason;  // Inconclusive only

  std::string str() const {
    switch (kind) {
      case NoLSZero: return "no-siegel-zero";
      case AtMost: return "at-most-" + std::to_string(at_most);
      case ConditionalNoLSZero: return "conditional-no-siegel-zero";
      case Inconclusive: return "inconclusive: " + reason;
    }
    return "?";
  }
};

struct ResidualEntry {
  std::string factor;  // merged key
  long exponent = 0;
  std::string justification;
};

struct Certificate {
  std::string target;       // key of the factor under study
  std::string aux;          // display of the auxiliary isobaric sum
  Route route = Route::BudgetRoute;
  FactorList factors;
  int budget_or_r = 0;      // e (budget) or r (pole order)
  long a = 0, b = 0;        // budget route multiplicities
  long target_multiplicity = 0;
  std::vector<ResidualEntry> residuals;
  bool residual_analyticity = false;
  std::string witness;      // positivity witness / lemma clause
  std::vector<std::string> assumptions;  // conditional hypotheses used
  std::vector<std::string> axioms;       // counting inputs used unconditionally
  std::vector<std::string> notes;
  Verdict verdict{Verdict::Inconclusive, 0, "empty"};
};

// Hypotheses required before an opened factor with an opaque symmetric-power
// kernel may be treated as analytic on (t, 1).
inline std::vector<std::string> required_flags(const Constituent& c) {
  std::vector<std::string> out;
  for (const auto& comp : c.comps) {
    if (comp.kind != Comp::SymC) continue;
    if (comp.k == 5) out.push_back("sym5-holomorphy");
    if (comp.k == 6) {
      out.push_back("takeda-holomorphy");
      out.push_back("lrs-local-bound");
    }
    if (comp.k > 6) out.push_back("sym" + std::to_string(comp.k) + "-holomorphy");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Standard-L and Rankin-Selberg lemmas
// ---------------------------------------------------------------------------

// No Landau-Siegel zero for the standard L-function of a single cuspidal
// constituent: complex character, not self-dual, monomial, or degree 2/3.
inline std::optional<std::string> standard_no_siegel(Symtab& st,
                                                     const HypothesisEnv& env,
                                                     const Constituent& c) {
  if (c.is_char()) {
    if (env.query_char_real(st, c.twist) == Tri::No)
      return "complex Hecke character";
    return std::nullopt;  // real characters are the exceptional case
  }
  if (env.query_self_dual_key(c.key()) == Tri::No)
    return "not self-dual";
  // A3(pi) has a non-self-dual witness when omega(pi)^2 is not quadratic:
  // dual(A3) = A3 (x) omega^-2, so a nontrivial, non-real omega^2 rules out
  // self-duality outright.
  Constituent d = nf::dual_const(st, c);
  if (d.key() != c.key()) {
    CharExpr ratio = c.twist.times(st, d.twist.inverse(st));
    bool same_kernel = true;
    if (c.comps.size() == d.comps.size()) {
      for (size_t i = 0; i < c.comps.size(); ++i)
        same_kernel = same_kernel && c.comps[i].key() == d.comps[i].key();
    } else {
      same_kernel = false;
    }
    if (same_kernel && env.query_char_trivial(st, ratio) == Tri::No &&
        env.query_char_real(st, ratio) == Tri::No)
      return "not self-dual: contragredient is a non-real twist";
  }
  if (c.comps.size() == 1) {
    const Comp& p = c.comps[0];
    if (p.kind == Comp::IndC) {
      auto [cusp, why] = cuspidality(st, env, c);
      if (cusp == Tri::Yes) return "monomial (automorphically induced): " + why;
    }
    Constituent bare = c;
    bare.twist = CharExpr::trivial(c.field);
    if (!env.monomial_witnesses(c.key()).empty() ||
        !env.monomial_witnesses(bare.key()).empty())
      return "monomial: self-twist witness declared";
    int deg = c.degree(st);
    auto [cusp, why] = cuspidality(st, env, c);
    if ((deg == 2 || deg == 3) && cusp == Tri::Yes)
      return "cuspidal on GL(" + std::to_string(deg) + ")";
  }
  return std::nullopt;
}

// No Landau-Siegel zero for L(s, c1 x c2): either exactly one of the two is
// self-dual, or c1 is monomial with a self-twist eta and c2 is not
// eta-self-twisted (tried in both orders by the caller-facing overload).
inline std::optional<std::string> rs_no_siegel_ordered(
    Symtab& st, const HypothesisEnv& env, const Constituent& c1,
    const Constituent& c2) {
  Tri sd1 = env.query_self_dual_key(c1.key());
  Tri sd2 = env.query_self_dual_key(c2.key());
  if (nf::dual_const(st, c1).key() == c1.key()) sd1 = Tri::Yes;
  if (nf::dual_const(st, c2).key() == c2.key() && sd2 == Tri::Unknown)
    sd2 = Tri::Yes;
  if (c2.is_char() && env.query_char_real(st, c2.twist) == Tri::No)
    sd2 = Tri::No;
  if (sd1 == Tri::Yes && sd2 == Tri::No)
    return "self-dual against non-self-dual pair";
  {
    Constituent bare1 = c1;
    bare1.twist = CharExpr::trivial(c1.field);
    std::vector<CharExpr> twists = env.monomial_witnesses(c1.key());
    for (const auto& x : env.monomial_witnesses(bare1.key()))
      twists.push_back(x);
    // An automorphic induction from K is fixed by the quadratic character
    // attached to K/F; usable once the induced form is known cuspidal.
    if (c1.comps.size() == 1 && c1.comps[0].kind == Comp::IndC) {
      const FieldLabel& kf = st.field(c1.comps[0].ext);
      if (!kf.assoc_char.empty() &&
          cuspidality(st, env, c1).first == Tri::Yes)
        twists.push_back(CharExpr::atom(st, kf.assoc_char));
    }
    for (const CharExpr& eta : twists) {
      Constituent tw = nf::twisted(st, c2, eta);
      if (query_iso_const(st, env, c2, tw) == Tri::No)
        return "monomial self-twist " + eta.key() +
               " does not fix the second factor";
    }
  }
  auto atom_of = [](const Constituent& c,
                    Comp::Kind k) -> std::optional<std::string> {
    if (c.comps.size() == 1 && c.comps[0].kind == k && !c.comps[0].dual)
      return c.comps[0].atom;
    return std::nullopt;
  };
  // GL(2) x GL(2): exceptional only when the two forms are twist-equivalent
  // (both non-dihedral) or both are dihedral over one quadratic field
  // (Ramakrishnan-Wang, Luo).
  if (auto p = atom_of(c1, Comp::AtomC)) {
    if (auto q = atom_of(c2, Comp::AtomC)) {
      bool some_nondihedral =
          env.query_poly(*p, PolyType::Dihedral) == Tri::No ||
          env.query_poly(*q, PolyType::Dihedral) == Tri::No;
      if (env.query_twist_eq(st, std::min(*p, *q), std::max(*p, *q)) ==
              Tri::No &&
          some_nondihedral)
        return "GL(2) x GL(2) pair: not twist-equivalent and not a common "
               "dihedral pair";
    }
    // GL(2) x GL(3): exceptional only when the GL(3) factor is
    // twist-equivalent to the adjoint of the GL(2) factor (Luo); by strong
    // multiplicity one for adjoints, Ad kernels separate whenever the
    // underlying GL(2) forms are not twist-equivalent.
    if (auto q = atom_of(c2, Comp::AdC)) {
      if (env.query_twist_eq(st, std::min(*p, *q), std::max(*p, *q)) ==
          Tri::No)
        return "GL(2) x GL(3) pair: the GL(3) factor is not twist-equivalent "
               "to the adjoint of the GL(2) factor";
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> rs_no_siegel(Symtab& st,
                                               const HypothesisEnv& env,
                                               const Constituent& c1,
                                               const Constituent& c2) {
  if (auto r = rs_no_siegel_ordered(st, env, c1, c2)) return r;
  if (auto r = rs_no_siegel_ordered(st, env, c2, c1))
    return *r + " (factors swapped)";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// certify: budget and positivity-pole routes
// ---------------------------------------------------------------------------

struct CertifyRequest {
  Rep target;  // the product L-function under study
  Rep aux;     // the auxiliary isobaric sum Pi
  Route route = Route::BudgetRoute;
  PoleMode mode = PoleMode::Bound;
};

namespace detail {

inline std::string nf_display(const IsobaricNF& Pi) {
  std::string s;
  for (size_t i = 0; i < Pi.items.size(); ++i) {
    if (i) s += " (+) ";
    if (Pi.items[i].mult != 1) s += std::to_string(Pi.items[i].mult) + ".";
    s += Pi.items[i].c.key();
  }
  return s;
}

// Single-constituent normal form of the target expression, or an explanation.
inline std::optional<Constituent> single_target(Symtab& st,
                                                const HypothesisEnv& env,
                                                const Rep& target,
                                                Certificate& cert) {
  IsobaricNF tn = normalize(st, env, target);
  if (tn.items.size() != 1 || tn.items[0].mult != 1) {
    cert.verdict = {Verdict::Inconclusive, 0,
                    "target is not a single product factor"};
    return std::nullopt;
  }
  return tn.items[0].c;
}

inline void note_assumptions(const HypothesisEnv& env, Certificate& cert) {
  for (const auto& a : env.assumptions())
    if (std::find(cert.assumptions.begin(), cert.assumptions.end(), a) ==
        cert.assumptions.end())
      cert.assumptions.push_back(a);
}

}  // namespace detail

inline Certificate certify(Symtab& st, const HypothesisEnv& env0,
                           const CertifyRequest& req) {
  Certificate cert;
  cert.route = req.route;
  HypothesisEnv env = env0.closed() ? env0 : env0.closure(st);

  IsobaricNF Pi = normalize(st, env, req.aux);
  cert.aux = detail::nf_display(Pi);

  auto target_c = detail::single_target(st, env, req.target, cert);
  if (!target_c) return cert;
  cert.target = target_c->key();

  cert.factors = pair_nf(st, env, Pi, normalize(st, env, make_dual(req.aux)));
  const FactorGroup* tg = cert.factors.find(cert.target);
  if (!tg) {
    cert.verdict = {Verdict::Inconclusive, 0,
                    "target factor does not occur in the self-pairing"};
    return cert;
  }
  cert.target_multiplicity = tg->exponent;

  if (req.route == Route::PositivityPoleRoute) {
    auto w = positivity_witness(st, env, Pi);
    if (!w) {
      cert.verdict = {Verdict::Inconclusive, 0,
                      "no positivity witness: some constituent is not "
                      "self-dual"};
      return cert;
    }
    cert.witness = w->description;
    cert.axioms.push_back("zero-counting via nonnegative coefficients "
                          "(Iwaniec-Kowalski, Theorem 5.42 shape)");
    int r;
    try {
      r = pole_order_at_1(st, env, cert.factors, req.mode);
    } catch (const case_split_required& e) {
      cert.verdict = {Verdict::Inconclusive, 0,
                      std::string("pole order undecided: ") + e.what()};
      return cert;
    }
    cert.budget_or_r = r;
    if (cert.target_multiplicity > r) {
      detail::note_assumptions(env, cert);
      cert.verdict = cert.assumptions.empty()
                         ? Verdict{Verdict::NoLSZero, 0, ""}
                         : Verdict{Verdict::ConditionalNoLSZero, 0, ""};
    } else {
      cert.verdict = {Verdict::Inconclusive, 0,
                      "target multiplicity " +
                          std::to_string(cert.target_multiplicity) +
                          " does not exceed pole order " + std::to_string(r)};
    }
    return cert;
  }

  // --- budget route ---
  // Pairwise distinctness: try to settle unknown isomorphy queries by
  // expanding the cross pairing and checking it is entire at s=1.
  bool conditional_distinctness = false;
  for (size_t i = 0; i < Pi.items.size(); ++i)
    for (size_t j = i + 1; j < Pi.items.size(); ++j) {
      const Constituent& ci = Pi.items[i].c;
      const Constituent& cj = Pi.items[j].c;
      Tri t = query_iso_const(st, env, ci, cj);
      if (t == Tri::No) continue;
      if (t == Tri::Yes) {
        cert.verdict = {Verdict::Inconclusive, 0,
                        "constituents " + ci.key() + " and " + cj.key() +
                            " are isomorphic: merge them first"};
        return cert;
      }
      if (derive_not_iso(st, env, ci, cj)) {
        Fact f = factmk::not_iso(ci.key(), cj.key());
        f.provenance = "cross pairing entire at s=1";
        env = env.assert_fact(st, f);
        cert.notes.push_back("derived NotIso(" + ci.key() + ", " + cj.key() +
                             "): cross pairing entire at s=1");
      } else if (!env.assumptions().empty()) {
        conditional_distinctness = true;
        cert.notes.push_back("distinctness of " + ci.key() + " and " +
                             cj.key() + " taken from the declared hypotheses");
      } else {
        cert.verdict = {Verdict::Inconclusive, 0,
                        "cannot separate " + ci.key() + " from " + cj.key()};
        return cert;
      }
    }
  long e = 0;
  for (const auto& it : Pi.items) e += it.mult * it.mult;
  cert.budget_or_r = int(e);

  cert.a = tg->exponent;
  Constituent partner = nf::dual_const(st, *target_c);
  const FactorGroup* pg = nullptr;
  if (partner.key() == cert.target) {
    cert.b = 0;  // self-dual target: the conjugate factor is the factor itself
  } else {
    pg = cert.factors.find(partner.key());
    cert.b = pg ? pg->exponent : 0;
  }
  if (cert.a + cert.b <= e) {
    cert.verdict = {Verdict::Inconclusive, 0,
                    "multiplicity " + std::to_string(cert.a + cert.b) +
                        " does not exceed budget " + std::to_string(e)};
    return cert;
  }

  // Residual factors must be analytic on (t, 1).
  bool ok = true;
  for (const auto& g : cert.factors.groups) {
    if (g.merged.key() == cert.target ||
        (pg && g.merged.key() == partner.key()))
      continue;
    ResidualEntry re{g.merged.key(), g.exponent, ""};
    auto flags = required_flags(g.merged);
    if (!flags.empty()) {
      std::vector<std::string> missing;
      for (const auto& f : flags) {
        if (env.assumed(f)) {
          if (std::find(cert.assumptions.begin(), cert.assumptions.end(), f) ==
              cert.assumptions.end())
            cert.assumptions.push_back(f);
        } else {
          missing.push_back(f);
        }
      }
      if (missing.empty()) {
        re.justification = "holomorphic on (t,1) under: ";
        for (size_t i = 0; i < flags.size(); ++i)
          re.justification += (i ? ", " : "") + flags[i];
      } else {
        re.justification = "opaque symmetric power; missing hypotheses: ";
        for (size_t i = 0; i < missing.size(); ++i)
          re.justification += (i ? ", " : "") + missing[i];
        ok = false;
      }
    } else if (g.diagonal && g.diag_cusp == Tri::Yes) {
      re.justification =
          "Rankin-Selberg self-pairing of a cuspidal: simple pole at s=1 "
          "only, analytic and positive on (t,1)";
    } else {
      re.justification =
          "automorphic L-function with pole at most at s=1: analytic on (t,1)";
    }
    cert.residuals.push_back(std::move(re));
  }
  cert.residual_analyticity = ok;
  if (!ok) {
    cert.verdict = {Verdict::Inconclusive, 0,
                    "a residual factor lacks a holomorphy justification"};
    return cert;
  }
  detail::note_assumptions(env, cert);
  if (conditional_distinctness || !cert.assumptions.empty()) {
    detail::note_assumptions(env, cert);
    cert.verdict = {Verdict::ConditionalNoLSZero, 0, ""};
  } else {
    cert.verdict = {Verdict::NoLSZero, 0, ""};
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Character route: the four-character casework
// ---------------------------------------------------------------------------

// The four characters are the factors of a degree-4 character sum over a
// field E; they always satisfy f1.f4 = f2.f3 when produced by the pairing
// identities, and the casework branches on how many of them are real.
inline Certificate character_route(Symtab& st, const HypothesisEnv& env,
                                   const std::vector<CharExpr>& four) {
  if (four.size() != 4)
    throw structural_error("character route expects exactly four characters");
  Certificate cert;
  cert.route = Route::CharacterRoute;
  {
    std::string s;
    for (size_t i = 0; i < four.size(); ++i)
      s += (i ? " (+) " : "") + four[i].key();
    cert.aux = s;
    cert.target = s;
  }
  int real = 0, complex_count = 0;
  for (const auto& f : four) {
    Tri t = env.query_char_real(st, f);
    if (t == Tri::Yes) ++real;
    else if (t == Tri::No) ++complex_count;
    else throw case_split_required("is " + f.key() + " real?");
  }
  cert.notes.push_back(std::to_string(real) + " real, " +
                       std::to_string(complex_count) + " complex");
  if (real <= 1) {
    cert.witness = "at most one real factor; complex character L-functions "
                   "have no real zero near s=1";
    cert.verdict = {Verdict::AtMost, 1, ""};
    return cert;
  }
  if (real == 2) {
    cert.witness = "two real and two complex-conjugate factors; the product "
                   "of two real character L-functions has at most one "
                   "Landau-Siegel zero";
    cert.axioms.push_back(
        "two-real-character zero repulsion (Landau; see also "
        "Ramakrishnan-Wang)");
    cert.verdict = {Verdict::AtMost, 1, ""};
    return cert;
  }
  if (real == 3)
    throw inconsistency_error(
        "exactly three of the four characters real",
        "the fourth equals their product combination and is then real too");

  // all four real
  std::vector<CharExpr> group;
  int trivial = 0;
  for (const auto& f : four)
    if (env.query_char_trivial(st, f) == Tri::Yes) ++trivial;
  if (trivial >= 1) {
    group = four;
    cert.witness = "all four factors real with a trivial member; the product "
                   "is a nonnegative Dirichlet series";
  } else {
    // group generated by alpha = f1 and the ratios beta = f2/f1,
    // gamma = f3/f1; then f2 = alpha.beta, f3 = alpha.gamma, and the
    // consistency relation gives f4 = alpha.beta.gamma
    CharExpr alpha = four[0];
    CharExpr beta = four[1].times(st, four[0].inverse(st));
    CharExpr gamma = four[2].times(st, four[0].inverse(st));
    group = {CharExpr::trivial(alpha.field()), alpha, beta, gamma,
             alpha.times(st, beta), alpha.times(st, gamma),
             beta.times(st, gamma), alpha.times(st, beta).times(st, gamma)};
    if (group.back().key() != four[3].key())
      cert.notes.push_back(
          "warning: fourth factor differs from f1.(f2/f1).(f3/f1)");
    cert.witness = "all four factors real and nontrivial; pass to the "
                   "quadratic group generated by f1 and the theta-ratios";
  }
  if (auto w = character_group_witness(st, env, group))
    cert.witness += "; " + w->description;
  int poles = 0;
  for (const auto& g : group) {
    Tri t = env.query_char_trivial(st, g);
    if (t == Tri::Yes) ++poles;
    if (t == Tri::Unknown)
      throw case_split_required("is " + g.key() + " trivial?");
  }
  cert.budget_or_r = poles;
  cert.axioms.push_back("zero-counting via nonnegative coefficients "
                        "(Iwaniec-Kowalski, Theorem 5.42 shape)");
  cert.verdict = {Verdict::AtMost, std::max(poles, 1), ""};
  return cert;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string serialize_text(const Symtab& st, const Certificate& c) {
  std::ostringstream os;
  os << "CERTIFICATE\n";
  os << "  target: " << c.target << "\n";
  os << "  aux: " << c.aux << "\n";
  os << "  route: " << to_string(c.route) << "\n";
  if (!c.factors.groups.empty()) {
    os << "FACTORS\n";
    for (const auto& g : c.factors.groups) {
      os << "  L(" << g.merged.key() << ")^" << g.exponent << "  deg "
         << g.merged.degree(st);
      if (g.diagonal) os << "  diagonal(" << to_string(g.diag_cusp) << ")";
      os << "\n";
    }
  }
  if (c.route == Route::BudgetRoute) {
    os << "BUDGET\n";
    os << "  e: " << c.budget_or_r << "\n";
    os << "  a: " << c.a << "\n";
    os << "  b: " << c.b << "\n";
  } else if (c.route == Route::PositivityPoleRoute ||
             c.route == Route::CharacterRoute) {
    os << "POLE\n";
    os << "  r: " << c.budget_or_r << "\n";
  }
  os << "TARGET\n";
  os << "  multiplicity: " << c.target_multiplicity << "\n";
  if (!c.witness.empty()) os << "  witness: " << c.witness << "\n";
  if (!c.residuals.empty()) {
    os << "RESIDUALS\n";
    for (const auto& r : c.residuals)
      os << "  L(" << r.factor << ")^" << r.exponent << ": "
         << r.justification << "\n";
  }
  if (!c.assumptions.empty() || !c.axioms.empty()) {
    os << "ASSUMPTIONS\n";
    for (const auto& a : c.assumptions) os << "  - " << a << "\n";
    for (const auto& a : c.axioms) os << "  * " << a << "\n";
  }
  if (!c.notes.empty()) {
    os << "NOTES\n";
    for (const auto& n : c.notes) os << "  " << n << "\n";
  }
  os << "VERDICT\n";
  os << "  " << c.verdict.str() << "\n";
  return os.str();
}

}  // namespace isobar
