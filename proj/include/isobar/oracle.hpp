#pragma once

// Finite-group character-theory oracle. Each model ships a character table
// (classes, power maps, irreducible characters, subgroup fusion) computed
// independently of the rewrite engine; the checks below re-derive both sides
// of every rewrite rule as class functions and compare them numerically.
//
// Dictionary: direct sum <-> pointwise sum, tensor <-> pointwise product,
// contragredient <-> complex conjugate, base change <-> restriction,
// automorphic induction <-> induced character, Sym^k via the complete
// homogeneous symmetric function of the eigenvalues (Newton's identities on
// the power sums chi(g^j)).

#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "isobar/rep.hpp"

namespace isobar::oracle {

using Cx = std::complex<double>;
using ClassFn = std::vector<Cx>;
inline constexpr double kTol = 1e-9;

struct GroupData {
  std::string name;
  long order = 0;
  std::vector<long> sizes;
  std::array<std::vector<int>, 5> pow;  // pow[k-2][class] = class of g^k
  std::vector<std::pair<std::string, ClassFn>> chars;

  const ClassFn& chr(const std::string& n) const {
    for (const auto& [k, v] : chars)
      if (k == n) return v;
    throw structural_error("model " + name + " has no character " + n);
  }
  size_t nclasses() const { return sizes.size(); }
};

struct SubgroupData : GroupData {
  std::vector<int> fusion;  // subgroup class -> parent class
  std::vector<int> theta;   // Galois action on subgroup classes
};

struct GroupModel {
  GroupData g;
  std::map<std::string, SubgroupData> subgroups;
};

// --- table reader ----------------------------------------------------------

inline Cx parse_cx(const std::string& tok) {
  auto comma = tok.find(',');
  return Cx(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
}

inline void read_common(std::istream& in, GroupData& g, const std::string& stop) {
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == stop) return;
    if (key == "sizes") {
      long v;
      while (ls >> v) g.sizes.push_back(v);
    } else if (key == "pow") {
      int k, v;
      ls >> k;
      while (ls >> v) g.pow[k - 2].push_back(v);
    } else if (key == "char") {
      std::string n;
      int dim;
      ls >> n >> dim;
      ClassFn fn;
      std::string tok;
      while (ls >> tok) fn.push_back(parse_cx(tok));
      g.chars.emplace_back(n, std::move(fn));
    } else if (key == "fusion") {
      auto* s = static_cast<SubgroupData*>(&g);
      int v;
      while (ls >> v) s->fusion.push_back(v);
    } else if (key == "theta") {
      auto* s = static_cast<SubgroupData*>(&g);
      int v;
      while (ls >> v) s->theta.push_back(v);
    }
  }
  if (stop != "end" && stop != "endsub")
    throw structural_error("truncated model file");
}

inline GroupModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open model file: " + path);
  GroupModel m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "model") ls >> m.g.name;
    else if (key == "order") ls >> m.g.order;
    else if (key == "nclasses") { /* redundant with sizes */ }
    else if (key == "sizes") {
      long v;
      while (ls >> v) m.g.sizes.push_back(v);
    } else if (key == "pow") {
      int k, v;
      ls >> k;
      while (ls >> v) m.g.pow[k - 2].push_back(v);
    } else if (key == "char") {
      std::string n;
      int dim;
      ls >> n >> dim;
      ClassFn fn;
      std::string tok;
      while (ls >> tok) fn.push_back(parse_cx(tok));
      m.g.chars.emplace_back(n, std::move(fn));
    } else if (key == "subgroup") {
      SubgroupData s;
      int ncl;
      ls >> s.name >> s.order >> ncl;
      read_common(in, s, "endsub");
      m.subgroups[s.name] = std::move(s);
    } else if (key == "end") {
      break;
    }
  }
  if (m.g.sizes.empty()) throw structural_error("empty model file: " + path);
  return m;
}

// --- class-function algebra ------------------------------------------------

inline ClassFn add(const ClassFn& a, const ClassFn& b) {
  ClassFn r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline ClassFn mul(const ClassFn& a, const ClassFn& b) {
  ClassFn r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
  return r;
}
inline ClassFn conj(const ClassFn& a) {
  ClassFn r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::conj(a[i]);
  return r;
}
inline ClassFn constant(size_t n, Cx v) { return ClassFn(n, v); }

inline Cx inner(const GroupData& g, const ClassFn& a, const ClassFn& b) {
  Cx acc = 0;
  for (size_t i = 0; i < a.size(); ++i)
    acc += double(g.sizes[i]) * a[i] * std::conj(b[i]);
  return acc / double(g.order);
}

inline bool equal_fn(const ClassFn& a, const ClassFn& b, double tol = kTol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

// Sym^k of a representation with character chi, via Newton's identities:
// k h_k = sum_{j=1..k} p_j h_{k-j} with p_j(g) = chi(g^j).
inline ClassFn sym_k(const GroupData& g, const ClassFn& chi, int k) {
  ClassFn out(g.nclasses());
  for (size_t c = 0; c < g.nclasses(); ++c) {
    std::vector<Cx> p(k + 1), h(k + 1);
    p[1] = chi[c];
    for (int j = 2; j <= k; ++j) p[j] = chi[g.pow[j - 2][c]];
    h[0] = 1;
    for (int m = 1; m <= k; ++m) {
      Cx acc = 0;
      for (int j = 1; j <= m; ++j) acc += p[j] * h[m - j];
      h[m] = acc / double(m);
    }
    out[c] = h[k];
  }
  return out;
}

// Determinant character of a 2-dimensional representation: Lambda^2.
inline ClassFn det2(const GroupData& g, const ClassFn& chi) {
  ClassFn out(g.nclasses());
  for (size_t c = 0; c < g.nclasses(); ++c)
    out[c] = (chi[c] * chi[c] - chi[g.pow[0][c]]) / 2.0;
  return out;
}

inline ClassFn ad_fn(const GroupData& g, const ClassFn& chi) {
  return mul(sym_k(g, chi, 2), conj(det2(g, chi)));
}
inline ClassFn a3_fn(const GroupData& g, const ClassFn& chi) {
  return mul(sym_k(g, chi, 3), conj(det2(g, chi)));
}
inline ClassFn a4_fn(const GroupData& g, const ClassFn& chi) {
  ClassFn d = conj(det2(g, chi));
  return mul(sym_k(g, chi, 4), mul(d, d));
}

inline ClassFn restrict_fn(const GroupModel& m, const std::string& sub,
                           const ClassFn& chi) {
  const SubgroupData& s = m.subgroups.at(sub);
  ClassFn out(s.nclasses());
  for (size_t c = 0; c < s.nclasses(); ++c) out[c] = chi[s.fusion[c]];
  return out;
}

inline ClassFn induce_fn(const GroupModel& m, const std::string& sub,
                         const ClassFn& chi) {
  const SubgroupData& s = m.subgroups.at(sub);
  long idx = m.g.order / s.order;
  ClassFn out(m.g.nclasses(), 0.0);
  for (size_t c = 0; c < s.nclasses(); ++c)
    out[s.fusion[c]] += double(idx * s.sizes[c]) * chi[c];
  for (size_t c = 0; c < m.g.nclasses(); ++c) out[c] /= double(m.g.sizes[c]);
  return out;
}

inline ClassFn theta_fn(const SubgroupData& s, const ClassFn& chi) {
  ClassFn out(s.nclasses());
  for (size_t c = 0; c < s.nclasses(); ++c) out[c] = chi[s.theta[c]];
  return out;
}

// Nonnegative-integer decomposition into the table's irreducibles; throws if
// the class function is not a genuine character.
inline std::map<std::string, long> decompose(const GroupData& g,
                                             const ClassFn& fn) {
  std::map<std::string, long> out;
  ClassFn rest = fn;
  for (const auto& [n, v] : g.chars) {
    Cx c = inner(g, fn, v);
    long mult = std::lround(c.real());
    if (std::abs(c - Cx(double(mult))) > 1e-6 || mult < 0)
      throw structural_error("non-character multiplicity for " + n + " in " +
                             g.name);
    if (mult) out[n] = mult;
    for (size_t i = 0; i < rest.size(); ++i) rest[i] -= double(mult) * v[i];
  }
  for (const auto& v : rest)
    if (std::abs(v) > 1e-6)
      throw structural_error("class function not spanned by the table of " +
                             g.name);
  return out;
}

// --- interpretation of representation expressions --------------------------

struct Binding {
  // field name -> level: "" for the ground group, else a subgroup name
  std::map<std::string, std::string> field_level;
  // atom / character-atom name -> (level, table character name)
  std::map<std::string, std::pair<std::string, std::string>> atoms;
  std::map<std::string, std::pair<std::string, std::string>> chars;
};

struct Interp {
  std::string level;
  ClassFn fn;
};

inline const GroupData& level_data(const GroupModel& m, const std::string& lv) {
  if (lv.empty()) return m.g;
  return m.subgroups.at(lv);
}

inline Interp interpret_char(const GroupModel& m, const Binding& b,
                             const CharExpr& c, const std::string& level) {
  const GroupData& g = level_data(m, level);
  ClassFn acc = constant(g.nclasses(), 1.0);
  for (const auto& [k, x] : c.factors()) {
    auto it = b.chars.find(k.atom);
    if (it == b.chars.end())
      throw structural_error("unbound character atom: " + k.atom);
    auto [lv, cname] = it->second;
    ClassFn v = level_data(m, lv).chr(cname);
    for (int t = 0; t < k.theta_pow; ++t)
      v = theta_fn(m.subgroups.at(lv), v);
    for (const auto& step : k.path) {
      if (step.kind == CharStep::Restrict) {
        if (!lv.empty())
          throw structural_error("nested restriction not modeled");
        v = restrict_fn(m, step.field == level ? level : step.field, v);
        lv = step.field;
      } else {
        throw structural_error("character transfer not modeled in the oracle");
      }
    }
    int e = x;
    ClassFn p = e < 0 ? conj(v) : v;
    for (int t = 0; t < std::abs(e); ++t) acc = mul(acc, p);
  }
  return {level, acc};
}

inline Interp interpret(const GroupModel& m, const Binding& b, const Rep& e) {
  auto level_of = [&](const std::string& field) {
    auto it = b.field_level.find(field);
    if (it == b.field_level.end())
      throw structural_error("unbound field: " + field);
    return it->second;
  };
  switch (e->kind) {
    case RepExpr::AtomK: {
      auto [lv, n] = b.atoms.at(e->atom);
      return {lv, level_data(m, lv).chr(n)};
    }
    case RepExpr::CharK:
      return interpret_char(m, b, e->chr, level_of(e->field));
    case RepExpr::TwistK: {
      Interp a = interpret(m, b, e->a);
      Interp c = interpret_char(m, b, e->chr, a.level);
      return {a.level, mul(a.fn, c.fn)};
    }
    case RepExpr::DualK: {
      Interp a = interpret(m, b, e->a);
      return {a.level, conj(a.fn)};
    }
    case RepExpr::BoxPlusK: {
      Interp a = interpret(m, b, e->a), c = interpret(m, b, e->b);
      return {a.level, add(a.fn, c.fn)};
    }
    case RepExpr::BoxTimesK: {
      Interp a = interpret(m, b, e->a), c = interpret(m, b, e->b);
      return {a.level, mul(a.fn, c.fn)};
    }
    case RepExpr::SymK: {
      Interp a = interpret(m, b, e->a);
      return {a.level, sym_k(level_data(m, a.level), a.fn, e->sym_k)};
    }
    case RepExpr::AdK: {
      Interp a = interpret(m, b, e->a);
      return {a.level, ad_fn(level_data(m, a.level), a.fn)};
    }
    case RepExpr::A3K: {
      Interp a = interpret(m, b, e->a);
      return {a.level, a3_fn(level_data(m, a.level), a.fn)};
    }
    case RepExpr::A4K: {
      Interp a = interpret(m, b, e->a);
      return {a.level, a4_fn(level_data(m, a.level), a.fn)};
    }
    case RepExpr::BaseChangeK: {
      Interp a = interpret(m, b, e->a);
      return {level_of(e->target_field),
              restrict_fn(m, level_of(e->target_field), a.fn)};
    }
    case RepExpr::InduceK: {
      Interp a = interpret(m, b, e->a);
      return {level_of(e->target_field), induce_fn(m, a.level, a.fn)};
    }
  }
  throw structural_error("unreachable interpret kind");
}

// --- rule checks -----------------------------------------------------------

struct CheckResult {
  enum Status { Pass, Fail, Inapplicable } status;
  std::string detail;
};

inline CheckResult check_eq(const GroupData& g, const ClassFn& lhs,
                            const ClassFn& rhs, const std::string& what) {
  if (equal_fn(lhs, rhs)) {
    // confirm the decomposition is a genuine character
    decompose(g, lhs);
    return {CheckResult::Pass, what};
  }
  double worst = 0;
  for (size_t i = 0; i < lhs.size(); ++i)
    worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  return {CheckResult::Fail,
          what + ": max deviation " + std::to_string(worst)};
}

// Find a 2-dimensional faithful-ish character to play pi in the model.
inline const ClassFn* find_2dim(const GroupData& g, std::string* name) {
  for (const auto& [n, v] : g.chars)
    if (std::abs(v[0] - Cx(2.0)) < kTol) {
      if (name) *name = n;
      return &v;
    }
  return nullptr;
}

inline CheckResult model_check(const std::string& rule, const GroupModel& m) {
  const GroupData& g = m.g;
  std::string pname;
  const ClassFn* pi = find_2dim(g, &pname);
  const std::string sub =
      m.subgroups.empty() ? "" : m.subgroups.begin()->first;

  if (rule == "R1") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    ClassFn det = det2(g, *pi);
    return check_eq(g, mul(*pi, *pi), add(mul(ad_fn(g, *pi), det), det),
                    "pi^2 = Ad.det + det on " + pname);
  }
  if (rule == "R2") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    return check_eq(g, mul(*pi, ad_fn(g, *pi)), add(*pi, a3_fn(g, *pi)),
                    "pi.Ad = pi + A3 on " + pname);
  }
  if (rule == "R2d") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    ClassFn d = conj(det2(g, *pi));
    return check_eq(g, mul(conj(*pi), ad_fn(g, *pi)),
                    add(conj(*pi), mul(a3_fn(g, *pi), d)),
                    "~pi.Ad = ~pi + A3.det^-1 on " + pname);
  }
  if (rule == "R3") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    ClassFn ad = ad_fn(g, *pi);
    ClassFn rhs = add(a4_fn(g, *pi), add(ad, constant(g.nclasses(), 1.0)));
    return check_eq(g, mul(ad, ad), rhs, "Ad^2 = A4 + Ad + 1 on " + pname);
  }
  if (rule == "R4" || rule == "R5") {
    // tetrahedral side condition: a cubic character nu with Ad = Ad.nu
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    const ClassFn* nu = nullptr;
    for (const auto& [n, v] : g.chars) {
      if (std::abs(v[0] - Cx(1.0)) > kTol) continue;
      ClassFn v3 = mul(v, mul(v, v));
      bool cubic = equal_fn(v3, constant(g.nclasses(), 1.0)) &&
                   !equal_fn(v, constant(g.nclasses(), 1.0));
      if (cubic && equal_fn(ad_fn(g, *pi), mul(ad_fn(g, *pi), v))) {
        nu = &v;
        break;
      }
    }
    if (!nu) return {CheckResult::Inapplicable, "no tetrahedral cubic nu"};
    ClassFn nu2 = mul(*nu, *nu);
    if (rule == "R4")
      return check_eq(g, a3_fn(g, *pi), add(mul(*pi, *nu), mul(*pi, nu2)),
                      "A3 = pi.nu + pi.nu^2 on " + pname);
    ClassFn rhs = add(ad_fn(g, *pi), add(*nu, nu2));
    return check_eq(g, a4_fn(g, *pi), rhs, "A4 = Ad + nu + nu^2 on " + pname);
  }
  if (rule == "R6") {
    // octahedral: A4 = Ind_K(chi^-1) + Ad.eta with K the index-2 subgroup,
    // eta its associated quadratic character, chi a cubic character of K
    if (!pi || sub.empty())
      return {CheckResult::Inapplicable, "needs 2-dim char and subgroup"};
    const SubgroupData& s = m.subgroups.at(sub);
    if (g.order != 2 * s.order)
      return {CheckResult::Inapplicable, "subgroup not index 2"};
    // eta: +1 on classes meeting the subgroup, -1 elsewhere
    ClassFn eta(g.nclasses(), -1.0);
    for (int f : s.fusion) eta[f] = 1.0;
    const ClassFn* chi = nullptr;
    for (const auto& [n, v] : s.chars) {
      if (std::abs(v[0] - Cx(1.0)) > kTol) continue;
      ClassFn v3 = mul(v, mul(v, v));
      if (equal_fn(v3, constant(s.nclasses(), 1.0)) &&
          !equal_fn(v, constant(s.nclasses(), 1.0))) {
        chi = &v;
        break;
      }
    }
    if (!chi) return {CheckResult::Inapplicable, "no cubic character on K"};
    ClassFn rhs = add(induce_fn(m, sub, conj(*chi)), mul(ad_fn(g, *pi), eta));
    return check_eq(g, a4_fn(g, *pi), rhs,
                    "A4 = Ind_K(chi^-1) + Ad.eta on " + pname);
  }
  if (rule == "R7" || rule == "R10") {
    if (sub.empty()) return {CheckResult::Inapplicable, "no subgroup"};
    const SubgroupData& s = m.subgroups.at(sub);
    if (g.order != 2 * s.order)
      return {CheckResult::Inapplicable, "subgroup not index 2"};
    for (const auto& [n, v] : s.chars) {
      if (std::abs(v[0] - Cx(1.0)) > kTol) continue;
      ClassFn lhs = restrict_fn(m, sub, induce_fn(m, sub, v));
      auto r = check_eq(s, lhs, add(v, theta_fn(s, v)),
                        "Res Ind " + n + " = " + n + " + " + n + "^theta");
      if (r.status != CheckResult::Pass) return r;
    }
    return {CheckResult::Pass, "Mackey restriction on all characters of " +
                                   s.name};
  }
  if (rule == "R8") {
    if (!pi || sub.empty())
      return {CheckResult::Inapplicable, "needs 2-dim char and subgroup"};
    const SubgroupData& s = m.subgroups.at(sub);
    if (g.order != 2 * s.order)
      return {CheckResult::Inapplicable, "subgroup not index 2"};
    ClassFn eta(g.nclasses(), -1.0);
    for (int f : s.fusion) eta[f] = 1.0;
    ClassFn lhs = induce_fn(m, sub, restrict_fn(m, sub, *pi));
    return check_eq(g, lhs, add(*pi, mul(*pi, eta)),
                    "Ind Res pi = pi + pi.eta on " + pname);
  }
  if (rule == "R9") {
    if (!pi || sub.empty())
      return {CheckResult::Inapplicable, "needs 2-dim char and subgroup"};
    const SubgroupData& s = m.subgroups.at(sub);
    for (const auto& [n, v] : s.chars) {
      if (std::abs(v[0] - Cx(1.0)) > kTol) continue;
      ClassFn lhs = mul(induce_fn(m, sub, v), *pi);
      ClassFn rhs = induce_fn(m, sub, mul(v, restrict_fn(m, sub, *pi)));
      auto r = check_eq(g, lhs, rhs, "projection formula with " + n);
      if (r.status != CheckResult::Pass) return r;
    }
    return {CheckResult::Pass, "projection formula on all characters of " +
                                   s.name};
  }
  if (rule == "R11") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    ClassFn a = *pi, b2 = ad_fn(g, *pi), c = conj(*pi);
    return check_eq(g, mul(add(a, b2), c), add(mul(a, c), mul(b2, c)),
                    "bilinearity");
  }
  if (rule == "R12") {
    if (sub.empty()) return {CheckResult::Inapplicable, "no subgroup"};
    const SubgroupData& s = m.subgroups.at(sub);
    if (g.order != 2 * s.order)
      return {CheckResult::Inapplicable, "subgroup not index 2"};
    for (const auto& [n2, v2] : s.chars) {
      if (std::abs(v2[0] - Cx(1.0)) > kTol) continue;
      for (const auto& [n3, v3] : s.chars) {
        if (std::abs(v3[0] - Cx(1.0)) > kTol) continue;
        ClassFn lhs = mul(induce_fn(m, sub, v2), induce_fn(m, sub, v3));
        ClassFn rhs = add(induce_fn(m, sub, mul(v2, v3)),
                          induce_fn(m, sub, mul(v2, theta_fn(s, v3))));
        auto r = check_eq(g, lhs, rhs,
                          "Ind x Ind with " + n2 + ", " + n3);
        if (r.status != CheckResult::Pass) return r;
      }
    }
    return {CheckResult::Pass, "Ind x Ind Mackey on all character pairs"};
  }
  if (rule == "CG5") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    ClassFn d = conj(det2(g, *pi));
    ClassFn rhs = add(a3_fn(g, *pi),
                      add(*pi, mul(sym_k(g, *pi, 5), mul(d, d))));
    return check_eq(g, mul(ad_fn(g, *pi), a3_fn(g, *pi)), rhs,
                    "Ad.A3 = A3 + pi + Sym5.det^-2 on " + pname);
  }
  if (rule == "CG6") {
    if (!pi) return {CheckResult::Inapplicable, "no 2-dim character"};
    ClassFn d = conj(det2(g, *pi));
    ClassFn rhs = add(a4_fn(g, *pi),
                      add(ad_fn(g, *pi),
                          mul(sym_k(g, *pi, 6), mul(d, mul(d, d)))));
    return check_eq(g, mul(a4_fn(g, *pi), ad_fn(g, *pi)), rhs,
                    "A4.Ad = A4 + Ad + Sym6.det^-3 on " + pname);
  }
  return {CheckResult::Inapplicable, "unknown rule " + rule};
}

// Positivity: a multiset of characters of an elementary abelian 2-group sums
// to a nonnegative value at every element iff it is (a union of cosets of)
// a subgroup of the dual; check the pointwise sums directly.
inline bool positivity_numeric(const GroupData& g,
                               const std::vector<ClassFn>& multiset) {
  for (size_t c = 0; c < g.nclasses(); ++c) {
    Cx acc = 0;
    for (const auto& fn : multiset) acc += fn[c];
    if (acc.real() < -kTol || std::abs(acc.imag()) > kTol) return false;
  }
  return true;
}

inline const std::vector<std::string>& all_rules() {
  static const std::vector<std::string> rules = {
      "R1", "R2", "R2d", "R3", "R4", "R5", "R6", "R7", "R8",
      "R9", "R10", "R11", "R12", "CG5", "CG6"};
  return rules;
}

}  // namespace isobar::oracle
