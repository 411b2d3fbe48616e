#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "isobar/errors.hpp"

namespace isobar {

// A number field, named relative to an optional base extension.
// ext_degree is prime for every non-ground label.
struct FieldLabel {
  std::string name;
  std::string base;        // empty for the ground field
  int ext_degree = 1;      // relative degree over base
  std::string theta;       // name of the Galois generator, "" if undeclared
  std::string assoc_char;  // eta_{K/F}: atom name of the associated character
};

// A declared Hecke character atom. order 0 means unknown; otherwise the exact
// finite order (1 = trivial, 2 = quadratic, ...).
struct CharAtomInfo {
  std::string name;
  std::string field;
  int order = 0;
};

// A declared cuspidal atom pi on GL_n.
struct CuspidalAtomInfo {
  std::string name;
  std::string field;
  int degree = 2;
  std::string central_char;  // char atom name; auto-declared if absent
};

// Declaration table: fields, character atoms, cuspidal atoms. Built once per
// script/env, then treated as immutable by every operation.
struct Symtab {
  std::map<std::string, FieldLabel> fields;
  std::map<std::string, CharAtomInfo> chars;
  std::map<std::string, CuspidalAtomInfo> atoms;

  const FieldLabel& field(const std::string& n) const {
    auto it = fields.find(n);
    if (it == fields.end()) throw structural_error("undeclared field: " + n);
    return it->second;
  }
  const CharAtomInfo& char_atom(const std::string& n) const {
    auto it = chars.find(n);
    if (it == chars.end()) throw structural_error("undeclared character: " + n);
    return it->second;
  }
  const CuspidalAtomInfo& atom(const std::string& n) const {
    auto it = atoms.find(n);
    if (it == atoms.end()) throw structural_error("undeclared atom: " + n);
    return it->second;
  }
  bool is_extension_of(const std::string& ext, const std::string& base) const {
    std::string f = ext;
    while (!f.empty()) {
      const auto& fl = field(f);
      if (fl.base == base) return true;
      f = fl.base;
    }
    return false;
  }

  void declare_field(FieldLabel fl) {
    if (!fl.base.empty()) field(fl.base);
    fields[fl.name] = std::move(fl);
  }
  void declare_char(CharAtomInfo c) {
    field(c.field);
    chars[c.name] = std::move(c);
  }
  void declare_atom(CuspidalAtomInfo a) {
    field(a.field);
    if (a.central_char.empty()) a.central_char = "om_" + a.name;
    if (!chars.count(a.central_char))
      declare_char({a.central_char, a.field, 0});
    atoms[a.name] = std::move(a);
  }
};

// One multiplicative generator inside a CharExpr: a declared atom, possibly
// moved by a Galois generator (theta_pow) and moved along a chain of
// restrictions (base change up) and transfers (automorphic induction down).
struct CharStep {
  enum Kind { Restrict, Transfer } kind;
  std::string field;  // Restrict: target extension; Transfer: source extension

  auto tie() const { return std::tie(kind, field); }
  bool operator<(const CharStep& o) const { return tie() < o.tie(); }
  bool operator==(const CharStep& o) const { return tie() == o.tie(); }
};

struct CharKey {
  std::string atom;
  int theta_pow = 0;
  std::vector<CharStep> path;  // applied outermost-last

  auto tie() const { return std::tie(atom, path, theta_pow); }
  bool operator<(const CharKey& o) const { return tie() < o.tie(); }
  bool operator==(const CharKey& o) const { return tie() == o.tie(); }
};

// A character on a fixed field, kept in normal form: atoms sorted by key,
// exponents collected and reduced modulo the atom order when it is known.
class CharExpr {
 public:
  CharExpr() = default;
  explicit CharExpr(std::string field) : field_(std::move(field)) {}

  static CharExpr trivial(const std::string& field) { return CharExpr(field); }

  static CharExpr atom(const Symtab& st, const std::string& name, int exp = 1) {
    const auto& info = st.char_atom(name);
    CharExpr c(info.field);
    c.add(st, CharKey{name, 0, {}}, exp);
    return c;
  }

  const std::string& field() const { return field_; }
  const std::map<CharKey, int>& factors() const { return e_; }
  bool is_syntactically_trivial() const { return e_.empty(); }

  CharExpr times(const Symtab& st, const CharExpr& o) const {
    if (!o.field_.empty() && !field_.empty() && o.field_ != field_)
      throw structural_error("character product across fields: " + field_ +
                             " vs " + o.field_);
    CharExpr r = *this;
    if (r.field_.empty()) r.field_ = o.field_;
    for (const auto& [k, x] : o.e_) r.add(st, k, x);
    return r;
  }

  CharExpr pow(const Symtab& st, int n) const {
    CharExpr r(field_);
    for (const auto& [k, x] : e_) r.add(st, k, x * n);
    return r;
  }

  CharExpr inverse(const Symtab& st) const { return pow(st, -1); }

  // Apply theta_E^j, the Galois generator of the top extension E = field().
  // Atoms restricted from below are fixed; native atoms pick up theta powers.
  CharExpr galois(const Symtab& st, int j = 1) const {
    const FieldLabel& fl = st.field(field_);
    if (fl.theta.empty())
      throw structural_error("field " + field_ + " has no Galois generator");
    CharExpr r(field_);
    for (const auto& [k, x] : e_) {
      CharKey nk = k;
      if (nk.path.empty())
        nk.theta_pow = ((nk.theta_pow + j) % fl.ext_degree + fl.ext_degree) %
                       fl.ext_degree;
      r.add(st, nk, x);
    }
    return r;
  }

  // Restrict (base-change) to the extension K of field(). The associated
  // character eta_{K/F} dies on K; a character transferred from K expands
  // into its Galois orbit; everything else restricts formally.
  CharExpr restrict_to(const Symtab& st, const std::string& K) const {
    const FieldLabel& kf = st.field(K);
    if (kf.base != field_)
      throw structural_error("restriction target " + K +
                             " does not extend " + field_);
    CharExpr r(K);
    for (const auto& [k, x] : e_) {
      if (k.path.empty() && k.theta_pow == 0 && k.atom == kf.assoc_char)
        continue;  // eta_{K/F} restricted to K is trivial
      if (!k.path.empty() && k.path.back().kind == CharStep::Transfer &&
          k.path.back().field == K) {
        // restriction of a transfer from K itself: Galois orbit product
        CharKey base = k;
        base.path.pop_back();
        if (base.path.empty()) {
          for (int j = 0; j < kf.ext_degree; ++j) {
            CharKey nk = base;
            nk.theta_pow = (base.theta_pow + j) % kf.ext_degree;
            r.add(st, nk, x);
          }
        } else {
          r.add(st, base, x * kf.ext_degree);  // theta-fixed atom
        }
        continue;
      }
      CharKey nk = k;
      nk.path.push_back({CharStep::Restrict, K});
      r.add(st, nk, x);
    }
    return r;
  }

  // Transfer (the character-side shadow of automorphic induction) from
  // field() = K down to its base F. Transfer is Galois-invariant, and
  // transfer of a restriction is the ext_degree-th power.
  CharExpr transfer_to_base(const Symtab& st) const {
    const FieldLabel& kf = st.field(field_);
    if (kf.base.empty())
      throw structural_error("transfer from ground field " + field_);
    CharExpr r(kf.base);
    for (const auto& [k, x] : e_) {
      if (!k.path.empty() && k.path.back().kind == CharStep::Restrict &&
          k.path.back().field == field_) {
        CharKey base = k;
        base.path.pop_back();
        r.add(st, base, x * kf.ext_degree);
        continue;
      }
      CharKey nk = k;
      nk.theta_pow = 0;  // transfer kills the Galois action
      nk.path.push_back({CharStep::Transfer, field_});
      r.add(st, nk, x);
    }
    return r;
  }

  // Exact order, 0 if undetermined. Only a power of a single atom has a
  // decidable order: distinct atoms are free generators, so a product like
  // nu1.nu3 could collapse (nu3 = nu1^-1) and its order is unknown unless
  // the environment supplies a fact.
  int order(const Symtab& st) const {
    if (e_.empty()) return 1;
    if (e_.size() > 1) return 0;
    const auto& [k, x] = *e_.begin();
    int a = atom_order(st, k);
    if (a == 0) return 0;
    return a / std::gcd(a, std::abs(x));
  }

  std::string key() const {
    std::ostringstream os;
    if (e_.empty()) return "1";
    bool first = true;
    for (const auto& [k, x] : e_) {
      if (!first) os << ".";
      first = false;
      os << k.atom;
      if (k.theta_pow != 0) os << "^theta" << (k.theta_pow > 1 ? std::to_string(k.theta_pow) : "");
      for (const auto& s : k.path)
        os << (s.kind == CharStep::Restrict ? "|" : "!") << s.field;
      if (x != 1) os << "^" << x;
    }
    return os.str();
  }

  bool operator==(const CharExpr& o) const {
    return field_ == o.field_ && e_ == o.e_;
  }
  bool operator<(const CharExpr& o) const {
    return std::tie(field_, e_) < std::tie(o.field_, o.e_);
  }

 private:
  int atom_order(const Symtab& st, const CharKey& k) const {
    // Restriction can only shrink the order, and can kill quadratic atoms
    // (eta itself is handled in restrict_to); orders of restricted atoms are
    // kept as declared, which is the formal-generator convention used
    // throughout: a restricted atom is a fresh generator of the same order.
    return st.char_atom(k.atom).order;
  }

  void add(const Symtab& st, const CharKey& k, int exp) {
    int cur = 0;
    auto it = e_.find(k);
    if (it != e_.end()) cur = it->second;
    int nx = cur + exp;
    int ord = atom_order(st, k);
    if (ord > 0) nx = ((nx % ord) + ord) % ord;
    if (nx == 0) {
      if (it != e_.end()) e_.erase(it);
    } else {
      e_[k] = nx;
    }
  }

  std::string field_;
  std::map<CharKey, int> e_;
};

}  // namespace isobar
