// Normalization to isobaric normal form: the GL(2) product rules, the
// polyhedral splits, base change and automorphic induction, and conservation
// of degree and central character through every rewrite.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "isobar/normalize.hpp"

using namespace isobar;

namespace {

struct Fixture {
  Symtab st;
  HypothesisEnv env;
  Fixture() {
    st.declare_field({"F", "", 1, "", ""});
    st.declare_char({"eta", "F", 2});
    st.declare_field({"K", "F", 2, "th", "eta"});
    st.declare_char({"chi", "K", 0});
    st.declare_char({"nu", "F", 3});
    st.declare_atom({"p1", "F", 2, ""});
    st.declare_atom({"p2", "F", 2, ""});
  }
  void close() { env = env.closure(st); }
  IsobaricNF nf(const Rep& e) { return normalize(st, env, e); }
};

std::vector<std::string> keys(const IsobaricNF& n) {
  std::vector<std::string> out;
  for (const auto& it : n.items)
    for (long i = 0; i < it.mult; ++i) out.push_back(it.c.key());
  std::sort(out.begin(), out.end());
  return out;
}

bool conserves(Fixture& f, const Rep& e) {
  IsobaricNF n = f.nf(e);
  if (n.total_degree(f.st) != e->degree) return false;
  CharExpr om = CharExpr::trivial(n.field);
  for (const auto& it : n.items)
    for (long i = 0; i < it.mult; ++i)
      om = om.times(f.st, nf::omega_of(f.st, it.c));
  return om == central_character(f.st, e);
}

}  // namespace

TEST_CASE("self product: pi x pi = (Ad x om) (+) om") {
  Fixture f;
  f.close();
  Rep p = make_atom(f.st, "p1");
  IsobaricNF n = f.nf(make_boxtimes(p, p));
  CHECK(keys(n) == std::vector<std::string>{"Ad(p1)@om_p1", "[om_p1]"});
  CHECK(conserves(f, make_boxtimes(p, p)));
}

TEST_CASE("adjoint product: pi x Ad(pi) = pi (+) A3(pi)") {
  Fixture f;
  f.close();
  Rep p = make_atom(f.st, "p1");
  Rep e = make_boxtimes(p, make_ad(p));
  CHECK(keys(f.nf(e)) == std::vector<std::string>{"A3(p1)", "p1"});
  CHECK(conserves(f, e));
}

TEST_CASE("dualized adjoint product picks up an inverse determinant") {
  Fixture f;
  f.close();
  Rep p = make_atom(f.st, "p1");
  Rep e = make_boxtimes(make_dual(p), make_ad(p));
  CHECK(keys(f.nf(e)) ==
        std::vector<std::string>{"A3(p1)@om_p1^-1", "~p1"});
  CHECK(conserves(f, e));
}

TEST_CASE("adjoint square: Ad x Ad = A4 (+) Ad (+) 1") {
  Fixture f;
  f.close();
  Rep ad = make_ad(make_atom(f.st, "p1"));
  Rep e = make_boxtimes(ad, ad);
  CHECK(keys(f.nf(e)) == std::vector<std::string>{"A4(p1)", "Ad(p1)", "[1]"});
  CHECK(conserves(f, e));
}

TEST_CASE("duality is an involution on normal forms") {
  Fixture f;
  f.close();
  Rep p = make_atom(f.st, "p1");
  Rep e = make_boxplus(make_boxtimes(p, make_ad(p)), make_dual(p));
  IsobaricNF a = f.nf(e);
  IsobaricNF b = f.nf(make_dual(make_dual(e)));
  CHECK(keys(a) == keys(b));
  // dual_const is itself involutive on each constituent
  for (const auto& it : a.items)
    CHECK(nf::dual_const(f.st, nf::dual_const(f.st, it.c)).key() ==
          it.c.key());
}

TEST_CASE("tetrahedral splits of A3 and A4") {
  Fixture f;
  f.env = f.env.assert_fact(
      f.st, factmk::poly("p1", PolyType::Tetrahedral, "", "nu"));
  f.close();
  Rep p = make_atom(f.st, "p1");

  IsobaricNF a3 = f.nf(make_a3(p));  // pi*nu (+) pi*nu^2
  REQUIRE(a3.items.size() == 2);
  for (const auto& it : a3.items) {
    CHECK(it.c.degree(f.st) == 2);
    CHECK_FALSE(it.c.twist.is_syntactically_trivial());
  }
  CHECK(conserves(f, make_a3(p)));

  IsobaricNF a4 = f.nf(make_a4(p));  // Ad (+) nu (+) nu^2
  REQUIRE(a4.items.size() == 3);
  int chars = 0, ads = 0;
  for (const auto& it : a4.items) {
    if (it.c.is_char()) ++chars;
    if (it.c.degree(f.st) == 3) ++ads;
  }
  CHECK(chars == 2);
  CHECK(ads == 1);
  CHECK(conserves(f, make_a4(p)));
}

TEST_CASE("tetrahedral type auto-declares a cubic character") {
  Fixture f;
  f.env = f.env.assert_fact(f.st,
                            factmk::poly("p2", PolyType::Tetrahedral));
  f.close();
  IsobaricNF a3 = f.nf(make_a3(make_atom(f.st, "p2")));
  REQUIRE(a3.items.size() == 2);
  CHECK(f.st.chars.count("nu_p2") == 1);
  CHECK(f.st.char_atom("nu_p2").order == 3);
}

TEST_CASE("base change of a dihedral splits into conjugate characters") {
  Fixture f;
  f.env = f.env.assert_fact(
      f.st, factmk::poly("p2", PolyType::Dihedral, "K", "chi"));
  f.close();
  IsobaricNF n = f.nf(make_base_change(f.st, "K", make_atom(f.st, "p2")));
  CHECK(keys(n) == std::vector<std::string>{"[chi]", "[chi^theta]"});
}

TEST_CASE("Mackey identities for induction and base change") {
  Fixture f;
  f.close();
  Rep chi = make_char(CharExpr::atom(f.st, "chi"));
  Rep ind = make_induce(f.st, "F", chi);

  // BC(Ind chi) = chi (+) chi^theta
  IsobaricNF bc = f.nf(make_base_change(f.st, "K", ind));
  CHECK(keys(bc) == std::vector<std::string>{"[chi]", "[chi^theta]"});

  // Ind(BC pi) = pi (+) pi * eta
  Rep p = make_atom(f.st, "p1");
  IsobaricNF ibc = f.nf(make_induce(f.st, "F",
                                    make_base_change(f.st, "K", p)));
  CHECK(keys(ibc) == std::vector<std::string>{"p1", "p1@eta"});
  CHECK(conserves(f, make_induce(f.st, "F", make_base_change(f.st, "K", p))));

  // projection formula: Ind(chi) x pi = Ind(chi . BC(pi))
  IsobaricNF proj = f.nf(make_boxtimes(ind, p));
  CHECK(proj.total_degree(f.st) == 4);
  // Ind(chi) x Ind(chi) splits by Mackey into two inductions (or further)
  IsobaricNF sq = f.nf(make_boxtimes(ind, ind));
  CHECK(sq.total_degree(f.st) == 4);
  CHECK(conserves(f, make_boxtimes(ind, ind)));
}

TEST_CASE("twists ride along every rewrite") {
  Fixture f;
  f.close();
  CharExpr eta = CharExpr::atom(f.st, "eta");
  Rep p = make_atom(f.st, "p1");
  // (pi * eta) x (pi * eta): the twists square away into the characters
  Rep e = make_boxtimes(make_twist(f.st, p, eta), make_twist(f.st, p, eta));
  CHECK(keys(f.nf(e)) == std::vector<std::string>{"Ad(p1)@om_p1", "[om_p1]"});
  // Ad is twist-invariant
  CHECK(keys(f.nf(make_ad(make_twist(f.st, p, eta)))) ==
        keys(f.nf(make_ad(p))));
  CHECK(conserves(f, e));
}

TEST_CASE("opaque products stay closed with recorded cuspidality state") {
  Fixture f;
  f.env = f.env.assert_fact(f.st, factmk::not_poly("p1", PolyType::Dihedral));
  f.env = f.env.assert_fact(f.st, factmk::not_poly("p2", PolyType::Dihedral));
  f.env = f.env.assert_fact(f.st, factmk::not_twist_eq("p1", "p2"));
  f.close();
  Rep e = make_boxtimes(make_atom(f.st, "p1"), make_atom(f.st, "p2"));
  IsobaricNF n = f.nf(e);
  REQUIRE(n.items.size() == 1);
  CHECK(n.items[0].c.comps.size() == 2);
  // Ramakrishnan: GL2 x GL2 with both non-dihedral and not twist-equivalent
  CHECK(n.items[0].cusp == Tri::Yes);
}
