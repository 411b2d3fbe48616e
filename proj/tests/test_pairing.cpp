// Rankin-Selberg pairing: factor-group expansion, pole counting in bound and
// exact modes, the squared-multiplicity budget, and positivity witnesses.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "isobar/pairing.hpp"

using namespace isobar;

namespace {

// The general-type GL(2)^3 environment: three non-dihedral atoms, pairwise
// not twist-equivalent.
struct General222 {
  Symtab st;
  HypothesisEnv env;
  General222() {
    st.declare_field({"F", "", 1, "", ""});
    for (auto n : {"p1", "p2", "p3"}) st.declare_atom({n, "F", 2, ""});
    for (auto n : {"p1", "p2", "p3"})
      env = env.assert_fact(st, factmk::not_poly(n, PolyType::Dihedral));
    env = env.assert_fact(st, factmk::not_twist_eq("p1", "p2"));
    env = env.assert_fact(st, factmk::not_twist_eq("p1", "p3"));
    env = env.assert_fact(st, factmk::not_twist_eq("p2", "p3"));
    env = env.assert_fact(st, factmk::not_poly("p1", PolyType::Tetrahedral));
    env = env.closure(st);
  }
};

// The adjoint-pair environment of the positivity route, parameterized by the
// polyhedral types of the two atoms.
struct AdjointPair {
  Symtab st;
  HypothesisEnv env;
  explicit AdjointPair(int subcase) {
    st.declare_field({"F", "", 1, "", ""});
    st.declare_atom({"p1", "F", 2, ""});
    st.declare_atom({"p3", "F", 2, ""});
    st.declare_char({"mu", "F", 2});
    env = env.assert_fact(st, factmk::not_twist_eq("p1", "p3"));
    env = env.assert_fact(st, factmk::not_poly("p1", PolyType::Dihedral));
    env = env.assert_fact(st, factmk::not_poly("p3", PolyType::Dihedral));
    if (subcase == 1) {
      env = env.assert_fact(st, factmk::poly("p1", PolyType::NonSolvable));
      env = env.assert_fact(st, factmk::poly("p3", PolyType::NonSolvable));
    } else if (subcase == 2) {
      // octahedral with the inducing data withheld
      env = env.assert_fact(st, factmk::poly("p1", PolyType::Octahedral));
      env = env.assert_fact(st, factmk::poly("p3", PolyType::NonSolvable));
    } else {
      st.declare_char({"nu1", "F", 3});
      st.declare_char({"nu3", "F", 3});
      env = env.assert_fact(st,
                            factmk::poly("p1", PolyType::Tetrahedral, "", "nu1"));
      env = env.assert_fact(st,
                            factmk::poly("p3", PolyType::Tetrahedral, "", "nu3"));
    }
    env = env.closure(st);
  }

  Rep aux() {
    Rep ad1 = make_ad(make_atom(st, "p1"));
    Rep ad3mu = make_twist(st, make_ad(make_atom(st, "p3")),
                           CharExpr::atom(st, "mu"));
    return make_boxplus(make_boxplus(make_boxplus(ad1, ad1), ad3mu),
                        make_boxtimes(ad1, ad3mu));
  }
  Rep target() {
    return make_boxtimes(make_ad(make_atom(st, "p1")),
                         make_twist(st, make_ad(make_atom(st, "p3")),
                                    CharExpr::atom(st, "mu")));
  }
};

}  // namespace

TEST_CASE("general-type pairing: eight factor groups, budget 3, a = b = 2") {
  General222 w;
  Rep p1 = make_atom(w.st, "p1"), p2 = make_atom(w.st, "p2"),
      p3 = make_atom(w.st, "p3");
  Rep Pi = make_boxplus(make_boxplus(make_boxtimes(p1, p2), make_dual(p3)),
                        make_boxtimes(make_ad(p1), make_dual(p3)));
  IsobaricNF nf = normalize(w.st, w.env, Pi);
  REQUIRE(nf.items.size() == 3);
  for (const auto& it : nf.items) CHECK(it.cusp == Tri::Yes);

  FactorList fl = pair_nf(w.st, w.env, nf, normalize(w.st, w.env,
                                                     make_dual(Pi)));
  CHECK(fl.groups.size() == 8);
  CHECK(siegel_budget(w.st, w.env, nf) == 3);

  IsobaricNF tn = normalize(w.st, w.env,
                            make_boxtimes(make_boxtimes(p1, p2), p3));
  REQUIRE(tn.items.size() == 1);
  const FactorGroup* tg = fl.find(tn.items[0].c.key());
  REQUIRE(tg != nullptr);
  CHECK(tg->exponent == 2);
  const FactorGroup* pg = fl.find(nf::dual_const(w.st, tn.items[0].c).key());
  REQUIRE(pg != nullptr);
  CHECK(pg->exponent == 2);
  // the total degree of L(Pi x dual Pi) is (deg Pi)^2
  CHECK(fl.total_degree(w.st) == Pi->degree * Pi->degree);
}

TEST_CASE("adjoint-pair pairing: pole orders 7 / 7 / 10, multiplicities 8 / 8 / 12") {
  auto run = [](int subcase) {
    AdjointPair w(subcase);
    IsobaricNF nf = normalize(w.st, w.env, w.aux());
    FactorList fl = pair_nf(w.st, w.env, nf,
                            normalize(w.st, w.env, make_dual(w.aux())));
    int r = pole_order_at_1(w.st, w.env, fl, PoleMode::Bound);
    IsobaricNF tn = normalize(w.st, w.env, w.target());
    REQUIRE(tn.items.size() == 1);
    const FactorGroup* tg = fl.find(tn.items[0].c.key());
    REQUIRE(tg != nullptr);
    return std::pair<int, long>(r, tg->exponent);
  };
  auto [r1, m1] = run(1);
  CHECK(r1 == 7);
  CHECK(m1 == 8);
  auto [r2, m2] = run(2);
  CHECK(r2 == 7);
  CHECK(m2 == 8);
  auto [r3, m3] = run(3);
  CHECK(r3 == 10);
  CHECK(m3 == 12);
}

TEST_CASE("adjoint-pair exponent multiset matches {8,4,4,2,2,2,4,1,1}") {
  AdjointPair w(1);
  FactorList fl = pair(w.st, w.env, w.aux(), make_dual(w.aux()));
  REQUIRE(fl.groups.size() == 9);
  std::vector<long> exps;
  for (const auto& g : fl.groups) exps.push_back(g.exponent);
  std::sort(exps.begin(), exps.end());
  CHECK(exps == std::vector<long>{1, 1, 2, 2, 2, 4, 4, 4, 8});
}

TEST_CASE("exact pole mode uses isomorphy facts") {
  AdjointPair w(1);
  w.env = w.env.assert_fact(w.st, factmk::iso("A4(p1)", "A4(p3)"));
  w.env = w.env.closure(w.st);
  FactorList fl = pair(w.st, w.env, w.aux(), make_dual(w.aux()));
  CHECK(pole_order_at_1(w.st, w.env, fl, PoleMode::Exact) == 7);
}

TEST_CASE("positivity witness: square form iff all constituents self-dual") {
  AdjointPair w(1);
  IsobaricNF nf = normalize(w.st, w.env, w.aux());
  auto witness = positivity_witness(w.st, w.env, nf);
  REQUIRE(witness.has_value());
  CHECK(witness->kind == PositivityWitness::Square);

  // an atom with unknown central character is not self-dual as written
  IsobaricNF bad = normalize(w.st, w.env, make_atom(w.st, "p1"));
  CHECK_FALSE(positivity_witness(w.st, w.env, bad).has_value());
}

TEST_CASE("derive_not_iso separates constituents by an entire cross pairing") {
  General222 w;
  Rep a = make_boxtimes(make_atom(w.st, "p1"), make_atom(w.st, "p2"));
  Rep b = make_boxtimes(make_ad(make_atom(w.st, "p1")),
                        make_dual(make_atom(w.st, "p2")));
  IsobaricNF na = normalize(w.st, w.env, a), nb = normalize(w.st, w.env, b);
  REQUIRE(na.items.size() == 1);
  REQUIRE(nb.items.size() == 1);
  CHECK(derive_not_iso(w.st, w.env, na.items[0].c, nb.items[0].c));
}
