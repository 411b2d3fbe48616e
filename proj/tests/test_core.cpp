// Declaration tables, character arithmetic, expression construction, and the
// hypothesis environment.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isobar/facts.hpp"
#include "isobar/rep.hpp"

using namespace isobar;

static Symtab base_symtab() {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_char({"eta", "F", 2});
  st.declare_field({"K", "F", 2, "th", "eta"});
  st.declare_char({"mu", "F", 2});
  st.declare_char({"xi", "F", 5});
  st.declare_char({"chi", "K", 0});
  st.declare_atom({"p", "F", 2, ""});
  st.declare_atom({"q", "F", 3, ""});
  return st;
}

TEST_CASE("symtab declarations and lookup") {
  Symtab st = base_symtab();
  CHECK(st.field("K").base == "F");
  CHECK(st.field("K").assoc_char == "eta");
  CHECK(st.atom("p").degree == 2);
  // central characters are auto-declared with unknown order
  CHECK(st.char_atom("om_p").order == 0);
  CHECK(st.is_extension_of("K", "F"));
  CHECK_FALSE(st.is_extension_of("F", "K"));
  CHECK_THROWS_AS((void)st.field("L"), structural_error);
  CHECK_THROWS_AS((void)st.atom("r"), structural_error);
  CHECK_THROWS_AS((void)st.char_atom("zz"), structural_error);
}

TEST_CASE("character normal form and order arithmetic") {
  Symtab st = base_symtab();
  CharExpr one = CharExpr::trivial("F");
  CHECK(one.is_syntactically_trivial());
  CHECK(one.order(st) == 1);
  CHECK(one.key() == "1");

  CharExpr mu = CharExpr::atom(st, "mu");
  CHECK(mu.order(st) == 2);
  CHECK(mu.pow(st, 2).is_syntactically_trivial());  // exponent reduced mod 2
  CHECK(mu.inverse(st) == mu);                      // mu^-1 = mu for order 2

  CharExpr xi = CharExpr::atom(st, "xi");
  CHECK(xi.pow(st, 3).order(st) == 5);
  CHECK(xi.times(st, xi.inverse(st)).is_syntactically_trivial());

  // products of distinct atoms have undetermined order
  CHECK(mu.times(st, xi).order(st) == 0);
  // unknown-order atoms do not reduce
  CharExpr om = CharExpr::atom(st, "om_p");
  CHECK(om.pow(st, 2).key() == "om_p^2");
  CHECK(om.order(st) == 0);

  CHECK_THROWS_AS(mu.times(st, CharExpr::atom(st, "chi")), structural_error);
}

TEST_CASE("galois action, restriction, transfer") {
  Symtab st = base_symtab();
  CharExpr chi = CharExpr::atom(st, "chi");
  CharExpr cth = chi.galois(st);
  CHECK(cth.key() == "chi^theta");
  CHECK(cth.galois(st) == chi);  // theta has order 2 on K

  // eta_{K/F} dies on restriction to K
  CharExpr eta = CharExpr::atom(st, "eta");
  CHECK(eta.restrict_to(st, "K").is_syntactically_trivial());
  CHECK_FALSE(CharExpr::atom(st, "mu").restrict_to(st, "K")
                  .is_syntactically_trivial());

  // transfer of a restriction is the square (degree of K/F)
  CharExpr mu = CharExpr::atom(st, "mu");
  CHECK(mu.restrict_to(st, "K").transfer_to_base(st) == mu.pow(st, 2));
  // restriction of a transfer is the Galois-orbit product
  CharExpr tr = chi.transfer_to_base(st);
  CHECK(tr.field() == "F");
  CHECK(tr.restrict_to(st, "K") == chi.times(st, chi.galois(st)));

  CHECK_THROWS_AS(mu.galois(st), structural_error);  // F has no generator
  CHECK_THROWS_AS(mu.transfer_to_base(st), structural_error);
}

TEST_CASE("expression degrees and central characters") {
  Symtab st = base_symtab();
  Rep p = make_atom(st, "p"), q = make_atom(st, "q");
  CHECK(make_ad(p)->degree == 3);
  CHECK(make_a3(p)->degree == 4);
  CHECK(make_a4(p)->degree == 5);
  CHECK(make_sym(5, p)->degree == 6);
  CHECK(make_boxtimes(p, q)->degree == 6);
  CHECK(make_boxplus(p, q)->degree == 5);
  CHECK(make_base_change(st, "K", p)->degree == 2);
  Rep chi = make_char(CharExpr::atom(st, "chi"));
  CHECK(make_induce(st, "F", chi)->degree == 2);

  CharExpr om = CharExpr::atom(st, "om_p");
  CHECK(central_character(st, p) == om);
  CHECK(central_character(st, make_dual(p)) == om.inverse(st));
  CHECK(central_character(st, make_boxtimes(p, p)) == om.pow(st, 4));
  CHECK(central_character(st, make_boxplus(p, p)) == om.pow(st, 2));
  CHECK(central_character(st, make_ad(p)).is_syntactically_trivial());
  // twist by chi multiplies the central character by chi^degree
  CharExpr mu = CharExpr::atom(st, "mu");
  CHECK(central_character(st, make_twist(st, p, mu)) ==
        om.times(st, mu.pow(st, 2)));

  CHECK_THROWS_AS(make_boxplus(p, chi), structural_error);   // field mismatch
  CHECK_THROWS_AS(make_twist(st, p, CharExpr::atom(st, "chi")),
                  structural_error);
}

TEST_CASE("rep keys canonicalize commutative operators") {
  Symtab st = base_symtab();
  Rep p = make_atom(st, "p"), q = make_atom(st, "q");
  CHECK(rep_key(st, make_boxplus(p, q)) == rep_key(st, make_boxplus(q, p)));
  CHECK(rep_key(st, make_boxtimes(p, q)) == rep_key(st, make_boxtimes(q, p)));
  CHECK(rep_key(st, p) != rep_key(st, q));
}

TEST_CASE("hypothesis environment: queries and closure") {
  Symtab st = base_symtab();
  st.declare_atom({"r", "F", 2, ""});
  HypothesisEnv env;
  env = env.assert_fact(st, factmk::not_twist_eq("p", "r"));
  env = env.assert_fact(st, factmk::poly("p", PolyType::Tetrahedral));
  env = env.assert_fact(st, factmk::unary(Fact::Cuspidal, "A3(r)"));
  env = env.assert_fact(st, factmk::assumption("sym5-holomorphy"));
  env = env.closure(st);

  CHECK(env.query_twist_eq(st, "p", "r") == Tri::No);
  CHECK(env.query_twist_eq(st, "p", "p") == Tri::Yes);
  CHECK(env.query_poly("p", PolyType::Tetrahedral) == Tri::Yes);
  CHECK(env.query_poly("p", PolyType::Dihedral) == Tri::No);  // exclusive
  CHECK(env.query_poly("r", PolyType::Dihedral) == Tri::Unknown);
  CHECK(env.query_cuspidal_key("A3(r)") == Tri::Yes);
  CHECK(env.query_cuspidal_key("A3(p)") == Tri::Unknown);
  CHECK(env.assumed("sym5-holomorphy"));
  CHECK_FALSE(env.assumed("takeda-holomorphy"));

  CharExpr mu = CharExpr::atom(st, "mu"), xi = CharExpr::atom(st, "xi");
  CHECK(env.query_char_real(st, mu) == Tri::Yes);
  CHECK(env.query_char_real(st, xi) == Tri::No);
  CharExpr om = CharExpr::atom(st, "om_p");
  CHECK(env.query_char_real(st, om) == Tri::Unknown);
  HypothesisEnv env2 =
      env.assert_fact(st, factmk::char_order(om, 2)).closure(st);
  CHECK(env2.query_char_real(st, om) == Tri::Yes);
  CHECK(env2.query_char_trivial(st, om) == Tri::No);
}

TEST_CASE("contradictory facts raise inconsistency errors") {
  Symtab st = base_symtab();
  HypothesisEnv env;
  env = env.assert_fact(st, factmk::unary(Fact::Cuspidal, "A3(p)"));
  CHECK_THROWS_AS(
      env.assert_fact(st, factmk::unary(Fact::NotCuspidal, "A3(p)")),
      inconsistency_error);

  HypothesisEnv e2;
  e2 = e2.assert_fact(st, factmk::poly("p", PolyType::Dihedral, "K", "chi"));
  CHECK_THROWS_AS(e2.assert_fact(st, factmk::poly("p", PolyType::Octahedral)),
                  inconsistency_error);
  CHECK_THROWS_AS(
      e2.assert_fact(st, factmk::not_poly("p", PolyType::Dihedral)),
      inconsistency_error);

  HypothesisEnv e3;
  e3 = e3.assert_fact(st, factmk::twist_eq("p", "q"));
  CHECK_THROWS_AS(e3.assert_fact(st, factmk::not_twist_eq("p", "q")),
                  inconsistency_error);
}
