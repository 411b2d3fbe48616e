// Certificate construction: the budget and positivity routes, the standard
// and Rankin-Selberg lemmas, the four-character casework, and the conditional
// verdicts that carry named hypotheses.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "isobar/certify.hpp"

using namespace isobar;

namespace {

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

}  // namespace

TEST_CASE("budget route certifies the general GL(2)^3 triple product") {
  General222 w;
  Rep p1 = make_atom(w.st, "p1"), p2 = make_atom(w.st, "p2"),
      p3 = make_atom(w.st, "p3");
  CertifyRequest req;
  req.target = make_boxtimes(make_boxtimes(p1, p2), p3);
  req.aux = make_boxplus(make_boxplus(make_boxtimes(p1, p2), make_dual(p3)),
                         make_boxtimes(make_ad(p1), make_dual(p3)));
  req.route = Route::BudgetRoute;
  Certificate c = certify(w.st, w.env, req);
  CHECK(c.verdict.kind == Verdict::NoLSZero);
  CHECK(c.budget_or_r == 3);
  CHECK(c.a == 2);
  CHECK(c.b == 2);
  CHECK(c.assumptions.empty());

  // golden structure of the serialized certificate
  std::string text = serialize_text(w.st, c);
  CHECK(text.find("route: budget") != std::string::npos);
  CHECK(text.find("e: 3") != std::string::npos);
  CHECK(text.find("a: 2") != std::string::npos);
  CHECK(text.find("b: 2") != std::string::npos);
  CHECK(text.find("no-siegel-zero") != std::string::npos);
  size_t factors = 0;
  for (size_t pos = 0; (pos = text.find("\n  L(", pos)) != std::string::npos;
       ++factors)
    pos += 5;
  CHECK(factors >= 8);  // one line per factor group plus residual lines
}

TEST_CASE("positivity route beats pole order 7 with multiplicity 8") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_atom({"p1", "F", 2, ""});
  st.declare_atom({"p3", "F", 2, ""});
  st.declare_char({"mu", "F", 2});
  HypothesisEnv env;
  env = env.assert_fact(st, factmk::not_twist_eq("p1", "p3"));
  env = env.assert_fact(st, factmk::poly("p1", PolyType::NonSolvable));
  env = env.assert_fact(st, factmk::poly("p3", PolyType::NonSolvable));
  env = env.closure(st);
  Rep ad1 = make_ad(make_atom(st, "p1"));
  Rep ad3mu = make_twist(st, make_ad(make_atom(st, "p3")),
                         CharExpr::atom(st, "mu"));
  CertifyRequest req;
  req.target = make_boxtimes(ad1, ad3mu);
  req.aux = make_boxplus(make_boxplus(make_boxplus(ad1, ad1), ad3mu),
                         make_boxtimes(ad1, ad3mu));
  req.route = Route::PositivityPoleRoute;
  Certificate c = certify(st, env, req);
  CHECK(c.verdict.kind == Verdict::NoLSZero);
  CHECK(c.budget_or_r == 7);
  CHECK(c.target_multiplicity == 8);
  CHECK_FALSE(c.witness.empty());
}

TEST_CASE("budget route goes conditional when holomorphy flags are assumed") {
  // Sym^6 residual: needs both named hypotheses, which the environment grants.
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_atom({"p1", "F", 2, ""});
  st.declare_char({"mu", "F", 2});
  HypothesisEnv env;
  env = env.assert_fact(st, factmk::poly("p1", PolyType::NonSolvable));
  env = env.assert_fact(st, factmk::assumption("takeda-holomorphy"));
  env = env.assert_fact(st, factmk::assumption("lrs-local-bound"));
  env = env.closure(st);
  Rep a4mu = make_twist(st, make_a4(make_atom(st, "p1")),
                        CharExpr::atom(st, "mu"));
  CertifyRequest req;
  req.target = a4mu;
  req.aux = make_boxplus(make_boxplus(make_trivial("F"), a4mu),
                         make_ad(make_atom(st, "p1")));
  req.route = Route::BudgetRoute;
  Certificate c = certify(st, env, req);
  CHECK(c.verdict.kind == Verdict::ConditionalNoLSZero);
  CHECK(c.budget_or_r == 3);
  CHECK(c.a == 4);
  CHECK(c.b == 0);  // the target is self-dual
  std::vector<std::string> want = {"lrs-local-bound", "takeda-holomorphy"};
  std::vector<std::string> got = c.assumptions;
  std::sort(got.begin(), got.end());
  CHECK(got == want);
}

TEST_CASE("character route: at most one real character among four") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_field({"E", "F", 2, "th", ""});
  st.declare_char({"a", "E", 2});
  st.declare_char({"b", "E", 2});
  HypothesisEnv env;
  std::vector<CharExpr> four = {
      CharExpr::trivial("E"), CharExpr::atom(st, "a"), CharExpr::atom(st, "b"),
      CharExpr::atom(st, "a").times(st, CharExpr::atom(st, "b"))};
  env = env.assert_fact(
      st, factmk::char_fact(Fact::CharNotTrivial,
                            CharExpr::atom(st, "a").times(
                                st, CharExpr::atom(st, "b"))));
  env = env.assert_fact(
      st, factmk::char_order(
              CharExpr::atom(st, "a").times(st, CharExpr::atom(st, "b")), 2));
  Certificate c = character_route(st, env, four);
  CHECK(c.verdict.kind == Verdict::AtMost);
  CHECK(c.verdict.at_most == 1);
}

TEST_CASE("character route: two trivial members give at most two") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_field({"E", "F", 2, "th", ""});
  st.declare_char({"a", "E", 2});
  HypothesisEnv env;
  std::vector<CharExpr> four = {
      CharExpr::trivial("E"), CharExpr::atom(st, "a"), CharExpr::atom(st, "a"),
      CharExpr::trivial("E")};
  Certificate c = character_route(st, env, four);
  CHECK(c.verdict.kind == Verdict::AtMost);
  CHECK(c.verdict.at_most == 2);
  CHECK(c.budget_or_r == 2);  // pole order of the product L-function
}

TEST_CASE("character route: three real characters are impossible") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_field({"E", "F", 2, "th", ""});
  st.declare_char({"a", "E", 2});
  st.declare_char({"b", "E", 2});
  st.declare_char({"z", "E", 8});
  HypothesisEnv env;
  std::vector<CharExpr> four = {
      CharExpr::trivial("E"), CharExpr::atom(st, "a"), CharExpr::atom(st, "b"),
      CharExpr::atom(st, "z")};
  CHECK_THROWS_AS(character_route(st, env, four), inconsistency_error);
}

TEST_CASE("standard lemma: complex character or cuspidal GL(2)") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_atom({"p", "F", 2, ""});
  st.declare_char({"x5", "F", 5});
  HypothesisEnv env;
  auto r1 = standard_no_siegel(st, env,
                               nf::char_const(CharExpr::atom(st, "x5")));
  REQUIRE(r1.has_value());
  CHECK(r1->find("complex") != std::string::npos);
  auto r2 = standard_no_siegel(st, env, nf::comp_const("F", nf::atom_comp("p")));
  REQUIRE(r2.has_value());
  CHECK(r2->find("GL(2)") != std::string::npos);
  // a quadratic character is exactly the case the lemma cannot treat
  st.declare_char({"x2", "F", 2});
  CHECK_FALSE(standard_no_siegel(st, env,
                                 nf::char_const(CharExpr::atom(st, "x2")))
                  .has_value());
}

TEST_CASE("Rankin-Selberg lemma: self-dual against non-self-dual") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_atom({"p", "F", 2, ""});
  st.declare_atom({"q", "F", 2, ""});
  HypothesisEnv env;
  env = env.assert_fact(st, factmk::unary(Fact::SelfDual, "Ad(p)"));
  env = env.assert_fact(st, factmk::unary(Fact::NotSelfDual, "q"));
  auto r = rs_no_siegel(st, env,
                        nf::comp_const("F", nf::lift_comp(Comp::AdC, "p")),
                        nf::comp_const("F", nf::atom_comp("q")));
  CHECK(r.has_value());
}

TEST_CASE("Rankin-Selberg lemma: monomial self-twist witness") {
  Symtab st;
  st.declare_field({"F", "", 1, "", ""});
  st.declare_char({"eta", "F", 2});
  st.declare_field({"K", "F", 2, "th", "eta"});
  st.declare_char({"chi", "K", 0});
  st.declare_atom({"p", "F", 2, ""});
  st.declare_atom({"q", "F", 2, ""});
  HypothesisEnv env;
  env = env.assert_fact(st, factmk::poly("p", PolyType::Dihedral, "K", "chi"));
  env = env.assert_fact(st, factmk::not_poly("q", PolyType::Dihedral));
  env = env.closure(st);
  // a dihedral is self-twisted by eta; a non-dihedral partner is not
  IsobaricNF np = normalize(st, env, make_atom(st, "p"));
  IsobaricNF nq = normalize(st, env, make_atom(st, "q"));
  REQUIRE(np.items.size() == 1);
  REQUIRE(nq.items.size() == 1);
  auto r = rs_no_siegel(st, env, np.items[0].c, nq.items[0].c);
  CHECK(r.has_value());
}
