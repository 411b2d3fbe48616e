// Surface syntax: expression and character parsing, pretty-printing,
// round-trips, operator precedence, and error positions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "isobar/dsl.hpp"
#include "isobar/normalize.hpp"

using namespace isobar;

namespace {

struct Fixture {
  Symtab st;
  Fixture() {
    st.declare_field({"F", "", 1, "", ""});
    st.declare_char({"eta", "F", 2});
    st.declare_field({"K", "F", 2, "th", "eta"});
    st.declare_field({"E", "K", 3, "s", ""});
    for (auto n : {"p1", "p2", "p3"}) st.declare_atom({n, "F", 2, ""});
    st.declare_atom({"q", "K", 2, ""});
    st.declare_char({"mu", "F", 2});
    st.declare_char({"chi", "K", 0});
  }

  // print(parse(.)) is a fixed point and preserves the canonical key
  void roundtrip(const std::string& src) {
    CAPTURE(src);
    Rep e = dsl::parse_expr(st, src, "F");
    std::string p = dsl::print_rep(e);
    Rep e2 = dsl::parse_expr(st, p, "F");
    CHECK(dsl::print_rep(e2) == p);
    CHECK(rep_key(st, e2) == rep_key(st, e));
  }
};

}  // namespace

TEST_CASE("round-trips across the whole operator surface") {
  Fixture f;
  f.roundtrip("p1 (x) p2 (x) p3");
  f.roundtrip("(p1 (x) p2) (+) ~p3 (+) (Ad(p1) (x) ~p3)");
  f.roundtrip("Sym[5](p1) * mu^-1");
  f.roundtrip("A3(p1) (+) A4(p2) * eta");
  f.roundtrip("BC[K](p1) * chi^theta");
  f.roundtrip("Ind[K](q * chi)");
  f.roundtrip("BC[E](BC[K](p1))");
  f.roundtrip("~(p1 (x) p2) * mu * eta");
  f.roundtrip("1 (+) Ad(p1) (+) Sym[3](p1) * eta");
  f.roundtrip("chi^theta^2 * chi^-1");
  f.roundtrip("Ind[K](BC[K](p2) * chi)");
}

TEST_CASE("character parsing") {
  Fixture f;
  CharExpr c = dsl::parse_char(f.st, "mu * eta^-1", "F");
  CHECK(c.field() == "F");
  CHECK(c == CharExpr::atom(f.st, "mu").times(
                 f.st, CharExpr::atom(f.st, "eta").inverse(f.st)));
  CHECK(dsl::parse_char(f.st, dsl::print_char(c), "F") == c);
  CharExpr c2 = dsl::parse_char(f.st, "chi^theta * chi", "F");
  CHECK(c2.field() == "K");
  // quadratic inverses cancel to the atom itself
  CHECK(dsl::parse_char(f.st, "mu^-1", "F") == CharExpr::atom(f.st, "mu"));
}

TEST_CASE("precedence: twist > (x) > (+)") {
  Fixture f;
  Rep a = dsl::parse_expr(f.st, "p1 (x) p2 * mu (+) p3", "F");
  REQUIRE(a->kind == RepExpr::BoxPlusK);
  REQUIRE(a->a->kind == RepExpr::BoxTimesK);
  CHECK(a->a->b->kind == RepExpr::TwistK);
  CHECK(a->b->kind == RepExpr::AtomK);
}

TEST_CASE("comments and whitespace are ignored") {
  Fixture f;
  Rep e = dsl::parse_expr(f.st, "p1 # the first factor\n (x) p2", "F");
  CHECK(rep_key(f.st, e) ==
        rep_key(f.st, dsl::parse_expr(f.st, "p1 (x) p2", "F")));
}

TEST_CASE("parse errors carry positions; undeclared names are rejected") {
  Fixture f;
  CHECK_THROWS_AS(dsl::parse_expr(f.st, "p1 (x)\n  (+) p2", "F"), parse_error);
  try {
    dsl::parse_expr(f.st, "p1 (x)\n  (+) p2", "F");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(dsl::parse_expr(f.st, "p1 (x) zz", "F"), parse_error);
  CHECK_THROWS_AS(dsl::parse_expr(f.st, "", "F"), parse_error);
  CHECK_THROWS_AS(dsl::parse_expr(f.st, "Sym[(p1)", "F"), parse_error);
}

TEST_CASE("parsed trees normalize like hand-built ones") {
  Fixture f;
  HypothesisEnv env;
  env = env.closure(f.st);
  Rep parsed = dsl::parse_expr(f.st, "p1 (x) Ad(p1)", "F");
  Rep built = make_boxtimes(make_atom(f.st, "p1"),
                            make_ad(make_atom(f.st, "p1")));
  IsobaricNF a = normalize(f.st, env, parsed);
  IsobaricNF b = normalize(f.st, env, built);
  REQUIRE(a.items.size() == b.items.size());
  for (size_t i = 0; i < a.items.size(); ++i)
    CHECK(a.items[i].c.key() == b.items[i].c.key());
}
