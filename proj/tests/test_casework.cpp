// Case scripts and the catalog: every registered case reproduces its expected
// verdict and counts, conditional verdicts carry the right hypothesis flags,
// and a corrupted expectation is flagged as a mismatch.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isobar/casework.hpp"

#ifndef ISOBAR_DATA_DIR
#define ISOBAR_DATA_DIR "data"
#endif

using namespace isobar;

static const std::string kCases = std::string(ISOBAR_DATA_DIR) + "/cases";

static std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST_CASE("every catalog case matches its expected verdict") {
  auto paths = casework::catalog_paths(kCases);
  REQUIRE(paths.size() >= 20);
  for (const auto& p : paths) {
    casework::Report rep = casework::run_case(casework::parse_script_file(p));
    CAPTURE(p);
    CAPTURE(rep.actual);
    for (const auto& l : rep.log) CAPTURE(l);
    CHECK(rep.ok);
  }
}

TEST_CASE("verify_paper summarizes the catalog and passes") {
  casework::SummaryTable t = casework::verify_paper(kCases);
  CHECK(t.pass());
  CHECK(t.rows.size() >= 20);
  std::string text = t.text();
  CHECK(text.find("all cases match") != std::string::npos);

  // exactly three branches are conditional, each with its hypothesis flags
  std::map<std::string, std::set<std::string>> conditional;
  for (const auto& r : t.rows)
    if (r.actual == "conditional-no-siegel-zero")
      conditional[r.id] = {r.assumptions.begin(), r.assumptions.end()};
  REQUIRE(conditional.size() == 3);
  CHECK(conditional.at("3.2-all-twist-eq-nonsolvable") ==
        std::set<std::string>{"sym5-holomorphy"});
  CHECK(conditional.at("4.2.1-b-nonsolvable") ==
        std::set<std::string>{"takeda-holomorphy", "lrs-local-bound"});
  CHECK(conditional.at("4.2.2-c-nonsolvable") ==
        std::set<std::string>{"a3-kernels-distinct"});
}

TEST_CASE("negative control: a corrupted expectation is reported") {
  std::string src = slurp(kCases + "/3.1-general.dsl");
  size_t pos = src.find("expect verdict no-siegel-zero");
  REQUIRE(pos != std::string::npos);
  src.replace(pos, std::string("expect verdict no-siegel-zero").size(),
              "expect verdict at-most-1");
  casework::Report rep = casework::run_case(casework::parse_script(src));
  CHECK_FALSE(rep.ok);
  CHECK(rep.actual == "no-siegel-zero");
  CHECK(rep.expected == "at-most-1");
}

TEST_CASE("negative control: a corrupted count is reported") {
  std::string src = slurp(kCases + "/3.1-general.dsl");
  size_t pos = src.find("expect e 3");
  REQUIRE(pos != std::string::npos);
  src.replace(pos, std::string("expect e 3").size(), "expect e 5");
  casework::Report rep = casework::run_case(casework::parse_script(src));
  CHECK_FALSE(rep.ok);
}

TEST_CASE("golden report for the general-type case") {
  casework::Report rep = casework::run_case(
      casework::parse_script_file(kCases + "/3.1-general.dsl"));
  CHECK(rep.ok);
  CHECK(rep.actual == "no-siegel-zero");
  CHECK(rep.classification == "general");
  REQUIRE(rep.certificates.size() == 1);
  const std::string& cert = rep.certificates[0];
  CHECK(cert.find("route: budget") != std::string::npos);
  CHECK(cert.find("e: 3") != std::string::npos);
  CHECK(cert.find("a: 2") != std::string::npos);
  CHECK(cert.find("b: 2") != std::string::npos);
  CHECK(cert.find("no-siegel-zero") != std::string::npos);
}

TEST_CASE("the impossibility case reports an error verdict as expected") {
  casework::Report rep = casework::run_case(casework::parse_script_file(
      kCases + "/3.3-chars-three-real-impossible.dsl"));
  CHECK(rep.ok);
  CHECK(rep.actual == "error");
}

TEST_CASE("script parse errors carry the offending statement") {
  CHECK_THROWS_AS(
      casework::parse_script("case x\nfield F\nbogus statement\nendcase\n"),
      parse_error);
}
