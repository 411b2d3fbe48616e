#pragma once

#include <stdexcept>
#include <string>

namespace isobar {

// Malformed expression or rule applied to an operand outside its domain.
struct structural_error : std::runtime_error {
  explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// A fact and its negation were both derived. Carries the two offending facts.
struct inconsistency_error : std::runtime_error {
  std::string fact_a, fact_b;
  inconsistency_error(std::string a, std::string b)
      : std::runtime_error("inconsistent facts: [" + a + "] vs [" + b + "]"),
        fact_a(std::move(a)), fact_b(std::move(b)) {}
};

// An operation hit a tri-state query that neither the environment nor the
// structure decides. The caller (a casework script) must branch on it.
struct case_split_required : std::runtime_error {
  std::string query;
  explicit case_split_required(std::string q)
      : std::runtime_error("case split required on: " + q), query(std::move(q)) {}
};

struct parse_error : std::runtime_error {
  int line = 0, column = 0;
  parse_error(const std::string& what, int l, int c)
      : std::runtime_error("parse error at " + std::to_string(l) + ":" +
                           std::to_string(c) + ": " + what),
        line(l), column(c) {}
};

}  // namespace isobar
