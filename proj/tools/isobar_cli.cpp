// Command-line front end for the isobaric calculus: expression parsing and
// normalization, Rankin-Selberg pairing, zero-elimination certificates, case
// scripts, the full case catalog, and the finite-group model checks.
//
// Exit codes: 0 success, 1 verification mismatch or inconsistent hypotheses,
// 2 usage or parse errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isobar/casework.hpp"
#include "isobar/oracle.hpp"

using nlohmann::json;

namespace {

struct Env {
  isobar::casework::CaseScript cs;  // reused for symbols + hypotheses
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw isobar::structural_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// An environment file holds declaration and fact statements, one per line,
// in the same syntax as the case scripts (without route or expectations).
Env load_env(const std::string& path, const std::vector<std::string>& assume) {
  std::string body = path.empty() ? "" : read_file(path);
  // Default the ground field to F when the environment does not name one.
  std::string head =
      body.find("field ") == std::string::npos ? "field F\n" : "";
  Env env;
  env.cs = isobar::casework::parse_script("case cli-env\n" + head + body +
                                          "\nendcase\n");
  for (const auto& a : assume)
    env.cs.env = env.cs.env.assert_fact(env.cs.st, isobar::factmk::assumption(a));
  if (!assume.empty()) env.cs.env = env.cs.env.closure(env.cs.st);
  return env;
}

// Expression arguments may name a file holding the expression text.
std::string expr_arg(const std::string& s) {
  if (std::filesystem::exists(s) && std::filesystem::is_regular_file(s))
    return read_file(s);
  return s;
}

json nf_json(const isobar::Symtab& st, const isobar::IsobaricNF& nf) {
  json items = json::array();
  for (const auto& it : nf.items)
    items.push_back({{"constituent", it.c.key()},
                     {"multiplicity", it.mult},
                     {"degree", it.c.degree(st)}});
  return {{"field", nf.field}, {"items", items}};
}

json factors_json(const isobar::Symtab& st, const isobar::FactorList& fl) {
  json groups = json::array();
  for (const auto& g : fl.groups)
    groups.push_back({{"factor", g.merged.key()},
                      {"exponent", g.exponent},
                      {"degree", g.merged.degree(st)},
                      {"diagonal", g.diagonal}});
  return {{"field", fl.field}, {"groups", groups}};
}

json certificate_json(const isobar::Symtab& st, const isobar::Certificate& c) {
  json residuals = json::array();
  for (const auto& r : c.residuals)
    residuals.push_back({{"factor", r.factor},
                         {"exponent", r.exponent},
                         {"justification", r.justification}});
  return {{"target", c.target},
          {"aux", c.aux},
          {"route", isobar::to_string(c.route)},
          {"factors", factors_json(st, c.factors)},
          {"budget_or_pole_order", c.budget_or_r},
          {"a", c.a},
          {"b", c.b},
          {"target_multiplicity", c.target_multiplicity},
          {"residuals", residuals},
          {"witness", c.witness},
          {"assumptions", c.assumptions},
          {"axioms", c.axioms},
          {"notes", c.notes},
          {"verdict", c.verdict.str()}};
}

json report_json(const isobar::casework::Report& r) {
  return {{"case", r.id},
          {"expected", r.expected},
          {"actual", r.actual},
          {"classification", r.classification},
          {"ok", r.ok},
          {"assumptions", r.assumptions},
          {"log", r.log}};
}

void print_factors_text(std::ostream& os, const isobar::Symtab& st,
                        const isobar::FactorList& fl) {
  for (const auto& g : fl.groups)
    os << "L(" << g.merged.key() << ")^" << g.exponent << "  deg "
       << g.merged.degree(st) << (g.diagonal ? "  diagonal" : "") << "\n";
}

// A conditional verdict is a failure under --strict unless every hypothesis
// it relies on was granted on the command line.
bool strict_ok(const std::vector<std::string>& used,
               const std::vector<std::string>& granted) {
  for (const auto& u : used)
    if (std::find(granted.begin(), granted.end(), u) == granted.end())
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isobar: symbolic Landau-Siegel zero elimination for isobaric "
               "automorphic representations"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string env_path, format = "text", cases_dir = "data/cases",
              models_dir = "data/models";
  std::vector<std::string> assume;
  bool strict = false;
  app.add_option("--env", env_path, "environment file (declarations + facts)");
  app.add_option("--format", format, "output format: text | machine")
      ->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--assume", assume, "grant a named hypothesis (repeatable)")
      ->allow_extra_args(false);
  app.add_flag("--strict", strict,
               "treat conditional verdicts as failures unless their "
               "hypotheses were granted with --assume");

  std::string expr_a, expr_b, target_src, aux_src, route_name = "budget";
  std::string case_path;

  auto* cmd_parse = app.add_subcommand("parse", "parse and pretty-print");
  cmd_parse->add_option("expr", expr_a, "expression or file")->required();

  auto* cmd_norm = app.add_subcommand("normalize", "isobaric normal form");
  cmd_norm->add_option("expr", expr_a, "expression or file")->required();

  auto* cmd_pair = app.add_subcommand("pair", "Rankin-Selberg factor groups");
  cmd_pair->add_option("left", expr_a, "left expression or file")->required();
  cmd_pair->add_option("right", expr_b, "right expression or file")->required();

  auto* cmd_cert = app.add_subcommand("certify", "zero-elimination certificate");
  cmd_cert->add_option("--target", target_src, "product factor under study")
      ->required();
  cmd_cert->add_option("--aux", aux_src, "auxiliary isobaric sum")->required();
  cmd_cert->add_option("--route", route_name, "budget | positivity")
      ->check(CLI::IsMember({"budget", "positivity"}));

  auto* cmd_case = app.add_subcommand("run-case", "run one case script");
  cmd_case->add_option("script", case_path, "case script path")->required();

  auto* cmd_verify =
      app.add_subcommand("verify-paper", "run the whole case catalog");
  cmd_verify->add_option("--cases", cases_dir, "case catalog directory");

  auto* cmd_oracle =
      app.add_subcommand("oracle-check", "finite-group model checks");
  cmd_oracle->add_option("--models", models_dir, "model table directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  bool machine = format == "machine";
  try {
    if (cmd_parse->parsed() || cmd_norm->parsed() || cmd_pair->parsed() ||
        cmd_cert->parsed()) {
      Env env = load_env(env_path, assume);
      isobar::Symtab& st = env.cs.st;
      const std::string& ground = env.cs.ground;

      if (cmd_parse->parsed()) {
        isobar::Rep e = isobar::dsl::parse_expr(st, expr_arg(expr_a), ground);
        if (machine)
          std::cout << json{{"expr", isobar::dsl::print_rep(e)},
                            {"key", isobar::rep_key(st, e)},
                            {"degree", e->degree}}
                           .dump(2)
                    << "\n";
        else
          std::cout << isobar::dsl::print_rep(e) << "\n";
        return 0;
      }
      if (cmd_norm->parsed()) {
        isobar::Rep e = isobar::dsl::parse_expr(st, expr_arg(expr_a), ground);
        isobar::IsobaricNF nf = isobar::normalize(st, env.cs.env, e);
        if (machine) {
          std::cout << nf_json(st, nf).dump(2) << "\n";
        } else {
          for (size_t i = 0; i < nf.items.size(); ++i) {
            if (i) std::cout << " (+) ";
            if (nf.items[i].mult != 1) std::cout << nf.items[i].mult << ".";
            std::cout << nf.items[i].c.key();
          }
          std::cout << "\n";
        }
        return 0;
      }
      if (cmd_pair->parsed()) {
        isobar::Rep a = isobar::dsl::parse_expr(st, expr_arg(expr_a), ground);
        isobar::Rep b = isobar::dsl::parse_expr(st, expr_arg(expr_b), ground);
        isobar::FactorList fl = isobar::pair(st, env.cs.env, a, b);
        if (machine)
          std::cout << factors_json(st, fl).dump(2) << "\n";
        else
          print_factors_text(std::cout, st, fl);
        return 0;
      }
      // certify
      isobar::CertifyRequest req;
      req.target = isobar::dsl::parse_expr(st, expr_arg(target_src), ground);
      req.aux = isobar::dsl::parse_expr(st, expr_arg(aux_src), ground);
      req.route = route_name == "positivity"
                      ? isobar::Route::PositivityPoleRoute
                      : isobar::Route::BudgetRoute;
      isobar::Certificate cert = isobar::certify(st, env.cs.env, req);
      if (machine)
        std::cout << certificate_json(st, cert).dump(2) << "\n";
      else
        std::cout << isobar::serialize_text(st, cert);
      bool ok = cert.verdict.kind != isobar::Verdict::Inconclusive;
      if (strict && cert.verdict.kind == isobar::Verdict::ConditionalNoLSZero)
        ok = strict_ok(cert.assumptions, assume);
      return ok ? 0 : 1;
    }

    if (cmd_case->parsed()) {
      isobar::casework::Report rep =
          isobar::casework::run_case(isobar::casework::parse_script_file(case_path));
      bool ok = rep.ok;
      if (strict && rep.actual == "conditional-no-siegel-zero")
        ok = ok && strict_ok(rep.assumptions, assume);
      if (machine) {
        std::cout << report_json(rep).dump(2) << "\n";
      } else {
        std::cout << rep.id << ": expected " << rep.expected << ", got "
                  << rep.actual << (ok ? " (ok)" : " (MISMATCH)") << "\n";
        for (const auto& l : rep.log) std::cout << "  ! " << l << "\n";
        for (const auto& c : rep.certificates) std::cout << c;
      }
      return ok ? 0 : 1;
    }

    if (cmd_verify->parsed()) {
      isobar::casework::SummaryTable t = isobar::casework::verify_paper(cases_dir);
      bool ok = t.pass();
      if (strict)
        for (const auto& r : t.rows)
          if (r.actual == "conditional-no-siegel-zero" &&
              !strict_ok(r.assumptions, assume))
            ok = false;
      if (machine) {
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back(report_json(r));
        std::cout << json{{"cases", rows}, {"pass", ok}}.dump(2) << "\n";
      } else {
        std::cout << t.text();
      }
      return ok ? 0 : 1;
    }

    if (cmd_oracle->parsed()) {
      int pass = 0, fail = 0, skip = 0;
      json rows = json::array();
      for (const auto& e : std::filesystem::directory_iterator(models_dir)) {
        if (e.path().extension() != ".tbl") continue;
        isobar::oracle::GroupModel m =
            isobar::oracle::load_model(e.path().string());
        for (const auto& rule : isobar::oracle::all_rules()) {
          auto r = isobar::oracle::model_check(rule, m);
          const char* status =
              r.status == isobar::oracle::CheckResult::Pass     ? "pass"
              : r.status == isobar::oracle::CheckResult::Fail   ? "FAIL"
                                                                : "skip";
          (r.status == isobar::oracle::CheckResult::Pass   ? pass
           : r.status == isobar::oracle::CheckResult::Fail ? fail
                                                           : skip)++;
          if (machine)
            rows.push_back({{"model", m.g.name},
                            {"rule", rule},
                            {"status", status},
                            {"detail", r.detail}});
          else
            std::cout << m.g.name << " " << rule << ": " << status << " ("
                      << r.detail << ")\n";
        }
      }
      if (machine)
        std::cout << json{{"checks", rows},
                          {"pass", pass},
                          {"fail", fail},
                          {"skip", skip}}
                         .dump(2)
                  << "\n";
      else
        std::cout << "pass=" << pass << " skip=" << skip << " fail=" << fail
                  << "\n";
      return fail == 0 && pass > 0 ? 0 : 1;
    }
  } catch (const isobar::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const isobar::inconsistency_error& e) {
    std::cerr << "inconsistent hypotheses: " << e.what() << "\n";
    return 1;
  } catch (const isobar::case_split_required& e) {
    std::cerr << "case split required: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
