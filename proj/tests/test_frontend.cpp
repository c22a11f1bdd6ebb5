#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "prodcheck/csrs_export.hpp"
#include "prodcheck/parser.hpp"
#include "prodcheck/prover.hpp"
#include "prodcheck/replacement_map.hpp"
#include "prodcheck/report.hpp"

using namespace prodcheck;
using testutil::load_fixture;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::vector<std::string> kAllFixtures = {
    "maybe",    "random",     "random_id", "finzeroes",
    "snc_inf",  "assoc_f",    "incomplete", "unfolded",
    "sdff",     "nonleftlin", "nested_cons"};

const std::vector<std::string> kProperFixtures = {
    "maybe",   "random",  "random_id", "finzeroes", "snc_inf",
    "assoc_f", "incomplete", "unfolded", "sdff"};

}  // namespace

TEST_CASE("print_spec then parse_spec is the identity") {
  for (const std::string& name : kAllFixtures) {
    INFO("fixture " << name);
    SpecFile orig = load_fixture(name);
    SpecFile back = parse_spec(print_spec(orig));

    REQUIRE(back.decls.size() == orig.decls.size());
    for (std::size_t i = 0; i < orig.decls.size(); ++i) {
      CHECK(back.decls[i].kind == orig.decls[i].kind);
      CHECK(back.decls[i].name == orig.decls[i].name);
      CHECK(back.decls[i].data_arity == orig.decls[i].data_arity);
      CHECK(back.decls[i].struct_arity == orig.decls[i].struct_arity);
    }

    REQUIRE(back.spec.n_data == orig.spec.n_data);
    REQUIRE(back.spec.rules.size() == orig.spec.rules.size());
    for (std::size_t i = 0; i < orig.spec.rules.size(); ++i) {
      CHECK(to_prefix_string(back.spec.rules[i].lhs) ==
            to_prefix_string(orig.spec.rules[i].lhs));
      CHECK(to_prefix_string(back.spec.rules[i].rhs) ==
            to_prefix_string(orig.spec.rules[i].rhs));
      CHECK(back.spec.rules[i].origin == orig.spec.rules[i].origin);
    }
  }
}

TEST_CASE("infix sugar desugars to the unique pair constructor") {
  ProperSpec spec = load_fixture("finzeroes").spec;

  SECTION("explicit application and sugar give equal terms") {
    REQUIRE(equal(parse_term("cons(0, ones)", spec),
                  parse_term("0 : ones", spec)));
  }

  SECTION("the infix form is right-associative") {
    TermPtr t = parse_term("0 : 1 : ones", spec);
    REQUIRE(to_prefix_string(t) == "cons(0,cons(1,ones))");
  }

  SECTION("sugar survives under application") {
    TermPtr t = parse_term("f(0 : ones)", spec);
    REQUIRE(to_prefix_string(t) == "f(cons(0,ones))");
  }
}

TEST_CASE("parse_term resolves identifiers against the signature") {
  ProperSpec spec = load_fixture("finzeroes").spec;

  SECTION("undeclared bare identifier becomes a structure variable") {
    TermPtr t = parse_term("zs", spec);
    REQUIRE(t->is_var());
    REQUIRE(t->sort() == Sort::Structure);
    REQUIRE(t->var_name() == "zs");
  }

  SECTION("data-sorted root is rejected") {
    REQUIRE_THROWS_MATCHES(
        parse_term("0", spec), ParseError,
        Catch::Matchers::MessageMatches(
            ContainsSubstring("wrong sort for this position")));
  }

  SECTION("arity mismatch is rejected") {
    REQUIRE_THROWS_MATCHES(
        parse_term("f(ones, ones)", spec), ParseError,
        Catch::Matchers::MessageMatches(
            ContainsSubstring("symbol f expects 1 arguments, got 2")));
  }

  SECTION("trailing input is rejected") {
    REQUIRE_THROWS_MATCHES(
        parse_term("ones ones", spec), ParseError,
        Catch::Matchers::MessageMatches(
            ContainsSubstring("trailing input after term")));
  }
}

TEST_CASE("parse errors carry actionable messages") {
  SECTION("applying an undeclared symbol") {
    ProperSpec spec = load_fixture("finzeroes").spec;
    REQUIRE_THROWS_MATCHES(
        parse_term("spy(ones)", spec), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring(
            "UNKNOWN_SYMBOL: spy is applied to arguments but never "
            "declared")));
  }

  SECTION("infix ':' with two candidate pair constructors") {
    std::string text =
        "data 0 : 0 ;\n"
        "cons c1 : 1 1 ;\n"
        "cons c2 : 1 1 ;\n"
        "func f : 0 1 ;\n"
        "RULES {\n"
        "  f(xs) -> 0 : xs ;\n"
        "}\n";
    REQUIRE_THROWS_MATCHES(
        parse_spec(text), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring(
            "infix ':' needs exactly one declared constructor with one "
            "data and one structure argument")));
  }

  SECTION("one variable at both sorts in one rule") {
    std::string text =
        "cons cons : 1 1 ;\n"
        "func f : 0 1 ;\n"
        "RULES {\n"
        "  f(xs) -> xs : f(xs) ;\n"
        "}\n";
    REQUIRE_THROWS_MATCHES(
        parse_spec(text), ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring(
            "variable xs is used at both sorts in one rule")));
  }

  SECTION("duplicate declaration") {
    std::string text =
        "data 0 : 0 ;\n"
        "data 0 : 0 ;\n";
    REQUIRE_THROWS_MATCHES(
        parse_spec(text), ParseError,
        Catch::Matchers::MessageMatches(
            ContainsSubstring("duplicate symbol: 0")));
  }
}

TEST_CASE("context-sensitive export matches the recorded goldens") {
  for (const std::string& name : kProperFixtures) {
    INFO("fixture " << name);
    ProperSpec spec = load_fixture(name).spec;
    ReplacementMap mu = compute_mu(spec);
    REQUIRE(export_csrs(spec, mu) ==
            testutil::read_file(testutil::golden_path(name)));
  }
}

TEST_CASE("export layout details") {
  SECTION("no variables collapses the VAR header") {
    ProperSpec spec = load_fixture("maybe").spec;
    std::string out = export_csrs(spec, compute_mu(spec));
    REQUIRE(out.rfind("(VAR)\n", 0) == 0);
  }

  SECTION("fully allowed symbol lists every index") {
    ProperSpec spec = load_fixture("unfolded").spec;
    std::string out = export_csrs(spec, compute_mu(spec));
    REQUIRE_THAT(out, ContainsSubstring("  (g 2)\n"));
  }

  SECTION("blocked second argument is dropped from the entry") {
    ProperSpec spec = load_fixture("assoc_f").spec;
    std::string out = export_csrs(spec, compute_mu(spec));
    REQUIRE_THAT(out, ContainsSubstring("  (f 1)\n"));
    REQUIRE_THAT(out, !ContainsSubstring("(f 1 2)"));
  }
}

TEST_CASE("JSON report carries the verdict and its evidence") {
  SECTION("disproof includes the cycle witness") {
    ProperSpec spec = load_fixture("maybe").spec;
    Verdict v = decide_productivity(spec);
    auto obj = nlohmann::json::parse(report_json(v));
    REQUIRE(obj["verdict"] == "not_strongly_productive");
    REQUIRE(obj["method"] == "");
    REQUIRE(obj["reason"] == "outermost-fair-cycle");
    REQUIRE(obj["witness"]["kind"] == "outermost_fair_cycle");
    REQUIRE(obj["witness"]["start"] == "maybe");
    REQUIRE(obj["witness"]["prefix"].empty());
    REQUIRE(obj["witness"]["cycle"].size() == 1);
    REQUIRE(obj["witness"]["cycle"][0] ==
            nlohmann::json({{"from", "maybe"},
                            {"pos", "ε"},
                            {"rule", 2},
                            {"to", "maybe"}}));
    REQUIRE(obj["witness"]["fairness"].size() == 2);
    REQUIRE(obj["validation"]["verdict"] == "proper");
    REQUIRE(obj["validation"]["exhaustiveness"] == "exhaustive");
    REQUIRE(obj["validation"]["orthogonal"] == false);
    REQUIRE(obj["mu"]["cons"] == nlohmann::json::array({1}));
  }

  SECTION("proof includes the interpretation table") {
    ProperSpec spec = load_fixture("random_id").spec;
    Verdict v = decide_productivity(spec);
    auto obj = nlohmann::json::parse(report_json(v));
    REQUIRE(obj["verdict"] == "strongly_productive");
    REQUIRE(obj["method"] == "interpretation");
    REQUIRE(obj["certificate"]["method"] == "interpretation");
    REQUIRE(obj["certificate"]["interpretation"]["id"] ==
            nlohmann::json({{"const", 1},
                            {"coeffs", nlohmann::json::array({1})}}));
    REQUIRE(obj["certificate"]["evidence"].size() ==
            spec.struct_rules().size());
  }

  SECTION("improper input surfaces the diagnostics") {
    ProperSpec spec = load_fixture("nested_cons").spec;
    Verdict v = decide_productivity(spec);
    auto obj = nlohmann::json::parse(report_json(v));
    REQUIRE(obj["verdict"] == "improper");
    REQUIRE(obj["validation"]["diagnostics"][0]["code"] ==
            "STRUCT_UNDER_CONSTRUCTOR");
  }

  SECTION("serialization is deterministic and timing is isolated") {
    ProperSpec spec = load_fixture("maybe").spec;
    Verdict v = decide_productivity(spec);
    REQUIRE(report_json(v, 0) == report_json(v, 0));

    auto a = nlohmann::json::parse(report_json(v, 5));
    auto b = nlohmann::json::parse(report_json(v, 7));
    REQUIRE(a["timings"]["total_ms"] == 5);
    REQUIRE(b["timings"]["total_ms"] == 7);
    a.erase("timings");
    b.erase("timings");
    REQUIRE(a == b);
  }
}
