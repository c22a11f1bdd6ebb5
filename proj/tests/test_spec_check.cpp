#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>

#include "helpers.hpp"
#include "prodcheck/spec_check.hpp"

using namespace prodcheck;
using testutil::load_fixture;

namespace {

bool has_code(const ValidationReport& rep, const std::string& code) {
  return std::any_of(rep.diagnostics.begin(), rep.diagnostics.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

const Diagnostic& diag_with_code(const ValidationReport& rep,
                                 const std::string& code) {
  for (const Diagnostic& d : rep.diagnostics)
    if (d.code == code) return d;
  FAIL("diagnostic " + code + " not reported");
  return rep.diagnostics.front();
}

}  // namespace

TEST_CASE("every stream fixture validates as proper") {
  for (const char* name : {"maybe", "random", "random_id", "finzeroes",
                           "snc_inf", "assoc_f", "incomplete", "unfolded",
                           "sdff"}) {
    CAPTURE(name);
    ValidationReport rep = validate_proper(load_fixture(name).spec);
    REQUIRE(rep.proper());
    REQUIRE(rep.diagnostics.empty());
    REQUIRE(rep.exhaustiveness.kind == ExhaustKind::Exhaustive);
  }
}

TEST_CASE("orthogonality flag across the corpus") {
  // snc_inf is the one orthogonal fixture; everything else overlaps somewhere
  REQUIRE(validate_proper(load_fixture("snc_inf").spec).orthogonal);
  for (const char* name :
       {"maybe", "random", "random_id", "finzeroes", "assoc_f", "incomplete",
        "unfolded", "sdff"}) {
    CAPTURE(name);
    REQUIRE_FALSE(validate_proper(load_fixture(name).spec).orthogonal);
  }
}

TEST_CASE("root overlaps are reported once per rule pair") {
  ProperSpec spec = load_fixture("maybe").spec;
  std::vector<OverlapInfo> ov = detect_overlaps(spec.all_rules());
  REQUIRE(ov.size() == 2);
  // maybe's two rules, then random's two rules, all at the root
  REQUIRE(ov[0].outer_rule == 0);
  REQUIRE(ov[0].inner_rule == 1);
  REQUIRE(ov[0].pos.empty());
  REQUIRE(ov[1].outer_rule == 2);
  REQUIRE(ov[1].inner_rule == 3);
  REQUIRE(ov[1].pos.empty());
}

TEST_CASE("identical left-hand sides overlap pairwise") {
  ProperSpec spec = load_fixture("finzeroes").spec;
  std::vector<OverlapInfo> ov = detect_overlaps(spec.all_rules());
  // rules 2..4 (finZeroes) share a left-hand side; ones and the f-rules
  // stay out of it since their patterns clash
  std::set<std::pair<int, int>> pairs;
  for (const OverlapInfo& o : ov) {
    REQUIRE(o.pos.empty());
    REQUIRE(o.outer_rule >= 1);
    REQUIRE(o.inner_rule <= 3);
    pairs.insert({o.outer_rule, o.inner_rule});
  }
  REQUIRE(pairs ==
          std::set<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("nested left-hand sides give overlaps below the root") {
  ProperSpec spec = load_fixture("incomplete").spec;
  std::vector<OverlapInfo> ov = detect_overlaps(spec.all_rules());
  bool found = false;
  for (const OverlapInfo& o : ov)
    if (o.pos == Position{1}) found = true;  // f(x:xs) inside f(f(xs))
  REQUIRE(found);

  ProperSpec one_rule = load_fixture("snc_inf").spec;
  REQUIRE(detect_overlaps(one_rule.all_rules()).empty());
}

TEST_CASE("data constructor split over the flip-flop rules") {
  DataConstructorInfo info =
      data_constructor_analysis(load_fixture("sdff").spec);
  REQUIRE(info.completeness == Completeness::Complete);
  std::set<std::string> ctors, defined;
  for (const SymbolPtr& s : info.constructors) ctors.insert(s->name);
  for (const SymbolPtr& s : info.defined) defined.insert(s->name);
  REQUIRE(ctors == std::set<std::string>{"0", "1"});
  REQUIRE(defined == std::set<std::string>{"not"});
}

TEST_CASE("data analysis flags missing and nested cases") {
  SECTION("missing pattern yields a ground witness") {
    SpecFile f = parse_spec(R"(
data 0 : 0 ;
data 1 : 0 ;
data g : 1 ;
cons cons : 1 1 ;
func s : 0 0 ;
DATA-RULES { g(0) -> 0 ; }
RULES { s -> g(0) : s ; }
)");
    DataConstructorInfo info = data_constructor_analysis(f.spec);
    REQUIRE(info.completeness == Completeness::Incomplete);
    REQUIRE(info.incomplete_symbol->name == "g");
    REQUIRE(info.witness);
    REQUIRE(to_prefix_string(info.witness) == "g(1)");
    // improper overall: data normal forms escape the constructor fragment
    ValidationReport rep = validate_proper(f.spec);
    REQUIRE(rep.exhaustiveness.kind == ExhaustKind::Unknown);
    REQUIRE(rep.verdict == ValidationReport::Verdict::Unknown);
  }

  SECTION("defined symbol nested in a data pattern is inconclusive") {
    SpecFile f = parse_spec(R"(
data 0 : 0 ;
data g : 1 ;
cons cons : 1 1 ;
func s : 0 0 ;
DATA-RULES { g(g(x)) -> 0 ; g(0) -> 0 ; }
RULES { s -> 0 : s ; }
)");
    DataConstructorInfo info = data_constructor_analysis(f.spec);
    REQUIRE(info.completeness == Completeness::Unknown);
    REQUIRE_FALSE(info.reason.empty());
  }

  SECTION("purely non-linear coverage stays undecided") {
    // d(0,1) escapes d(x,x), but the grounded usefulness witness (0,0) is
    // covered by the non-linear rule, so the analysis must not guess.
    SpecFile f = parse_spec(R"(
data 0 : 0 ;
data 1 : 0 ;
data d : 2 ;
cons cons : 1 1 ;
func s : 0 0 ;
DATA-RULES { d(x, x) -> x ; }
RULES { s -> 0 : s ; }
)");
    DataConstructorInfo info = data_constructor_analysis(f.spec);
    REQUIRE(info.completeness == Completeness::Unknown);
    REQUIRE_THAT(info.reason, Catch::Matchers::ContainsSubstring("non-linear"));
    ValidationReport rep = validate_proper(f.spec);
    REQUIRE(rep.exhaustiveness.kind == ExhaustKind::Unknown);
    REQUIRE(rep.verdict == ValidationReport::Verdict::Unknown);
  }

  SECTION("grounding screens out tuples only a non-linear rule covers") {
    SpecFile f = parse_spec(R"(
data 0 : 0 ;
data 1 : 0 ;
data d : 2 ;
cons cons : 1 1 ;
func s : 0 0 ;
DATA-RULES { d(x, x) -> x ; d(0, y) -> y ; }
RULES { s -> 0 : s ; }
)");
    DataConstructorInfo info = data_constructor_analysis(f.spec);
    REQUIRE(info.completeness == Completeness::Incomplete);
    REQUIRE(info.witness);
    // the witness really is unmatched: d(x,x) needs equal arguments
    for (const Rule& r : f.spec.data_rules())
      REQUIRE_FALSE(match(r.lhs, info.witness).has_value());
  }

  SECTION("empty data fragment is trivially complete") {
    DataConstructorInfo info =
        data_constructor_analysis(load_fixture("maybe").spec);
    REQUIRE(info.completeness == Completeness::Complete);
    REQUIRE(info.defined.empty());
  }
}

TEST_CASE("structure exhaustiveness finds the dropped pattern") {
  SpecFile f = parse_spec(R"(
data 0 : 0 ;
data 1 : 0 ;
cons cons : 1 1 ;
func ones : 0 0 ;
func f : 0 1 ;
RULES {
  ones -> 1 : ones ;
  f(0 : xs) -> f(xs) ;
}
)");
  DataConstructorInfo info = data_constructor_analysis(f.spec);
  ExhaustivenessResult ex = check_exhaustive(f.spec, info);
  REQUIRE(ex.kind == ExhaustKind::Missing);
  REQUIRE(ex.symbol->name == "f");
  REQUIRE(ex.witness);
  // shape f(1 : _), and no structure rule matches any grounding of it
  REQUIRE(ex.witness->root()->name == "f");
  const TermPtr& arg = ex.witness->args()[0];
  REQUIRE(arg->root()->name == "cons");
  REQUIRE(arg->args()[0]->root()->name == "1");
  REQUIRE(arg->args()[1]->is_var());
}

TEST_CASE("two-column exhaustiveness over data patterns") {
  SpecFile f = parse_spec(R"(
data 0 : 0 ;
data 1 : 0 ;
cons cons : 1 1 ;
func h : 2 0 ;
RULES {
  h(0, 0) -> 0 : h(1, 1) ;
  h(1, 1) -> 1 : h(0, 0) ;
}
)");
  ExhaustivenessResult ex =
      check_exhaustive(f.spec, data_constructor_analysis(f.spec));
  REQUIRE(ex.kind == ExhaustKind::Missing);
  REQUIRE(ex.symbol->name == "h");
  for (const Rule& r : f.spec.struct_rules())
    REQUIRE_FALSE(match(r.lhs, ex.witness).has_value());
}

TEST_CASE("bounded data termination probe") {
  SECTION("terminating rules pass the probe") {
    DataTerminationResult res =
        bounded_data_termination_check(load_fixture("sdff").spec);
    REQUIRE(res.kind == DataTermKind::BoundedOk);
  }

  SECTION("a looping rule is caught with a replayable cycle") {
    SpecFile f = parse_spec(R"(
data 0 : 0 ;
data g : 1 ;
cons cons : 1 1 ;
func s : 0 0 ;
DATA-RULES { g(x) -> g(x) ; }
RULES { s -> 0 : s ; }
)");
    DataTerminationResult res = bounded_data_termination_check(f.spec);
    REQUIRE(res.kind == DataTermKind::LoopFound);
    REQUIRE(to_prefix_string(res.start) == "g(0)");
    REQUIRE(res.prefix.empty());
    REQUIRE(res.cycle.size() == 1);

    ValidationReport rep = validate_proper(f.spec);
    REQUIRE(rep.verdict == ValidationReport::Verdict::Improper);
    REQUIRE(has_code(rep, diag::kDataNontermination));

    ValidateOptions opts;
    opts.assume_data_terminating = true;
    ValidationReport assumed = validate_proper(f.spec, opts);
    REQUIRE(assumed.proper());
    REQUIRE(assumed.data_termination.kind == DataTermKind::Assumed);
  }
}

TEST_CASE("non-left-linear structure rules are rejected") {
  ValidationReport rep = validate_proper(load_fixture("nonleftlin").spec);
  REQUIRE(rep.verdict == ValidationReport::Verdict::Improper);
  const Diagnostic& d = diag_with_code(rep, diag::kNonlinearLhs);
  REQUIRE(d.where == "rule 3");
  REQUIRE(d.message == "left-hand side is not linear: f(c(x,x))");
}

TEST_CASE("structure symbols below constructors are rejected") {
  ValidationReport rep = validate_proper(load_fixture("nested_cons").spec);
  REQUIRE(rep.verdict == ValidationReport::Verdict::Improper);
  const Diagnostic& d = diag_with_code(rep, diag::kStructUnderConstructor);
  REQUIRE(d.where == "rule 2 at position 1.2");
  REQUIRE(d.message ==
          "structure symbol below constructor cons in f(cons(x,cons(y,xs)))");
}

TEST_CASE("bad rule roots and unbound variables are diagnosed") {
  SpecFile f = parse_spec(R"(
data 0 : 0 ;
cons cons : 1 1 ;
func f : 0 1 ;
RULES {
  xs -> xs ;
  f(xs) -> ys ;
}
)");
  ValidationReport rep = validate_proper(f.spec);
  REQUIRE(rep.verdict == ValidationReport::Verdict::Improper);
  REQUIRE(has_code(rep, diag::kBadRoot));
  REQUIRE(has_code(rep, diag::kUnboundRhsVar));
}

TEST_CASE("constructor-rooted rules are not allowed") {
  SpecFile f = parse_spec(R"(
data 0 : 0 ;
cons cons : 1 1 ;
func s : 0 0 ;
RULES {
  s -> 0 : s ;
  0 : xs -> xs ;
}
)");
  ValidationReport rep = validate_proper(f.spec);
  REQUIRE(rep.verdict == ValidationReport::Verdict::Improper);
  REQUIRE(has_code(rep, diag::kBadRoot));
}
