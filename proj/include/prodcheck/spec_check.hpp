#pragma once

// Validation of specifications: structural properness, overlap detection,
// data constructor completeness, pattern exhaustiveness of the structure
// rules, and a bounded nontermination probe for the data rules.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "prodcheck/enumerate.hpp"
#include "prodcheck/exhaustiveness.hpp"
#include "prodcheck/rewrite.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

namespace diag {
inline constexpr const char* kNonlinearLhs = "NONLINEAR_LHS";
inline constexpr const char* kStructUnderConstructor =
    "STRUCT_UNDER_CONSTRUCTOR";
inline constexpr const char* kBadRoot = "BAD_ROOT";
inline constexpr const char* kSortError = "SORT_ERROR";
inline constexpr const char* kUnboundRhsVar = "UNBOUND_RHS_VAR";
inline constexpr const char* kNotExhaustive = "NOT_EXHAUSTIVE";
inline constexpr const char* kDataNontermination = "DATA_NONTERMINATION";
}  // namespace diag

struct Diagnostic {
  std::string code;
  std::string message;
  std::string where;  // "rule N at position P" or a symbol name
};

// Rule indices are source indices into ProperSpec::rules.
struct OverlapInfo {
  int outer_rule = 0;
  int inner_rule = 0;
  Position pos;
};

enum class Completeness { Complete, Incomplete, Unknown };

struct DataConstructorInfo {
  std::vector<SymbolPtr> constructors;
  std::vector<SymbolPtr> defined;
  Completeness completeness = Completeness::Complete;
  SymbolPtr incomplete_symbol;  // set when Incomplete
  TermPtr witness;              // unmatched ground term, when Incomplete
  std::string reason;           // set when Unknown
};

enum class ExhaustKind { Exhaustive, Missing, Unknown };

struct ExhaustivenessResult {
  ExhaustKind kind = ExhaustKind::Exhaustive;
  SymbolPtr symbol;   // set when Missing
  TermPtr witness;    // pattern with fresh variables, when Missing
  std::string reason; // set when Unknown
};

enum class DataTermKind { Assumed, BoundedOk, LoopFound };

struct RewriteStep {
  Position pos;
  int rule_index = 0;  // source index into ProperSpec::rules
};

struct DataTerminationResult {
  DataTermKind kind = DataTermKind::BoundedOk;
  TermPtr start;
  std::vector<RewriteStep> prefix;  // start to first cycle term
  std::vector<RewriteStep> cycle;   // closes back on the cycle entry
  int depth_bound = 0;
  int step_bound = 0;
};

struct ValidationReport {
  enum class Verdict { Proper, Improper, Unknown };
  Verdict verdict = Verdict::Proper;
  std::vector<Diagnostic> diagnostics;
  bool orthogonal = false;
  std::vector<OverlapInfo> overlaps;
  DataConstructorInfo data_info;
  ExhaustivenessResult exhaustiveness;
  DataTerminationResult data_termination;

  bool proper() const { return verdict == Verdict::Proper; }
};

struct ValidateOptions {
  bool assume_data_terminating = false;
  int data_depth_bound = 4;
  int data_step_bound = 500;
};

// ---------------------------------------------------------------------------
// Overlaps

// Critical overlaps after renaming apart: lhs of one rule unifies with a
// non-variable subterm of another's lhs. Root overlaps are reported once per
// unordered pair; the trivial self-overlap of a rule with itself at the root
// is excluded. Inner overlaps are reported per ordered (outer, inner) pair
// and include self-overlaps.
inline std::vector<OverlapInfo> detect_overlaps(std::span<const Rule> rules) {
  std::vector<OverlapInfo> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for_each_position(rules[i].lhs, [&](const Position& p, const TermPtr& sub) {
      if (sub->is_var()) return;
      for (std::size_t j = 0; j < rules.size(); ++j) {
        if (p.empty() && (i == j || i > j)) continue;
        TermPtr other = rename_vars(rules[j].lhs, "#2");
        if (unify(sub, other))
          out.push_back(OverlapInfo{rules[i].source_index,
                                    rules[j].source_index, p});
      }
    });
  }
  return out;
}

inline bool left_linear(const Rule& r) {
  std::vector<std::string> names;
  bool linear = true;
  auto rec = [&](auto&& self, const TermPtr& t) -> void {
    if (t->is_var()) {
      for (const auto& n : names)
        if (n == t->var_name()) {
          linear = false;
          return;
        }
      names.push_back(t->var_name());
      return;
    }
    for (const auto& a : t->args()) self(self, a);
  };
  rec(rec, r.lhs);
  return linear;
}

// ---------------------------------------------------------------------------
// Data constructor analysis

inline DataConstructorInfo data_constructor_analysis(const ProperSpec& spec) {
  DataConstructorInfo info;
  info.constructors = spec.data_constructor_candidates();
  for (const auto& s : spec.data_symbols()) {
    bool is_ctor = false;
    for (const auto& c : info.constructors)
      if (same_symbol(c, s)) is_ctor = true;
    if (!is_ctor) info.defined.push_back(s);
  }
  if (info.defined.empty()) {
    info.completeness = Completeness::Complete;
    return info;
  }

  auto is_defined = [&](const SymbolPtr& s) {
    for (const auto& d : info.defined)
      if (same_symbol(d, s)) return true;
    return false;
  };

  // Nested defined symbols make normal forms of the arguments matter, which
  // the per-symbol pattern check below cannot see.
  for (const Rule& r : spec.data_rules()) {
    bool nested = false;
    for_each_position(r.lhs, [&](const Position& p, const TermPtr& sub) {
      if (!p.empty() && !sub->is_var() && is_defined(sub->root()))
        nested = true;
    });
    if (nested) {
      info.completeness = Completeness::Unknown;
      info.reason = "a data rule matches on a defined data symbol below its root";
      return info;
    }
  }

  std::vector<TermPtr> ground_nf = ground_terms_over(info.constructors, 2, 8);

  for (const auto& g : info.defined) {
    std::vector<std::vector<TermPtr>> linear_rows;
    bool has_nonlinear = false;
    for (const Rule& r : spec.data_rules()) {
      if (r.lhs->is_var() || !same_symbol(r.lhs->root(), g)) continue;
      if (left_linear(r))
        linear_rows.push_back(r.lhs->args());
      else
        has_nonlinear = true;
    }
    UsefulnessCheck check(spec);
    auto witness = check.find_uncovered(
        linear_rows,
        std::vector<ColumnSpace>(static_cast<std::size_t>(g->arity()),
                                 ColumnSpace::DataNF));
    if (!witness) continue;

    // Ground the witness and verify it really escapes every rule, which also
    // screens out tuples that only a non-linear rule covers.
    std::map<std::string, Sort> vars;
    for (const auto& w : *witness) collect_vars(w, vars);
    std::vector<std::string> names;
    for (const auto& [n, s] : vars) names.push_back(n);
    bool found = false;
    for (std::size_t shift = 0; shift <= ground_nf.size() && !found; ++shift) {
      Subst sigma;
      for (std::size_t k = 0; k < names.size(); ++k) {
        std::size_t pick = shift == 0 ? 0 : (k + shift - 1) % ground_nf.size();
        sigma.bind(names[k], Sort::Data, ground_nf[pick]);
      }
      std::vector<TermPtr> args;
      for (const auto& w : *witness) args.push_back(apply_subst(w, sigma));
      TermPtr candidate = Term::app(g, std::move(args));
      bool matched = false;
      for (const Rule& r : spec.data_rules())
        if (!r.lhs->is_var() && same_symbol(r.lhs->root(), g) &&
            match(r.lhs, candidate))
          matched = true;
      if (!matched) {
        info.completeness = Completeness::Incomplete;
        info.incomplete_symbol = g;
        info.witness = candidate;
        found = true;
      }
    }
    if (found) return info;
    if (has_nonlinear) {
      info.completeness = Completeness::Unknown;
      info.reason = "non-linear data rules prevent a completeness decision for " +
                    g->name;
      return info;
    }
    // Linear rows leave a hole but every grounding we tried is covered; this
    // can only happen when the ground candidate pool is degenerate.
    info.completeness = Completeness::Unknown;
    info.reason = "could not ground an uncovered tuple for " + g->name;
    return info;
  }
  info.completeness = Completeness::Complete;
  return info;
}

// ---------------------------------------------------------------------------
// Exhaustiveness of the structure rules

inline ExhaustivenessResult check_exhaustive(const ProperSpec& spec,
                                             const DataConstructorInfo& info) {
  ExhaustivenessResult res;
  if (info.completeness != Completeness::Complete) {
    res.kind = ExhaustKind::Unknown;
    res.reason = info.completeness == Completeness::Incomplete
                     ? "data normal forms are not constructor terms"
                     : "data constructor analysis was inconclusive";
    return res;
  }
  auto is_defined_data = [&](const SymbolPtr& s) {
    for (const auto& d : info.defined)
      if (same_symbol(d, s)) return true;
    return false;
  };
  for (const Rule& r : spec.struct_rules()) {
    bool has_defined = false;
    for_each_position(r.lhs, [&](const Position&, const TermPtr& sub) {
      if (!sub->is_var() && is_defined_data(sub->root())) has_defined = true;
    });
    if (has_defined) {
      res.kind = ExhaustKind::Unknown;
      res.reason =
          "a structure rule matches on a defined data symbol; coverage over "
          "data normal forms is not decided";
      return res;
    }
  }

  for (const auto& f : spec.defined_structure_symbols()) {
    std::vector<std::vector<TermPtr>> rows;
    for (const Rule& r : spec.struct_rules())
      if (!r.lhs->is_var() && same_symbol(r.lhs->root(), f))
        rows.push_back(r.lhs->args());
    std::vector<ColumnSpace> spaces;
    for (int i = 1; i <= f->arity(); ++i)
      spaces.push_back(f->arg_sort(i) == Sort::Data ? ColumnSpace::DataNF
                                                    : ColumnSpace::StructCons);
    UsefulnessCheck check(spec);
    auto witness = check.find_uncovered(std::move(rows), std::move(spaces));
    if (witness) {
      res.kind = ExhaustKind::Missing;
      res.symbol = f;
      res.witness = Term::app(f, *witness);
      return res;
    }
  }
  res.kind = ExhaustKind::Exhaustive;
  return res;
}

// ---------------------------------------------------------------------------
// Bounded data termination probe

// Explores every derivation from ground data terms up to depth_bound, at
// most step_bound rewrite steps per start term. A repeat on the current
// derivation path is a loop, which disproves termination of the data rules;
// exhausting the budget proves nothing and reports bounded_ok.
inline DataTerminationResult bounded_data_termination_check(
    const ProperSpec& spec, int depth_bound = 4, int step_bound = 500) {
  DataTerminationResult res;
  res.depth_bound = depth_bound;
  res.step_bound = step_bound;
  if (spec.data_rules().empty()) return res;

  std::vector<TermPtr> starts =
      ground_terms_over(spec.data_symbols(), depth_bound, 256);

  struct Frame {
    TermPtr term;
    std::vector<Redex> redexes;
    std::size_t next = 0;
    RewriteStep from;  // step that produced this frame (unused at root)
  };

  for (const TermPtr& start : starts) {
    std::vector<Frame> path;
    path.push_back(Frame{start, find_redexes(spec.data_rules(), start), 0, {}});
    int steps = 0;
    while (!path.empty() && steps < step_bound) {
      Frame& top = path.back();
      if (top.next >= top.redexes.size()) {
        path.pop_back();
        continue;
      }
      Redex rx = top.redexes[top.next++];
      ++steps;
      TermPtr succ = rewrite_at(top.term, rx.pos, spec.rules[static_cast<std::size_t>(rx.rule_index)]);
      RewriteStep step{rx.pos, rx.rule_index};
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (equal(path[k].term, succ)) {
          res.kind = DataTermKind::LoopFound;
          res.start = start;
          for (std::size_t t = 1; t <= k; ++t) res.prefix.push_back(path[t].from);
          for (std::size_t t = k + 1; t < path.size(); ++t)
            res.cycle.push_back(path[t].from);
          res.cycle.push_back(step);
          return res;
        }
      }
      path.push_back(Frame{succ, find_redexes(spec.data_rules(), succ), 0, step});
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Properness

inline ValidationReport validate_proper(const ProperSpec& spec,
                                        const ValidateOptions& opts = {}) {
  ValidationReport report;
  auto add = [&](const char* code, std::string message, std::string where) {
    report.diagnostics.push_back(
        Diagnostic{code, std::move(message), std::move(where)});
  };
  auto label = [](const Rule& r) { return rule_label(r.source_index); };

  for (const Rule& r : spec.all_rules()) {
    if (r.lhs->is_var()) {
      add(diag::kBadRoot,
          "left-hand side is a bare variable in " + rule_to_string(r),
          label(r));
      continue;
    }
    if (r.lhs->sort() != r.rhs->sort())
      add(diag::kSortError,
          "left- and right-hand sides differ in sort in " + rule_to_string(r),
          label(r));
    auto lhs_vars = vars_of(r.lhs);
    for (const auto& [name, sort] : vars_of(r.rhs)) {
      auto it = lhs_vars.find(name);
      if (it == lhs_vars.end())
        add(diag::kUnboundRhsVar,
            "variable " + name + " of the right-hand side does not occur on "
            "the left in " + rule_to_string(r),
            label(r));
      else if (it->second != sort)
        add(diag::kSortError,
            "variable " + name + " used at both sorts in " + rule_to_string(r),
            label(r));
    }

    if (r.origin == RuleOrigin::Data) {
      if (r.lhs->root()->role != SymbolRole::Data)
        add(diag::kBadRoot,
            "data rule must be rooted in a data symbol: " + rule_to_string(r),
            label(r));
      continue;
    }

    // Structure rules: rooted in a defined structure symbol, left-linear,
    // and no structure symbol below a constructor on the left.
    if (r.lhs->root()->role != SymbolRole::DefinedStructure)
      add(diag::kBadRoot,
          "structure rule must be rooted in a defined structure symbol: " +
              rule_to_string(r),
          label(r));
    if (!left_linear(r))
      add(diag::kNonlinearLhs,
          "left-hand side is not linear: " + to_prefix_string(r.lhs),
          label(r));
    for_each_position(r.lhs, [&](const Position& p, const TermPtr& sub) {
      if (p.empty() || sub->is_var() || !sub->is_constructor_rooted()) return;
      for (std::size_t i = 0; i < sub->args().size(); ++i) {
        const TermPtr& a = sub->args()[i];
        if (!a->is_var() && a->sort() == Sort::Structure) {
          Position at = p;
          at.push_back(static_cast<int>(i + 1));
          add(diag::kStructUnderConstructor,
              "structure symbol below constructor " + sub->root()->name +
                  " in " + to_prefix_string(r.lhs),
              label(r) + " at position " + position_to_string(at));
        }
      }
    });
  }

  bool structurally_proper = report.diagnostics.empty();

  report.overlaps = detect_overlaps(spec.all_rules());
  report.orthogonal = report.overlaps.empty();
  for (const Rule& r : spec.all_rules())
    if (!left_linear(r)) report.orthogonal = false;

  report.data_info = data_constructor_analysis(spec);

  if (opts.assume_data_terminating) {
    report.data_termination.kind = DataTermKind::Assumed;
  } else {
    report.data_termination = bounded_data_termination_check(
        spec, opts.data_depth_bound, opts.data_step_bound);
    if (report.data_termination.kind == DataTermKind::LoopFound)
      add(diag::kDataNontermination,
          "data rules loop on " +
              to_prefix_string(report.data_termination.start),
          "data rules");
  }

  if (structurally_proper) {
    report.exhaustiveness = check_exhaustive(spec, report.data_info);
    if (report.exhaustiveness.kind == ExhaustKind::Missing)
      add(diag::kNotExhaustive,
          "no rule matches " + spec.display(report.exhaustiveness.witness),
          report.exhaustiveness.symbol->name);
  } else {
    report.exhaustiveness.kind = ExhaustKind::Unknown;
    report.exhaustiveness.reason = "structural validation failed";
  }

  if (!report.diagnostics.empty())
    report.verdict = ValidationReport::Verdict::Improper;
  else if (report.exhaustiveness.kind == ExhaustKind::Unknown)
    report.verdict = ValidationReport::Verdict::Unknown;
  else
    report.verdict = ValidationReport::Verdict::Proper;
  return report;
}

}  // namespace prodcheck
