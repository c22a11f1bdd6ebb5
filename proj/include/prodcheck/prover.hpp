#pragma once

// Productivity deciders: the constructor-root criterion for structure rule
// right-hand sides, a bounded search for linear mu-monotone interpretations,
// disproofs via cyclic outermost-fair reductions, and the pipeline combining
// them into one verdict.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prodcheck/cs_engine.hpp"
#include "prodcheck/enumerate.hpp"
#include "prodcheck/replacement_map.hpp"
#include "prodcheck/rewrite.hpp"
#include "prodcheck/spec_check.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

// --- Linear polynomials over the naturals ------------------------------

// c0 + sum coeff[x] * x, variables quantified over N. Coefficients may go
// negative transiently when differencing two polynomials. The variable list
// is a sorted flat vector: rule polynomials have a handful of variables and
// the interpretation search evaluates millions of them.
struct LinPoly {
  long long c0 = 0;
  std::vector<std::pair<std::string, long long>> coeff;  // sorted by name

  void add_scaled(const LinPoly& other, long long k) {
    if (k == 0) return;
    c0 += k * other.c0;
    if (other.coeff.empty()) return;
    std::vector<std::pair<std::string, long long>> merged;
    merged.reserve(coeff.size() + other.coeff.size());
    std::size_t a = 0, b = 0;
    while (a < coeff.size() || b < other.coeff.size()) {
      int cmp;
      if (a == coeff.size())
        cmp = 1;
      else if (b == other.coeff.size())
        cmp = -1;
      else
        cmp = coeff[a].first.compare(other.coeff[b].first);
      if (cmp < 0) {
        merged.push_back(coeff[a++]);
      } else if (cmp > 0) {
        merged.emplace_back(other.coeff[b].first, k * other.coeff[b].second);
        ++b;
      } else {
        long long c = coeff[a].second + k * other.coeff[b].second;
        if (c != 0) merged.emplace_back(coeff[a].first, c);
        ++a;
        ++b;
      }
    }
    coeff = std::move(merged);
  }

  // [l]-[r] >= 1 for every assignment of naturals to the variables.
  bool absolutely_positive() const {
    if (c0 < 1) return false;
    for (const auto& [v, c] : coeff)
      if (c < 0) return false;
    return true;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << c0;
    for (const auto& [v, c] : coeff) os << " + " << c << "*" << v;
    return os.str();
  }
};

// Per symbol: c0 + sum coeff[i-1] * x_i over all (data then structure) args.
struct SymbolPoly {
  long long c0 = 0;
  std::vector<long long> coeff;
};

struct Interpretation {
  std::map<std::string, SymbolPoly> symbols;
  int max_coeff = 2;  // ranges the search ran with, recorded for the report
  int max_const = 3;
};

inline LinPoly interpret_term(const Interpretation& interp, const TermPtr& t) {
  if (t->is_var()) {
    LinPoly p;
    p.coeff.emplace_back(t->var_name(), 1);
    return p;
  }
  const SymbolPoly& sp = interp.symbols.at(t->root()->name);
  LinPoly p;
  p.c0 = sp.c0;
  for (std::size_t i = 0; i < t->args().size(); ++i)
    if (sp.coeff[i] != 0)
      p.add_scaled(interpret_term(interp, t->args()[i]), sp.coeff[i]);
  return p;
}

inline LinPoly rule_delta(const Interpretation& interp, const Rule& rule) {
  LinPoly d = interpret_term(interp, rule.lhs);
  d.add_scaled(interpret_term(interp, rule.rhs), -1);
  return d;
}

// --- Certificates -------------------------------------------------------

struct RuleStrictness {
  int rule_index = 0;  // source index into ProperSpec::rules
  std::string detail;
};

struct ProductivityCertificate {
  enum class Method { Syntactic, Interpretation, ExternalExport };
  Method method = Method::Syntactic;
  std::optional<Interpretation> interp;
  std::string export_path;  // ExternalExport only
  std::vector<RuleStrictness> evidence;
};

inline std::string method_name(ProductivityCertificate::Method m) {
  switch (m) {
    case ProductivityCertificate::Method::Syntactic:
      return "syntactic";
    case ProductivityCertificate::Method::Interpretation:
      return "interpretation";
    case ProductivityCertificate::Method::ExternalExport:
      return "external_export";
  }
  return "?";
}

// Every structure rule that immediately produces a constructor keeps the
// produced prefix stable, so constructor roots appear on every outermost-fair
// run. Certificate iff all structure rhs roots are constructors.
inline std::optional<ProductivityCertificate> check_syntactic(
    const ProperSpec& spec) {
  ProductivityCertificate cert;
  cert.method = ProductivityCertificate::Method::Syntactic;
  for (const Rule& r : spec.struct_rules()) {
    if (!r.rhs->is_constructor_rooted()) return std::nullopt;
    cert.evidence.push_back(RuleStrictness{
        r.source_index, "rhs root is constructor " + r.rhs->root()->name});
  }
  return cert;
}

// --- Interpretation search ----------------------------------------------

namespace detail {

// Candidate coefficient tuples for one symbol, in lexicographic order
// (constant first, then argument coefficients). Allowed argument indices
// must have coefficient >= 1 so the interpretation is mu-monotone.
struct SymbolCandidates {
  SymbolPtr sym;
  std::vector<long long> lower;  // per argument
  int max_coeff = 2;
  int max_const = 3;

  bool first(SymbolPoly& out) const {
    out.c0 = 0;
    out.coeff = lower;
    return true;
  }

  // Advances out to the next tuple; false when exhausted.
  bool next(SymbolPoly& out) const {
    for (int i = static_cast<int>(out.coeff.size()) - 1; i >= 0; --i) {
      if (out.coeff[static_cast<std::size_t>(i)] < max_coeff) {
        ++out.coeff[static_cast<std::size_t>(i)];
        return true;
      }
      out.coeff[static_cast<std::size_t>(i)] =
          lower[static_cast<std::size_t>(i)];
    }
    if (out.c0 < max_const) {
      ++out.c0;
      return true;
    }
    return false;
  }
};

inline SymbolCandidates candidates_for(const SymbolPtr& sym,
                                       const ReplacementMap& mu, int max_coeff,
                                       int max_const) {
  SymbolCandidates c;
  c.sym = sym;
  c.max_coeff = max_coeff;
  c.max_const = max_const;
  c.lower.assign(static_cast<std::size_t>(sym->arity()), 0);
  for (int i : mu.allowed(sym))
    c.lower[static_cast<std::size_t>(i - 1)] = 1;
  return c;
}

inline void collect_symbol_names(const TermPtr& t,
                                 std::set<std::string>& out) {
  if (t->is_var()) return;
  out.insert(t->root()->name);
  for (const TermPtr& a : t->args()) collect_symbol_names(a, out);
}

// Backtracking over the given symbols in order; a rule is checked as soon as
// its last symbol gets a value. Returns the lexicographically least solution.
inline std::optional<Interpretation> search_over(
    const std::vector<SymbolPtr>& syms, const std::vector<const Rule*>& rules,
    const ReplacementMap& mu, int max_coeff, int max_const) {
  std::map<std::string, int> sym_index;
  for (std::size_t i = 0; i < syms.size(); ++i) sym_index[syms[i]->name] =
      static_cast<int>(i);

  // check_at[i]: rules whose symbols are all assigned once symbol i is.
  std::vector<std::vector<const Rule*>> check_at(syms.size());
  for (const Rule* r : rules) {
    std::set<std::string> names;
    collect_symbol_names(r->lhs, names);
    collect_symbol_names(r->rhs, names);
    int last = 0;
    for (const std::string& n : names) last = std::max(last, sym_index.at(n));
    check_at[static_cast<std::size_t>(last)].push_back(r);
  }

  std::vector<SymbolCandidates> cands;
  for (const SymbolPtr& s : syms)
    cands.push_back(candidates_for(s, mu, max_coeff, max_const));

  Interpretation interp;
  interp.max_coeff = max_coeff;
  interp.max_const = max_const;

  std::vector<SymbolPoly> assigned(syms.size());
  auto ok_through = [&](std::size_t i) {
    for (const Rule* r : check_at[i])
      if (!rule_delta(interp, *r).absolutely_positive()) return false;
    return true;
  };

  std::size_t i = 0;
  bool fresh = true;  // take first candidate vs advance the current one
  while (true) {
    bool have = fresh ? cands[i].first(assigned[i]) : cands[i].next(assigned[i]);
    if (!have) {
      if (i == 0) return std::nullopt;
      --i;
      fresh = false;
      continue;
    }
    interp.symbols[syms[i]->name] = assigned[i];
    if (!ok_through(i)) {
      fresh = false;
      continue;
    }
    if (i + 1 == syms.size()) return interp;
    ++i;
    fresh = true;
  }
}

}  // namespace detail

// Exhaustive over argument coefficients {0..max_coeff} and constants
// {0..max_const}, mu-monotone, every rule strictly decreasing under absolute
// positiveness. Symbols are assigned in declaration order and tuples tried
// coefficient-lex, so the result is the least solution and is reproducible.
// Rule groups per root symbol are tried first: a group unsatisfiable on its
// own sinks the whole system, and that is decided without touching the full
// coefficient space.
inline std::optional<Interpretation> search_interpretation(
    const ProperSpec& spec, const ReplacementMap& mu, int max_coeff = 2,
    int max_const = 3) {
  const std::vector<SymbolPtr>& all_syms = spec.sig.symbols();
  std::map<std::string, int> decl_index;
  for (std::size_t i = 0; i < all_syms.size(); ++i)
    decl_index[all_syms[i]->name] = static_cast<int>(i);

  std::map<std::string, std::vector<const Rule*>> groups;
  for (const Rule& r : spec.all_rules())
    groups[r.lhs->root()->name].push_back(&r);

  for (const SymbolPtr& root : all_syms) {
    auto it = groups.find(root->name);
    if (it == groups.end()) continue;
    std::vector<std::set<std::string>> rule_names;
    std::set<std::string> names;
    for (const Rule* r : it->second) {
      std::set<std::string> mine;
      detail::collect_symbol_names(r->lhs, mine);
      detail::collect_symbol_names(r->rhs, mine);
      names.insert(mine.begin(), mine.end());
      rule_names.push_back(std::move(mine));
    }
    // Assign the symbols of the cheapest rule first so that refutations
    // prune before the large coefficient spaces are entered. The order only
    // affects how fast this probe runs, not what the full search reports.
    auto tuple_count = [&](const SymbolPtr& s) {
      double n = max_const + 1;
      auto c = detail::candidates_for(s, mu, max_coeff, max_const);
      for (long long lo : c.lower) n *= static_cast<double>(max_coeff + 1 - lo);
      return n;
    };
    std::vector<SymbolPtr> syms;
    std::set<std::string> placed;
    std::vector<bool> done(rule_names.size(), false);
    while (placed.size() < names.size()) {
      double best_cost = 0;
      int best = -1;
      for (std::size_t ri = 0; ri < rule_names.size(); ++ri) {
        if (done[ri]) continue;
        double cost = 1;
        for (const std::string& n : rule_names[ri])
          if (!placed.count(n))
            cost *= tuple_count(spec.sig.find(n));
        if (best < 0 || cost < best_cost) {
          best = static_cast<int>(ri);
          best_cost = cost;
        }
      }
      if (best < 0) break;
      done[static_cast<std::size_t>(best)] = true;
      for (const SymbolPtr& s : all_syms)
        if (rule_names[static_cast<std::size_t>(best)].count(s->name) &&
            placed.insert(s->name).second)
          syms.push_back(s);
    }
    for (const SymbolPtr& s : all_syms)
      if (names.count(s->name) && placed.insert(s->name).second)
        syms.push_back(s);
    if (!detail::search_over(syms, it->second, mu, max_coeff, max_const))
      return std::nullopt;
  }

  std::vector<const Rule*> all;
  for (const Rule& r : spec.all_rules()) all.push_back(&r);
  return detail::search_over(all_syms, all, mu, max_coeff, max_const);
}

inline std::optional<ProductivityCertificate> interpretation_certificate(
    const ProperSpec& spec, const ReplacementMap& mu, int max_coeff,
    int max_const) {
  auto interp = search_interpretation(spec, mu, max_coeff, max_const);
  if (!interp) return std::nullopt;
  ProductivityCertificate cert;
  cert.method = ProductivityCertificate::Method::Interpretation;
  cert.interp = *interp;
  for (const Rule& r : spec.all_rules())
    cert.evidence.push_back(RuleStrictness{
        r.source_index, "[lhs]-[rhs] = " + rule_delta(*interp, r).to_string()});
  return cert;
}

// --- Certificate re-verification ----------------------------------------

struct CertificateCheck {
  bool ok = false;
  std::vector<std::string> per_rule;
  std::string failure;  // first violated rule or constraint
};

inline CertificateCheck verify_certificate(const ProperSpec& spec,
                                           const ReplacementMap& mu,
                                           const ProductivityCertificate& cert) {
  CertificateCheck out;
  out.ok = true;
  auto fail = [&](const std::string& why) {
    if (out.ok) out.failure = why;
    out.ok = false;
  };

  switch (cert.method) {
    case ProductivityCertificate::Method::Syntactic: {
      for (const Rule& r : spec.struct_rules()) {
        bool good = r.rhs->is_constructor_rooted();
        out.per_rule.push_back(rule_label(r.source_index) + ": " +
                               (good ? "rhs root is a constructor"
                                     : "rhs root is not a constructor"));
        if (!good)
          fail(rule_label(r.source_index) + " (" + rule_to_string(r) +
               "): rhs root is not a constructor");
      }
      break;
    }
    case ProductivityCertificate::Method::Interpretation: {
      if (!cert.interp) {
        fail("certificate carries no interpretation");
        break;
      }
      const Interpretation& interp = *cert.interp;
      for (const SymbolPtr& s : spec.sig.symbols()) {
        auto it = interp.symbols.find(s->name);
        if (it == interp.symbols.end()) {
          fail("symbol " + s->name + ": no polynomial assigned");
          continue;
        }
        const SymbolPoly& sp = it->second;
        if (static_cast<int>(sp.coeff.size()) != s->arity()) {
          fail("symbol " + s->name + ": coefficient count does not match arity");
          continue;
        }
        for (int i = 1; i <= s->arity(); ++i) {
          long long c = sp.coeff[static_cast<std::size_t>(i - 1)];
          if (c < 0)
            fail("symbol " + s->name + ": negative coefficient at argument " +
                 std::to_string(i));
          if (mu.allows(s, i) && c < 1)
            fail("symbol " + s->name + ": argument " + std::to_string(i) +
                 " is rewritable but its coefficient is 0");
        }
        if (sp.c0 < 0) fail("symbol " + s->name + ": negative constant");
      }
      if (!out.ok) break;
      for (const Rule& r : spec.all_rules()) {
        LinPoly d = rule_delta(interp, r);
        bool good = d.absolutely_positive();
        out.per_rule.push_back(rule_label(r.source_index) +
                               ": [lhs]-[rhs] = " + d.to_string() +
                               (good ? " (strict)" : " (no strict decrease)"));
        if (!good)
          fail(rule_label(r.source_index) + " (" + rule_to_string(r) +
               "): no strict decrease");
      }
      break;
    }
    case ProductivityCertificate::Method::ExternalExport: {
      fail("external proofs are not re-checked here (path: " +
           cert.export_path + ")");
      break;
    }
  }
  return out;
}

// --- Disproof: cyclic outermost-fair reductions --------------------------

// One tracked outermost redex of a cycle term, and the cycle step that
// settles it: the step contracts it, rewrites at or above it, or makes the
// rule stop matching. steps_until_resolved counts steps from the redex's
// term, wrapping around the cycle.
struct FairnessEntry {
  int term_index = 0;
  Position pos;
  int rule_index = 0;
  int steps_until_resolved = 0;
  bool contracted = false;
};

struct UnproductiveLoopWitness {
  TermPtr start;
  std::vector<CsStep> prefix;
  std::vector<CsStep> cycle;  // cycle.front().from == cycle.back().to
  std::vector<FairnessEntry> fairness_evidence;
};

// A cyclic reduction is outermost-fair iff no outermost redex survives a
// full traversal: surviving one period of an exact cycle means surviving
// forever. Returns the per-redex evidence, or nullopt when some redex does
// survive (then the cycle proves nothing and must be discarded).
inline std::optional<std::vector<FairnessEntry>> fairness_evidence(
    const ProperSpec& spec, const std::vector<CsStep>& cycle) {
  std::size_t L = cycle.size();
  if (L == 0) return std::nullopt;
  std::vector<FairnessEntry> out;
  for (std::size_t i = 0; i < L; ++i) {
    const TermPtr& t = cycle[i].from;
    for (const Redex& rx :
         find_redexes(spec.all_rules(), t, /*outermost_only=*/true)) {
      bool resolved = false;
      for (std::size_t j = 0; j < L && !resolved; ++j) {
        const CsStep& s = cycle[(i + j) % L];
        FairnessEntry e{static_cast<int>(i), rx.pos, rx.rule_index,
                        static_cast<int>(j), false};
        if (s.pos == rx.pos) {
          e.contracted = s.rule_index == rx.rule_index;
          out.push_back(e);
          resolved = true;
        } else if (is_strict_prefix(s.pos, rx.pos)) {
          // Step strictly above: the redex does not survive.
          out.push_back(e);
          resolved = true;
        } else if (is_strict_prefix(rx.pos, s.pos)) {
          // Step strictly below: survives only while the rule still matches.
          const Rule& rule =
              spec.rules[static_cast<std::size_t>(rx.rule_index)];
          if (!match(rule.lhs, subterm_at(s.to, rx.pos))) {
            out.push_back(e);
            resolved = true;
          }
        }
        // Parallel step: survives untouched.
      }
      if (!resolved) return std::nullopt;
    }
  }
  return out;
}

struct LoopSearchOptions {
  int step_bound = 2000;
  int depth_bound = 12;
  // Diagnostic mode for raw (non-proper) systems: also steps through
  // non-outermost redexes. Witnesses still carry verified fairness evidence,
  // but their steps are no longer all outermost.
  bool allow_non_outermost = false;
};

// Breadth-first over reductions that avoid constructor roots, default
// outermost steps only. An exact repeat on the path is a candidate cycle;
// it becomes a witness only with total fairness evidence, otherwise the
// branch is dropped (a repeated term never needs re-expanding).
inline std::optional<UnproductiveLoopWitness> find_unproductive_loop(
    const ProperSpec& spec, const LoopSearchOptions& opts = {}) {
  struct Node {
    TermPtr term;
    int parent = -1;
    CsStep step;
  };

  int budget = opts.step_bound;
  for (const TermPtr& start : loop_start_terms(spec)) {
    if (start->is_constructor_rooted()) continue;
    std::vector<Node> nodes{{start, -1, {}}};
    std::deque<int> queue{0};
    while (!queue.empty() && budget > 0) {
      int id = queue.front();
      queue.pop_front();
      TermPtr term = nodes[static_cast<std::size_t>(id)].term;
      for (const Redex& rx : find_redexes(spec.all_rules(), term,
                                          !opts.allow_non_outermost)) {
        if (--budget < 0) break;
        TermPtr succ = rewrite_at(
            term, rx.pos, spec.rules[static_cast<std::size_t>(rx.rule_index)]);
        if (succ->is_constructor_rooted()) continue;
        CsStep step{term, succ, rx.pos, rx.rule_index};

        std::vector<int> path;
        for (int a = id; a != -1; a = nodes[static_cast<std::size_t>(a)].parent)
          path.push_back(a);
        std::reverse(path.begin(), path.end());

        int repeat = -1;
        for (std::size_t k = 0; k < path.size(); ++k)
          if (equal(nodes[static_cast<std::size_t>(path[k])].term, succ)) {
            repeat = static_cast<int>(k);
            break;
          }
        if (repeat >= 0) {
          std::vector<CsStep> prefix, cycle;
          for (std::size_t k = 1; k < path.size(); ++k) {
            const CsStep& s = nodes[static_cast<std::size_t>(path[k])].step;
            (static_cast<int>(k) <= repeat ? prefix : cycle).push_back(s);
          }
          cycle.push_back(step);
          if (auto ev = fairness_evidence(spec, cycle))
            return UnproductiveLoopWitness{start, std::move(prefix),
                                           std::move(cycle), std::move(*ev)};
          continue;  // cycle is not outermost-fair; do not re-expand
        }

        if (succ->depth() <= opts.depth_bound) {
          nodes.push_back(Node{succ, id, step});
          queue.push_back(static_cast<int>(nodes.size()) - 1);
        }
      }
    }
    if (budget <= 0) break;
  }
  return std::nullopt;
}

// --- Combined decision procedure ----------------------------------------

enum class Outcome {
  StronglyProductive,
  NotStronglyProductive,
  Unknown,
  Improper,
};

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::StronglyProductive:
      return "strongly_productive";
    case Outcome::NotStronglyProductive:
      return "not_strongly_productive";
    case Outcome::Unknown:
      return "unknown";
    case Outcome::Improper:
      return "improper";
  }
  return "?";
}

struct DecideOptions {
  ValidateOptions validate;
  bool block_data_args = false;
  int max_coeff = 2;
  int max_const = 3;
  LoopSearchOptions loop;
  CsLoopOptions cs_loop;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::string method;  // strongly productive: "syntactic" | "interpretation"
  std::string reason;  // unknown: "exhaustiveness-unknown" | "mu-loop-found"
                       //          | "bounds-exhausted"
  std::string note;    // human-readable elaboration
  ValidationReport validation;
  ReplacementMap mu;
  std::optional<ProductivityCertificate> certificate;
  std::optional<UnproductiveLoopWitness> loop;
  std::optional<CsLoopWitness> mu_loop;
};

// Verdict pipeline: validation gates everything; then prove (constructor
// roots, interpretations), then disprove (outermost-fair cycle), then flag
// mu-nontermination (which only blocks the termination route, it does not
// disprove productivity), else give up with the export as the next step.
inline Verdict decide_productivity(const ProperSpec& spec,
                                   const DecideOptions& opts = {}) {
  Verdict v;
  v.validation = validate_proper(spec, opts.validate);
  if (v.validation.verdict == ValidationReport::Verdict::Improper) {
    v.outcome = Outcome::Improper;
    v.reason = "validation-failed";
    return v;
  }
  v.mu = compute_mu(spec, opts.block_data_args);
  if (v.validation.verdict == ValidationReport::Verdict::Unknown) {
    v.outcome = Outcome::Unknown;
    v.reason = "exhaustiveness-unknown";
    v.note =
        "exhaustiveness could not be decided, so the productivity criteria "
        "do not apply";
    return v;
  }

  if (auto cert = check_syntactic(spec)) {
    v.outcome = Outcome::StronglyProductive;
    v.method = "syntactic";
    v.certificate = std::move(cert);
    return v;
  }

  if (auto cert = interpretation_certificate(spec, v.mu, opts.max_coeff,
                                             opts.max_const)) {
    v.outcome = Outcome::StronglyProductive;
    v.method = "interpretation";
    v.certificate = std::move(cert);
    return v;
  }

  if (auto loop = find_unproductive_loop(spec, opts.loop)) {
    v.outcome = Outcome::NotStronglyProductive;
    v.reason = "outermost-fair-cycle";
    v.loop = std::move(loop);
    return v;
  }

  if (auto cs = find_cs_loop(spec, v.mu, loop_start_terms(spec), opts.cs_loop)) {
    v.outcome = Outcome::Unknown;
    v.reason = "mu-loop-found";
    v.note =
        "mu-nontermination witness found: the context-sensitive termination "
        "route cannot apply; this does not disprove productivity";
    v.mu_loop = std::move(cs);
    return v;
  }

  v.outcome = Outcome::Unknown;
  v.reason = "bounds-exhausted";
  v.note =
      "no proof or disproof within bounds; export the context-sensitive TRS "
      "and hand it to an external termination prover";
  return v;
}

// --- Measure backing the termination-implies-productivity route ----------

// Number of allowed positions holding a structure-sort redex. On systems
// passing check_syntactic whose structure left-hand sides match on the root
// symbol alone (every argument a variable), the count is unchanged by data
// steps and strictly drops at structure steps: below the fresh constructor
// root everything is blocked, and allowedness of the remaining positions only
// depends on symbols along the path, which neither kind of step touches.
// With deeper patterns the guarantee is lost: a contraction can enable a
// match strictly above the contracted position, keeping the count flat or
// even growing it (see the regression case in the prover tests).
inline int mu_struct_redex_count(const ProperSpec& spec,
                                 const ReplacementMap& mu, const TermPtr& t) {
  int n = 0;
  for (const Position& p : allowed_positions(mu, t)) {
    TermPtr sub = subterm_at(t, p);
    if (sub->sort() != Sort::Structure || sub->is_var()) continue;
    for (const Rule& r : spec.struct_rules())
      if (match(r.lhs, sub)) {
        ++n;
        break;
      }
  }
  return n;
}

}  // namespace prodcheck
