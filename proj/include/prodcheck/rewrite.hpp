#pragma once

// Matching, substitution, rules, and redex enumeration. Rule variables live
// in their own namespace: matching binds pattern variables to subject
// subterms and never touches subject variables, so no renaming is needed
// before a rewrite step.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodcheck/term.hpp"

namespace prodcheck {

class Subst {
 public:
  // Returns false when the name is already bound to a different term.
  // Binding a term of the wrong sort is a caller bug.
  bool bind(const std::string& name, Sort sort, const TermPtr& t) {
    if (t->sort() != sort)
      throw std::invalid_argument("sort clash binding " + name);
    auto [it, inserted] = map_.emplace(name, t);
    if (inserted) return true;
    return equal(it->second, t);
  }

  const TermPtr* lookup(const std::string& name) const {
    auto it = map_.find(name);
    return it == map_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, TermPtr>& entries() const { return map_; }
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::string, TermPtr> map_;
};

// Unbound variables are left in place.
inline TermPtr apply_subst(const TermPtr& t, const Subst& sigma) {
  if (t->is_var()) {
    if (const TermPtr* bound = sigma.lookup(t->var_name())) {
      if ((*bound)->sort() != t->sort())
        throw std::invalid_argument("sort clash in substitution at " +
                                    t->var_name());
      return *bound;
    }
    return t;
  }
  if (sigma.empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(apply_subst(a, sigma));
  return Term::app(t->root(), std::move(args));
}

// Syntactic matching, pattern against subject. Repeated pattern variables
// require equal bindings (data rules may be non-linear).
inline bool match_into(const TermPtr& pattern, const TermPtr& subject,
                       Subst& sigma) {
  if (pattern->is_var()) {
    if (pattern->sort() != subject->sort()) return false;
    return sigma.bind(pattern->var_name(), pattern->sort(), subject);
  }
  if (subject->is_var()) return false;
  if (!same_symbol(pattern->root(), subject->root())) return false;
  for (std::size_t i = 0; i < pattern->args().size(); ++i)
    if (!match_into(pattern->args()[i], subject->args()[i], sigma))
      return false;
  return true;
}

inline std::optional<Subst> match(const TermPtr& pattern,
                                  const TermPtr& subject) {
  Subst sigma;
  if (match_into(pattern, subject, sigma)) return sigma;
  return std::nullopt;
}

enum class RuleOrigin { Data, Structure };

// source_index is the global ordinal in input order, data rules first.
// Invariants (lhs non-variable, vars(rhs) within vars(lhs), equal sorts) are
// established by make_rule or reported by rule_problems during validation.
struct Rule {
  TermPtr lhs;
  TermPtr rhs;
  RuleOrigin origin = RuleOrigin::Structure;
  int source_index = 0;
};

inline std::vector<std::string> rule_problems(const Rule& r) {
  std::vector<std::string> out;
  if (r.lhs->is_var()) out.push_back("left-hand side is a variable");
  if (r.lhs->sort() != r.rhs->sort())
    out.push_back("left- and right-hand sides differ in sort");
  auto lv = vars_of(r.lhs);
  for (const auto& [name, sort] : vars_of(r.rhs)) {
    auto it = lv.find(name);
    if (it == lv.end())
      out.push_back("right-hand side variable " + name +
                    " does not occur on the left");
    else if (it->second != sort)
      out.push_back("variable " + name + " used at both sorts");
  }
  return out;
}

inline Rule make_rule(TermPtr lhs, TermPtr rhs, RuleOrigin origin,
                      int source_index) {
  Rule r{std::move(lhs), std::move(rhs), origin, source_index};
  auto problems = rule_problems(r);
  if (!problems.empty())
    throw std::invalid_argument("ill-formed rule " + to_prefix_string(r.lhs) +
                                " -> " + to_prefix_string(r.rhs) + ": " +
                                problems.front());
  return r;
}

inline std::string rule_to_string(const Rule& r) {
  return to_prefix_string(r.lhs) + " -> " + to_prefix_string(r.rhs);
}

// Rules are reported 1-based in source order, data rules first.
inline std::string rule_label(int source_index) {
  return "rule " + std::to_string(source_index + 1);
}

struct NoMatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline TermPtr rewrite_at(const TermPtr& t, const Position& p,
                          const Rule& rule) {
  TermPtr sub = subterm_at(t, p);  // throws InvalidPositionError
  auto sigma = match(rule.lhs, sub);
  if (!sigma)
    throw NoMatchError("rule " + rule_to_string(rule) +
                       " does not match at position " + position_to_string(p));
  return replace_at(t, p, apply_subst(rule.rhs, *sigma));
}

// A redex occurrence: rule_index refers into the rule list handed to
// find_redexes (global source order by convention).
struct Redex {
  Position pos;
  int rule_index = 0;
};

// Enumerates redexes in lexicographic position order, ties in rule order.
// With outermost_only, keeps exactly the redexes that are not strictly below
// another redex position.
inline std::vector<Redex> find_redexes(std::span<const Rule> rules,
                                       const TermPtr& t,
                                       bool outermost_only = false) {
  std::vector<Redex> all;
  for_each_position(t, [&](const Position& p, const TermPtr& sub) {
    if (sub->is_var()) return;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (rules[i].lhs->sort() != sub->sort()) continue;
      if (match(rules[i].lhs, sub))
        all.push_back(Redex{p, static_cast<int>(i)});
    }
  });
  if (!outermost_only || all.empty()) return all;
  std::vector<Redex> out;
  for (const auto& r : all) {
    bool covered = false;
    for (const auto& q : all) {
      if (is_strict_prefix(q.pos, r.pos)) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back(r);
  }
  return out;
}

// Renames every variable in t with a suffix; used to keep rule pairs apart
// during overlap detection.
inline TermPtr rename_vars(const TermPtr& t, const std::string& suffix) {
  if (t->is_var()) return Term::var(t->var_name() + suffix, t->sort());
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(rename_vars(a, suffix));
  return Term::app(t->root(), std::move(args));
}

inline bool occurs_in(const std::string& name, const TermPtr& t) {
  if (t->is_var()) return t->var_name() == name;
  for (const auto& a : t->args())
    if (occurs_in(name, a)) return true;
  return false;
}

// Syntactic unification with occurs check. Returns an idempotent unifier.
inline bool unify_into(TermPtr a, TermPtr b, Subst& sigma) {
  a = apply_subst(a, sigma);
  b = apply_subst(b, sigma);
  if (a->is_var()) {
    if (b->is_var() && b->var_name() == a->var_name()) return true;
    if (a->sort() != b->sort() || occurs_in(a->var_name(), b)) return false;
    // Fold the new binding into existing ones to stay idempotent.
    Subst single;
    single.bind(a->var_name(), a->sort(), b);
    Subst updated;
    for (const auto& [name, t] : sigma.entries())
      updated.bind(name, t->sort(), apply_subst(t, single));
    updated.bind(a->var_name(), a->sort(), b);
    sigma = updated;
    return true;
  }
  if (b->is_var()) return unify_into(b, a, sigma);
  if (!same_symbol(a->root(), b->root())) return false;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (!unify_into(a->args()[i], b->args()[i], sigma)) return false;
  return true;
}

inline std::optional<Subst> unify(const TermPtr& a, const TermPtr& b) {
  Subst sigma;
  if (unify_into(a, b, sigma)) return sigma;
  return std::nullopt;
}

}  // namespace prodcheck
