#pragma once

// Replacement maps: which argument positions context-sensitive rewriting may
// step into. Data symbols and constructors allow exactly their data
// arguments. A defined structure symbol blocks argument i iff every
// non-variable subterm of a structure-rule left-hand side rooted in it has a
// variable there; a symbol that never occurs on a left-hand side blocks all
// of its arguments.
//
// Optionally the same blocking rule is applied to data symbols (scanning
// both rule sets). That is only sound when the data rules are left-linear,
// so it is refused otherwise.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodcheck/spec_check.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

class ReplacementMap {
 public:
  void set(const SymbolPtr& f, std::set<int> allowed) {
    by_name_[f->name] = std::move(allowed);
  }

  const std::set<int>& allowed(const SymbolPtr& f) const {
    auto it = by_name_.find(f->name);
    if (it == by_name_.end())
      throw std::invalid_argument("no replacement map entry for " + f->name);
    return it->second;
  }

  bool allows(const SymbolPtr& f, int i) const {
    return allowed(f).count(i) > 0;
  }

  const std::map<std::string, std::set<int>>& entries() const {
    return by_name_;
  }

 private:
  std::map<std::string, std::set<int>> by_name_;
};

inline ReplacementMap compute_mu(const ProperSpec& spec,
                                 bool block_data_args = false) {
  if (block_data_args)
    for (const Rule& r : spec.data_rules())
      if (!left_linear(r))
        throw std::invalid_argument(
            "data-argument blocking requires left-linear data rules; " +
            rule_to_string(r) + " is not");

  ReplacementMap mu;
  // Non-variable lhs subterms grouped by root symbol name.
  std::map<std::string, std::vector<TermPtr>> struct_occ, data_occ;
  for (const Rule& r : spec.struct_rules())
    for_each_position(r.lhs, [&](const Position&, const TermPtr& sub) {
      if (!sub->is_var()) struct_occ[sub->root()->name].push_back(sub);
    });
  if (block_data_args)
    for (const Rule& r : spec.all_rules())
      for_each_position(r.lhs, [&](const Position&, const TermPtr& sub) {
        if (!sub->is_var() && sub->root()->role == SymbolRole::Data)
          data_occ[sub->root()->name].push_back(sub);
      });

  // Argument i stays allowed as long as some occurrence has a non-variable
  // there; an index that is a variable in every occurrence is blocked.
  auto allowed_by_occurrences = [](const SymbolPtr& f,
                                   const std::vector<TermPtr>& occ) {
    std::set<int> allowed;
    for (int i = 1; i <= f->arity(); ++i) {
      bool always_var = true;
      for (const TermPtr& t : occ)
        if (!t->args()[static_cast<std::size_t>(i - 1)]->is_var())
          always_var = false;
      if (!always_var) allowed.insert(i);
    }
    return allowed;
  };

  for (const auto& f : spec.sig.symbols()) {
    if (f->role == SymbolRole::DefinedStructure) {
      mu.set(f, allowed_by_occurrences(f, struct_occ[f->name]));
      continue;
    }
    std::set<int> allowed;
    for (int i = 1; i <= f->data_arity; ++i) allowed.insert(i);
    if (block_data_args && f->role == SymbolRole::Data)
      allowed = allowed_by_occurrences(f, data_occ[f->name]);
    mu.set(f, std::move(allowed));
  }
  return mu;
}

// Positions reachable through allowed argument indices only. A variable has
// just the root position, by convention.
inline std::vector<Position> allowed_positions(const ReplacementMap& mu,
                                               const TermPtr& t) {
  std::vector<Position> out;
  Position p;
  auto rec = [&](auto&& self, const TermPtr& cur) -> void {
    out.push_back(p);
    if (cur->is_var()) return;
    for (int i = 1; i <= static_cast<int>(cur->args().size()); ++i) {
      if (!mu.allows(cur->root(), i)) continue;
      p.push_back(i);
      self(self, cur->args()[static_cast<std::size_t>(i - 1)]);
      p.pop_back();
    }
  };
  rec(rec, t);
  return out;
}

inline bool position_allowed(const ReplacementMap& mu, const TermPtr& t,
                             const Position& pos) {
  TermPtr cur = t;
  for (int i : pos) {
    if (cur->is_var() || i < 1 || i > static_cast<int>(cur->args().size()))
      return false;
    if (!mu.allows(cur->root(), i)) return false;
    cur = cur->args()[static_cast<std::size_t>(i - 1)];
  }
  return true;
}

inline std::string replacement_map_to_string(const ProperSpec& spec,
                                             const ReplacementMap& mu) {
  std::string out;
  for (const auto& f : spec.sig.symbols()) {
    out += "mu(" + f->name + ") = {";
    bool first = true;
    for (int i : mu.allowed(f)) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    out += "}\n";
  }
  return out;
}

}  // namespace prodcheck
