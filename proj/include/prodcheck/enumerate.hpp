#pragma once

// Deterministic ground-term generators. Loop searches, the data termination
// probe and the property suites all draw start terms from here; order is
// generation order (by depth, then declaration order, then argument order)
// so runs are reproducible.

#include <unordered_set>
#include <vector>

#include "prodcheck/system.hpp"
#include "prodcheck/term.hpp"

namespace prodcheck {

namespace detail {

inline void product_apply(const SymbolPtr& f,
                          const std::vector<std::vector<TermPtr>>& choices,
                          std::size_t cap, std::vector<TermPtr>& out,
                          std::unordered_set<TermPtr, TermHash, TermEq>& seen) {
  std::vector<std::size_t> idx(choices.size(), 0);
  for (const auto& c : choices)
    if (c.empty()) return;
  while (true) {
    std::vector<TermPtr> args;
    args.reserve(choices.size());
    for (std::size_t i = 0; i < choices.size(); ++i)
      args.push_back(choices[i][idx[i]]);
    TermPtr t = Term::app(f, std::move(args));
    if (seen.insert(t).second) out.push_back(t);
    if (out.size() >= cap) return;
    std::size_t k = choices.size();
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
  }
}

}  // namespace detail

// All ground terms of depth <= max_depth over the given symbols (arguments
// drawn from the same set), capped. Constants have depth 0.
inline std::vector<TermPtr> ground_terms_over(
    const std::vector<SymbolPtr>& symbols, int max_depth, std::size_t cap) {
  std::vector<TermPtr> out;
  std::unordered_set<TermPtr, TermHash, TermEq> seen;
  for (const auto& s : symbols)
    if (s->arity() == 0 && out.size() < cap) {
      TermPtr t = Term::app(s);
      if (seen.insert(t).second) out.push_back(t);
    }
  for (int d = 1; d <= max_depth && out.size() < cap; ++d) {
    std::vector<TermPtr> prev = out;  // everything of depth < d
    for (const auto& s : symbols) {
      if (s->arity() == 0 || out.size() >= cap) continue;
      std::vector<std::vector<TermPtr>> choices;
      bool feasible = true;
      for (int i = 1; i <= s->arity(); ++i) {
        std::vector<TermPtr> slot;
        for (const auto& t : prev)
          if (t->sort() == s->arg_sort(i)) slot.push_back(t);
        if (slot.empty()) feasible = false;
        choices.push_back(std::move(slot));
      }
      if (feasible) detail::product_apply(s, choices, cap, out, seen);
    }
  }
  return out;
}

// Ground structure terms usable as loop-search arguments: nullary structure
// symbols as leaves, constructor applications above them, data slots filled
// with data-constructor terms.
inline std::vector<TermPtr> ground_struct_arguments(const ProperSpec& spec,
                                                    int max_depth,
                                                    std::size_t cap) {
  std::vector<TermPtr> data =
      ground_terms_over(spec.data_constructor_candidates(), max_depth, cap);
  std::vector<TermPtr> out;
  std::unordered_set<TermPtr, TermHash, TermEq> seen;
  for (const auto& s : spec.sig.symbols())
    if (s->result_sort() == Sort::Structure && s->arity() == 0 &&
        out.size() < cap) {
      TermPtr t = Term::app(s);
      if (seen.insert(t).second) out.push_back(t);
    }
  for (int d = 1; d <= max_depth && out.size() < cap; ++d) {
    std::vector<TermPtr> prev = out;
    for (const auto& c : spec.constructors()) {
      if (c->arity() == 0 || out.size() >= cap) continue;
      std::vector<std::vector<TermPtr>> choices;
      bool feasible = true;
      for (int i = 1; i <= c->arity(); ++i) {
        std::vector<TermPtr> slot;
        if (c->arg_sort(i) == Sort::Data) {
          for (const auto& t : data)
            if (t->depth() < d) slot.push_back(t);
        } else {
          slot = prev;
        }
        if (slot.empty()) feasible = false;
        choices.push_back(std::move(slot));
      }
      if (feasible) detail::product_apply(c, choices, cap, out, seen);
    }
  }
  return out;
}

// Start terms for the loop searches: each defined structure symbol applied
// to argument combinations of depth <= 2, plus every nullary structure
// symbol by itself.
inline std::vector<TermPtr> loop_start_terms(const ProperSpec& spec,
                                             std::size_t per_symbol_cap = 64,
                                             std::size_t total_cap = 512) {
  std::vector<TermPtr> data =
      ground_terms_over(spec.data_constructor_candidates(), 2, 32);
  std::vector<TermPtr> structs = ground_struct_arguments(spec, 2, 64);
  std::vector<TermPtr> out;
  std::unordered_set<TermPtr, TermHash, TermEq> seen;
  auto add = [&](TermPtr t) {
    if (out.size() < total_cap && seen.insert(t).second)
      out.push_back(std::move(t));
  };
  for (const auto& f : spec.defined_structure_symbols()) {
    if (f->arity() == 0) {
      add(Term::app(f));
      continue;
    }
    std::vector<std::vector<TermPtr>> choices;
    bool feasible = true;
    for (int i = 1; i <= f->arity(); ++i) {
      const auto& slot = f->arg_sort(i) == Sort::Data ? data : structs;
      if (slot.empty()) feasible = false;
      choices.push_back(slot);
    }
    if (!feasible) continue;
    std::vector<TermPtr> mine;
    std::unordered_set<TermPtr, TermHash, TermEq> mine_seen;
    detail::product_apply(f, choices, per_symbol_cap, mine, mine_seen);
    for (auto& t : mine) add(std::move(t));
  }
  for (const auto& s : spec.sig.symbols())
    if (s->result_sort() == Sort::Structure && s->arity() == 0)
      add(Term::app(s));
  return out;
}

}  // namespace prodcheck
