#pragma once

// The specification object shared by all analyses: a two-sorted signature
// with a designated set of constructors, data rules and structure rules.
// "Proper" is established by validate_proper (spec_check.hpp); engines that
// are exercised on raw systems in tests take the struct as-is.

#include <span>
#include <vector>

#include "prodcheck/rewrite.hpp"
#include "prodcheck/term.hpp"

namespace prodcheck {

struct ProperSpec {
  Signature sig;
  // Global source order: data rules first, then structure rules.
  // source_index of rules[i] is i.
  std::vector<Rule> rules;
  int n_data = 0;

  std::span<const Rule> all_rules() const { return rules; }
  std::span<const Rule> data_rules() const {
    return {rules.data(), static_cast<std::size_t>(n_data)};
  }
  std::span<const Rule> struct_rules() const {
    return {rules.data() + n_data, rules.size() - static_cast<std::size_t>(n_data)};
  }

  std::vector<SymbolPtr> constructors() const {
    std::vector<SymbolPtr> out;
    for (const auto& s : sig.symbols())
      if (s->role == SymbolRole::Constructor) out.push_back(s);
    return out;
  }

  std::vector<SymbolPtr> data_symbols() const {
    std::vector<SymbolPtr> out;
    for (const auto& s : sig.symbols())
      if (s->role == SymbolRole::Data) out.push_back(s);
    return out;
  }

  std::vector<SymbolPtr> defined_structure_symbols() const {
    std::vector<SymbolPtr> out;
    for (const auto& s : sig.symbols())
      if (s->role == SymbolRole::DefinedStructure) out.push_back(s);
    return out;
  }

  // Data symbols that never root a data-rule left-hand side. Candidates for
  // the data constructor set; spec_check decides whether they generate all
  // ground data normal forms.
  std::vector<SymbolPtr> data_constructor_candidates() const {
    std::vector<SymbolPtr> out;
    for (const auto& s : sig.symbols()) {
      if (s->role != SymbolRole::Data) continue;
      bool defined = false;
      for (const Rule& r : data_rules())
        if (!r.lhs->is_var() && same_symbol(r.lhs->root(), s)) {
          defined = true;
          break;
        }
      if (!defined) out.push_back(s);
    }
    return out;
  }

  // The designated stream constructor for infix display, when there is
  // exactly one constructor of profile (1,1).
  SymbolPtr unique_pair_constructor() const {
    SymbolPtr found;
    for (const auto& s : sig.symbols()) {
      if (s->role == SymbolRole::Constructor && s->data_arity == 1 &&
          s->struct_arity == 1) {
        if (found) return nullptr;
        found = s;
      }
    }
    return found;
  }

  std::string display(const TermPtr& t) const {
    return to_display_string(t, unique_pair_constructor());
  }
};

}  // namespace prodcheck
