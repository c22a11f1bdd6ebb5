#pragma once

// Context-sensitive TRS exchange format, for handing the termination
// obligation to an external prover. The layout is pinned byte-for-byte and
// covered by golden files: variables on one line in first-occurrence order,
// one strategy entry per declared symbol in declaration order with ascending
// indices, rules in source order, prefix terms without interior spaces,
// two-space indentation, trailing newline.

#include <set>
#include <string>
#include <vector>

#include "prodcheck/replacement_map.hpp"
#include "prodcheck/rewrite.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

inline std::string export_csrs(const ProperSpec& spec,
                               const ReplacementMap& mu) {
  std::vector<std::string> vars;
  std::set<std::string> seen;
  auto collect = [&](const TermPtr& t) {
    for_each_position(t, [&](const Position&, const TermPtr& sub) {
      if (sub->is_var() && seen.insert(sub->var_name()).second)
        vars.push_back(sub->var_name());
    });
  };
  for (const Rule& r : spec.all_rules()) {
    collect(r.lhs);
    collect(r.rhs);
  }

  std::string out = "(VAR";
  for (const std::string& v : vars) out += " " + v;
  out += ")\n(STRATEGY CONTEXTSENSITIVE\n";
  for (const SymbolPtr& s : spec.sig.symbols()) {
    out += "  (" + s->name;
    for (int i : mu.allowed(s)) out += " " + std::to_string(i);
    out += ")\n";
  }
  out += ")\n(RULES\n";
  for (const Rule& r : spec.all_rules())
    out += "  " + to_prefix_string(r.lhs) + " -> " + to_prefix_string(r.rhs) +
           "\n";
  out += ")\n";
  return out;
}

}  // namespace prodcheck
