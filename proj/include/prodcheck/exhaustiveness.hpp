#pragma once

// Pattern-matrix usefulness, specialized for the exhaustiveness questions
// the validator asks. The classic recursion: a row vector of patterns covers
// part of a tuple space; the all-wildcard query is "useful" iff some tuple
// escapes every row, and the recursion reconstructs such a tuple as a
// witness. Columns carry the space they quantify over:
//
//   DataNF     ground terms over the data constructors
//   StructCons constructor-rooted structure terms (data args in DataNF)
//   AnyStruct  arbitrary ground structure terms
//
// AnyStruct columns arise below constructors. In a structurally valid
// specification the patterns there are always variables, so those columns
// never split. Patterns rooted by symbols outside a column's split set
// (defined structure symbols in a StructCons column) cover nothing in that
// space and simply drop out of every specialization.
//
// Specialization strictly shrinks total pattern size, so recursion depth is
// bounded by the maximal pattern depth.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prodcheck/system.hpp"
#include "prodcheck/term.hpp"

namespace prodcheck {

enum class ColumnSpace { DataNF, StructCons, AnyStruct };

class UsefulnessCheck {
 public:
  UsefulnessCheck(std::vector<SymbolPtr> data_constructors,
                  std::vector<SymbolPtr> constructors,
                  const std::vector<SymbolPtr>& all_symbols)
      : data_constructors_(std::move(data_constructors)),
        constructors_(std::move(constructors)) {
    compute_inhabitation(all_symbols);
  }

  explicit UsefulnessCheck(const ProperSpec& spec)
      : UsefulnessCheck(spec.data_constructor_candidates(),
                        spec.constructors(), spec.sig.symbols()) {}

  // Returns a tuple (one pattern per column, wildcards as fresh variables)
  // that no row covers, or nullopt when the rows are exhaustive over the
  // column spaces.
  std::optional<std::vector<TermPtr>> find_uncovered(
      std::vector<std::vector<TermPtr>> rows,
      std::vector<ColumnSpace> spaces) {
    return recurse(std::move(rows), std::move(spaces));
  }

  bool inhabited(ColumnSpace c) const {
    switch (c) {
      case ColumnSpace::DataNF: return data_nf_inhabited_;
      case ColumnSpace::StructCons: return struct_cons_inhabited_;
      case ColumnSpace::AnyStruct: return any_struct_inhabited_;
    }
    return false;
  }

 private:
  std::optional<std::vector<TermPtr>> recurse(
      std::vector<std::vector<TermPtr>> rows,
      std::vector<ColumnSpace> spaces) {
    // An uninhabited column empties the whole tuple space.
    for (ColumnSpace c : spaces)
      if (!inhabited(c)) return std::nullopt;
    if (spaces.empty()) {
      if (rows.empty()) return std::vector<TermPtr>{};
      return std::nullopt;
    }
    ColumnSpace col = spaces.front();
    if (col == ColumnSpace::AnyStruct) {
      for (const auto& row : rows)
        if (!row.front()->is_var())
          throw std::logic_error(
              "non-variable pattern below a constructor; validate first");
      auto sub = recurse(drop_column(rows), rest(spaces));
      if (!sub) return std::nullopt;
      sub->insert(sub->begin(), fresh_var(Sort::Structure));
      return sub;
    }

    const std::vector<SymbolPtr>& split =
        col == ColumnSpace::DataNF ? data_constructors_ : constructors_;
    std::set<std::string> heads;
    for (const auto& row : rows) {
      const TermPtr& p = row.front();
      if (!p->is_var() && in_split(split, p->root()))
        heads.insert(p->root()->name);
    }

    bool complete = heads.size() == split.size();
    if (complete) {
      for (const SymbolPtr& c : split) {
        auto sub = recurse(specialize(rows, c), sub_spaces(c, spaces));
        if (sub) return rebuild(c, *sub);
      }
      return std::nullopt;
    }

    // Some constructor is never matched on: recurse on the rows that keep
    // this column open and instantiate the witness with a missing head.
    std::vector<std::vector<TermPtr>> defaults;
    for (const auto& row : rows)
      if (row.front()->is_var()) defaults.push_back(tail(row));
    auto sub = recurse(std::move(defaults), rest(spaces));
    if (!sub) return std::nullopt;
    SymbolPtr missing;
    for (const SymbolPtr& c : split)
      if (!heads.count(c->name)) {
        missing = c;
        break;
      }
    std::vector<TermPtr> args;
    for (int i = 1; i <= missing->arity(); ++i)
      args.push_back(fresh_var(missing->arg_sort(i)));
    sub->insert(sub->begin(), Term::app(missing, std::move(args)));
    return sub;
  }

  static bool in_split(const std::vector<SymbolPtr>& split,
                       const SymbolPtr& s) {
    for (const auto& c : split)
      if (same_symbol(c, s)) return true;
    return false;
  }

  static std::vector<TermPtr> tail(const std::vector<TermPtr>& row) {
    return {row.begin() + 1, row.end()};
  }

  static std::vector<std::vector<TermPtr>> drop_column(
      const std::vector<std::vector<TermPtr>>& rows) {
    std::vector<std::vector<TermPtr>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(tail(row));
    return out;
  }

  static std::vector<ColumnSpace> rest(const std::vector<ColumnSpace>& s) {
    return {s.begin() + 1, s.end()};
  }

  std::vector<std::vector<TermPtr>> specialize(
      const std::vector<std::vector<TermPtr>>& rows, const SymbolPtr& c) {
    std::vector<std::vector<TermPtr>> out;
    for (const auto& row : rows) {
      const TermPtr& p = row.front();
      std::vector<TermPtr> expanded;
      if (p->is_var()) {
        for (int i = 1; i <= c->arity(); ++i)
          expanded.push_back(fresh_var(c->arg_sort(i)));
      } else if (same_symbol(p->root(), c)) {
        expanded = p->args();
      } else {
        continue;
      }
      expanded.insert(expanded.end(), row.begin() + 1, row.end());
      out.push_back(std::move(expanded));
    }
    return out;
  }

  static std::vector<ColumnSpace> sub_spaces(
      const SymbolPtr& c, const std::vector<ColumnSpace>& spaces) {
    std::vector<ColumnSpace> out;
    for (int i = 1; i <= c->arity(); ++i)
      out.push_back(c->arg_sort(i) == Sort::Data ? ColumnSpace::DataNF
                                                 : ColumnSpace::AnyStruct);
    out.insert(out.end(), spaces.begin() + 1, spaces.end());
    return out;
  }

  static std::vector<TermPtr> rebuild(const SymbolPtr& c,
                                      const std::vector<TermPtr>& sub) {
    auto n = static_cast<std::size_t>(c->arity());
    std::vector<TermPtr> args{sub.begin(), sub.begin() + n};
    std::vector<TermPtr> out;
    out.push_back(Term::app(c, std::move(args)));
    out.insert(out.end(), sub.begin() + n, sub.end());
    return out;
  }

  TermPtr fresh_var(Sort s) {
    ++fresh_;
    return Term::var((s == Sort::Data ? "x" : "xs") + std::to_string(fresh_),
                     s);
  }

  void compute_inhabitation(const std::vector<SymbolPtr>& all_symbols) {
    // Ground terms of each sort over the full signature.
    bool any_data = false, any_struct = false, changed = true;
    while (changed) {
      changed = false;
      for (const auto& s : all_symbols) {
        bool ok = true;
        for (int i = 1; i <= s->arity(); ++i)
          ok &= s->arg_sort(i) == Sort::Data ? any_data : any_struct;
        if (ok) {
          bool& flag = s->result_sort() == Sort::Data ? any_data : any_struct;
          if (!flag) changed = flag = true;
        }
      }
    }
    any_struct_inhabited_ = any_struct;

    // Ground terms over the data constructors only (all-data arguments).
    changed = true;
    bool nf = false;
    while (changed) {
      changed = false;
      for (const auto& c : data_constructors_) {
        bool ok = true;
        for (int i = 1; i <= c->arity(); ++i) ok &= nf;
        if (ok && !nf) changed = nf = true;
      }
    }
    data_nf_inhabited_ = nf;

    struct_cons_inhabited_ = false;
    for (const auto& c : constructors_) {
      bool ok = true;
      for (int i = 1; i <= c->arity(); ++i)
        ok &= c->arg_sort(i) == Sort::Data ? data_nf_inhabited_
                                           : any_struct_inhabited_;
      if (ok) struct_cons_inhabited_ = true;
    }
  }

  std::vector<SymbolPtr> data_constructors_;
  std::vector<SymbolPtr> constructors_;
  bool data_nf_inhabited_ = false;
  bool struct_cons_inhabited_ = false;
  bool any_struct_inhabited_ = false;
  int fresh_ = 0;
};

}  // namespace prodcheck
