#pragma once

// Two-sorted terms over a user-declared signature. Every symbol has a type
// d^m x s^n -> d|s: the first m arguments are data-sorted, the remaining n
// structure-sorted. Terms are immutable and shared; equality is structural
// and hashes are memoized per node.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prodcheck {

enum class Sort { Data, Structure };

inline const char* sort_name(Sort s) { return s == Sort::Data ? "d" : "s"; }

// Role decides the result sort: data symbols produce sort d, constructors
// and defined structure symbols produce sort s.
enum class SymbolRole { Data, Constructor, DefinedStructure };

struct Symbol {
  std::string name;
  int data_arity = 0;
  int struct_arity = 0;
  SymbolRole role = SymbolRole::Data;

  int arity() const { return data_arity + struct_arity; }
  Sort result_sort() const {
    return role == SymbolRole::Data ? Sort::Data : Sort::Structure;
  }
  // 1-based argument index.
  Sort arg_sort(int i) const {
    return i <= data_arity ? Sort::Data : Sort::Structure;
  }
  bool is_constructor() const { return role == SymbolRole::Constructor; }
};

using SymbolPtr = std::shared_ptr<const Symbol>;

inline bool same_symbol(const SymbolPtr& a, const SymbolPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->name == b->name && a->data_arity == b->data_arity &&
         a->struct_arity == b->struct_arity && a->role == b->role;
}

// Declared symbols in declaration order. Declaration order is load-bearing:
// exports, mu tables and search orders all follow it.
class Signature {
 public:
  SymbolPtr declare(std::string name, int data_arity, int struct_arity,
                    SymbolRole role) {
    if (data_arity < 0 || struct_arity < 0)
      throw std::invalid_argument("negative arity for symbol " + name);
    if (role == SymbolRole::Data && struct_arity != 0)
      throw std::invalid_argument("data symbol " + name +
                                  " cannot take structure arguments");
    if (by_name_.count(name))
      throw std::invalid_argument("duplicate symbol: " + name);
    auto sym = std::make_shared<Symbol>(
        Symbol{std::move(name), data_arity, struct_arity, role});
    by_name_.emplace(sym->name, sym);
    order_.push_back(sym);
    return sym;
  }

  SymbolPtr find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
  }

  const std::vector<SymbolPtr>& symbols() const { return order_; }

 private:
  std::vector<SymbolPtr> order_;
  std::map<std::string, SymbolPtr> by_name_;
};

// Positions are 1-based index sequences; the empty sequence is the root.
using Position = std::vector<int>;

inline std::string position_to_string(const Position& p) {
  if (p.empty()) return "ε";  // epsilon
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

inline bool is_strict_prefix(const Position& p, const Position& q) {
  if (p.size() >= q.size()) return false;
  return std::equal(p.begin(), p.end(), q.begin());
}

inline bool is_prefix(const Position& p, const Position& q) {
  return p.size() <= q.size() && std::equal(p.begin(), p.end(), q.begin());
}

inline bool positions_parallel(const Position& p, const Position& q) {
  return !is_prefix(p, q) && !is_prefix(q, p);
}

// std::vector's operator< is lexicographic with prefixes first, which is
// exactly the enumeration order used everywhere.
inline bool position_lex_less(const Position& p, const Position& q) {
  return p < q;
}

inline Position position_concat(const Position& p, const Position& q) {
  Position r = p;
  r.insert(r.end(), q.begin(), q.end());
  return r;
}

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  static TermPtr var(std::string name, Sort sort) {
    auto t = std::shared_ptr<Term>(new Term());
    t->name_ = std::move(name);
    t->sort_ = sort;
    t->depth_ = 0;
    t->size_ = 1;
    t->hash_ = hash_combine(0x9e3779b97f4a7c15ull ^ (sort == Sort::Data ? 1 : 2),
                            std::hash<std::string>{}(t->name_));
    return t;
  }

  static TermPtr app(SymbolPtr sym, std::vector<TermPtr> args = {}) {
    if (!sym) throw std::invalid_argument("null symbol");
    if (static_cast<int>(args.size()) != sym->arity())
      throw std::invalid_argument("arity mismatch at " + sym->name + ": got " +
                                  std::to_string(args.size()) + ", expected " +
                                  std::to_string(sym->arity()));
    for (int i = 1; i <= sym->arity(); ++i) {
      const TermPtr& a = args[static_cast<std::size_t>(i - 1)];
      if (!a) throw std::invalid_argument("null argument at " + sym->name);
      if (a->sort() != sym->arg_sort(i))
        throw std::invalid_argument("sort mismatch at argument " +
                                    std::to_string(i) + " of " + sym->name);
    }
    auto t = std::shared_ptr<Term>(new Term());
    t->sym_ = std::move(sym);
    t->args_ = std::move(args);
    t->sort_ = t->sym_->result_sort();
    t->depth_ = 0;
    t->size_ = 1;
    std::size_t h = std::hash<std::string>{}(t->sym_->name);
    for (const auto& a : t->args_) {
      t->depth_ = std::max(t->depth_, a->depth() + 1);
      t->size_ += a->size();
      h = hash_combine(h, a->hash());
    }
    t->hash_ = h;
    return t;
  }

  bool is_var() const { return sym_ == nullptr; }
  Sort sort() const { return sort_; }
  const SymbolPtr& root() const { return sym_; }
  const std::string& var_name() const { return name_; }
  const std::vector<TermPtr>& args() const { return args_; }
  std::size_t hash() const { return hash_; }
  std::size_t size() const { return size_; }
  int depth() const { return depth_; }
  bool is_constructor_rooted() const {
    return sym_ && sym_->role == SymbolRole::Constructor;
  }

 private:
  Term() = default;
  static std::size_t hash_combine(std::size_t h, std::size_t k) {
    return h ^ (k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }

  SymbolPtr sym_;      // null for variables
  std::string name_;   // variable name
  std::vector<TermPtr> args_;
  Sort sort_ = Sort::Structure;
  std::size_t hash_ = 0;
  std::size_t size_ = 0;
  int depth_ = 0;
};

inline bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash() || a->sort() != b->sort()) return false;
  if (a->is_var() != b->is_var()) return false;
  if (a->is_var()) return a->var_name() == b->var_name();
  if (!same_symbol(a->root(), b->root())) return false;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (!equal(a->args()[i], b->args()[i])) return false;
  return true;
}

struct TermHash {
  std::size_t operator()(const TermPtr& t) const { return t ? t->hash() : 0; }
};
struct TermEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return equal(a, b);
  }
};

struct InvalidPositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline TermPtr subterm_at(const TermPtr& t, const Position& p) {
  TermPtr cur = t;
  for (int i : p) {
    if (cur->is_var() || i < 1 || i > static_cast<int>(cur->args().size()))
      throw InvalidPositionError("no subterm at position " +
                                 position_to_string(p));
    cur = cur->args()[static_cast<std::size_t>(i - 1)];
  }
  return cur;
}

inline bool has_position(const TermPtr& t, const Position& p) {
  TermPtr cur = t;
  for (int i : p) {
    if (cur->is_var() || i < 1 || i > static_cast<int>(cur->args().size()))
      return false;
    cur = cur->args()[static_cast<std::size_t>(i - 1)];
  }
  return true;
}

// Returns a copy of t with the subterm at p replaced. The replacement must
// have the sort of the replaced subterm (Term::app re-checks).
inline TermPtr replace_at(const TermPtr& t, const Position& p,
                          const TermPtr& replacement, std::size_t at = 0) {
  if (at == p.size()) return replacement;
  if (t->is_var() || p[at] < 1 ||
      p[at] > static_cast<int>(t->args().size()))
    throw InvalidPositionError("no subterm at position " +
                               position_to_string(p));
  std::vector<TermPtr> args = t->args();
  std::size_t idx = static_cast<std::size_t>(p[at] - 1);
  args[idx] = replace_at(args[idx], p, replacement, at + 1);
  return Term::app(t->root(), std::move(args));
}

// Pre-order enumeration; yields positions in lexicographic order.
template <typename Fn>
inline void for_each_position(const TermPtr& t, Fn&& fn) {
  Position p;
  auto rec = [&](auto&& self, const TermPtr& cur) -> void {
    fn(static_cast<const Position&>(p), cur);
    for (int i = 1; i <= static_cast<int>(cur->args().size()); ++i) {
      p.push_back(i);
      self(self, cur->args()[static_cast<std::size_t>(i - 1)]);
      p.pop_back();
    }
  };
  rec(rec, t);
}

inline std::vector<Position> positions(const TermPtr& t) {
  std::vector<Position> out;
  for_each_position(t, [&](const Position& p, const TermPtr&) {
    out.push_back(p);
  });
  return out;
}

inline bool is_ground(const TermPtr& t) {
  if (t->is_var()) return false;
  for (const auto& a : t->args())
    if (!is_ground(a)) return false;
  return true;
}

inline void collect_vars(const TermPtr& t,
                         std::map<std::string, Sort>& out) {
  if (t->is_var()) {
    out.emplace(t->var_name(), t->sort());
    return;
  }
  for (const auto& a : t->args()) collect_vars(a, out);
}

inline std::map<std::string, Sort> vars_of(const TermPtr& t) {
  std::map<std::string, Sort> out;
  collect_vars(t, out);
  return out;
}

// Plain prefix rendering: f(a,b). Used for exports and anywhere a stable,
// sugar-free form is needed.
inline std::string to_prefix_string(const TermPtr& t) {
  if (t->is_var()) return t->var_name();
  std::string out = t->root()->name;
  if (!t->args().empty()) {
    out += '(';
    for (std::size_t i = 0; i < t->args().size(); ++i) {
      if (i) out += ',';
      out += to_prefix_string(t->args()[i]);
    }
    out += ')';
  }
  return out;
}

// Display rendering: the designated (1,1) constructor prints infix and
// right-associative, "h : t". Pass null to force prefix everywhere.
inline std::string to_display_string(const TermPtr& t,
                                     const SymbolPtr& infix_cons) {
  auto rec = [&](auto&& self, const TermPtr& cur, bool parens) -> std::string {
    if (cur->is_var()) return cur->var_name();
    if (infix_cons && same_symbol(cur->root(), infix_cons)) {
      std::string head = self(self, cur->args()[0], true);
      std::string tail = self(self, cur->args()[1], false);
      std::string s = head + " : " + tail;
      return parens ? "(" + s + ")" : s;
    }
    std::string out = cur->root()->name;
    if (!cur->args().empty()) {
      out += '(';
      for (std::size_t i = 0; i < cur->args().size(); ++i) {
        if (i) out += ',';
        out += self(self, cur->args()[i], false);
      }
      out += ')';
    }
    return out;
  };
  return rec(rec, t, false);
}

}  // namespace prodcheck
