#pragma once

// Outermost-fair evaluation by parallel-outermost rounds: every round
// contracts each outermost redex exactly once, so no redex position can
// survive a round and fairness holds by construction. Iterating rounds digs
// out a constructor prefix of the (possibly infinite) structure denoted by
// the start term.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prodcheck/rewrite.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

// Decides between several rules matching the same position. Candidates are
// rule source indices in ascending order; the chooser returns one of them.
// Positions with a single matching rule never reach the chooser.
class RuleChooser {
 public:
  virtual ~RuleChooser() = default;
  virtual int choose(const TermPtr& term, const Position& pos,
                     const std::vector<int>& candidates) = 0;
};

// mt19937_64 has a pinned sequence in the standard, so draws replay across
// platforms for a given seed.
class SeededChooser final : public RuleChooser {
 public:
  explicit SeededChooser(std::uint64_t seed) : rng_(seed) {}
  int choose(const TermPtr&, const Position&,
             const std::vector<int>& candidates) override {
    return candidates[static_cast<std::size_t>(rng_() %
                                               candidates.size())];
  }

 private:
  std::mt19937_64 rng_;
};

// Test hook: delegate draws to a function.
class FunctionChooser final : public RuleChooser {
 public:
  using Fn = std::function<int(const TermPtr&, const Position&,
                               const std::vector<int>&)>;
  explicit FunctionChooser(Fn fn) : fn_(std::move(fn)) {}
  int choose(const TermPtr& term, const Position& pos,
             const std::vector<int>& candidates) override {
    return fn_(term, pos, candidates);
  }

 private:
  Fn fn_;
};

struct ChoiceEntry {
  int round = 0;
  Position pos;
  int rule_index = 0;
};

// One parallel-outermost round. Outermost redex positions are pairwise
// parallel, so the contractions commute and one ascending pass suffices.
inline TermPtr parallel_outermost_round(const ProperSpec& spec,
                                        const TermPtr& t, RuleChooser& chooser,
                                        int round,
                                        std::vector<ChoiceEntry>& log) {
  std::vector<Redex> redexes =
      find_redexes(spec.all_rules(), t, /*outermost_only=*/true);
  TermPtr cur = t;
  std::size_t i = 0;
  while (i < redexes.size()) {
    std::size_t j = i;
    std::vector<int> candidates;
    while (j < redexes.size() && redexes[j].pos == redexes[i].pos)
      candidates.push_back(redexes[j++].rule_index);
    int rule = candidates.size() == 1
                   ? candidates.front()
                   : chooser.choose(t, redexes[i].pos, candidates);
    cur = rewrite_at(cur, redexes[i].pos,
                     spec.rules[static_cast<std::size_t>(rule)]);
    log.push_back(ChoiceEntry{round, redexes[i].pos, rule});
    i = j;
  }
  return cur;
}

struct PrefixResult {
  enum class Status { Success, BudgetExceeded };
  Status status = Status::Success;
  // Success: the prefix, structure subtrees at depth k replaced by holes.
  // BudgetExceeded: the last whole term, untruncated.
  TermPtr term;
  int rounds_used = 0;
  std::vector<ChoiceEntry> choice_log;
  // BudgetExceeded: shallowest position violating the prefix condition.
  Position stuck_pos;

  bool success() const { return status == Status::Success; }
};

namespace detail {

// Prefix condition at depth budget k: every structure position above depth k
// is constructor-rooted. Data arguments are not part of this condition; the
// emitted elements are normalized separately once the shape is complete. On
// failure sets `violation` to the shallowest offending position, ties broken
// left to right.
inline bool prefix_complete(const TermPtr& t, int k, Position& violation) {
  std::vector<Position> bad;
  for_each_position(t, [&](const Position& p, const TermPtr& sub) {
    if (static_cast<int>(p.size()) >= k) return;
    if (sub->sort() == Sort::Structure && !sub->is_constructor_rooted())
      bad.push_back(p);
  });
  if (bad.empty()) return true;
  std::sort(bad.begin(), bad.end(), [](const Position& a, const Position& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  violation = bad.front();
  return false;
}

inline TermPtr truncate_to_depth(const TermPtr& t, int depth, int k) {
  if (t->sort() == Sort::Structure && depth == k)
    return Term::var("\xe2\x80\xa6", Sort::Structure);  // hole, prints as …
  if (t->is_var() || t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const TermPtr& a : t->args())
    args.push_back(a->sort() == Sort::Structure
                       ? truncate_to_depth(a, depth + 1, k)
                       : a);
  return Term::app(t->root(), std::move(args));
}

// Innermost normalization of a data term. Terminates because the data TRS
// passed (or was explicitly assumed past) the termination gate; overlapping
// data rules are resolved in source order.
inline TermPtr normalize_data(const ProperSpec& spec, const TermPtr& t) {
  if (t->is_var()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const TermPtr& a : t->args()) args.push_back(normalize_data(spec, a));
  TermPtr cur = Term::app(t->root(), std::move(args));
  for (const Rule& r : spec.data_rules())
    if (match(r.lhs, cur)) return normalize_data(spec, rewrite_at(cur, {}, r));
  return cur;
}

// Emitted stream elements are handed out as data normal forms.
inline TermPtr normalize_prefix_data(const ProperSpec& spec,
                                     const TermPtr& t) {
  if (t->is_var() || t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const TermPtr& a : t->args())
    args.push_back(a->sort() == Sort::Data ? normalize_data(spec, a)
                                           : normalize_prefix_data(spec, a));
  return Term::app(t->root(), std::move(args));
}

}  // namespace detail

inline int default_max_rounds(const ProperSpec& spec, int k) {
  return 10 * (k + 1) * static_cast<int>(spec.struct_rules().size());
}

// Rounds until every structure position above depth k is constructor-rooted,
// then truncates at depth k and normalizes the emitted data elements.
// max_rounds < 0 picks the default budget.
inline PrefixResult eval_prefix(const ProperSpec& spec, const TermPtr& t,
                                int k, RuleChooser& chooser,
                                int max_rounds = -1) {
  if (!t || t->sort() != Sort::Structure)
    throw std::invalid_argument("eval_prefix needs a structure-sort term");
  if (k < 0) throw std::invalid_argument("prefix depth must be >= 0");
  if (max_rounds < 0) max_rounds = default_max_rounds(spec, k);

  PrefixResult res;
  TermPtr cur = t;
  Position violation;
  int round = 0;
  while (!detail::prefix_complete(cur, k, violation)) {
    if (round >= max_rounds) {
      res.status = PrefixResult::Status::BudgetExceeded;
      res.term = cur;
      res.rounds_used = round;
      res.stuck_pos = violation;
      return res;
    }
    cur = parallel_outermost_round(spec, cur, chooser, round, res.choice_log);
    ++round;
  }
  res.status = PrefixResult::Status::Success;
  res.term = detail::normalize_prefix_data(
      spec, detail::truncate_to_depth(cur, 0, k));
  res.rounds_used = round;
  return res;
}

inline PrefixResult eval_prefix(const ProperSpec& spec, const TermPtr& t,
                                int k, std::uint64_t seed,
                                int max_rounds = -1) {
  SeededChooser chooser(seed);
  return eval_prefix(spec, t, k, chooser, max_rounds);
}

// Direct check of the prefix invariant on a result term (holes and all),
// used by the property suite.
inline bool prefix_sound(const TermPtr& t, int k, int depth = 0) {
  if (t->sort() == Sort::Structure && depth < k) {
    if (!t->is_constructor_rooted()) return false;
  }
  if (t->is_var()) return true;
  for (const TermPtr& a : t->args())
    if (a->sort() == Sort::Structure && !prefix_sound(a, k, depth + 1))
      return false;
  return true;
}

}  // namespace prodcheck
