#pragma once

// Context-sensitive rewriting under a replacement map, and a bounded search
// for mu-nontermination evidence. Witnesses come in two kinds: an exact
// cycle (a term repeats on a derivation path) and a self-embedding (the last
// term contains an earlier one at an allowed position, so the derivation can
// be replayed inside the surrounding context indefinitely).

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodcheck/replacement_map.hpp"
#include "prodcheck/rewrite.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

struct BlockedPositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsStep {
  TermPtr from;
  TermPtr to;
  Position pos;
  int rule_index = 0;  // source index into ProperSpec::rules
};

// Redexes restricted to allowed positions, in the usual position-lex /
// rule-order enumeration.
inline std::vector<Redex> mu_redexes(const ProperSpec& spec,
                                     const ReplacementMap& mu,
                                     const TermPtr& t) {
  std::vector<Redex> out;
  for (const Redex& r : find_redexes(spec.all_rules(), t))
    if (position_allowed(mu, t, r.pos)) out.push_back(r);
  return out;
}

inline CsStep mu_rewrite_step(const ProperSpec& spec, const ReplacementMap& mu,
                              const TermPtr& t, const Position& pos,
                              int rule_index) {
  if (!position_allowed(mu, t, pos))
    throw BlockedPositionError("BLOCKED_POSITION: " + position_to_string(pos) +
                               " is not allowed in " + to_prefix_string(t));
  const Rule& rule = spec.rules.at(static_cast<std::size_t>(rule_index));
  return CsStep{t, rewrite_at(t, pos, rule), pos, rule_index};
}

struct CsLoopWitness {
  enum class Kind { ExactCycle, SelfEmbedding };
  Kind kind = Kind::ExactCycle;
  TermPtr start;
  std::vector<CsStep> prefix;  // start to the cycle entry
  std::vector<CsStep> cycle;   // entry back to itself, or to a term embedding it
  Position embed_pos;          // self-embedding: where the entry recurs
};

struct CsLoopOptions {
  int step_bound = 2000;  // explored nodes across the whole search
  int depth_bound = 12;   // term depth cap for enqueued successors
};

// Breadth-first over ->mu from each start term in turn. Paths are tracked
// through parent pointers; cycles are only recognized along a path, never
// across branches, so every witness replays as a single derivation.
inline std::optional<CsLoopWitness> find_cs_loop(
    const ProperSpec& spec, const ReplacementMap& mu,
    const std::vector<TermPtr>& starts, const CsLoopOptions& opts = {}) {
  struct Node {
    TermPtr term;
    int parent = -1;
    CsStep step;  // step from parent (unused at the root)
  };

  int budget = opts.step_bound;
  for (const TermPtr& start : starts) {
    std::vector<Node> nodes;
    nodes.push_back(Node{start, -1, {}});
    std::deque<int> queue{0};
    while (!queue.empty() && budget > 0) {
      int id = queue.front();
      queue.pop_front();
      TermPtr term = nodes[static_cast<std::size_t>(id)].term;
      for (const Redex& rx : mu_redexes(spec, mu, term)) {
        if (--budget < 0) break;
        TermPtr succ = rewrite_at(
            term, rx.pos, spec.rules[static_cast<std::size_t>(rx.rule_index)]);
        CsStep step{term, succ, rx.pos, rx.rule_index};

        // Collect the path root..id once for both witness checks.
        std::vector<int> path;
        for (int a = id; a != -1; a = nodes[static_cast<std::size_t>(a)].parent)
          path.push_back(a);
        std::reverse(path.begin(), path.end());

        auto steps_from = [&](std::size_t from_idx, std::size_t to_idx) {
          std::vector<CsStep> out;
          for (std::size_t k = from_idx + 1; k <= to_idx; ++k)
            out.push_back(nodes[static_cast<std::size_t>(path[k])].step);
          return out;
        };

        // Exact cycle: the successor already occurred on this path.
        bool witnessed = false;
        for (std::size_t k = 0; k < path.size() && !witnessed; ++k) {
          if (!equal(nodes[static_cast<std::size_t>(path[k])].term, succ))
            continue;
          CsLoopWitness w;
          w.kind = CsLoopWitness::Kind::ExactCycle;
          w.start = start;
          w.prefix = steps_from(0, k);
          w.cycle = steps_from(k, path.size() - 1);
          w.cycle.push_back(step);
          return w;
        }

        // Self-embedding: an ancestor recurs strictly inside the successor
        // at an allowed position. Earliest ancestor, smallest position.
        for (std::size_t k = 0; k < path.size(); ++k) {
          const TermPtr& anc = nodes[static_cast<std::size_t>(path[k])].term;
          std::optional<Position> found;
          for_each_position(succ, [&](const Position& q, const TermPtr& sub) {
            if (found || q.empty()) return;
            if (equal(sub, anc) && position_allowed(mu, succ, q)) found = q;
          });
          if (found) {
            CsLoopWitness w;
            w.kind = CsLoopWitness::Kind::SelfEmbedding;
            w.start = start;
            w.prefix = steps_from(0, k);
            w.cycle = steps_from(k, path.size() - 1);
            w.cycle.push_back(step);
            w.embed_pos = *found;
            return w;
          }
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

// Unrolls a witness: an exact cycle replays verbatim, a self-embedding
// replays the cycle steps shifted into the embedding position, which nests
// one level deeper per round. Returns the concatenated derivation from the
// cycle entry; callers replay it with mu_rewrite_step to revalidate.
inline std::vector<CsStep> pump_witness(const ProperSpec& spec,
                                        const ReplacementMap& mu,
                                        const CsLoopWitness& w, int times) {
  std::vector<CsStep> out;
  TermPtr cur = w.cycle.empty() ? w.start : w.cycle.front().from;
  Position shift;  // accumulated embedding offset
  for (int round = 0; round < times; ++round) {
    for (const CsStep& s : w.cycle) {
      Position at = position_concat(shift, s.pos);
      CsStep replay = mu_rewrite_step(spec, mu, cur, at, s.rule_index);
      out.push_back(replay);
      cur = replay.to;
    }
    if (w.kind == CsLoopWitness::Kind::SelfEmbedding)
      shift = position_concat(shift, w.embed_pos);
  }
  return out;
}

}  // namespace prodcheck
