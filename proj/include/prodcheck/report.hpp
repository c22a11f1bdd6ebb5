#pragma once

// JSON wire form of verdicts. Keys come out sorted (nlohmann objects are
// std::map underneath) and all numbers are integers, so the serialization is
// canonical; the timings object is the only run-dependent part and
// comparisons drop it.

#include <string>

#include <nlohmann/json.hpp>

#include "prodcheck/prover.hpp"
#include "prodcheck/replacement_map.hpp"
#include "prodcheck/spec_check.hpp"

namespace prodcheck {

namespace detail {

using nlohmann::json;

inline json step_json(const CsStep& s) {
  return json{{"from", to_prefix_string(s.from)},
              {"to", to_prefix_string(s.to)},
              {"pos", position_to_string(s.pos)},
              {"rule", s.rule_index + 1}};
}

inline json steps_json(const std::vector<CsStep>& steps) {
  json arr = json::array();
  for (const CsStep& s : steps) arr.push_back(step_json(s));
  return arr;
}

inline json mu_json(const ReplacementMap& mu) {
  json obj = json::object();
  for (const auto& [name, allowed] : mu.entries()) {
    json arr = json::array();
    for (int i : allowed) arr.push_back(i);
    obj[name] = arr;
  }
  return obj;
}

inline json validation_json(const ValidationReport& v) {
  json diags = json::array();
  for (const Diagnostic& d : v.diagnostics)
    diags.push_back(json{{"code", d.code},
                         {"message", d.message},
                         {"where", d.where}});
  const char* verdict =
      v.verdict == ValidationReport::Verdict::Proper     ? "proper"
      : v.verdict == ValidationReport::Verdict::Improper ? "improper"
                                                         : "unknown";
  const char* exhaustive =
      v.exhaustiveness.kind == ExhaustKind::Exhaustive ? "exhaustive"
      : v.exhaustiveness.kind == ExhaustKind::Missing  ? "missing"
                                                       : "unknown";
  return json{{"verdict", verdict},
              {"orthogonal", v.orthogonal},
              {"exhaustiveness", exhaustive},
              {"diagnostics", diags}};
}

inline json certificate_json(const ProductivityCertificate& c) {
  json obj{{"method", method_name(c.method)}};
  if (c.interp) {
    json table = json::object();
    for (const auto& [name, sp] : c.interp->symbols) {
      json coeffs = json::array();
      for (long long k : sp.coeff) coeffs.push_back(k);
      table[name] = json{{"const", sp.c0}, {"coeffs", coeffs}};
    }
    obj["interpretation"] = table;
    obj["max_coeff"] = c.interp->max_coeff;
    obj["max_const"] = c.interp->max_const;
  }
  json ev = json::array();
  for (const RuleStrictness& r : c.evidence)
    ev.push_back(json{{"rule", r.rule_index + 1}, {"detail", r.detail}});
  obj["evidence"] = ev;
  return obj;
}

inline json loop_json(const UnproductiveLoopWitness& w) {
  json fair = json::array();
  for (const FairnessEntry& e : w.fairness_evidence)
    fair.push_back(json{{"term", e.term_index},
                        {"pos", position_to_string(e.pos)},
                        {"rule", e.rule_index + 1},
                        {"resolved_after", e.steps_until_resolved},
                        {"contracted", e.contracted}});
  return json{{"kind", "outermost_fair_cycle"},
              {"start", to_prefix_string(w.start)},
              {"prefix", steps_json(w.prefix)},
              {"cycle", steps_json(w.cycle)},
              {"fairness", fair}};
}

inline json mu_loop_json(const CsLoopWitness& w) {
  json obj{{"kind", w.kind == CsLoopWitness::Kind::ExactCycle
                        ? "exact_cycle"
                        : "self_embedding"},
           {"start", to_prefix_string(w.start)},
           {"prefix", steps_json(w.prefix)},
           {"cycle", steps_json(w.cycle)}};
  if (w.kind == CsLoopWitness::Kind::SelfEmbedding)
    obj["embed_pos"] = position_to_string(w.embed_pos);
  return obj;
}

}  // namespace detail

inline std::string report_json(const Verdict& v, long long total_ms = 0) {
  using nlohmann::json;
  json obj{{"verdict", outcome_name(v.outcome)},
           {"method", v.method},
           {"reason", v.reason},
           {"note", v.note},
           {"mu", detail::mu_json(v.mu)},
           {"validation", detail::validation_json(v.validation)},
           {"timings", json{{"total_ms", total_ms}}}};
  if (v.certificate) obj["certificate"] = detail::certificate_json(*v.certificate);
  if (v.loop) obj["witness"] = detail::loop_json(*v.loop);
  if (v.mu_loop) obj["mu_loop"] = detail::mu_loop_json(*v.mu_loop);
  return obj.dump(2) + "\n";
}

}  // namespace prodcheck
