// Command-line front end. Exit codes: 0 strongly productive or success,
// 1 not strongly productive, 2 unknown (also: simulation out of budget),
// 64 usage error, 65 parse error, 66 improper specification.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "prodcheck/prodcheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotProductive = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitImproper = 66;

int load_spec(const std::string& path, prodcheck::SpecFile& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    out = prodcheck::parse_spec(buf.str());
  } catch (const prodcheck::ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}

void print_diagnostics(const prodcheck::ValidationReport& report) {
  for (const prodcheck::Diagnostic& d : report.diagnostics)
    std::cerr << d.code << " (" << d.where << "): " << d.message << "\n";
}

const char* verdict_word(prodcheck::ValidationReport::Verdict v) {
  using V = prodcheck::ValidationReport::Verdict;
  return v == V::Proper ? "proper" : v == V::Improper ? "improper" : "unknown";
}

// Shared pre-check for commands that need a validated-proper input.
int require_proper(const prodcheck::ProperSpec& spec,
                   const prodcheck::ValidateOptions& opts,
                   prodcheck::ValidationReport& report) {
  report = prodcheck::validate_proper(spec, opts);
  if (report.verdict == prodcheck::ValidationReport::Verdict::Improper) {
    print_diagnostics(report);
    return kExitImproper;
  }
  if (report.verdict == prodcheck::ValidationReport::Verdict::Unknown) {
    std::cerr << "exhaustiveness could not be decided: "
              << report.exhaustiveness.reason << "\n";
    return kExitUnknown;
  }
  return kExitOk;
}

void print_steps(const prodcheck::ProperSpec& spec,
                 const std::vector<prodcheck::CsStep>& steps,
                 const char* indent) {
  for (const prodcheck::CsStep& s : steps)
    std::cout << indent << spec.display(s.from) << " ->["
              << prodcheck::rule_label(s.rule_index) << " @ "
              << prodcheck::position_to_string(s.pos) << "] "
              << spec.display(s.to) << "\n";
}

int run_check(const prodcheck::SpecFile& file,
              const prodcheck::DecideOptions& opts, bool json) {
  auto t0 = std::chrono::steady_clock::now();
  prodcheck::Verdict v = prodcheck::decide_productivity(file.spec, opts);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();

  if (json) {
    std::cout << prodcheck::report_json(v, ms);
  } else {
    std::cout << "verdict: " << prodcheck::outcome_name(v.outcome) << "\n";
    if (!v.method.empty()) std::cout << "method: " << v.method << "\n";
    if (!v.reason.empty()) std::cout << "reason: " << v.reason << "\n";
    if (!v.note.empty()) std::cout << "note: " << v.note << "\n";
    if (v.outcome == prodcheck::Outcome::Improper) {
      print_diagnostics(v.validation);
    } else {
      std::cout << prodcheck::replacement_map_to_string(file.spec, v.mu);
    }
    if (v.certificate) {
      std::cout << "certificate (" << prodcheck::method_name(v.certificate->method)
                << "):\n";
      if (v.certificate->interp) {
        for (const auto& s : file.spec.sig.symbols()) {
          const auto& sp = v.certificate->interp->symbols.at(s->name);
          std::cout << "  [" << s->name << "] = " << sp.c0;
          for (std::size_t i = 0; i < sp.coeff.size(); ++i)
            std::cout << " + " << sp.coeff[i] << "*x" << i + 1;
          std::cout << "\n";
        }
      }
      for (const auto& ev : v.certificate->evidence)
        std::cout << "  " << prodcheck::rule_label(ev.rule_index) << ": "
                  << ev.detail << "\n";
    }
    if (v.loop) {
      std::cout << "witness start: " << file.spec.display(v.loop->start)
                << "\n";
      if (!v.loop->prefix.empty()) {
        std::cout << "prefix:\n";
        print_steps(file.spec, v.loop->prefix, "  ");
      }
      std::cout << "cycle:\n";
      print_steps(file.spec, v.loop->cycle, "  ");
    }
    if (v.mu_loop) {
      std::cout << "mu-loop ("
                << (v.mu_loop->kind == prodcheck::CsLoopWitness::Kind::ExactCycle
                        ? "exact cycle"
                        : "self-embedding at " +
                              prodcheck::position_to_string(
                                  v.mu_loop->embed_pos))
                << ") from " << file.spec.display(v.mu_loop->start) << ":\n";
      if (!v.mu_loop->prefix.empty()) {
        std::cout << "prefix:\n";
        print_steps(file.spec, v.mu_loop->prefix, "  ");
      }
      std::cout << "cycle:\n";
      print_steps(file.spec, v.mu_loop->cycle, "  ");
    }
  }

  switch (v.outcome) {
    case prodcheck::Outcome::StronglyProductive:
      return kExitOk;
    case prodcheck::Outcome::NotStronglyProductive:
      return kExitNotProductive;
    case prodcheck::Outcome::Unknown:
      return kExitUnknown;
    case prodcheck::Outcome::Improper:
      return kExitImproper;
  }
  return kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checker and evaluator for strong productivity of two-sorted "
               "stream specifications"};
  app.require_subcommand(1);

  std::string path;
  bool json = false;
  prodcheck::DecideOptions dopts;
  std::string out_path;
  std::string term_text;
  int depth = 0;
  std::uint64_t seed = 0;
  int max_rounds = -1;

  CLI::App* validate = app.add_subcommand("validate",
                                          "check that a file is a proper "
                                          "specification");
  validate->add_option("FILE", path)->required();
  validate->add_flag("--assume-data-terminating",
                     dopts.validate.assume_data_terminating,
                     "skip the bounded data-termination probe");

  CLI::App* mu_cmd = app.add_subcommand("mu", "print the replacement map");
  mu_cmd->add_option("FILE", path)->required();
  mu_cmd->add_flag("--block-data-args", dopts.block_data_args,
                   "also block never-matched data arguments (needs "
                   "left-linear data rules)");

  CLI::App* check = app.add_subcommand("check", "decide strong productivity");
  check->add_option("FILE", path)->required();
  check->add_option("--max-coeff", dopts.max_coeff,
                    "interpretation coefficient range 0..N");
  check->add_option("--max-const", dopts.max_const,
                    "interpretation constant range 0..N");
  check->add_option("--loop-steps", dopts.loop.step_bound,
                    "node budget for loop searches");
  check->add_option("--loop-depth", dopts.loop.depth_bound,
                    "term depth bound for loop searches");
  check->add_flag("--assume-data-terminating",
                  dopts.validate.assume_data_terminating,
                  "skip the bounded data-termination probe");
  check->add_flag("--block-data-args", dopts.block_data_args,
                  "also block never-matched data arguments (needs "
                  "left-linear data rules)");
  check->add_flag("--json", json, "print the JSON report");

  CLI::App* exp = app.add_subcommand("export",
                                     "write the context-sensitive TRS "
                                     "exchange file");
  exp->add_option("FILE", path)->required();
  exp->add_option("-o,--output", out_path, "output file (default: stdout)");

  CLI::App* sim = app.add_subcommand("simulate",
                                     "compute a constructor prefix by "
                                     "outermost-fair rounds");
  sim->add_option("FILE", path)->required();
  sim->add_option("--term", term_text, "ground structure term to evaluate")
      ->required();
  sim->add_option("--depth", depth, "prefix depth")->required();
  sim->add_option("--seed", seed, "seed for rule draws")->required();
  sim->add_option("--max-rounds", max_rounds,
                  "round budget (default 10*(depth+1)*|structure rules|)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  prodcheck::SpecFile file;
  if (int rc = load_spec(path, file); rc != kExitOk) return rc;

  if (validate->parsed()) {
    prodcheck::ValidationReport report =
        prodcheck::validate_proper(file.spec, dopts.validate);
    std::cout << verdict_word(report.verdict) << "\n";
    std::cout << "orthogonal: " << (report.orthogonal ? "yes" : "no") << "\n";
    using EK = prodcheck::ExhaustKind;
    std::cout << "exhaustive: "
              << (report.exhaustiveness.kind == EK::Exhaustive ? "yes"
                  : report.exhaustiveness.kind == EK::Missing  ? "no"
                                                               : "unknown")
              << "\n";
    if (report.exhaustiveness.kind == EK::Missing)
      std::cout << "missing pattern: "
                << file.spec.display(report.exhaustiveness.witness) << "\n";
    print_diagnostics(report);
    using V = prodcheck::ValidationReport::Verdict;
    return report.verdict == V::Proper     ? kExitOk
           : report.verdict == V::Improper ? kExitImproper
                                           : kExitUnknown;
  }

  if (mu_cmd->parsed()) {
    try {
      prodcheck::ReplacementMap mu =
          prodcheck::compute_mu(file.spec, dopts.block_data_args);
      std::cout << prodcheck::replacement_map_to_string(file.spec, mu);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return kExitOk;
  }

  if (check->parsed()) return run_check(file, dopts, json);

  if (exp->parsed()) {
    prodcheck::ValidationReport report;
    if (int rc = require_proper(file.spec, dopts.validate, report);
        rc != kExitOk)
      return rc;
    std::string text = prodcheck::export_csrs(
        file.spec, prodcheck::compute_mu(file.spec, false));
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitUsage;
      }
      out << text;
    }
    return kExitOk;
  }

  if (sim->parsed()) {
    prodcheck::ValidationReport report;
    if (int rc = require_proper(file.spec, dopts.validate, report);
        rc != kExitOk)
      return rc;
    prodcheck::TermPtr term;
    try {
      term = prodcheck::parse_term(term_text, file.spec);
    } catch (const prodcheck::ParseError& e) {
      std::cerr << "term: " << e.what() << "\n";
      return kExitParse;
    }
    if (!is_ground(term) || term->sort() != prodcheck::Sort::Structure) {
      std::cerr << "error: --term must be a ground structure term\n";
      return kExitUsage;
    }
    if (depth < 0) {
      std::cerr << "error: --depth must be >= 0\n";
      return kExitUsage;
    }
    prodcheck::PrefixResult res =
        prodcheck::eval_prefix(file.spec, term, depth, seed, max_rounds);
    if (res.success()) {
      std::cout << file.spec.display(res.term) << "\n";
      std::cout << "rounds: " << res.rounds_used
                << ", contractions: " << res.choice_log.size() << "\n";
      return kExitOk;
    }
    std::cout << "BUDGET_EXCEEDED after " << res.rounds_used
              << " rounds\n";
    std::cout << "stuck at: " << prodcheck::position_to_string(res.stuck_pos)
              << " (shallowest non-constructor structure position)\n";
    std::cout << "last term: " << file.spec.display(res.term) << "\n";
    return kExitUnknown;
  }

  return kExitUsage;
}
