#pragma once

// Specification file grammar (# starts a comment, identifiers are
// [A-Za-z0-9_']+):
//
//   data NAME : M ;            data symbol, M data arguments
//   cons NAME : M N ;          constructor, M data then N structure arguments
//   func NAME : M N ;          defined structure symbol
//   DATA-RULES { lhs -> rhs ; ... }
//   RULES { lhs -> rhs ; ... }
//
// Terms are prefix applications f(a,b); the infix sugar `h : t` stands for
// the unique declared constructor of profile (1,1) and is right-associative.
// Identifiers that are not declared symbols are variables; their sorts are
// inferred from the argument positions they occupy, per rule, and conflicts
// are reported with locations. Rule-level properness (left-linearity and so
// on) is deliberately NOT checked here: improper files must parse so the
// validator can diagnose them.

#include <cctype>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prodcheck/rewrite.hpp"
#include "prodcheck/system.hpp"

namespace prodcheck {

struct SourceLoc {
  int line = 0;
  int col = 0;

  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

struct ParseError : std::runtime_error {
  ParseError(const SourceLoc& loc, const std::string& msg)
      : std::runtime_error(loc.to_string() + ": " + msg), loc(loc) {}
  SourceLoc loc;
};

struct SymbolDecl {
  std::string kind;  // "data" | "cons" | "func"
  std::string name;
  int data_arity = 0;
  int struct_arity = 0;
  SourceLoc loc;
};

struct SpecFile {
  ProperSpec spec;
  std::vector<SymbolDecl> decls;
  std::vector<SourceLoc> rule_locs;  // indexed by Rule::source_index
};

namespace detail {

struct Token {
  enum class Kind {
    Ident,
    Colon,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Arrow,
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  SourceLoc loc;
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto loc = [&] { return SourceLoc{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.loc = loc();
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.text = text.substr(i, j - i);
      // The section keyword carries a hyphen, which is not an identifier
      // character; glue it back together here.
      if (t.text == "DATA" && text.compare(j, 6, "-RULES") == 0 &&
          (j + 6 >= text.size() || !ident_char(text[j + 6]))) {
        t.text = "DATA-RULES";
        j += 6;
      }
      t.kind = Token::Kind::Ident;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Kind::Arrow;
      t.text = "->";
      advance(2);
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case ':': t.kind = Token::Kind::Colon; break;
      case ';': t.kind = Token::Kind::Semi; break;
      case '{': t.kind = Token::Kind::LBrace; break;
      case '}': t.kind = Token::Kind::RBrace; break;
      case '(': t.kind = Token::Kind::LParen; break;
      case ')': t.kind = Token::Kind::RParen; break;
      case ',': t.kind = Token::Kind::Comma; break;
      default:
        throw ParseError(t.loc, std::string("stray character '") + c + "'");
    }
    t.text = c;
    advance(1);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.loc = loc();
  out.push_back(end);
  return out;
}

// Term syntax before symbols and variables are told apart.
struct RawTerm {
  std::string name;
  bool applied = false;  // true when written with an argument list or infix
  std::vector<RawTerm> args;
  SourceLoc loc;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  SpecFile parse_file() {
    SpecFile out;
    std::vector<std::pair<RawTerm, RawTerm>> data_rules, struct_rules;
    std::vector<SourceLoc> data_locs, struct_locs;
    while (peek().kind != Token::Kind::End) {
      const Token& t = expect(Token::Kind::Ident, "declaration or section");
      if (t.text == "data" || t.text == "cons" || t.text == "func") {
        parse_decl(out, t);
      } else if (t.text == "DATA-RULES" || t.text == "RULES") {
        bool data = t.text == "DATA-RULES";
        expect(Token::Kind::LBrace, "'{'");
        while (peek().kind != Token::Kind::RBrace) {
          SourceLoc loc = peek().loc;
          RawTerm lhs = parse_term_raw();
          expect(Token::Kind::Arrow, "'->'");
          RawTerm rhs = parse_term_raw();
          expect(Token::Kind::Semi, "';'");
          (data ? data_rules : struct_rules).emplace_back(std::move(lhs),
                                                          std::move(rhs));
          (data ? data_locs : struct_locs).push_back(loc);
        }
        expect(Token::Kind::RBrace, "'}'");
      } else {
        throw ParseError(t.loc, "expected data/cons/func/DATA-RULES/RULES, "
                                "got '" + t.text + "'");
      }
    }

    int index = 0;
    for (std::size_t r = 0; r < data_rules.size(); ++r)
      out.spec.rules.push_back(resolve_rule(out, data_rules[r], RuleOrigin::Data,
                                            index++, data_locs[r]));
    out.spec.n_data = static_cast<int>(out.spec.rules.size());
    for (std::size_t r = 0; r < struct_rules.size(); ++r)
      out.spec.rules.push_back(resolve_rule(out, struct_rules[r],
                                            RuleOrigin::Structure, index++,
                                            struct_locs[r]));
    out.rule_locs = std::move(rule_locs_);
    return out;
  }

  // A single term against an existing signature; undeclared identifiers
  // become variables of the sort their position demands (root defaults to
  // structure sort).
  TermPtr parse_single_term(const ProperSpec& spec) {
    RawTerm raw = parse_term_raw();
    if (peek().kind != Token::Kind::End)
      throw ParseError(peek().loc, "trailing input after term");
    std::map<std::string, Sort> var_sorts;
    return resolve(spec, raw, Sort::Structure, var_sorts);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  const Token& expect(Token::Kind kind, const std::string& what) {
    const Token& t = next();
    if (t.kind != kind)
      throw ParseError(t.loc, "expected " + what + ", got '" +
                                  (t.kind == Token::Kind::End ? "end of input"
                                                              : t.text) +
                                  "'");
    return t;
  }

  void parse_decl(SpecFile& out, const Token& kw) {
    const Token& name = expect(Token::Kind::Ident, "symbol name");
    expect(Token::Kind::Colon, "':'");
    int m = parse_arity();
    int n = 0;
    if (kw.text != "data") n = parse_arity();
    expect(Token::Kind::Semi, "';'");
    SymbolRole role = kw.text == "data" ? SymbolRole::Data
                      : kw.text == "cons" ? SymbolRole::Constructor
                                          : SymbolRole::DefinedStructure;
    try {
      out.spec.sig.declare(name.text, m, n, role);
    } catch (const std::invalid_argument& e) {
      throw ParseError(name.loc, e.what());
    }
    out.decls.push_back(SymbolDecl{kw.text, name.text, m, n, kw.loc});
  }

  int parse_arity() {
    const Token& t = expect(Token::Kind::Ident, "arity");
    for (char c : t.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError(t.loc, "arity must be a number, got '" + t.text + "'");
    return std::stoi(t.text);
  }

  // term := app (':' term)?   right-associative infix sugar
  RawTerm parse_term_raw() {
    RawTerm head = parse_app_raw();
    if (peek().kind == Token::Kind::Colon) {
      SourceLoc loc = next().loc;
      RawTerm tail = parse_term_raw();
      RawTerm cons;
      cons.name = kInfixMarker;
      cons.applied = true;
      cons.loc = loc;
      cons.args.push_back(std::move(head));
      cons.args.push_back(std::move(tail));
      return cons;
    }
    return head;
  }

  RawTerm parse_app_raw() {
    const Token& name = expect(Token::Kind::Ident, "term");
    RawTerm t;
    t.name = name.text;
    t.loc = name.loc;
    if (peek().kind == Token::Kind::LParen) {
      next();
      t.applied = true;
      if (peek().kind != Token::Kind::RParen) {
        t.args.push_back(parse_term_raw());
        while (peek().kind == Token::Kind::Comma) {
          next();
          t.args.push_back(parse_term_raw());
        }
      }
      expect(Token::Kind::RParen, "')'");
    }
    return t;
  }

  Rule resolve_rule(SpecFile& out, const std::pair<RawTerm, RawTerm>& raw,
                    RuleOrigin origin, int index, const SourceLoc& loc) {
    Sort sort = origin == RuleOrigin::Data ? Sort::Data : Sort::Structure;
    std::map<std::string, Sort> var_sorts;  // variables are rule-scoped
    Rule rule;
    rule.lhs = resolve(out.spec, raw.first, sort, var_sorts);
    rule.rhs = resolve(out.spec, raw.second, sort, var_sorts);
    rule.origin = origin;
    rule.source_index = index;
    rule_locs_.push_back(loc);
    return rule;
  }

  TermPtr resolve(const ProperSpec& spec, const RawTerm& raw, Sort expected,
                  std::map<std::string, Sort>& var_sorts) {
    std::string name = raw.name;
    if (name == kInfixMarker) {
      SymbolPtr cons = spec.unique_pair_constructor();
      if (!cons)
        throw ParseError(raw.loc,
                         "infix ':' needs exactly one declared constructor "
                         "with one data and one structure argument");
      name = cons->name;
    }
    if (SymbolPtr sym = spec.sig.find(name)) {
      if (sym->result_sort() != expected)
        throw ParseError(raw.loc, "symbol " + name + " has the wrong sort "
                                  "for this position");
      int given = raw.applied ? static_cast<int>(raw.args.size()) : 0;
      if (given != sym->arity())
        throw ParseError(raw.loc, "symbol " + name + " expects " +
                                      std::to_string(sym->arity()) +
                                      " arguments, got " +
                                      std::to_string(given));
      std::vector<TermPtr> args;
      args.reserve(raw.args.size());
      for (int i = 1; i <= given; ++i)
        args.push_back(resolve(spec, raw.args[static_cast<std::size_t>(i - 1)],
                               sym->arg_sort(i), var_sorts));
      return Term::app(sym, std::move(args));
    }
    if (raw.applied)
      throw ParseError(raw.loc, "UNKNOWN_SYMBOL: " + name +
                                    " is applied to arguments but never "
                                    "declared");
    auto it = var_sorts.find(name);
    if (it != var_sorts.end() && it->second != expected)
      throw ParseError(raw.loc, "variable " + name +
                                    " is used at both sorts in one rule");
    var_sorts.emplace(name, expected);
    return Term::var(name, expected);
  }

  static constexpr const char* kInfixMarker = "\x01infix";

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<SourceLoc> rule_locs_;
};

}  // namespace detail

inline SpecFile parse_spec(const std::string& text) {
  detail::Parser p(text);
  return p.parse_file();
}

inline TermPtr parse_term(const std::string& text, const ProperSpec& spec) {
  detail::Parser p(text);
  return p.parse_single_term(spec);
}

// Inverse of parse_spec up to layout: parse_spec(print_spec(f)) yields a
// structurally equal specification.
inline std::string print_spec(const SpecFile& f) {
  std::string out;
  for (const SymbolDecl& d : f.decls) {
    out += d.kind + " " + d.name + " : " + std::to_string(d.data_arity);
    if (d.kind != "data") out += " " + std::to_string(d.struct_arity);
    out += " ;\n";
  }
  auto block = [&](const char* header, std::span<const Rule> rules) {
    out += "\n";
    out += header;
    out += " {\n";
    for (const Rule& r : rules)
      out += "  " + f.spec.display(r.lhs) + " -> " + f.spec.display(r.rhs) +
             " ;\n";
    out += "}\n";
  };
  block("DATA-RULES", f.spec.data_rules());
  block("RULES", f.spec.struct_rules());
  return out;
}

}  // namespace prodcheck
