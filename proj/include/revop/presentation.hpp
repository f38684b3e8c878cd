#pragma once

// Finitary equational presentations and the syntactic strong-regularity test.
//
//   theory <name>
//   op <name> : <arity>
//   eq <term> = <term>
//   end
//
// Terms are `name(arg, ...)`, a bare nullary `name` (or `name()`), or a
// variable `xK`. Identifiers of the form x<digits> are reserved for variables.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revop/error.hpp"
#include "revop/operad_io.hpp"

namespace revop {

struct OperationSymbol {
  std::string name;
  std::size_t arity = 0;
};

struct Signature {
  std::vector<OperationSymbol> operations;

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < operations.size(); ++i)
      if (operations[i].name == name) return i;
    return std::nullopt;
  }
};

// A variable leaf (op unset) or an application of operations[*op].
struct TermExpr {
  std::optional<std::size_t> op;
  std::size_t variable = 0;
  std::vector<TermExpr> args;

  static TermExpr var(std::size_t k) { return {std::nullopt, k, {}}; }
  static TermExpr apply(std::size_t op, std::vector<TermExpr> args) { return {op, 0, std::move(args)}; }
  bool is_variable() const { return !op.has_value(); }

  friend bool operator==(const TermExpr&, const TermExpr&) = default;
};

struct Equation {
  TermExpr lhs;
  TermExpr rhs;
};

struct Presentation {
  std::string name;
  Signature signature;
  std::vector<Equation> equations;
};

inline std::string format_term_expr(const Signature& sig, const TermExpr& t) {
  if (t.is_variable()) return "x" + std::to_string(t.variable);
  std::string out = sig.operations.at(*t.op).name;
  if (t.args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? ", " : "") + format_term_expr(sig, t.args[i]);
  return out + ")";
}

inline std::string format_presentation(const Presentation& p) {
  std::ostringstream out;
  out << "theory " << p.name << "\n";
  for (const auto& o : p.signature.operations) out << "op " << o.name << " : " << o.arity << "\n";
  for (const auto& e : p.equations)
    out << "eq " << format_term_expr(p.signature, e.lhs) << " = " << format_term_expr(p.signature, e.rhs) << "\n";
  out << "end\n";
  return out.str();
}

// Number of operation nodes.
inline std::size_t term_size(const TermExpr& t) {
  std::size_t n = t.is_variable() ? 0 : 1;
  for (const auto& a : t.args) n += term_size(a);
  return n;
}

// Variable occurrences, left to right.
inline std::vector<std::size_t> variable_sequence(const TermExpr& t) {
  std::vector<std::size_t> out;
  auto rec = [&](auto&& self, const TermExpr& u) -> void {
    if (u.is_variable()) {
      out.push_back(u.variable);
      return;
    }
    for (const auto& a : u.args) self(self, a);
  };
  rec(rec, t);
  return out;
}

namespace detail {

inline std::optional<std::size_t> variable_index(const std::string& word) {
  if (word.size() < 2 || word[0] != 'x' || !is_natural(word.substr(1))) return std::nullopt;
  return std::stoul(word.substr(1));
}

inline bool is_identifier(const std::string& word) {
  return !word.empty() && (std::isalpha(static_cast<unsigned char>(word[0])) || word[0] == '_');
}

class TermParser {
 public:
  TermParser(const Signature& sig, const std::vector<Token>& tokens, std::size_t line, std::size_t pos)
      : sig_(sig), tokens_(tokens), line_(line), pos_(pos) {}

  TermExpr parse() {
    const Token& t = expect_word();
    if (auto v = variable_index(t.text)) return TermExpr::var(*v);
    if (!is_identifier(t.text)) throw ParseError(line_, t.column, "expected a term, got '" + t.text + "'");
    const auto op = sig_.find(t.text);
    if (!op) throw ParseError(line_, t.column, "unknown operation '" + t.text + "'");
    std::vector<TermExpr> args;
    if (peek("(")) {
      ++pos_;
      if (peek(")")) {
        ++pos_;
      } else {
        while (true) {
          args.push_back(parse());
          if (peek(",")) {
            ++pos_;
            continue;
          }
          if (peek(")")) {
            ++pos_;
            break;
          }
          throw ParseError(line_, column(), "expected ',' or ')'");
        }
      }
    }
    const std::size_t arity = sig_.operations[*op].arity;
    if (args.size() != arity)
      throw ParseError(line_, t.column,
                       "arity mismatch: '" + t.text + "' takes " + std::to_string(arity) + " arguments, got " +
                           std::to_string(args.size()));
    return TermExpr::apply(*op, std::move(args));
  }

  std::size_t position() const { return pos_; }

 private:
  bool peek(const char* text) const { return pos_ < tokens_.size() && tokens_[pos_].text == text; }

  std::size_t column() const {
    if (pos_ < tokens_.size()) return tokens_[pos_].column;
    return tokens_.empty() ? 1 : tokens_.back().column + tokens_.back().text.size();
  }

  const Token& expect_word() {
    if (pos_ >= tokens_.size()) throw ParseError(line_, column(), "unexpected end of line, expected a term");
    return tokens_[pos_++];
  }

  const Signature& sig_;
  const std::vector<Token>& tokens_;
  std::size_t line_;
  std::size_t pos_;
};

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  Presentation p;
  bool have_theory = false, ended = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto tokens = detail::tokenize_line(line, line_no);
    if (tokens.empty()) continue;
    const auto& head = tokens[0];
    if (ended) throw ParseError(line_no, head.column, "content after 'end'");
    if (head.text == "theory") {
      if (have_theory) throw ParseError(line_no, head.column, "duplicate 'theory' line");
      if (tokens.size() != 2 || !detail::is_identifier(tokens[1].text))
        throw ParseError(line_no, head.column, "expected 'theory <name>'");
      p.name = tokens[1].text;
      have_theory = true;
      continue;
    }
    if (!have_theory) throw ParseError(line_no, head.column, "expected 'theory <name>' first");
    if (head.text == "op") {
      if (tokens.size() != 4 || tokens[2].text != ":" || !detail::is_natural(tokens[3].text))
        throw ParseError(line_no, head.column, "expected 'op <name> : <arity>'");
      const auto& name = tokens[1];
      if (!detail::is_identifier(name.text)) throw ParseError(line_no, name.column, "bad operation name '" + name.text + "'");
      if (detail::variable_index(name.text))
        throw ParseError(line_no, name.column, "'" + name.text + "' is reserved for variables");
      if (p.signature.find(name.text)) throw ParseError(line_no, name.column, "duplicate operation '" + name.text + "'");
      p.signature.operations.push_back({name.text, std::stoul(tokens[3].text)});
    } else if (head.text == "eq") {
      detail::TermParser lhs_parser(p.signature, tokens, line_no, 1);
      Equation e;
      e.lhs = lhs_parser.parse();
      std::size_t pos = lhs_parser.position();
      if (pos >= tokens.size() || tokens[pos].text != "=")
        throw ParseError(line_no, pos < tokens.size() ? tokens[pos].column : line.size() + 1, "expected '='");
      detail::TermParser rhs_parser(p.signature, tokens, line_no, pos + 1);
      e.rhs = rhs_parser.parse();
      if (rhs_parser.position() != tokens.size())
        throw ParseError(line_no, tokens[rhs_parser.position()].column, "trailing input after equation");
      p.equations.push_back(std::move(e));
    } else if (head.text == "end") {
      if (tokens.size() != 1) throw ParseError(line_no, tokens[1].column, "trailing input after 'end'");
      ended = true;
    } else {
      throw ParseError(line_no, head.column, "unknown directive '" + head.text + "'");
    }
  }
  if (!have_theory) throw ParseError(line_no + 1, 1, "missing 'theory <name>'");
  if (!ended) throw ParseError(line_no + 1, 1, "missing 'end'");
  return p;
}

inline Presentation read_presentation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_presentation(buf.str());
}

struct EquationVerdict {
  std::size_t index = 0;
  bool same_set = true;
  bool same_order = true;
  bool no_repetition = true;

  bool ok() const { return same_set && same_order && no_repetition; }
};

struct RegularityVerdict {
  std::vector<EquationVerdict> failures;

  bool accepted() const { return failures.empty(); }
};

// Each equation must list the same variables on both sides, in the same
// order, each once. Clauses are judged independently so a rejection names
// every clause that fails.
inline EquationVerdict judge_equation(const Equation& e, std::size_t index = 0) {
  const auto l = variable_sequence(e.lhs);
  const auto r = variable_sequence(e.rhs);
  EquationVerdict v;
  v.index = index;
  v.same_set = std::set<std::size_t>(l.begin(), l.end()) == std::set<std::size_t>(r.begin(), r.end());
  v.same_order = l == r;
  auto repeats = [](std::vector<std::size_t> s) {
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
  };
  v.no_repetition = !repeats(l) && !repeats(r);
  return v;
}

inline RegularityVerdict is_strongly_regular(const Presentation& p) {
  RegularityVerdict verdict;
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    const auto v = judge_equation(p.equations[i], i);
    if (!v.ok()) verdict.failures.push_back(v);
  }
  return verdict;
}

inline std::string format_verdict(const Presentation& p, const RegularityVerdict& v) {
  std::ostringstream out;
  out << "theory " << p.name << ": " << (v.accepted() ? "strongly regular" : "not strongly regular") << "\n";
  for (const auto& f : v.failures) {
    const auto& e = p.equations[f.index];
    out << "equation " << f.index + 1 << ": " << format_term_expr(p.signature, e.lhs) << " = "
        << format_term_expr(p.signature, e.rhs) << "\n";
    if (!f.same_set) out << "  fails: same set of variables\n";
    if (!f.same_order) out << "  fails: same order\n";
    if (!f.no_repetition) out << "  fails: no repetition\n";
  }
  return out.str();
}

}  // namespace revop
