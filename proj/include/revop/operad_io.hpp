#pragma once

// Line-oriented text format for finite operads:
//
//   operad <name>
//   arity <n>: <label> <label> ...
//   identity: <label>
//   comp <theta> (<a1>, ..., <an>) = <result>
//   end
//
// '#' starts a comment. An `arity n:` line with no labels declares an empty
// carrier, which is how a top arity with an empty carrier is expressed.

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revop/operad.hpp"

namespace revop {

namespace detail {

struct Token {
  std::string text;
  std::size_t column = 0;  // 1-based
};

inline bool is_label_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Splits a line into label-ish words and single punctuation characters.
inline std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_label_char(c)) {
      std::size_t j = i;
      while (j < line.size() && is_label_char(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), i + 1});
      i = j;
      continue;
    }
    if (c == ':' || c == '(' || c == ')' || c == ',' || c == '=') {
      out.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    throw ParseError(line_no, i + 1, std::string("unexpected character '") + c + "'");
  }
  return out;
}

inline bool is_natural(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace detail

inline FiniteOperad parse_operad(std::string_view text) {
  using detail::Token;
  struct CompLine {
    std::size_t line;
    Token theta;
    std::vector<Token> args;
    Token result;
  };

  std::optional<std::string> name;
  std::map<std::size_t, std::vector<std::string>> carriers;
  std::optional<Token> identity;
  std::size_t identity_line = 0;
  std::vector<CompLine> comps;
  bool ended = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    auto toks = detail::tokenize_line(line, line_no);
    if (toks.empty()) continue;
    if (ended) throw ParseError(line_no, toks[0].column, "content after 'end'");

    auto expect = [&](std::size_t i, std::string_view what) -> const Token& {
      if (i >= toks.size())
        throw ParseError(line_no, line.size() + 1, "expected " + std::string(what));
      return toks[i];
    };
    auto expect_punct = [&](std::size_t i, std::string_view p) {
      const Token& t = expect(i, "'" + std::string(p) + "'");
      if (t.text != p) throw ParseError(line_no, t.column, "expected '" + std::string(p) + "', got '" + t.text + "'");
    };
    auto expect_label = [&](std::size_t i) -> const Token& {
      const Token& t = expect(i, "label");
      if (!detail::is_label_char(t.text[0])) throw ParseError(line_no, t.column, "expected label, got '" + t.text + "'");
      return t;
    };

    const std::string& kw = toks[0].text;
    if (kw == "operad") {
      if (name) throw ParseError(line_no, toks[0].column, "duplicate 'operad' directive");
      name = expect_label(1).text;
      if (toks.size() > 2) throw ParseError(line_no, toks[2].column, "trailing tokens");
    } else if (!name) {
      throw ParseError(line_no, toks[0].column, "expected 'operad <name>' first");
    } else if (kw == "arity") {
      const Token& n = expect(1, "arity");
      if (!detail::is_natural(n.text)) throw ParseError(line_no, n.column, "arity must be a natural number");
      expect_punct(2, ":");
      const std::size_t arity = std::stoul(n.text);
      if (carriers.count(arity)) throw ParseError(line_no, n.column, "duplicate arity " + n.text);
      std::vector<std::string> labels;
      std::set<std::string> seen;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        const Token& l = expect_label(i);
        if (!seen.insert(l.text).second) throw ParseError(line_no, l.column, "duplicate label '" + l.text + "'");
        labels.push_back(l.text);
      }
      carriers[arity] = std::move(labels);
    } else if (kw == "identity") {
      if (identity) throw ParseError(line_no, toks[0].column, "duplicate identity");
      expect_punct(1, ":");
      identity = expect_label(2);
      identity_line = line_no;
      if (toks.size() > 3) throw ParseError(line_no, toks[3].column, "trailing tokens");
    } else if (kw == "comp") {
      CompLine c;
      c.line = line_no;
      c.theta = expect_label(1);
      expect_punct(2, "(");
      std::size_t i = 3;
      if (expect(i, "')' or label").text == ")") {
        ++i;
      } else {
        while (true) {
          c.args.push_back(expect_label(i++));
          const Token& sep = expect(i++, "',' or ')'");
          if (sep.text == ")") break;
          if (sep.text != ",") throw ParseError(line_no, sep.column, "expected ',' or ')'");
        }
      }
      expect_punct(i++, "=");
      c.result = expect_label(i++);
      if (i < toks.size()) throw ParseError(line_no, toks[i].column, "trailing tokens");
      comps.push_back(std::move(c));
    } else if (kw == "end") {
      ended = true;
    } else {
      throw ParseError(line_no, toks[0].column, "unknown directive '" + kw + "'");
    }
  }
  if (!name) throw ParseError(line_no, 1, "missing 'operad' directive");
  if (!ended) throw ParseError(line_no, 1, "missing 'end'");
  if (!identity) throw ParseError(line_no, 1, "missing 'identity' directive");

  const std::size_t max_n = carriers.empty() ? 1 : std::max<std::size_t>(1, carriers.rbegin()->first);
  std::vector<std::vector<std::string>> labels(max_n + 1);
  for (auto& [n, l] : carriers) labels[n] = l;

  auto id_index = [&] {
    for (std::size_t i = 0; i < labels[1].size(); ++i)
      if (labels[1][i] == identity->text) return i;
    throw ParseError(identity_line, identity->column, "identity '" + identity->text + "' is not an element of P(1)");
  }();

  FiniteOperad op(*name, labels, id_index);

  auto resolve_arg = [&](const CompLine& c, const Token& t) -> ElemRef {
    std::optional<ElemRef> found;
    for (std::size_t n = 0; n <= max_n; ++n) {
      if (auto idx = op.find_label(n, t.text)) {
        if (found)
          throw ParseError(c.line, t.column, "label '" + t.text + "' is ambiguous across arities");
        found = ElemRef{n, *idx};
      }
    }
    if (!found) throw ParseError(c.line, t.column, "unknown label '" + t.text + "'");
    return *found;
  };

  std::vector<bool> seen(op.slot_count(), false);
  for (const auto& c : comps) {
    const std::size_t n = c.args.size();
    auto theta_idx = op.find_label(n, c.theta.text);
    if (!theta_idx)
      throw ParseError(c.line, c.theta.column,
                       "no element '" + c.theta.text + "' of arity " + std::to_string(n));
    std::vector<ElemRef> args;
    std::size_t sum = 0;
    for (const auto& a : c.args) {
      args.push_back(resolve_arg(c, a));
      sum += args.back().arity;
    }
    if (sum > max_n)
      throw StructuralError("line " + std::to_string(c.line) + ": composite arity " + std::to_string(sum) +
                            " exceeds max arity (extra entry)");
    auto result_idx = op.find_label(sum, c.result.text);
    if (!result_idx)
      throw ParseError(c.line, c.result.column,
                       "no element '" + c.result.text + "' of arity " + std::to_string(sum));
    const std::size_t s = op.slot(ElemRef{n, *theta_idx}, args);
    if (seen[s]) throw StructuralError("line " + std::to_string(c.line) + ": duplicate composition entry");
    seen[s] = true;
    op.set_slot_value(s, static_cast<std::uint32_t>(*result_idx));
  }
  check_structure(op);
  return op;
}

inline FiniteOperad read_operad_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_operad(ss.str());
}

// Canonical text form: nonempty arities (plus the top arity), then every
// composition entry in slot order.
inline std::string format_operad(const FiniteOperad& op) {
  std::ostringstream out;
  out << "# truncated operad: max_arity " << op.max_arity() << "\n";
  out << "operad " << op.name() << "\n";
  for (std::size_t n = 0; n <= op.max_arity(); ++n) {
    if (op.carrier_size(n) == 0 && n != op.max_arity()) continue;
    out << "arity " << n << ":";
    for (const auto& l : op.labels(n)) out << " " << l;
    out << "\n";
  }
  out << "identity: " << op.label(op.identity()) << "\n";
  for (std::size_t s = 0; s < op.slot_count(); ++s) {
    auto [theta, args] = op.decode_slot(s);
    std::size_t arity = 0;
    for (const auto& a : args) arity += a.arity;
    out << "comp " << op.label(theta) << " (";
    for (std::size_t i = 0; i < args.size(); ++i) out << (i ? ", " : "") << op.label(args[i]);
    out << ") = " << op.labels(arity).at(op.slot_value(s)) << "\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace revop
