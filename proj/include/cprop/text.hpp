#pragma once

// Line-oriented text format for CSPs.
//
//   # comment to end of line
//   var x in {a, b}
//   con C1 on (x, y) {(a, c), (b, d)}
//
// Variable declarations define the component order; constraint variables
// must follow it. The constraint name is optional and defaults to C_<vars>.
// Empty braces are legal for both domains and tuple sets, so inconsistent
// results stay printable and re-parseable. The printer emits atoms and
// tuples in sorted order; printing a parsed document and parsing it again
// reproduces the same problem.

#include <cctype>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cprop/csp.hpp"
#include "cprop/errors.hpp"

namespace cprop {

namespace text_detail {

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Lexer {
  const std::string& s;
  std::size_t line;
  std::size_t at = 0;

  void skip_space() {
    while (at < s.size() && (s[at] == ' ' || s[at] == '\t' || s[at] == '\r')) ++at;
  }
  bool eol() {
    skip_space();
    return at >= s.size();
  }
  bool peek(char c) {
    skip_space();
    return at < s.size() && s[at] == c;
  }
  bool take(char c) {
    if (!peek(c)) return false;
    ++at;
    return true;
  }
  void expect(char c) {
    if (!take(c)) throw ParseError(line, std::string("expected '") + c + "'");
  }
  bool at_word() {
    skip_space();
    return at < s.size() && is_word_char(s[at]);
  }
  std::string word(const char* what) {
    skip_space();
    std::size_t b = at;
    while (at < s.size() && is_word_char(s[at])) ++at;
    if (b == at) throw ParseError(line, std::string("expected ") + what);
    return s.substr(b, at - b);
  }
  void keyword(const char* kw) {
    if (word("a keyword") != kw)
      throw ParseError(line, std::string("expected '") + kw + "'");
  }
};

}  // namespace text_detail

inline Csp parse_csp(const std::string& text) {
  Csp p;
  std::map<std::string, std::size_t> index;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (std::size_t h = raw.find('#'); h != std::string::npos) raw.resize(h);
    text_detail::Lexer lex{raw, line};
    if (lex.eol()) continue;
    std::string head = lex.word("'var' or 'con'");
    if (head == "var") {
      std::string name = lex.word("a variable name");
      if (index.count(name)) throw ParseError(line, "duplicate variable: " + name);
      lex.keyword("in");
      lex.expect('{');
      AtomSet dom;
      if (!lex.take('}')) {
        do {
          dom.insert(lex.word("an atom"));
        } while (lex.take(','));
        lex.expect('}');
      }
      if (!lex.eol()) throw ParseError(line, "trailing input after variable declaration");
      index[name] = p.variables.size();
      p.variables.push_back(name);
      p.domains.push_back(std::move(dom));
    } else if (head == "con") {
      Constraint c;
      if (!lex.at_word()) throw ParseError(line, "expected constraint name or 'on'");
      std::string w = lex.word("constraint name or 'on'");
      if (!(w == "on" && lex.peek('('))) {
        c.name = w;
        lex.keyword("on");
      }
      lex.expect('(');
      std::vector<std::size_t> idx;
      do {
        std::string v = lex.word("a variable name");
        auto it = index.find(v);
        if (it == index.end()) throw ParseError(line, "unknown variable: " + v);
        idx.push_back(it->second);
        c.vars.push_back(v);
      } while (lex.take(','));
      lex.expect(')');
      for (std::size_t k = 1; k < idx.size(); ++k) {
        if (idx[k - 1] >= idx[k])
          throw ParseError(line, "constraint variables out of declaration order: " + c.vars[k]);
      }
      lex.expect('{');
      if (!lex.take('}')) {
        do {
          lex.expect('(');
          Tuple t;
          do {
            t.push_back(lex.word("an atom"));
          } while (lex.take(','));
          lex.expect(')');
          if (t.size() != c.vars.size()) throw ParseError(line, "tuple arity mismatch");
          for (std::size_t k = 0; k < t.size(); ++k) {
            if (!p.domains[idx[k]].count(t[k]))
              throw ParseError(line, "atom outside domain: " + t[k]);
          }
          c.tuples.insert(std::move(t));
        } while (lex.take(',') || lex.peek('('));
        lex.expect('}');
      }
      if (!lex.eol()) throw ParseError(line, "trailing input after constraint");
      if (c.name.empty()) {
        c.name = "C";
        for (const std::string& v : c.vars) c.name += "_" + v;
      }
      p.constraints.push_back(std::move(c));
    } else {
      throw ParseError(line, "expected 'var' or 'con', got '" + head + "'");
    }
  }
  return p;
}

namespace text_detail {

inline void print_atoms(std::ostringstream& out, const AtomSet& atoms) {
  out << '{';
  bool first = true;
  for (const Atom& a : atoms) {
    if (!first) out << ", ";
    out << a;
    first = false;
  }
  out << '}';
}

}  // namespace text_detail

// Canonical form: declarations first, constraints in list order, atoms and
// tuples sorted, one item per line.
inline std::string print_csp(const Csp& p) {
  std::ostringstream out;
  for (std::size_t i = 0; i < p.variables.size(); ++i) {
    out << "var " << p.variables[i] << " in ";
    text_detail::print_atoms(out, p.domains[i]);
    out << '\n';
  }
  for (const Constraint& c : p.constraints) {
    out << "con ";
    if (!c.name.empty()) out << c.name << ' ';
    out << "on (";
    for (std::size_t k = 0; k < c.vars.size(); ++k) {
      if (k) out << ", ";
      out << c.vars[k];
    }
    out << ") {";
    bool first = true;
    for (const Tuple& t : c.tuples) {
      if (!first) out << ", ";
      out << '(';
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) out << ", ";
        out << t[k];
      }
      out << ')';
      first = false;
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace cprop
