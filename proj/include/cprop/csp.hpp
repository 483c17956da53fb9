#pragma once

// Finite constraint satisfaction problems over opaque atoms.
//
// A Csp is a variable sequence, one finite domain per variable, and a list of
// extensional constraints. Every constraint's variables appear in declaration
// order, so constraint schemes are strictly increasing index sequences for
// free. Binary constraints double as relations, with the usual transpose and
// composition algebra.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cprop/errors.hpp"

namespace cprop {

using Atom = std::string;
using AtomSet = std::set<Atom>;
using Tuple = std::vector<Atom>;
using TupleSet = std::set<Tuple>;
using AtomPair = std::pair<Atom, Atom>;
using Relation = std::set<AtomPair>;

struct Constraint {
  std::vector<std::string> vars;
  TupleSet tuples;
  std::string name;

  std::size_t arity() const { return vars.size(); }
};

struct Csp {
  std::vector<std::string> variables;
  std::vector<AtomSet> domains;
  std::vector<Constraint> constraints;

  std::size_t var_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
      if (variables[i] == name) return i;
    throw DomainError("unknown variable: " + name);
  }

  // Declaration-order indices of a constraint's variables.
  std::vector<std::size_t> constraint_indices(const Constraint& c) const {
    std::vector<std::size_t> idx;
    idx.reserve(c.vars.size());
    for (const auto& v : c.vars) idx.push_back(var_index(v));
    return idx;
  }

  // Structural invariants: domains aligned with variables, constraint
  // variables a subsequence of the declaration order, tuples inside the
  // domain product.
  void validate() const {
    if (variables.size() != domains.size())
      throw ArityError("variable and domain counts differ");
    for (const auto& c : constraints) {
      if (c.vars.empty()) throw ArityError("constraint with no variables: " + c.name);
      auto idx = constraint_indices(c);
      for (std::size_t k = 1; k < idx.size(); ++k)
        if (idx[k - 1] >= idx[k])
          throw ArityError("constraint variables out of declaration order: " + c.name);
      for (const auto& t : c.tuples) {
        if (t.size() != c.vars.size())
          throw ArityError("tuple arity mismatch in constraint: " + c.name);
        for (std::size_t k = 0; k < t.size(); ++k)
          if (!domains[idx[k]].count(t[k]))
            throw DomainError("tuple atom outside domain in constraint: " + c.name);
      }
    }
  }
};

inline Relation transpose(const Relation& r) {
  Relation out;
  for (const auto& [a, b] : r) out.emplace(b, a);
  return out;
}

// Relational composition: (a,c) whenever (a,b) in r and (b,c) in s.
inline Relation compose(const Relation& r, const Relation& s) {
  Relation out;
  for (const auto& [a, b] : r)
    for (const auto& [b2, c] : s)
      if (b == b2) out.emplace(a, c);
  return out;
}

inline Relation intersect(const Relation& r, const Relation& s) {
  Relation out;
  std::set_intersection(r.begin(), r.end(), s.begin(), s.end(),
                        std::inserter(out, out.begin()));
  return out;
}

// Coordinate projection after boxing: atoms at the given coordinate of tuples
// that fit entirely inside the given boxes. This is the heart of the
// projection functions used for (hyper-)arc consistency.
inline AtomSet project_constraint(const Constraint& c, std::size_t coordinate,
                                  const std::vector<AtomSet>& boxes) {
  if (boxes.size() != c.arity()) throw ArityError("box count differs from constraint arity");
  if (coordinate >= c.arity()) throw ArityError("projection coordinate out of range");
  AtomSet out;
  for (const auto& t : c.tuples) {
    bool inside = true;
    for (std::size_t k = 0; k < t.size() && inside; ++k)
      inside = boxes[k].count(t[k]) != 0;
    if (inside) out.insert(t[coordinate]);
  }
  return out;
}

inline Relation relation_of(const Constraint& c) {
  if (c.arity() != 2) throw ArityError("relation view requires a binary constraint: " + c.name);
  Relation r;
  for (const auto& t : c.tuples) r.emplace(t[0], t[1]);
  return r;
}

inline TupleSet tuples_of(const Relation& r) {
  TupleSet out;
  for (const auto& [a, b] : r) out.insert(Tuple{a, b});
  return out;
}

inline std::string auto_constraint_name(const std::string& x, const std::string& y) {
  return "C_" + x + "_" + y;
}

// Exactly one binary constraint per variable pair, every pair covered.
inline bool is_standardized(const Csp& p) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> count;
  for (const auto& c : p.constraints) {
    if (c.arity() != 2) return false;
    auto idx = p.constraint_indices(c);
    ++count[{idx[0], idx[1]}];
  }
  std::size_t n = p.variables.size();
  if (count.size() != n * (n - 1) / 2) return false;
  for (const auto& [pair, k] : count)
    if (k != 1) return false;
  return true;
}

// Replace the constraints by exactly one per variable pair: the intersection
// of all given constraints on that pair, or the full product where none was
// given. Solution set is unchanged. Pairs come out in lexicographic index
// order. Any constraint of arity other than two is rejected.
inline Csp standardize(const Csp& p) {
  std::map<std::pair<std::size_t, std::size_t>, Relation> merged;
  std::map<std::pair<std::size_t, std::size_t>, std::string> names;
  for (const auto& c : p.constraints) {
    if (c.arity() != 2)
      throw ArityError("standardize requires binary constraints, got arity " +
                       std::to_string(c.arity()) + " in: " +
                       (c.name.empty() ? std::string("(unnamed)") : c.name));
    auto idx = p.constraint_indices(c);
    std::pair<std::size_t, std::size_t> key{idx[0], idx[1]};
    Relation r = relation_of(c);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged[key] = std::move(r);
      names[key] = c.name;
    } else {
      it->second = intersect(it->second, r);
      names[key].clear();  // merged constraints lose their individual names
    }
  }
  Csp out;
  out.variables = p.variables;
  out.domains = p.domains;
  std::size_t n = p.variables.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Constraint c;
      c.vars = {p.variables[i], p.variables[j]};
      auto it = merged.find({i, j});
      if (it != merged.end()) {
        c.tuples = tuples_of(it->second);
        c.name = names[{i, j}];
      } else {
        for (const auto& a : p.domains[i])
          for (const auto& b : p.domains[j]) c.tuples.insert(Tuple{a, b});
      }
      if (c.name.empty()) c.name = auto_constraint_name(c.vars[0], c.vars[1]);
      out.constraints.push_back(std::move(c));
    }
  }
  return out;
}

// Full assignment test: one atom per variable, in declaration order.
inline bool is_solution(const Csp& p, const Tuple& assignment) {
  if (assignment.size() != p.variables.size())
    throw ArityError("assignment arity differs from variable count");
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (!p.domains[i].count(assignment[i]))
      throw DomainError("assignment atom outside domain of " + p.variables[i]);
  for (const auto& c : p.constraints) {
    auto idx = p.constraint_indices(c);
    Tuple sub;
    sub.reserve(idx.size());
    for (std::size_t i : idx) sub.push_back(assignment[i]);
    if (!c.tuples.count(sub)) return false;
  }
  return true;
}

// Same constraints shrunk to the given domains. Used to report a propagation
// result as a CSP again.
inline Csp restrict_to_domains(const Csp& p, std::vector<AtomSet> domains) {
  Csp out;
  out.variables = p.variables;
  out.domains = std::move(domains);
  for (const auto& c : p.constraints) {
    Constraint r;
    r.vars = c.vars;
    r.name = c.name;
    auto idx = p.constraint_indices(c);
    for (const auto& t : c.tuples) {
      bool inside = true;
      for (std::size_t k = 0; k < t.size() && inside; ++k)
        inside = out.domains[idx[k]].count(t[k]) != 0;
      if (inside) r.tuples.insert(t);
    }
    out.constraints.push_back(std::move(r));
  }
  return out;
}

}  // namespace cprop
