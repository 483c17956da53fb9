#pragma once

// Hyper-arc and arc consistency.
//
// Both algorithms iterate projection functions to their least common
// fixpoint. A projection function for coordinate i of a constraint shrinks
// the i-th variable's domain to the atoms supported by some tuple lying
// inside all current domains. hyper_arc runs every projection of every
// constraint with idempotence pruning. ac3 specializes to binary constraints:
// each constraint and its transpose become a first-class work item pruning
// the item's first variable, and a commutativity table cuts the re-queued
// work down to the classic rule.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cprop/csp.hpp"
#include "cprop/engine.hpp"
#include "cprop/errors.hpp"
#include "cprop/order.hpp"

namespace cprop {

// One projection: constraint coordinate `position` writes the component
// `output_component` of the compound domain value.
struct PiFunction {
  std::size_t constraint = 0;        // index into the CSP's constraint list
  std::size_t position = 0;          // coordinate within that constraint
  Scheme scheme;                     // the constraint's variable indices
  std::size_t output_component = 0;  // scheme[position]
};

// One function per (constraint, coordinate) pair, constraints in declaration
// order, coordinates ascending.
inline std::vector<PiFunction> make_pi_functions(const Csp& p) {
  std::vector<PiFunction> out;
  for (std::size_t ci = 0; ci < p.constraints.size(); ++ci) {
    const Constraint& c = p.constraints[ci];
    std::vector<std::size_t> idx = p.constraint_indices(c);
    Scheme scheme{idx};
    for (std::size_t pos = 0; pos < c.arity(); ++pos)
      out.push_back(PiFunction{ci, pos, scheme, idx[pos]});
  }
  return out;
}

namespace arc_detail {

inline std::string constraint_label(const Constraint& c, std::size_t index) {
  return c.name.empty() ? "#" + std::to_string(index) : c.name;
}

}  // namespace arc_detail

// Executable form of a projection. The transform owns a copy of the
// constraint, so later changes to the CSP cannot leak into a running engine.
inline SchemedFunction<Atom> pi_schemed(const Csp& p, const PiFunction& f) {
  Constraint c = p.constraints[f.constraint];
  std::size_t pos = f.position;
  std::string label =
      "pi" + std::to_string(pos + 1) + "(" + arc_detail::constraint_label(c, f.constraint) + ")";
  auto transform = [c = std::move(c), pos](const SubTuple<Atom>& in) {
    SubTuple<Atom> out = in;
    out[pos] = project_constraint(c, pos, in);
    return out;
  };
  return SchemedFunction<Atom>{f.scheme, std::move(transform), true, std::move(label)};
}

inline std::vector<SchemedFunction<Atom>> pi_functions_schemed(const Csp& p) {
  std::vector<SchemedFunction<Atom>> out;
  for (const PiFunction& f : make_pi_functions(p)) out.push_back(pi_schemed(p, f));
  return out;
}

// Functions known to commute with all[f]: the other coordinates of the same
// constraint, and coordinates of other constraints writing the same variable.
// Two projections of distinct constraints with distinct output variables may
// fail to commute, so they are never listed.
inline std::vector<std::size_t> arc_comm_set(std::size_t f, const std::vector<PiFunction>& all) {
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < all.size(); ++h) {
    if (h == f) continue;
    if (all[h].constraint == all[f].constraint ||
        all[h].output_component == all[f].output_component)
      out.push_back(h);
  }
  return out;
}

inline std::vector<std::vector<std::size_t>> arc_comm_table(const std::vector<PiFunction>& all) {
  std::vector<std::vector<std::size_t>> table;
  table.reserve(all.size());
  for (std::size_t f = 0; f < all.size(); ++f) table.push_back(arc_comm_set(f, all));
  return table;
}

// Largest hyper-arc consistent reduction of p: every domain atom of a
// constrained variable appears in a tuple of the constraint drawn from the
// current domains. Empty domains are a legal outcome and signal that p has no
// solution.
inline std::pair<Csp, RunStats> hyper_arc(const Csp& p, const RunOptions& opts = {}) {
  auto [d, stats] =
      run_cd(pi_functions_schemed(p), p.domains, UpdatePolicy{UpdateMode::Idempotent, {}}, opts);
  return {restrict_to_domains(p, d.components()), stats};
}

// A binary-consistency work item: one direction of one constraint. The item
// prunes `prunes` using support in `supports`; rel pairs are ordered
// (prunes, supports).
struct Ac3Item {
  std::size_t base = 0;  // constraint index in the input CSP
  bool transposed = false;
  std::size_t prunes = 0;
  std::size_t supports = 0;
  Relation rel;
  std::string label;
};

// Work items in seed order: each constraint in declaration order, immediately
// followed by its transpose.
inline std::vector<Ac3Item> make_ac3_items(const Csp& p) {
  std::vector<Ac3Item> out;
  for (std::size_t ci = 0; ci < p.constraints.size(); ++ci) {
    const Constraint& c = p.constraints[ci];
    if (c.arity() != 2)
      throw ArityError("arc consistency requires binary constraints: " +
                       arc_detail::constraint_label(c, ci));
    std::vector<std::size_t> idx = p.constraint_indices(c);
    Relation r = relation_of(c);
    std::string label = arc_detail::constraint_label(c, ci);
    out.push_back(Ac3Item{ci, false, idx[0], idx[1], r, label});
    out.push_back(Ac3Item{ci, true, idx[1], idx[0], transpose(r), label + "^T"});
  }
  return out;
}

// An item is the first projection of its relation: keep the atoms of the
// pruned variable that have at least one supporting pair.
inline SchemedFunction<Atom> ac3_schemed(const Ac3Item& item) {
  bool pruned_first = item.prunes < item.supports;
  Scheme scheme{pruned_first ? std::vector<std::size_t>{item.prunes, item.supports}
                             : std::vector<std::size_t>{item.supports, item.prunes}};
  std::size_t su = pruned_first ? 0 : 1;
  std::size_t sv = 1 - su;
  auto transform = [rel = item.rel, su, sv](const SubTuple<Atom>& in) {
    SubTuple<Atom> out = in;
    AtomSet kept;
    for (const Atom& a : in[su]) {
      for (auto it = rel.lower_bound({a, std::string()}); it != rel.end() && it->first == a; ++it) {
        if (in[sv].count(it->second)) {
          kept.insert(a);
          break;
        }
      }
    }
    out[su] = std::move(kept);
    return out;
  };
  return SchemedFunction<Atom>{scheme, std::move(transform), true, "pi1(" + item.label + ")"};
}

inline std::vector<SchemedFunction<Atom>> ac3_functions(const std::vector<Ac3Item>& items) {
  std::vector<SchemedFunction<Atom>> out;
  out.reserve(items.size());
  for (const Ac3Item& item : items) out.push_back(ac3_schemed(item));
  return out;
}

// Same commutativity rule as arc_comm_set, stated on items: the two
// directions of one constraint commute, and items of distinct constraints
// commute when they prune the same variable. When several constraints share a
// variable pair, the opposite direction of a different constraint is absent
// from the table and therefore re-queued, which is exactly the relaxation the
// classic single-constraint re-queue rule needs to stay correct.
inline std::vector<std::vector<std::size_t>> ac3_comm(const std::vector<Ac3Item>& items) {
  std::vector<std::vector<std::size_t>> table(items.size());
  for (std::size_t g = 0; g < items.size(); ++g) {
    for (std::size_t h = 0; h < items.size(); ++h) {
      if (h == g) continue;
      if ((items[h].base == items[g].base && items[h].transposed != items[g].transposed) ||
          (items[h].base != items[g].base && items[h].prunes == items[g].prunes))
        table[g].push_back(h);
    }
  }
  return table;
}

// Arc consistency for binary CSPs with both prunings switched on. On a
// domain change the surviving re-queued items are those pruning a neighbor
// through the changed variable, minus the known-commuting ones; final domains
// equal hyper_arc's on the same input.
inline std::pair<Csp, RunStats> ac3(const Csp& p, const RunOptions& opts = {}) {
  std::vector<Ac3Item> items = make_ac3_items(p);
  auto [d, stats] =
      run_cd(ac3_functions(items), p.domains, UpdatePolicy{UpdateMode::Both, ac3_comm(items)}, opts);
  return {restrict_to_domains(p, d.components()), stats};
}

}  // namespace cprop
