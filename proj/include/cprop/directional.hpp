#pragma once

// Directional arc and path consistency.
//
// Both notions enforce their condition only along a linear variable order:
// the problem is first rewritten so its variable sequence follows the order,
// then a single left-to-right pass over a semi-commutative function sequence
// lands on the least common fixpoint of that sequence. darc and dpath drive
// the straight-line engine; dac and dpc are the same computations written as
// the classic explicit loops over domains and relations, kept as an
// independent second route that must agree with the engine bit for bit.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cprop/arc.hpp"
#include "cprop/csp.hpp"
#include "cprop/engine.hpp"
#include "cprop/errors.hpp"
#include "cprop/oracle.hpp"
#include "cprop/order.hpp"
#include "cprop/path.hpp"

namespace cprop {

struct VariableOrder {
  std::vector<std::string> sequence;
};

inline VariableOrder declaration_order(const Csp& p) { return VariableOrder{p.variables}; }

// Rewrite p so its variable sequence equals ord. Constraint variable lists
// and tuples are permuted to stay subsequences of the new order; the solution
// set is preserved up to the same permutation.
inline Csp reorder(const Csp& p, const VariableOrder& ord) {
  std::size_t n = p.variables.size();
  if (ord.sequence.size() != n)
    throw OrderingError("order must list every variable exactly once");
  std::vector<std::size_t> new_of_old(n, n);
  for (std::size_t ni = 0; ni < n; ++ni) {
    const std::string& name = ord.sequence[ni];
    auto at = std::find(p.variables.begin(), p.variables.end(), name);
    if (at == p.variables.end()) throw OrderingError("order names unknown variable: " + name);
    std::size_t oi = static_cast<std::size_t>(at - p.variables.begin());
    if (new_of_old[oi] != n) throw OrderingError("order repeats variable: " + name);
    new_of_old[oi] = ni;
  }
  Csp out;
  out.variables = ord.sequence;
  out.domains.resize(n);
  for (std::size_t oi = 0; oi < n; ++oi) out.domains[new_of_old[oi]] = p.domains[oi];
  for (const Constraint& c : p.constraints) {
    std::vector<std::size_t> old_idx = p.constraint_indices(c);
    std::vector<std::size_t> coords(c.arity());
    for (std::size_t k = 0; k < coords.size(); ++k) coords[k] = k;
    std::sort(coords.begin(), coords.end(), [&](std::size_t a, std::size_t b) {
      return new_of_old[old_idx[a]] < new_of_old[old_idx[b]];
    });
    Constraint nc;
    nc.name = c.name;
    for (std::size_t k : coords) nc.vars.push_back(c.vars[k]);
    for (const Tuple& t : c.tuples) {
      Tuple nt;
      nt.reserve(t.size());
      for (std::size_t k : coords) nt.push_back(t[k]);
      nc.tuples.insert(std::move(nt));
    }
    out.constraints.push_back(std::move(nc));
  }
  return out;
}

namespace directional_detail {

// First projections of q's binary constraints in execution order: constraints
// on a later second variable run first, ties broken by first variable then
// declaration index. Every earlier function semi-commutes with every later
// one, so the single pass suffices.
inline std::vector<SchemedFunction<Atom>> darc_sequence(const Csp& q) {
  struct Entry {
    std::size_t second, first, decl;
  };
  std::vector<Entry> entries;
  for (std::size_t ci = 0; ci < q.constraints.size(); ++ci) {
    if (q.constraints[ci].arity() != 2) continue;
    std::vector<std::size_t> idx = q.constraint_indices(q.constraints[ci]);
    entries.push_back(Entry{idx[1], idx[0], ci});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.second != b.second) return a.second > b.second;
    if (a.first != b.first) return a.first < b.first;
    return a.decl < b.decl;
  });
  std::vector<SchemedFunction<Atom>> seq;
  seq.reserve(entries.size());
  for (const Entry& e : entries) {
    std::vector<std::size_t> idx = q.constraint_indices(q.constraints[e.decl]);
    seq.push_back(pi_schemed(q, PiFunction{e.decl, 0, Scheme{idx}, idx[0]}));
  }
  return seq;
}

// Pair-relation functions in execution order: blocks of a fixed largest
// variable m, m descending, and inside a block the modified pairs (i,j) in
// lexicographic order of (j,i).
inline std::vector<SchemedFunction<AtomPair>> dpath_sequence(const Csp& q) {
  std::size_t n = q.variables.size();
  std::vector<SchemedFunction<AtomPair>> seq;
  for (std::size_t m = n; m-- > 2;) {
    for (std::size_t j = 1; j < m; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        Scheme s{{pair_index(i, j, n), pair_index(i, m, n), pair_index(j, m, n)}};
        seq.push_back(path_schemed(q, PathFunction{PathKind::ReduceXYviaZ, i, j, m, s, s[0], m}));
      }
    }
  }
  return seq;
}

}  // namespace directional_detail

// Directional arc consistency: after reordering along ord, every atom of an
// earlier variable keeps a supporting atom in each later constrained
// variable. Non-binary constraints take no part. The returned problem uses
// ord's variable sequence.
inline Csp darc(const Csp& p, const VariableOrder& ord, RunStats* stats = nullptr,
                const RunOptions& opts = {}) {
  Csp q = reorder(p, ord);
  CompoundValue<Atom> d = run_si(directional_detail::darc_sequence(q), q.domains, stats, opts);
  return restrict_to_domains(q, d.components());
}

// The same reduction as darc written as the explicit double loop over a
// standardized problem. Under opts.verify the straight-line engine recomputes
// the result and any disagreement throws.
inline Csp dac(const Csp& p, const VariableOrder& ord, RunStats* stats = nullptr,
               const RunOptions& opts = {}) {
  path_detail::require_standardized(p);
  Csp q = reorder(p, ord);
  std::size_t n = q.variables.size();
  std::vector<std::size_t> slot = path_detail::pair_slots(q);
  std::vector<AtomSet> doms = q.domains;
  RunStats local;
  for (std::size_t j = n; j-- > 1;) {
    for (std::size_t i = 0; i < j; ++i) {
      Relation rel = relation_of(q.constraints[slot[pair_index(i, j, n)]]);
      AtomSet kept;
      for (const Atom& a : doms[i]) {
        for (auto it = rel.lower_bound({a, std::string()}); it != rel.end() && it->first == a;
             ++it) {
          if (doms[j].count(it->second)) {
            kept.insert(a);
            break;
          }
        }
      }
      doms[i] = std::move(kept);
      ++local.applications;
    }
  }
  if (opts.verify) {
    CompoundValue<Atom> d = run_si(directional_detail::darc_sequence(q), q.domains, nullptr, opts);
    if (d.components() != doms)
      throw ContractViolation("explicit double loop disagrees with the straight-line engine");
  }
  if (stats) *stats = local;
  return restrict_to_domains(q, std::move(doms));
}

// Directional path consistency: after reordering along ord, each pair
// relation is contained in the composition through any later third variable.
// Only functions whose third variable is the largest of its triple are
// needed, each applied once.
inline Csp dpath(const Csp& p, const VariableOrder& ord, RunStats* stats = nullptr,
                 const RunOptions& opts = {}) {
  path_detail::require_standardized(p);
  Csp q = reorder(p, ord);
  std::vector<std::size_t> slot = path_detail::pair_slots(q);
  CompoundValue<AtomPair> d = run_si(directional_detail::dpath_sequence(q),
                                     path_detail::pair_bottoms(q, slot), stats, opts);
  Csp out = q;
  for (std::size_t k = 0; k < slot.size(); ++k)
    out.constraints[slot[k]].tuples = tuples_of(d.component(k));
  return out;
}

// The same reduction as dpath written as the explicit triple loop. Under
// opts.verify the straight-line engine recomputes the result and any
// disagreement throws.
inline Csp dpc(const Csp& p, const VariableOrder& ord, RunStats* stats = nullptr,
               const RunOptions& opts = {}) {
  path_detail::require_standardized(p);
  Csp q = reorder(p, ord);
  std::size_t n = q.variables.size();
  std::vector<std::size_t> slot = path_detail::pair_slots(q);
  std::vector<Relation> rel = path_detail::pair_bottoms(q, slot);
  RunStats local;
  for (std::size_t m = n; m-- > 2;) {
    for (std::size_t j = 1; j < m; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        std::size_t ij = pair_index(i, j, n);
        rel[ij] = intersect(
            rel[ij], compose(rel[pair_index(i, m, n)], transpose(rel[pair_index(j, m, n)])));
        ++local.applications;
      }
    }
  }
  if (opts.verify) {
    CompoundValue<AtomPair> d = run_si(directional_detail::dpath_sequence(q),
                                       path_detail::pair_bottoms(q, slot), nullptr, opts);
    if (d.components() != rel)
      throw ContractViolation("explicit triple loop disagrees with the straight-line engine");
  }
  if (stats) *stats = local;
  Csp out = q;
  for (std::size_t k = 0; k < slot.size(); ++k) out.constraints[slot[k]].tuples = tuples_of(rel[k]);
  return out;
}

// Checks the straight-line precondition for a function sequence: every
// earlier function must semi-commute with every later one over the given
// universes. Returns the first violation found.
template <typename E>
CheckReport si_precondition_check(const std::vector<SchemedFunction<E>>& sequence,
                                  const std::vector<std::set<E>>& universes,
                                  const OracleOptions& oracle_opts = {}) {
  CheckReport report;
  for (std::size_t a = 0; a < sequence.size(); ++a) {
    for (std::size_t b = a + 1; b < sequence.size(); ++b) {
      CheckReport r = check_semi_commute(sequence[a], sequence[b], universes, oracle_opts);
      report.exhaustive = report.exhaustive && r.exhaustive;
      if (!r.passed) {
        report.passed = false;
        report.counterexample = r.counterexample;
        return report;
      }
    }
  }
  return report;
}

}  // namespace cprop
