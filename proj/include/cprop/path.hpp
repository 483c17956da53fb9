#pragma once

// Path consistency over standardized binary CSPs.
//
// The compound value here has one component per variable pair: the relation
// of the standardized constraint on that pair, pairs in lexicographic index
// order. For every variable triple x < y < z three functions exist, each
// intersecting one of the pair relations with a composition of the other two.
// path() iterates them with idempotence pruning and re-queues, after a change
// of the pair (x,y), every function reading that pair. pc2() additionally
// drops the functions that rewrite (x,y) itself, which commute with the
// applied one; the re-queued set then matches the classic triple-worklist
// rule. Both emit re-queued work in a fixed order (other pairs first, then
// the own-pair family for path), so runs and stats are reproducible.

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cprop/csp.hpp"
#include "cprop/engine.hpp"
#include "cprop/errors.hpp"
#include "cprop/order.hpp"

namespace cprop {

enum class PathKind { ReduceXYviaZ, ReduceXZviaY, ReduceYZviaX };

// One relation-tightening function on the triple x < y < z (variable
// indices). The scheme selects the three pair components; exactly the
// modified_component changes under application.
struct PathFunction {
  PathKind kind = PathKind::ReduceXYviaZ;
  std::size_t x = 0, y = 0, z = 0;
  Scheme scheme;
  std::size_t modified_component = 0;
  std::size_t via = 0;  // the variable outside the modified pair
};

inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// Lexicographic rank of the pair (i, j), i < j, among all pairs over n
// variables.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Input relations P on (x,y), Q on (x,z), R on (y,z); exactly one comes back
// intersected with the composition of the other two.
inline std::array<Relation, 3> apply_path_function(PathKind kind, const Relation& p,
                                                   const Relation& q, const Relation& r) {
  switch (kind) {
    case PathKind::ReduceXYviaZ:
      return {intersect(p, compose(q, transpose(r))), q, r};
    case PathKind::ReduceXZviaY:
      return {p, intersect(q, compose(p, r)), r};
    case PathKind::ReduceYZviaX:
      return {p, q, intersect(r, compose(transpose(p), q))};
  }
  throw ConfigError("unknown path function kind");
}

namespace path_detail {

inline void require_standardized(const Csp& p) {
  if (!is_standardized(p))
    throw StandardizeError("path consistency requires exactly one binary constraint per variable pair");
}

}  // namespace path_detail

// Three functions per triple, triples in lexicographic order, kinds in the
// order (x,y)-via-z, (x,z)-via-y, (y,z)-via-x.
inline std::vector<PathFunction> make_path_functions(const Csp& p) {
  path_detail::require_standardized(p);
  std::size_t n = p.variables.size();
  std::vector<PathFunction> out;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      for (std::size_t z = y + 1; z < n; ++z) {
        Scheme scheme{{pair_index(x, y, n), pair_index(x, z, n), pair_index(y, z, n)}};
        out.push_back(PathFunction{PathKind::ReduceXYviaZ, x, y, z, scheme, scheme[0], z});
        out.push_back(PathFunction{PathKind::ReduceXZviaY, x, y, z, scheme, scheme[1], y});
        out.push_back(PathFunction{PathKind::ReduceYZviaX, x, y, z, scheme, scheme[2], x});
      }
    }
  }
  return out;
}

inline SchemedFunction<AtomPair> path_schemed(const Csp& p, const PathFunction& f) {
  std::size_t lo = 0, hi = 0;
  switch (f.kind) {
    case PathKind::ReduceXYviaZ: lo = f.x; hi = f.y; break;
    case PathKind::ReduceXZviaY: lo = f.x; hi = f.z; break;
    case PathKind::ReduceYZviaX: lo = f.y; hi = f.z; break;
  }
  std::string label = "f[" + p.variables[f.via] + "](" + p.variables[lo] + "," +
                      p.variables[hi] + ")";
  auto transform = [kind = f.kind](const SubTuple<AtomPair>& in) {
    std::array<Relation, 3> out = apply_path_function(kind, in[0], in[1], in[2]);
    return SubTuple<AtomPair>{std::move(out[0]), std::move(out[1]), std::move(out[2])};
  };
  return SchemedFunction<AtomPair>{f.scheme, std::move(transform), true, std::move(label)};
}

inline std::vector<SchemedFunction<AtomPair>> path_functions_schemed(
    const Csp& p, const std::vector<PathFunction>& all) {
  std::vector<SchemedFunction<AtomPair>> out;
  out.reserve(all.size());
  for (const PathFunction& f : all) out.push_back(path_schemed(p, f));
  return out;
}

// Functions rewriting the same pair through a different third variable; with
// m variables this holds exactly m - 3 functions.
inline std::vector<std::size_t> path_comm_set(std::size_t f, const std::vector<PathFunction>& all) {
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < all.size(); ++h)
    if (h != f && all[h].modified_component == all[f].modified_component) out.push_back(h);
  return out;
}

inline std::vector<std::vector<std::size_t>> path_comm_table(const std::vector<PathFunction>& all) {
  std::vector<std::vector<std::size_t>> table;
  table.reserve(all.size());
  for (std::size_t f = 0; f < all.size(); ++f) table.push_back(path_comm_set(f, all));
  return table;
}

namespace path_detail {

// Constraint index per pair rank; standardized CSPs may list their
// constraints in any order.
inline std::vector<std::size_t> pair_slots(const Csp& p) {
  std::size_t n = p.variables.size();
  std::vector<std::size_t> slot(pair_count(n), 0);
  for (std::size_t ci = 0; ci < p.constraints.size(); ++ci) {
    std::vector<std::size_t> idx = p.constraint_indices(p.constraints[ci]);
    slot[pair_index(idx[0], idx[1], n)] = ci;
  }
  return slot;
}

inline std::vector<Relation> pair_bottoms(const Csp& p, const std::vector<std::size_t>& slot) {
  std::vector<Relation> bottoms;
  bottoms.reserve(slot.size());
  for (std::size_t ci : slot) bottoms.push_back(relation_of(p.constraints[ci]));
  return bottoms;
}

// Re-queue plan shared by path and pc2. After the pair (x,y) changes, the
// functions reading it are: those rewriting a different pair through the
// third variable of a triple containing x and y, and those rewriting (x,y)
// itself. The former go out in four groups (pairs (x,u), then (y,u), then
// (u,y), then (u,x), each u ascending); the latter only for path, u
// ascending, the applied function excluded.
struct RequeuePlan {
  std::size_t n = 0;
  bool own_family = false;
  std::vector<std::pair<std::size_t, std::size_t>> pair_vars;  // rank -> (lo, hi)
  std::vector<std::size_t> fn_at;  // rank * n + via -> function index

  RequeuePlan(const std::vector<PathFunction>& all, std::size_t n_, bool own_family_)
      : n(n_), own_family(own_family_), pair_vars(pair_count(n_)), fn_at(pair_count(n_) * n_, 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pair_vars[pair_index(i, j, n)] = {i, j};
    for (std::size_t f = 0; f < all.size(); ++f)
      fn_at[all[f].modified_component * n + all[f].via] = f;
  }

  std::vector<std::size_t> operator()(std::size_t g, const std::vector<PathFunction>& all,
                                      const CompoundValue<AtomPair>& before,
                                      const CompoundValue<AtomPair>& after) const {
    std::vector<std::size_t> out;
    std::size_t k = all[g].modified_component;
    if (before.component(k) == after.component(k)) return out;
    auto [x, y] = pair_vars[k];
    auto emit = [&](std::size_t lo, std::size_t hi, std::size_t via) {
      out.push_back(fn_at[pair_index(lo, hi, n) * n + via]);
    };
    for (std::size_t u = x + 1; u < n; ++u)
      if (u != y) emit(x, u, y);
    for (std::size_t u = y + 1; u < n; ++u) emit(y, u, x);
    for (std::size_t u = 0; u < y; ++u)
      if (u != x) emit(u, y, x);
    for (std::size_t u = 0; u < x; ++u) emit(u, x, y);
    if (own_family) {
      for (std::size_t u = 0; u < n; ++u)
        if (u != x && u != y && u != all[g].via) emit(x, y, u);
    }
    return out;
  }
};

inline std::pair<Csp, RunStats> run_path_engine(const Csp& p, bool own_family,
                                                const RunOptions& opts) {
  std::vector<PathFunction> all = make_path_functions(p);
  std::vector<std::size_t> slot = pair_slots(p);
  RequeuePlan plan(all, p.variables.size(), own_family);
  UpdateFn<AtomPair> update = [&all, &plan](const std::vector<char>&, std::size_t g,
                                            const CompoundValue<AtomPair>& before,
                                            const CompoundValue<AtomPair>& after) {
    return plan(g, all, before, after);
  };
  auto [d, stats] = run_gi(path_functions_schemed(p, all),
                           CompoundValue<AtomPair>(pair_bottoms(p, slot)), update, opts);
  Csp out = p;
  for (std::size_t k = 0; k < slot.size(); ++k)
    out.constraints[slot[k]].tuples = tuples_of(d.component(k));
  return {std::move(out), stats};
}

}  // namespace path_detail

// Largest path consistent reduction of p: for every triple, each pair
// relation is contained in the composition of the other two. Only the
// constraints change; domains stay as given.
inline std::pair<Csp, RunStats> path(const Csp& p, const RunOptions& opts = {}) {
  return path_detail::run_path_engine(p, true, opts);
}

// Same fixpoint as path with the own-pair re-queues dropped; those functions
// commute with the applied one, so skipping them is safe and saves work.
inline std::pair<Csp, RunStats> pc2(const Csp& p, const RunOptions& opts = {}) {
  return path_detail::run_path_engine(p, false, opts);
}

}  // namespace cprop
