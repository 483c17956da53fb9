#pragma once

// Brute-force reference implementations.
//
// Everything in this header recomputes results from first principles so that
// the propagation engines can be checked against it: solutions by explicit
// enumeration, fixpoints by round-robin sweeps, function properties by
// enumerating or sampling the finite sub-lattice below bottom. None of it
// goes through run_gi/run_cd/run_si or apply_extended; a bug there cannot
// hide here.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cprop/csp.hpp"
#include "cprop/errors.hpp"
#include "cprop/order.hpp"

namespace cprop {

struct CheckReport {
  bool passed = true;
  bool exhaustive = true;      // false when the state space forced sampling
  std::string counterexample;  // nonempty exactly when passed is false
};

struct OracleOptions {
  std::size_t state_cap = 10'000;        // largest state space swept exhaustively
  std::size_t samples = 1'000;           // sample count above the cap
  std::uint32_t seed = 7;                // sampling is reproducible
  std::uint64_t enumeration_cap = 1'000'000;  // assignment limit for enumerate_solutions
};

namespace oracle_detail {

inline std::string show(const Atom& a) { return a; }
inline std::string show(const AtomPair& p) { return "(" + p.first + "," + p.second + ")"; }

template <typename E>
std::string show_set(const std::set<E>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s) {
    if (!first) out += ",";
    out += show(e);
    first = false;
  }
  return out + "}";
}

template <typename E>
std::string show_value(const CompoundValue<E>& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.arity(); ++i) {
    if (i) out += ", ";
    out += show_set(d.component(i));
  }
  return out + ")";
}

// Independent re-implementation of the canonic extension. Deliberately does
// not enforce the shrink invariant: the closure checker must be able to
// observe a misbehaving transform instead of dying on it.
template <typename E>
CompoundValue<E> extend_apply(const SchemedFunction<E>& f, const CompoundValue<E>& d) {
  SubTuple<E> in;
  for (std::size_t idx : f.scheme.indices()) in.push_back(d.component(idx));
  SubTuple<E> out = f.transform(in);
  if (out.size() != in.size())
    throw ContractViolation("transform changed sub-tuple width: " + f.label);
  CompoundValue<E> e = d;
  for (std::size_t k = 0; k < f.scheme.size(); ++k)
    e.mutable_component(f.scheme[k]) = out[k];
  return e;
}

// Number of subset choices for the components selected by `mask` (all
// components when mask is empty), saturating at limit+1.
template <typename E>
std::uint64_t state_count(const std::vector<std::set<E>>& universes,
                          const std::vector<std::size_t>& selected, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t i : selected) {
    for (std::size_t b = 0; b < universes[i].size(); ++b) {
      total *= 2;
      if (total > limit) return limit + 1;
    }
  }
  return total;
}

// Enumerate every value that agrees with bottom outside `selected` and takes
// arbitrary subsets inside. Visit returns false to stop early.
template <typename E, typename Visit>
void for_each_state(const std::vector<std::set<E>>& universes,
                    const std::vector<std::size_t>& selected, Visit visit) {
  std::vector<std::vector<E>> pools;
  std::size_t bits = 0;
  for (std::size_t i : selected) {
    pools.emplace_back(universes[i].begin(), universes[i].end());
    bits += pools.back().size();
  }
  std::uint64_t total = 1ull << bits;
  for (std::uint64_t code = 0; code < total; ++code) {
    CompoundValue<E> d{universes};
    std::uint64_t rest = code;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      std::set<E> sub;
      for (const auto& e : pools[k]) {
        if (rest & 1) sub.insert(e);
        rest >>= 1;
      }
      d.mutable_component(selected[k]) = std::move(sub);
    }
    if (!visit(d)) return;
  }
}

// Deterministic sample state: random subset of each selected component, with
// bottom and near-singleton states mixed in by the caller.
template <typename E>
CompoundValue<E> random_state(const std::vector<std::set<E>>& universes,
                              const std::vector<std::size_t>& selected, std::mt19937& rng) {
  CompoundValue<E> d{universes};
  for (std::size_t i : selected) {
    std::set<E> sub;
    for (const auto& e : universes[i])
      if (rng() & 1) sub.insert(e);
    d.mutable_component(i) = std::move(sub);
  }
  return d;
}

template <typename E>
std::vector<std::size_t> merge_schemes(const SchemedFunction<E>& f, const SchemedFunction<E>& g) {
  std::vector<std::size_t> sel = f.scheme.indices();
  for (std::size_t i : g.scheme.indices())
    if (!std::count(sel.begin(), sel.end(), i)) sel.push_back(i);
  std::sort(sel.begin(), sel.end());
  return sel;
}

// Run `visit` over the sub-lattice spanned by `selected`: exhaustively when
// small enough, otherwise on bottom, single-component reductions, and random
// samples. Returns whether the sweep was exhaustive.
template <typename E, typename Visit>
bool sweep(const std::vector<std::set<E>>& universes, const std::vector<std::size_t>& selected,
           const OracleOptions& opts, Visit visit) {
  if (state_count(universes, selected, opts.state_cap) <= opts.state_cap) {
    for_each_state(universes, selected, visit);
    return true;
  }
  bool go = visit(CompoundValue<E>{universes});
  for (std::size_t k = 0; go && k < selected.size(); ++k) {
    for (const auto& e : universes[selected[k]]) {
      CompoundValue<E> d{universes};
      d.mutable_component(selected[k]) = {e};
      if (!(go = visit(d))) break;
    }
  }
  std::mt19937 rng(opts.seed);
  for (std::size_t s = 0; go && s < opts.samples; ++s)
    go = visit(random_state(universes, selected, rng));
  return false;
}

}  // namespace oracle_detail

// All solutions by explicit enumeration. Refuses instances whose assignment
// space exceeds the cap.
inline std::set<Tuple> enumerate_solutions(const Csp& p, const OracleOptions& opts = {}) {
  std::uint64_t total = 1;
  for (const auto& d : p.domains) {
    total *= std::max<std::size_t>(d.size(), 1);
    if (total > opts.enumeration_cap)
      throw CapacityError("assignment space exceeds enumeration cap");
    if (d.empty()) return {};
  }
  std::vector<std::vector<Atom>> pools;
  for (const auto& d : p.domains) pools.emplace_back(d.begin(), d.end());
  std::set<Tuple> out;
  Tuple t(p.variables.size());
  std::vector<std::size_t> at(p.variables.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < at.size(); ++i) t[i] = pools[i][at[i]];
    if (is_solution(p, t)) out.insert(t);
    std::size_t i = at.size();
    while (i > 0) {
      --i;
      if (++at[i] < pools[i].size()) break;
      at[i] = 0;
      if (i == 0) return out;
    }
    if (at.size() == 0) return out;
  }
}

// Least common fixpoint by round-robin sweeps: apply every function in turn
// until one full pass changes nothing.
template <typename E>
CompoundValue<E> chaotic_fixpoint(const std::vector<SchemedFunction<E>>& functions,
                                  std::vector<std::set<E>> bottoms) {
  CompoundValue<E> d{std::move(bottoms)};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& f : functions) {
      CompoundValue<E> next = oracle_detail::extend_apply(f, d);
      if (!(next == d)) {
        d = std::move(next);
        changed = true;
      }
    }
  }
  return d;
}

// The straight-from-the-definition update set: every function outside the
// worklist that held before but not after, plus the applied function itself
// while it keeps moving. Quadratic and slow; exists to cross-check the
// engines' cheap componentwise update.
template <typename E>
std::vector<std::size_t> reference_update(const std::vector<SchemedFunction<E>>& functions,
                                          const std::vector<char>& in_worklist, std::size_t g,
                                          const CompoundValue<E>& before,
                                          const CompoundValue<E>& after) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < functions.size(); ++f) {
    if (f == g || in_worklist[f]) continue;
    if (oracle_detail::extend_apply(functions[f], before) == before &&
        !(oracle_detail::extend_apply(functions[f], after) == after))
      out.push_back(f);
  }
  if (!(oracle_detail::extend_apply(functions[g], after) == after)) out.push_back(g);
  return out;
}

// Closure check: inflationary, monotonic, idempotent over the sub-lattice of
// the function's own scheme.
template <typename E>
CheckReport check_closure(const SchemedFunction<E>& f, const std::vector<std::set<E>>& universes,
                          const OracleOptions& opts = {}) {
  using namespace oracle_detail;
  CheckReport report;
  const auto& sel = f.scheme.indices();
  auto fail = [&report](const std::string& what, const std::string& detail) {
    report.passed = false;
    report.counterexample = what + ": " + detail;
    return false;
  };
  report.exhaustive =
      sweep(universes, sel, opts, [&](const CompoundValue<E>& d) {
        CompoundValue<E> fd = extend_apply(f, d);
        for (std::size_t i : sel) {
          if (!std::includes(d.component(i).begin(), d.component(i).end(),
                             fd.component(i).begin(), fd.component(i).end()))
            return fail("not inflationary", f.label + " grew component at " + show_value(d));
        }
        if (!(extend_apply(f, fd) == fd))
          return fail("not idempotent", f.label + " moved twice from " + show_value(d));
        return true;
      });
  if (!report.passed) return report;

  // Monotonicity needs pairs x below y; enumerate via three-way membership
  // when affordable, otherwise sample y and a random subset x.
  std::uint64_t pairs = 1;
  for (std::size_t i : sel) {
    for (std::size_t b = 0; b < universes[i].size(); ++b) {
      pairs *= 3;
      if (pairs > opts.state_cap) break;
    }
    if (pairs > opts.state_cap) break;
  }
  auto check_pair = [&](const CompoundValue<E>& lo, const CompoundValue<E>& hi) {
    CompoundValue<E> flo = extend_apply(f, lo);
    CompoundValue<E> fhi = extend_apply(f, hi);
    for (std::size_t i : sel) {
      if (!std::includes(fhi.component(i).begin(), fhi.component(i).end(),
                         flo.component(i).begin(), flo.component(i).end()))
        return fail("not monotonic",
                    f.label + " at " + show_value(lo) + " under " + show_value(hi));
    }
    return true;
  };
  if (pairs <= opts.state_cap) {
    std::vector<std::vector<E>> pools;
    std::size_t digits = 0;
    for (std::size_t i : sel) {
      pools.emplace_back(universes[i].begin(), universes[i].end());
      digits += pools.back().size();
    }
    std::vector<std::size_t> trit(digits, 0);
    bool done = false;
    while (!done) {
      CompoundValue<E> lo{universes}, hi{universes};
      std::size_t at = 0;
      for (std::size_t k = 0; k < sel.size(); ++k) {
        std::set<E> lo_s, hi_s;
        for (const auto& e : pools[k]) {
          if (trit[at] >= 1) hi_s.insert(e);  // 1: hi only, 2: both
          if (trit[at] == 2) lo_s.insert(e);
          ++at;
        }
        lo.mutable_component(sel[k]) = std::move(lo_s);
        hi.mutable_component(sel[k]) = std::move(hi_s);
      }
      if (!check_pair(lo, hi)) return report;
      std::size_t i = 0;
      while (i < digits && ++trit[i] == 3) trit[i++] = 0;
      done = i == digits;
    }
  } else {
    report.exhaustive = false;
    std::mt19937 rng(opts.seed);
    for (std::size_t s = 0; s < opts.samples; ++s) {
      CompoundValue<E> hi = random_state(universes, sel, rng);
      CompoundValue<E> lo = hi;
      for (std::size_t i : sel) {
        std::set<E> sub;
        for (const auto& e : hi.component(i))
          if (rng() & 1) sub.insert(e);
        lo.mutable_component(i) = std::move(sub);
      }
      if (!check_pair(lo, hi)) return report;
    }
  }
  return report;
}

// Do f and g commute: f+(g+(x)) == g+(f+(x)) for every x below bottom?
template <typename E>
CheckReport check_commute(const SchemedFunction<E>& f, const SchemedFunction<E>& g,
                          const std::vector<std::set<E>>& universes,
                          const OracleOptions& opts = {}) {
  using namespace oracle_detail;
  CheckReport report;
  auto sel = merge_schemes(f, g);
  report.exhaustive = sweep(universes, sel, opts, [&](const CompoundValue<E>& d) {
    CompoundValue<E> fg = extend_apply(f, extend_apply(g, d));
    CompoundValue<E> gf = extend_apply(g, extend_apply(f, d));
    if (!(fg == gf)) {
      report.passed = false;
      report.counterexample = f.label + " and " + g.label + " disagree at " + show_value(d) +
                              ": " + show_value(fg) + " vs " + show_value(gf);
      return false;
    }
    return true;
  });
  return report;
}

// Does f semi-commute with g: f+(g+(x)) componentwise contains g+(f+(x)) for
// every x below bottom? Reading: applying f after g loses no elements against
// the designated g-after-f order.
template <typename E>
CheckReport check_semi_commute(const SchemedFunction<E>& f, const SchemedFunction<E>& g,
                               const std::vector<std::set<E>>& universes,
                               const OracleOptions& opts = {}) {
  using namespace oracle_detail;
  CheckReport report;
  auto sel = merge_schemes(f, g);
  report.exhaustive = sweep(universes, sel, opts, [&](const CompoundValue<E>& d) {
    CompoundValue<E> fg = extend_apply(f, extend_apply(g, d));
    CompoundValue<E> gf = extend_apply(g, extend_apply(f, d));
    for (std::size_t i = 0; i < fg.arity(); ++i) {
      if (!std::includes(fg.component(i).begin(), fg.component(i).end(),
                         gf.component(i).begin(), gf.component(i).end())) {
        report.passed = false;
        report.counterexample = f.label + " does not semi-commute with " + g.label + " at " +
                                show_value(d) + ": " + show_value(fg) + " vs " + show_value(gf);
        return false;
      }
    }
    return true;
  });
  return report;
}

}  // namespace cprop
