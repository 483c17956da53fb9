#pragma once

// Generic fixpoint iteration with update pruning.
//
// run_gi maintains a worklist G of function indices, repeatedly selects one,
// applies its canonic extension, and grows G by an update set supplied by the
// caller. Any update satisfying the three assumptions below computes the least
// common fixpoint of all functions, independent of the selection order:
//
//   A. every f outside G that held at d but not at g(d) is re-queued;
//   B. if g(d) = d the update is empty;
//   C. if g(g(d)) != g(d) then g itself is re-queued.
//
// run_cd instantiates the update for componentwise values: re-queue exactly
// the functions whose scheme meets a changed component, then optionally prune
// the selected function itself (when idempotent) and the functions known to
// commute with it. Both prunings preserve A-C, so the fixpoint is unchanged;
// only the amount of re-queued work shrinks.
//
// run_si applies a sequence of closures exactly once each. When every earlier
// function semi-commutes with every later one, the single pass already lands
// on the least common fixpoint.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "cprop/errors.hpp"
#include "cprop/order.hpp"

namespace cprop {

struct RunStats {
  std::uint64_t applications = 0;  // transform evaluations made by the algorithm
  std::uint64_t additions = 0;     // worklist insertions, seeding and re-adds included
  std::uint64_t peak = 0;          // largest worklist size observed
  bool saw_empty_component = false;
};

enum class UpdateMode { Plain, Idempotent, Commutativity, Both };

// comm[g] lists functions known to commute with g; g itself must not appear.
// An empty outer vector means no commutativity information at all.
struct UpdatePolicy {
  UpdateMode mode = UpdateMode::Plain;
  std::vector<std::vector<std::size_t>> comm;

  bool prunes_idempotent() const {
    return mode == UpdateMode::Idempotent || mode == UpdateMode::Both;
  }
  bool prunes_commuting() const {
    return mode == UpdateMode::Commutativity || mode == UpdateMode::Both;
  }

  void validate(std::size_t function_count) const {
    if (!comm.empty() && comm.size() != function_count)
      throw ConfigError("commutativity table size differs from function count");
    for (std::size_t g = 0; g < comm.size(); ++g) {
      for (std::size_t h : comm[g]) {
        if (h >= function_count) throw ConfigError("commutativity set index out of range");
        if (h == g) throw ConfigError("a function must not list itself as commuting");
      }
    }
  }
};

struct Selection {
  enum class Kind { Fifo, Lifo, Random, Scripted };
  Kind kind = Kind::Fifo;
  std::uint32_t seed = 0;            // Random only
  std::vector<std::size_t> script;   // Scripted only: preferred pop order, then FIFO

  static Selection fifo() { return {}; }
  static Selection lifo() { return {Kind::Lifo, 0, {}}; }
  static Selection random(std::uint32_t seed) { return {Kind::Random, seed, {}}; }
  static Selection scripted(std::vector<std::size_t> order) {
    return {Kind::Scripted, 0, std::move(order)};
  }
};

struct RunOptions {
  Selection select = {};
  bool verify = false;  // check invariant and update assumptions every step
};

// Caller-supplied update: given membership of the worklist (selected function
// already removed), the selected index, and the value before/after applying
// it, return the indices to insert. Insertion order is preserved.
template <typename E>
using UpdateFn = std::function<std::vector<std::size_t>(
    const std::vector<char>& in_worklist, std::size_t g,
    const CompoundValue<E>& before, const CompoundValue<E>& after)>;

namespace detail {

// Worklist over function indices; a set for membership plus an arrival order.
// Elements leave only via pop, matching the iteration's G := G - {g}.
class Worklist {
 public:
  Worklist(std::size_t function_count, const Selection& select)
      : select_(select), member_(function_count, 0), rng_(select.seed) {
    live_.reserve(function_count);
    for (std::size_t i = 0; i < function_count; ++i) {
      live_.push_back(i);
      member_[i] = 1;
    }
  }

  bool empty() const { return live_.empty(); }
  std::size_t size() const { return live_.size(); }
  const std::vector<char>& mask() const { return member_; }

  // Counts every request; inserts only absentees.
  void push(std::size_t g) {
    if (!member_[g]) {
      member_[g] = 1;
      live_.push_back(g);
    }
  }

  std::size_t pop() {
    std::size_t at = 0;
    switch (select_.kind) {
      case Selection::Kind::Fifo:
        at = 0;
        break;
      case Selection::Kind::Lifo:
        at = live_.size() - 1;
        break;
      case Selection::Kind::Random:
        at = std::uniform_int_distribution<std::size_t>(0, live_.size() - 1)(rng_);
        break;
      case Selection::Kind::Scripted: {
        std::optional<std::size_t> pick;
        while (cursor_ < select_.script.size()) {
          std::size_t want = select_.script[cursor_++];
          if (want < member_.size() && member_[want]) {
            pick = want;
            break;
          }
        }
        if (!pick) {
          at = 0;  // script exhausted: fall back to FIFO
          break;
        }
        at = static_cast<std::size_t>(
            std::find(live_.begin(), live_.end(), *pick) - live_.begin());
        break;
      }
    }
    std::size_t g = live_[at];
    live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(at));
    member_[g] = 0;
    return g;
  }

 private:
  Selection select_;
  std::vector<std::size_t> live_;
  std::vector<char> member_;
  std::mt19937 rng_;
  std::size_t cursor_ = 0;
};

// Invariant of the iteration: every function outside the worklist holds at d.
template <typename E>
void verify_outside_fixpoints(const std::vector<SchemedFunction<E>>& functions,
                              const std::vector<char>& in_worklist,
                              const CompoundValue<E>& d) {
  for (std::size_t f = 0; f < functions.size(); ++f) {
    if (in_worklist[f]) continue;
    if (!(apply_extended(functions[f], d) == d))
      throw ContractViolation("invariant violated: function outside the worklist is not at a fixpoint: " +
                              functions[f].label);
  }
}

template <typename E>
void verify_update_assumptions(const std::vector<SchemedFunction<E>>& functions,
                               const std::vector<char>& in_worklist, std::size_t g,
                               const CompoundValue<E>& before, const CompoundValue<E>& after,
                               const std::vector<std::size_t>& grown) {
  auto queued = [&grown](std::size_t f) {
    return std::find(grown.begin(), grown.end(), f) != grown.end();
  };
  if (after == before) {
    if (!grown.empty())
      throw ContractViolation("update assumption B violated: value unchanged but update nonempty: " +
                              functions[g].label);
    return;
  }
  if (!componentwise_subset(after, before))
    throw ContractViolation("termination metric violated: application grew the value: " +
                            functions[g].label);
  // C: a non-idempotent step must re-queue itself while unstable.
  if (!(apply_extended(functions[g], after) == after) && !queued(g))
    throw ContractViolation("update assumption C violated: unstable function not re-queued: " +
                            functions[g].label);
  // A: anything outside the worklist that just lost its fixpoint must be re-queued.
  for (std::size_t f = 0; f < functions.size(); ++f) {
    if (in_worklist[f] || f == g || queued(f)) continue;
    if (apply_extended(functions[f], before) == before &&
        !(apply_extended(functions[f], after) == after))
      throw ContractViolation("update assumption A violated: update misses " + functions[f].label +
                              " after applying " + functions[g].label);
  }
}

}  // namespace detail

// Generic iteration. Seeds the worklist with every function, then loops until
// empty. The final value is the least common fixpoint of all functions
// whenever the update satisfies assumptions A-C.
template <typename E>
std::pair<CompoundValue<E>, RunStats> run_gi(const std::vector<SchemedFunction<E>>& functions,
                                             CompoundValue<E> bottom, const UpdateFn<E>& update,
                                             const RunOptions& opts = {}) {
  RunStats stats;
  detail::Worklist worklist(functions.size(), opts.select);
  stats.additions += functions.size();
  stats.peak = worklist.size();
  CompoundValue<E> d = std::move(bottom);
  stats.saw_empty_component = d.any_component_empty();
  while (!worklist.empty()) {
    if (opts.verify) detail::verify_outside_fixpoints(functions, worklist.mask(), d);
    std::size_t g = worklist.pop();
    CompoundValue<E> next = apply_extended(functions[g], d);
    ++stats.applications;
    std::vector<std::size_t> grown = update(worklist.mask(), g, d, next);
    if (opts.verify)
      detail::verify_update_assumptions(functions, worklist.mask(), g, d, next, grown);
    for (std::size_t u : grown) {
      if (u >= functions.size()) throw ConfigError("update produced an index out of range");
      ++stats.additions;
      worklist.push(u);
    }
    stats.peak = std::max<std::uint64_t>(stats.peak, worklist.size());
    if (!stats.saw_empty_component && next.any_component_empty())
      stats.saw_empty_component = true;
    d = std::move(next);
  }
  return {std::move(d), stats};
}

// Componentwise default update: every function whose scheme meets a changed
// component, in index order. Satisfies A-C for monotonic inflationary
// functions; includes the selected function itself while it keeps changing.
template <typename E>
std::vector<std::size_t> default_update(const std::vector<SchemedFunction<E>>& functions,
                                        const CompoundValue<E>& before,
                                        const CompoundValue<E>& after) {
  std::vector<std::size_t> changed = differing_components(before, after);
  std::vector<std::size_t> out;
  if (changed.empty()) return out;
  for (std::size_t f = 0; f < functions.size(); ++f) {
    const auto& idx = functions[f].scheme.indices();
    bool hits = std::find_first_of(idx.begin(), idx.end(), changed.begin(), changed.end()) !=
                idx.end();
    if (hits) out.push_back(f);
  }
  return out;
}

// Subtract the prunable parts from an update set: the selected function when
// it is idempotent, and everything declared to commute with it. Order of the
// survivors is preserved.
template <typename E>
std::vector<std::size_t> prune_update(std::vector<std::size_t> base, std::size_t g,
                                      const std::vector<SchemedFunction<E>>& functions,
                                      const UpdatePolicy& policy) {
  auto drop = [&base](std::size_t f) {
    base.erase(std::remove(base.begin(), base.end(), f), base.end());
  };
  if (policy.prunes_idempotent() && functions[g].idempotent) drop(g);
  if (policy.prunes_commuting() && !policy.comm.empty())
    for (std::size_t h : policy.comm[g]) drop(h);
  return base;
}

// Componentwise iteration: run_gi with the pruned default update.
template <typename E>
std::pair<CompoundValue<E>, RunStats> run_cd(const std::vector<SchemedFunction<E>>& functions,
                                             std::vector<std::set<E>> bottoms,
                                             const UpdatePolicy& policy = {},
                                             const RunOptions& opts = {}) {
  policy.validate(functions.size());
  for (const auto& f : functions)
    if (!f.scheme.fits(bottoms.size())) throw ArityError("function scheme exceeds value arity");
  UpdateFn<E> update = [&functions, &policy](const std::vector<char>&, std::size_t g,
                                             const CompoundValue<E>& before,
                                             const CompoundValue<E>& after) {
    return prune_update(default_update(functions, before, after), g, functions, policy);
  };
  return run_gi(functions, CompoundValue<E>(std::move(bottoms)), update, opts);
}

// Straight-line iteration: apply each function exactly once, first to last.
// Precondition (checked only under opts.verify, see si_precondition_check for
// the full test): every function semi-commutes with every function after it,
// and all functions are closures. Then the single pass computes the least
// common fixpoint.
template <typename E>
CompoundValue<E> run_si(const std::vector<SchemedFunction<E>>& sequence,
                        std::vector<std::set<E>> bottoms, RunStats* stats = nullptr,
                        const RunOptions& opts = {}) {
  CompoundValue<E> d{std::move(bottoms)};
  RunStats local;
  for (const auto& f : sequence) {
    if (!f.scheme.fits(d.arity())) throw ArityError("function scheme exceeds value arity");
    d = apply_extended(f, d);
    ++local.applications;
    if (!local.saw_empty_component && d.any_component_empty())
      local.saw_empty_component = true;
  }
  if (opts.verify) {
    for (const auto& f : sequence) {
      if (!(apply_extended(f, d) == d))
        throw ContractViolation(
            "semi-commutativity precondition violated: single pass missed the common fixpoint at " +
            f.label);
    }
  }
  if (stats) *stats = local;
  return d;
}

}  // namespace cprop
