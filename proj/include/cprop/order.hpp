#pragma once

// Compound values and schemed functions.
//
// A compound value is an n-tuple of finite sets ordered componentwise by
// reversed inclusion: d1 precedes d2 when every component of d1 contains the
// corresponding component of d2. The bottom element is the tuple of full
// universes, and propagation only ever shrinks components. A schemed function
// transforms the sub-tuple selected by its scheme and is applied to full
// values through its canonic extension, which leaves every other component
// untouched.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cprop/errors.hpp"

namespace cprop {

template <typename E>
using SubTuple = std::vector<std::set<E>>;

// Strictly increasing, nonempty sequence of component indices.
class Scheme {
 public:
  Scheme() = default;

  explicit Scheme(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw ArityError("scheme must select at least one component");
    for (std::size_t k = 1; k < indices_.size(); ++k) {
      if (indices_[k - 1] >= indices_[k])
        throw ArityError("scheme indices must be strictly increasing");
    }
  }

  static Scheme full(std::size_t arity) {
    std::vector<std::size_t> all(arity);
    for (std::size_t i = 0; i < arity; ++i) all[i] = i;
    return Scheme(std::move(all));
  }

  std::size_t size() const { return indices_.size(); }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<std::size_t>& indices() const { return indices_; }

  bool contains(std::size_t component) const {
    return std::binary_search(indices_.begin(), indices_.end(), component);
  }

  bool fits(std::size_t arity) const {
    return indices_.empty() || indices_.back() < arity;
  }

  friend bool operator==(const Scheme&, const Scheme&) = default;

 private:
  std::vector<std::size_t> indices_;
};

// Value of the product ordering: components plus the universes they live in.
// Invariant: components[i] is a subset of universes[i] for every i.
template <typename E>
class CompoundValue {
 public:
  CompoundValue() = default;

  // Bottom of the ordering: every component is its full universe.
  explicit CompoundValue(std::vector<std::set<E>> universes)
      : components_(universes), universes_(std::move(universes)) {}

  CompoundValue(std::vector<std::set<E>> components, std::vector<std::set<E>> universes)
      : components_(std::move(components)), universes_(std::move(universes)) {
    if (components_.size() != universes_.size())
      throw ArityError("component count differs from universe count");
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (!std::includes(universes_[i].begin(), universes_[i].end(),
                         components_[i].begin(), components_[i].end()))
        throw DomainError("component escapes its universe");
    }
  }

  std::size_t arity() const { return components_.size(); }
  const std::set<E>& component(std::size_t i) const { return components_.at(i); }
  const std::vector<std::set<E>>& components() const { return components_; }
  const std::vector<std::set<E>>& universes() const { return universes_; }

  bool any_component_empty() const {
    for (const auto& c : components_)
      if (c.empty()) return true;
    return false;
  }

  friend bool operator==(const CompoundValue&, const CompoundValue&) = default;

  // Write access for the extension machinery; keeps the subset invariant
  // the caller's responsibility.
  std::set<E>& mutable_component(std::size_t i) { return components_.at(i); }

 private:
  std::vector<std::set<E>> components_;
  std::vector<std::set<E>> universes_;
};

template <typename E>
SubTuple<E> project(const CompoundValue<E>& d, const Scheme& s) {
  if (!s.fits(d.arity())) throw ArityError("scheme index out of range");
  SubTuple<E> sub;
  sub.reserve(s.size());
  for (std::size_t idx : s.indices()) sub.push_back(d.component(idx));
  return sub;
}

// A function on sub-tuples together with the scheme it acts on. The transform
// must be inflationary in the reversed-inclusion order (it may only shrink
// sets); idempotent is declared metadata, checked by the oracle, and consulted
// by update pruning.
template <typename E>
struct SchemedFunction {
  Scheme scheme;
  std::function<SubTuple<E>(const SubTuple<E>&)> transform;
  bool idempotent = false;
  std::string label;
};

// Canonic extension: transform the selected sub-tuple, leave the rest alone.
// Enforces the shrink invariant on every application.
template <typename E>
CompoundValue<E> apply_extended(const SchemedFunction<E>& f, const CompoundValue<E>& d) {
  SubTuple<E> in = project(d, f.scheme);
  SubTuple<E> out = f.transform(in);
  if (out.size() != in.size())
    throw ContractViolation("transform changed sub-tuple width: " + f.label);
  CompoundValue<E> e = d;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!std::includes(in[k].begin(), in[k].end(), out[k].begin(), out[k].end()))
      throw ContractViolation("transform grew a component: " + f.label);
    e.mutable_component(f.scheme[k]) = std::move(out[k]);
  }
  return e;
}

// Sorted indices where the two values disagree. Both values must share arity
// and universes.
template <typename E>
std::vector<std::size_t> differing_components(const CompoundValue<E>& a,
                                              const CompoundValue<E>& b) {
  if (a.arity() != b.arity() || a.universes() != b.universes())
    throw ArityError("values live in different products");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a.component(i) != b.component(i)) out.push_back(i);
  return out;
}

// Componentwise subset test: a[i] is a subset of b[i] for every i. In the
// reversed-inclusion order this says a is at least as reduced as b.
template <typename E>
bool componentwise_subset(const CompoundValue<E>& a, const CompoundValue<E>& b) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!std::includes(b.component(i).begin(), b.component(i).end(),
                       a.component(i).begin(), a.component(i).end()))
      return false;
  }
  return true;
}

}  // namespace cprop
