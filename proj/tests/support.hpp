#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cprop/arc.hpp"
#include "cprop/csp.hpp"
#include "cprop/directional.hpp"
#include "cprop/oracle.hpp"
#include "cprop/path.hpp"
#include "cprop/text.hpp"

namespace support {

inline std::string data_path(const std::string& name) {
  return std::string(CPROP_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline cprop::Csp load_csp(const std::string& name) {
  cprop::Csp p = cprop::parse_csp(read_file(data_path(name)));
  p.validate();
  return p;
}

// Small random instances: up to max_vars variables over subsets of {a, b, c},
// random binary constraints on sorted variable pairs.  Pairs may repeat and,
// when allowed, an occasional ternary constraint is thrown in.  Relations may
// be empty, so inconsistent instances occur naturally.
inline cprop::Csp random_csp(std::mt19937& rng,
                             std::size_t max_vars = 4,
                             std::size_t max_atoms = 3,
                             bool binary_only = false) {
  static const std::vector<std::string> pool = {"a", "b", "c"};
  auto pick = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  cprop::Csp p;
  const std::size_t n = pick(2, max_vars);
  for (std::size_t v = 0; v < n; ++v) {
    p.variables.push_back("v" + std::to_string(v));
    const std::size_t k = pick(1, max_atoms);
    cprop::AtomSet dom;
    while (dom.size() < k) dom.insert(pool[pick(0, pool.size() - 1)]);
    p.domains.push_back(dom);
  }

  const std::size_t cons = pick(0, n + 1);
  for (std::size_t c = 0; c < cons; ++c) {
    const bool ternary = !binary_only && n >= 3 && pick(0, 4) == 0;
    const std::size_t arity = ternary ? 3 : 2;
    std::vector<std::size_t> idx;
    while (idx.size() < arity) {
      const std::size_t v = pick(0, n - 1);
      if (std::find(idx.begin(), idx.end(), v) == idx.end()) idx.push_back(v);
    }
    std::sort(idx.begin(), idx.end());

    cprop::Constraint con;
    for (std::size_t v : idx) con.vars.push_back(p.variables[v]);
    con.name = "K" + std::to_string(c);

    std::vector<cprop::Tuple> box;
    box.push_back({});
    for (std::size_t v : idx) {
      std::vector<cprop::Tuple> next;
      for (const auto& t : box)
        for (const auto& atom : p.domains[v]) {
          cprop::Tuple u = t;
          u.push_back(atom);
          next.push_back(u);
        }
      box = next;
    }
    if (pick(0, 19) != 0) {
      for (const auto& t : box)
        if (pick(0, 99) < 55) con.tuples.insert(t);
    }
    p.constraints.push_back(con);
  }
  p.validate();
  return p;
}

inline cprop::Csp random_standardized(std::mt19937& rng,
                                      std::size_t max_vars = 4,
                                      std::size_t max_atoms = 3) {
  return cprop::standardize(random_csp(rng, max_vars, max_atoms, true));
}

inline std::vector<cprop::AtomSet> domains_of(const cprop::Csp& p) { return p.domains; }

}  // namespace support
