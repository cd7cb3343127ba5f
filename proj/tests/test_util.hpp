#pragma once

// Shared helpers for the test suites: small poset builders, an independent
// reachability oracle, and random generators for posets and class tables.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gensub/poset.hpp"

namespace testutil {

using Edge = std::pair<std::size_t, std::size_t>;

inline std::vector<std::string> numbered_labels(std::size_t n, const std::string& prefix = "e") {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

/// Chain e0 < e1 < ... < e(n-1).
inline gensub::Poset chain(std::size_t n) {
  std::vector<Edge> covers;
  for (std::size_t i = 0; i + 1 < n; ++i) covers.emplace_back(i, i + 1);
  return gensub::Poset::from_covers(numbered_labels(n), covers);
}

inline gensub::Poset antichain(std::size_t n) {
  return gensub::Poset::from_covers(numbered_labels(n), {});
}

/// Reflexive-transitive reachability computed by plain Floyd-Warshall,
/// independent of the Poset implementation. Used as the brute-force oracle.
inline std::vector<std::vector<bool>> reachability(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : edges) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

/// Random DAG cover edges: only i -> j with i < j, so acyclic by construction.
inline std::vector<Edge> random_dag_edges(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return edges;
}

inline gensub::Poset random_poset(std::size_t n, double density, std::mt19937_64& rng) {
  return gensub::Poset::from_covers(numbered_labels(n), random_dag_edges(n, density, rng));
}

/// Random class-table source text. Respects the declaration rules: a
/// non-generic class never extends a generic one; generic-extends-generic is
/// argument pass-through. Bounds are left at their defaults.
inline std::string random_hierarchy_source(std::size_t n_classes, std::mt19937_64& rng) {
  std::bernoulli_distribution generic_coin(0.4);
  std::string src;
  std::vector<std::string> plain_supers = {"Object"};
  std::vector<std::string> any_supers = {"Object"};
  for (std::size_t i = 0; i < n_classes; ++i) {
    std::string name = "C" + std::to_string(i);
    bool generic = generic_coin(rng);
    const auto& pool = generic ? any_supers : plain_supers;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::string& super = pool[pick(rng)];
    src += "class " + name + (generic ? "<X>" : "") + " extends " + super + "\n";
    any_supers.push_back(name);
    if (!generic) plain_supers.push_back(name);
  }
  return src;
}

}  // namespace testutil
