#pragma once

// Independent brute-force reference computations shared by the tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tafkit/algebra.hpp"
#include "tafkit/graph.hpp"

namespace oracle {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;  // (source, range)

inline EdgeSet edge_set(const tafkit::DirectedGraph& g) { return {g.edges().begin(), g.edges().end()}; }

// Repeated composition until nothing new appears.
inline EdgeSet closure_by_composition(EdgeSet e) {
  while (true) {
    EdgeSet add;
    for (auto [a, b] : e)
      for (auto [c, d] : e)
        if (b == c && !e.count({a, d})) add.insert({a, d});
    if (add.empty()) return e;
    e.insert(add.begin(), add.end());
  }
}

inline std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(std::to_string(i));
  return v;
}

inline tafkit::DirectedGraph make_graph(std::size_t n, const EdgeSet& e) {
  return tafkit::DirectedGraph::from_indices(names(n), {e.begin(), e.end()});
}

// Random DAG: edges go from a lower to a higher position of a random permutation.
inline EdgeSet random_dag(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(p);
  EdgeSet e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng)) e.insert({perm[a], perm[b]});
  return e;
}

// Random out-forest: each vertex after a random order gets a parent among
// earlier vertices or none.
inline EdgeSet random_out_forest(std::size_t n, std::mt19937_64& rng, double root_prob = 0.15) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution root(root_prob);
  EdgeSet e;
  for (std::size_t k = 1; k < n; ++k) {
    if (root(rng)) continue;
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    e.insert({perm[pick(rng)], perm[k]});
  }
  return e;
}

inline EdgeSet random_out_tree(std::size_t n, std::mt19937_64& rng) { return random_out_forest(n, rng, 0.0); }

// Every vertex has in-degree <= 1 and following parents never loops.
inline bool is_out_forest(std::size_t n, const EdgeSet& e) {
  std::vector<long> parent(n, -1);
  for (auto [s, r] : e) {
    if (parent[r] != -1) return false;
    parent[r] = static_cast<long>(s);
  }
  for (std::size_t v = 0; v < n; ++v) {
    long u = static_cast<long>(v);
    for (std::size_t steps = 0; u != -1; ++steps) {
      if (steps > n) return false;
      u = parent[static_cast<std::size_t>(u)];
    }
  }
  return true;
}

// All sub-forests of `e` whose closure equals closure(e).
inline std::vector<EdgeSet> forests_generating(std::size_t n, const EdgeSet& e) {
  std::vector<std::pair<std::size_t, std::size_t>> list(e.begin(), e.end());
  const EdgeSet target = closure_by_composition(e);
  std::vector<EdgeSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << list.size()); ++mask) {
    EdgeSet sub;
    for (std::size_t k = 0; k < list.size(); ++k)
      if (mask >> k & 1) sub.insert(list[k]);
    if (is_out_forest(n, sub) && closure_by_composition(sub) == target) out.push_back(sub);
  }
  return out;
}

// Calls f(perm) for every permutation of 0..n-1; stops when f returns true.
inline bool any_permutation(std::size_t n, const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    if (f(p)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

inline std::uint64_t wt(const tafkit::DirectedGraph& g, std::size_t v) { return g.has_weights() ? g.weight(v) : 0; }

// Tries every vertex bijection.
inline bool brute_isomorphic(const tafkit::OutForest& a, const tafkit::OutForest& b, bool weighted) {
  const auto& ga = a.graph();
  const auto& gb = b.graph();
  const std::size_t n = ga.vertex_count();
  if (n != gb.vertex_count() || ga.edge_count() != gb.edge_count()) return false;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) ok = !weighted || wt(ga, v) == wt(gb, p[v]);
    for (auto [s, r] : ga.edges())
      if (ok && !gb.has_edge(p[s], p[r])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

inline tafkit::OutForest random_weighted_tree(std::size_t n, std::mt19937_64& rng, std::uint64_t max_w) {
  const auto e = random_out_tree(n, rng);
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) x = max_w ? rng() % (max_w + 1) : 0;
  return tafkit::OutForest::require_tree(make_graph(n, e).with_weights(w));
}

// Same tree with shuffled labels and vertex order.
inline tafkit::OutForest relabel(const tafkit::OutForest& t, std::mt19937_64& rng) {
  const auto& g = t.graph();
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  std::vector<std::string> ids(n);
  std::vector<std::uint64_t> w(n);
  for (std::size_t v = 0; v < n; ++v) {
    ids[p[v]] = "x" + g.id(v);
    w[p[v]] = wt(g, v);
  }
  std::vector<tafkit::DirectedGraph::Edge> e;
  for (auto [s, r] : g.edges()) e.emplace_back(p[s], p[r]);
  return tafkit::OutForest::require_tree(tafkit::DirectedGraph::from_indices(ids, e, w));
}

// Every map from strict pairs to 1..n that satisfies the Grading invariants.
inline std::vector<std::map<tafkit::UnitPair, std::uint32_t>> brute_gradings(const tafkit::DigraphAlgebra& a) {
  std::vector<tafkit::UnitPair> strict;
  for (const auto& p : a.pairs())
    if (!p.diagonal()) strict.push_back(p);
  const std::uint32_t top = static_cast<std::uint32_t>(a.dimension());
  std::vector<std::map<tafkit::UnitPair, std::uint32_t>> out;
  std::vector<std::uint32_t> val(strict.size(), 1);
  while (true) {
    std::map<tafkit::UnitPair, std::uint32_t> g;
    for (std::size_t k = 0; k < strict.size(); ++k) g[strict[k]] = val[k];
    auto grade = [&](std::size_t i, std::size_t j) { return i == j ? 0u : g.at({i, j}); };
    bool ok = true;
    for (const auto& p : a.pairs())
      for (const auto& q : a.pairs())
        if (ok && p.source == q.range && grade(p.range, q.source) != grade(p.range, p.source) + grade(q.range, q.source))
          ok = false;
    // coherence: grade k >= 2 must split through some w into grade-1 and grade k-1
    for (const auto& p : strict)
      if (ok && g[p] >= 2) {
        bool split = false;
        for (std::size_t w = 0; w < a.dimension(); ++w)
          if (w != p.range && w != p.source && a.contains(p.range, w) && a.contains(w, p.source) &&
              grade(p.range, w) == 1)
            split = true;
        ok = split;
      }
    if (ok) out.push_back(g);
    std::size_t k = 0;
    while (k < val.size() && val[k] == top) val[k++] = 1;
    if (k == val.size()) break;
    ++val[k];
  }
  return out;
}


// Contracts non-root vertices with one child; a kept vertex absorbs 1 + w
// for every contracted ancestor between it and its kept parent.
inline tafkit::OutForest brute_reduce(const tafkit::OutForest& t) {
  const auto& g = t.graph();
  const std::size_t n = g.vertex_count();
  std::vector<long> parent(n, -1);
  std::vector<std::size_t> kids(n, 0);
  for (auto [s, r] : g.edges()) {
    parent[r] = static_cast<long>(s);
    ++kids[s];
  }
  std::vector<long> index(n, -1);
  std::vector<std::string> ids;
  std::vector<std::uint64_t> w;
  for (std::size_t v = 0; v < n; ++v)
    if (parent[v] == -1 || kids[v] != 1) {
      index[v] = static_cast<long>(ids.size());
      ids.push_back(g.id(v));
      w.push_back(wt(g, v));
    }
  std::vector<tafkit::DirectedGraph::Edge> e;
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == -1 || parent[v] == -1) continue;
    auto u = static_cast<std::size_t>(parent[v]);
    while (index[u] == -1) {
      w[index[v]] += 1 + wt(g, u);
      u = static_cast<std::size_t>(parent[u]);
    }
    e.emplace_back(index[u], index[v]);
  }
  return tafkit::OutForest::require_tree(tafkit::DirectedGraph::from_indices(ids, e, w));
}

}  // namespace oracle
