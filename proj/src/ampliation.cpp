#include "tafkit/ampliation.hpp"

#include <algorithm>

#include "tafkit/errors.hpp"

namespace tafkit {

TreeRefinementSpec::TreeRefinementSpec(OutForest b, std::vector<std::size_t> m, std::optional<std::size_t> t)
    : base(std::move(b)), multiplicities(std::move(m)), tail(t) {
  if (!base.is_tree()) throw NotATree("tree-refinement base must be a single out-tree");
  for (auto l : multiplicities)
    if (l == 0) throw TowerError("multiplicities must be positive");
  if (tail && *tail == 0) throw TowerError("tail multiplicity must be positive");
}

std::optional<std::size_t> TreeRefinementSpec::multiplicity(std::size_t step) const {
  if (step < multiplicities.size()) return multiplicities[step];
  return tail;
}

OutForest ampliate(const OutForest& g, std::size_t l) {
  if (!g.is_tree()) throw NotATree("ampliation needs a single out-tree");
  if (l == 0) throw GraphError("ampliation multiplicity must be positive");
  const DirectedGraph& base = g.graph();
  const std::size_t n = base.vertex_count();
  std::vector<std::string> ids;
  ids.reserve(n * l);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t s = 1; s <= l; ++s) ids.push_back("(" + base.id(v) + "," + std::to_string(s) + ")");
  auto row = [l](std::size_t v, std::size_t s) { return v * l + (s - 1); };
  std::vector<DirectedGraph::Edge> edges;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t s = 1; s < l; ++s) edges.emplace_back(row(v, s), row(v, s + 1));
  for (const auto& [j, i] : base.edges()) edges.emplace_back(row(j, l), row(i, 1));
  return OutForest::require_tree(DirectedGraph::from_indices(std::move(ids), std::move(edges)));
}

bool inclusion_identity_holds(const OutForest& g, std::size_t l) {
  const OutForest h = ampliate(g, l);
  const DigraphAlgebra a = DigraphAlgebra::from_graph(h.graph());
  const auto& edges = h.graph();
  auto row = [l](std::size_t v, std::size_t s) { return v * l + (s - 1); };
  for (const auto& [j, i] : g.graph().edges()) {
    for (std::size_t s = 1; s <= l; ++s) {
      // Walk source to range, composing one generator at a time.
      std::vector<std::size_t> path;
      for (std::size_t w = s; w <= l; ++w) path.push_back(row(j, w));
      for (std::size_t z = 1; z <= s; ++z) path.push_back(row(i, z));
      std::size_t composed_range = path.front();
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        if (!edges.has_edge(path[k], path[k + 1])) return false;
        if (!a.contains(path[k + 1], path.front())) return false;
        composed_range = path[k + 1];
      }
      // The product is e_{(i,s)(j,s)}, the s-th summand of sigma(e_ij).
      if (composed_range != row(i, s) || !a.contains(row(i, s), row(j, s))) return false;
    }
  }
  return true;
}

std::vector<OutForest> ampliation_sequence(const TreeRefinementSpec& spec, std::size_t depth) {
  if (depth == 0) throw TowerError("depth must be at least 1");
  std::vector<OutForest> trees{spec.base};
  for (std::size_t n = 1; n < depth; ++n) {
    const auto l = spec.multiplicity(n - 1);
    if (!l)
      throw TowerError("multiplicity sequence has " + std::to_string(spec.multiplicities.size()) +
                       " entries and no tail; cannot build " + std::to_string(depth) + " levels");
    trees.push_back(ampliate(trees.back(), *l));
  }
  return trees;
}

Tower build_tree_refinement_tower(const TreeRefinementSpec& spec, std::size_t depth) {
  // With a tail, keep building until the listed multiplicities are used up
  // so that the stationary rule describes every further step.
  if (spec.tail) depth = std::max(depth, spec.multiplicities.size() + 1);
  const auto trees = ampliation_sequence(spec, depth);
  std::vector<DigraphAlgebra> levels;
  for (const auto& t : trees) levels.push_back(DigraphAlgebra::from_graph(t.graph()));
  std::vector<RegularEmbedding> maps;
  for (std::size_t n = 0; n + 1 < trees.size(); ++n) {
    const std::size_t l = *spec.multiplicity(n);
    if (!inclusion_identity_holds(trees[n], l))
      throw TowerError("refinement image leaves the ampliated tree algebra at level " + std::to_string(n + 1));
    maps.push_back(refinement_embedding(levels[n], l, levels[n + 1]));
  }
  Rule rule;
  if (spec.tail) rule = TreeRefinementRule{*spec.tail};
  return Tower(std::move(levels), std::move(maps), rule);
}

}  // namespace tafkit
