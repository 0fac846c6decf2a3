#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tafkit/graph.hpp"
#include "tafkit/tower.hpp"

namespace tafkit {

/// Base out-tree G with |G^0| = k_1 and multiplicities l_n = k_{n+1}/k_n.
/// An optional stationary tail repeats forever after the listed ones.
struct TreeRefinementSpec {
  OutForest base;
  std::vector<std::size_t> multiplicities;
  std::optional<std::size_t> tail;

  TreeRefinementSpec(OutForest base, std::vector<std::size_t> multiplicities,
                     std::optional<std::size_t> tail = std::nullopt);
  // l_n for step n = 0, 1, ...; nullopt once the sequence runs out.
  std::optional<std::size_t> multiplicity(std::size_t step) const;
};

// Vertices "(v,s)" in base order then s; chain edges (v,s) -> (v,s+1) and
// (j,l) -> (i,1) for each base edge j -> i. Throws NotATree.
OutForest ampliate(const OutForest& g, std::size_t l);

// Checks the factorization identity of e_{(i,s)(j,s)} through the chain
// (j,s) -> ... -> (j,l) -> (i,1) -> ... -> (i,s) in the ampliated tree, for
// every base edge j -> i and every s.
bool inclusion_identity_holds(const OutForest& g, std::size_t l);

// Levels are the completion algebras of G_1 .. G_depth joined by refinement
// embeddings. A tail becomes the tower's TreeRefinement rule.
Tower build_tree_refinement_tower(const TreeRefinementSpec& spec, std::size_t depth);

// The trees G_1 .. G_depth themselves.
std::vector<OutForest> ampliation_sequence(const TreeRefinementSpec& spec, std::size_t depth);

}  // namespace tafkit
