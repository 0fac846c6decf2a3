#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tafkit/ampliation.hpp"
#include "tafkit/graph.hpp"

namespace tafkit {

// Weighted trees are OutForest trees whose graph carries vertex weights.

// Contracts every non-root vertex of out-degree 1. A kept vertex absorbs
// 1 + weight of each contracted vertex between it and its kept parent.
// The root is always kept. Throws NotATree.
OutForest reduce(const OutForest& g);

// Sinks 0, otherwise 1 + the largest child height.
std::vector<std::size_t> heights(const OutForest& t);

struct LevelEntry {
  std::size_t root;  // subtree root vertex
  std::string code;  // canonical code of the subtree
  friend bool operator==(const LevelEntry&, const LevelEntry&) = default;
};
// L_k: the maximal subtrees spanned by vertices of height <= k, sorted by
// code, for k = 0 .. height of the root.
std::vector<std::vector<LevelEntry>> level_lists(const OutForest& t);

// "(w c1 c2 ...)" with the children's codes sorted.
std::string canonical_code(const OutForest& t, std::size_t v);
std::string canonical_code(const OutForest& t);

// Level-by-level integer relabelling (classic AHU), weights included.
bool ahu_equivalent(const OutForest& a, const OutForest& b);

// Weight-preserving isomorphism of the reductions.
bool trees_isomorphic(const OutForest& g, const OutForest& h);
// Isomorphism of the reductions as unweighted rooted trees.
bool same_reduced_shape(const OutForest& g, const OutForest& h);
// A weight-preserving vertex bijection a -> b as index pairs, if one exists.
std::optional<std::vector<std::pair<std::size_t, std::size_t>>> tree_isomorphism(const OutForest& a,
                                                                                 const OutForest& b);

// Unweighted shape of the tree once every out-degree-1 vertex, the root
// included, is contracted. Ampliation leaves it unchanged.
std::string branch_shape(const OutForest& g);

struct Supernatural {
  std::map<std::uint64_t, std::uint64_t> finite;  // prime -> exponent
  std::set<std::uint64_t> infinite;               // primes with exponent infinity
  friend bool operator==(const Supernatural&, const Supernatural&) = default;
};
std::string to_string(const Supernatural& s);
Supernatural supernatural(const std::vector<std::size_t>& multiplicities, std::optional<std::size_t> tail);
// Includes k_1 = |G^0| of the base tree.
Supernatural supernatural(const TreeRefinementSpec& spec);

enum class Classification { Equivalent, Distinct, Undetermined };
std::string classification_name(Classification c);

struct EquivalenceWitness {
  std::size_t ampliations_a = 0;
  std::size_t ampliations_b = 0;
  std::vector<std::pair<std::string, std::string>> bijection;  // G_a vertex -> G_b vertex
};

struct ClassificationResult {
  Classification verdict;
  std::optional<EquivalenceWitness> witness;
  std::string reason;
};

ClassificationResult classify_tree_refinement(const TreeRefinementSpec& a, const TreeRefinementSpec& b,
                                              std::size_t ampliation_bound);

}  // namespace tafkit
