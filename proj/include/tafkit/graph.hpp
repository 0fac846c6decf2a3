#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tafkit/kernels.hpp"

namespace tafkit {

/// Finite irreflexive digraph with opaque string vertex ids.
///
/// Vertices keep declaration order, which is the order used for every
/// canonical output. Edges are (source, range) index pairs, stored sorted.
class DirectedGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  DirectedGraph() = default;
  DirectedGraph(std::vector<std::string> vertices,
                const std::vector<std::pair<std::string, std::string>>& edges,
                std::vector<std::uint64_t> weights = {});

  static DirectedGraph from_indices(std::vector<std::string> vertices, std::vector<Edge> edges,
                                    std::vector<std::uint64_t> weights = {});

  std::size_t vertex_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return ids_; }
  const std::string& id(std::size_t v) const { return ids_.at(v); }
  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t index(std::string_view id) const;  // throws GraphError

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(std::size_t source, std::size_t range) const;
  std::span<const std::size_t> successors(std::size_t v) const { return out_.at(v); }
  std::span<const std::size_t> predecessors(std::size_t v) const { return in_.at(v); }

  std::uint64_t weight(std::size_t v) const { return weights_.at(v); }
  const std::vector<std::uint64_t>& weights() const noexcept { return weights_; }
  bool has_weights() const noexcept;

  DirectedGraph with_weights(std::vector<std::uint64_t> weights) const;
  DirectedGraph without_weights() const { return with_weights({}); }

  // reach(range, source) set for each edge source -> range.
  BitMatrix adjacency() const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.ids_ == b.ids_ && a.edges_ == b.edges_ && a.weights_ == b.weights_;
  }

 private:
  void build();

  std::vector<std::string> ids_;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> weights_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

/// Finite disjoint union of out-trees.
class OutForest {
 public:
  const DirectedGraph& graph() const noexcept { return graph_; }
  const std::vector<std::size_t>& roots() const noexcept { return roots_; }
  std::optional<std::size_t> parent(std::size_t v) const {
    return parent_.at(v) == kNoParent ? std::nullopt : std::optional<std::size_t>(parent_[v]);
  }
  std::span<const std::size_t> children(std::size_t v) const { return graph_.successors(v); }
  std::size_t depth(std::size_t v) const { return depth_.at(v); }
  std::size_t root_of(std::size_t v) const { return root_of_.at(v); }
  bool is_tree() const noexcept { return roots_.size() == 1; }
  std::size_t root() const;  // throws NotATree unless exactly one root
  bool is_ancestor(std::size_t ancestor, std::size_t v) const;

  // Vertices of each tree component, listed in declaration order, one list per root.
  std::vector<std::vector<std::size_t>> components() const;

  // Throws NotATree when `g` is not an out-forest.
  static OutForest require(const DirectedGraph& g);
  static OutForest require_tree(const DirectedGraph& g);

  friend bool operator==(const OutForest& a, const OutForest& b) { return a.graph_ == b.graph_; }

 private:
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);
  friend struct ForestBuilder;

  DirectedGraph graph_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> root_of_;
};

struct ForestRejection {
  enum class Kind { DoubleReceiver, Cycle };
  Kind kind;
  // DoubleReceiver: {vertex, first source, second source}; Cycle: the cycle's vertices.
  std::vector<std::size_t> witness;
};

std::variant<OutForest, ForestRejection> recognize_out_forest(const DirectedGraph& g);

/// Smallest transitively closed supergraph. Throws CyclicGraph.
DirectedGraph transitive_completion(const DirectedGraph& g);

/// Edges u -> v with no intermediate w such that u -> w and w -> v.
DirectedGraph covering_graph(const DirectedGraph& g);

bool is_acyclic(const DirectedGraph& g);

struct CompletionCheck {
  bool holds = false;
  std::optional<OutForest> forest;
};

CompletionCheck is_transitive_completion_of_out_forest(const DirectedGraph& g);

}  // namespace tafkit
