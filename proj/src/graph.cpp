#include "tafkit/graph.hpp"

#include <algorithm>
#include <deque>

#include "tafkit/errors.hpp"

namespace tafkit {

DirectedGraph::DirectedGraph(std::vector<std::string> vertices,
                             const std::vector<std::pair<std::string, std::string>>& edges,
                             std::vector<std::uint64_t> weights)
    : ids_(std::move(vertices)), weights_(std::move(weights)) {
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (!index_.emplace(ids_[i], i).second) throw GraphError("duplicate vertex id '" + ids_[i] + "'");
  edges_.reserve(edges.size());
  for (const auto& [s, r] : edges) {
    auto si = index_.find(s), ri = index_.find(r);
    if (si == index_.end()) throw GraphError("edge source '" + s + "' is not a declared vertex");
    if (ri == index_.end()) throw GraphError("edge range '" + r + "' is not a declared vertex");
    edges_.emplace_back(si->second, ri->second);
  }
  build();
}

DirectedGraph DirectedGraph::from_indices(std::vector<std::string> vertices, std::vector<Edge> edges,
                                          std::vector<std::uint64_t> weights) {
  DirectedGraph g;
  g.ids_ = std::move(vertices);
  g.weights_ = std::move(weights);
  g.index_.reserve(g.ids_.size());
  for (std::size_t i = 0; i < g.ids_.size(); ++i)
    if (!g.index_.emplace(g.ids_[i], i).second)
      throw GraphError("duplicate vertex id '" + g.ids_[i] + "'");
  for (const auto& [s, r] : edges)
    if (s >= g.ids_.size() || r >= g.ids_.size()) throw GraphError("edge endpoint out of range");
  g.edges_ = std::move(edges);
  g.build();
  return g;
}

void DirectedGraph::build() {
  const std::size_t n = ids_.size();
  if (weights_.empty()) weights_.assign(n, 0);
  if (weights_.size() != n) throw GraphError("weight list length differs from vertex count");
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw GraphError("duplicate edge");
  out_.assign(n, {});
  in_.assign(n, {});
  for (const auto& [s, r] : edges_) {
    if (s == r) throw GraphError("self-loop at vertex '" + ids_[s] + "'");
    out_[s].push_back(r);
    in_[r].push_back(s);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

std::optional<std::size_t> DirectedGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t DirectedGraph::index(std::string_view id) const {
  auto v = find(id);
  if (!v) throw GraphError("unknown vertex '" + std::string(id) + "'");
  return *v;
}

bool DirectedGraph::has_edge(std::size_t source, std::size_t range) const {
  const auto& succ = out_.at(source);
  return std::binary_search(succ.begin(), succ.end(), range);
}

bool DirectedGraph::has_weights() const noexcept {
  return std::any_of(weights_.begin(), weights_.end(), [](auto w) { return w != 0; });
}

DirectedGraph DirectedGraph::with_weights(std::vector<std::uint64_t> weights) const {
  return from_indices(ids_, edges_, std::move(weights));
}

BitMatrix DirectedGraph::adjacency() const {
  BitMatrix m(vertex_count());
  for (const auto& [s, r] : edges_) m.set(r, s);
  return m;
}

std::size_t OutForest::root() const {
  if (roots_.size() != 1)
    throw NotATree("out-forest has " + std::to_string(roots_.size()) + " roots, expected 1");
  return roots_.front();
}

bool OutForest::is_ancestor(std::size_t ancestor, std::size_t v) const {
  while (true) {
    if (v == ancestor) return true;
    if (parent_.at(v) == kNoParent) return false;
    v = parent_[v];
  }
}

std::vector<std::vector<std::size_t>> OutForest::components() const {
  std::vector<std::vector<std::size_t>> out(roots_.size());
  for (std::size_t v = 0; v < graph_.vertex_count(); ++v) {
    auto it = std::find(roots_.begin(), roots_.end(), root_of_[v]);
    out[static_cast<std::size_t>(it - roots_.begin())].push_back(v);
  }
  return out;
}

struct ForestBuilder {
  static std::variant<OutForest, ForestRejection> build(const DirectedGraph& g) {
    const std::size_t n = g.vertex_count();
    OutForest f;
    f.parent_.assign(n, OutForest::kNoParent);
    for (std::size_t v = 0; v < n; ++v) {
      const auto preds = g.predecessors(v);
      if (preds.size() >= 2)
        return ForestRejection{ForestRejection::Kind::DoubleReceiver, {v, preds[0], preds[1]}};
      if (preds.size() == 1) f.parent_[v] = preds[0];
    }
    // In-degree <= 1 everywhere, so any undirected cycle is a directed one
    // and shows up as a parent chain that never reaches a root.
    f.depth_.assign(n, 0);
    f.root_of_.assign(n, OutForest::kNoParent);
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> stack;
      std::size_t u = v;
      while (state[u] == 0 && f.parent_[u] != OutForest::kNoParent) {
        state[u] = 1;
        stack.push_back(u);
        u = f.parent_[u];
      }
      if (state[u] == 1) {
        std::vector<std::size_t> cycle(std::find(stack.begin(), stack.end(), u), stack.end());
        std::sort(cycle.begin(), cycle.end());
        return ForestRejection{ForestRejection::Kind::Cycle, std::move(cycle)};
      }
      if (state[u] == 0) {  // u is a root
        state[u] = 2;
        f.root_of_[u] = u;
        f.depth_[u] = 0;
      }
      while (!stack.empty()) {
        const std::size_t w = stack.back();
        stack.pop_back();
        f.root_of_[w] = f.root_of_[f.parent_[w]];
        f.depth_[w] = f.depth_[f.parent_[w]] + 1;
        state[w] = 2;
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (f.parent_[v] == OutForest::kNoParent) f.roots_.push_back(v);
    f.graph_ = g;
    return f;
  }
};

std::variant<OutForest, ForestRejection> recognize_out_forest(const DirectedGraph& g) {
  return ForestBuilder::build(g);
}

OutForest OutForest::require(const DirectedGraph& g) {
  auto r = recognize_out_forest(g);
  if (auto* f = std::get_if<OutForest>(&r)) return std::move(*f);
  const auto& rej = std::get<ForestRejection>(r);
  if (rej.kind == ForestRejection::Kind::DoubleReceiver)
    throw NotATree("vertex '" + g.id(rej.witness[0]) + "' receives more than one edge");
  throw NotATree("graph contains a cycle through '" + g.id(rej.witness[0]) + "'");
}

OutForest OutForest::require_tree(const DirectedGraph& g) {
  OutForest f = require(g);
  if (!f.is_tree()) throw NotATree("expected a single out-tree, found " + std::to_string(f.roots().size()) + " roots");
  return f;
}

bool is_acyclic(const DirectedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> indeg(n);
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if ((indeg[v] = g.predecessors(v).size()) == 0) ready.push_back(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    ++seen;
    for (std::size_t w : g.successors(v))
      if (--indeg[w] == 0) ready.push_back(w);
  }
  return seen == n;
}

DirectedGraph transitive_completion(const DirectedGraph& g) {
  if (!is_acyclic(g)) throw CyclicGraph("transitive completion requires an acyclic graph");
  BitMatrix m = g.adjacency();
  kernels::transitive_closure(m);
  std::vector<DirectedGraph::Edge> edges;
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t s : m.row_indices(r)) edges.emplace_back(s, r);
  return DirectedGraph::from_indices(g.vertices(), std::move(edges), g.weights());
}

DirectedGraph covering_graph(const DirectedGraph& g) {
  const BitMatrix adj = g.adjacency();
  std::vector<DirectedGraph::Edge> edges;
  for (const auto& [s, r] : g.edges()) {
    bool factors = false;
    for (std::size_t w : g.successors(s))
      if (w != r && adj.get(r, w)) {
        factors = true;
        break;
      }
    if (!factors) edges.emplace_back(s, r);
  }
  return DirectedGraph::from_indices(g.vertices(), std::move(edges), g.weights());
}

CompletionCheck is_transitive_completion_of_out_forest(const DirectedGraph& g) {
  if (!is_acyclic(g)) return {};
  auto forest = recognize_out_forest(covering_graph(g));
  auto* f = std::get_if<OutForest>(&forest);
  if (f == nullptr) return {};
  if (transitive_completion(f->graph()).edges() != g.edges()) return {};
  return {true, std::move(*f)};
}

}  // namespace tafkit
