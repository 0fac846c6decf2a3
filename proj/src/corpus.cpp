#include "tafkit/corpus.hpp"

namespace tafkit::corpus {

Tower tuhf() { return Tower({DigraphAlgebra::upper_triangular(3)}, {}, BlockRule{tuhf_pattern()}); }

Tower standard(std::size_t n, std::size_t m) { return Tower({DigraphAlgebra::upper_triangular(n)}, {}, StandardRule{m}); }

Tower refinement(std::size_t n, std::size_t l) {
  return Tower({DigraphAlgebra::upper_triangular(n)}, {}, RefinementRule{l});
}

Tower nest(std::size_t n) { return Tower({DigraphAlgebra::upper_triangular(n)}, {}, NestRule{}); }

namespace {

DigraphAlgebra triangular_blocks(std::size_t n, std::size_t copies) {
  BitMatrix rel(n * copies);
  for (std::size_t b = 0; b < copies; ++b)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) rel.set(b * n + i, b * n + j);
  return DigraphAlgebra::from_relation(std::vector<std::size_t>(copies, n), std::move(rel));
}

}  // namespace

Tower doubling(std::size_t n, std::size_t levels) {
  std::vector<DigraphAlgebra> lv;
  std::vector<RegularEmbedding> maps;
  for (std::size_t k = 0; k < levels; ++k) lv.push_back(triangular_blocks(n, std::size_t{1} << k));
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    // block b goes to blocks b and b + 2^k
    const std::size_t src = lv[k].dimension();
    std::vector<RegularEmbedding::Copy> copies(2, RegularEmbedding::Copy(src));
    for (std::size_t u = 0; u < src; ++u) {
      copies[0][u] = u;
      copies[1][u] = u + src;
    }
    maps.push_back(RegularEmbedding::from_copies(lv[k], lv[k + 1], copies));
  }
  return Tower(std::move(lv), std::move(maps));
}

OutForest lambda() { return OutForest::require(DirectedGraph({"1", "2", "3"}, {{"1", "2"}, {"1", "3"}})); }

OutForest chain(std::size_t n) {
  std::vector<std::string> ids;
  std::vector<DirectedGraph::Edge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    ids.push_back(std::to_string(v + 1));
    if (v + 1 < n) edges.emplace_back(v, v + 1);
  }
  return OutForest::require(DirectedGraph::from_indices(std::move(ids), std::move(edges)));
}

TreeRefinementSpec stationary(OutForest base, std::size_t l) { return TreeRefinementSpec(std::move(base), {}, l); }

}  // namespace tafkit::corpus
