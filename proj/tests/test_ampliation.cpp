#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tafkit/ampliation.hpp"
#include "tafkit/errors.hpp"

using namespace tafkit;

namespace {

OutForest lambda() { return OutForest::require(DirectedGraph({"1", "2", "3"}, {{"1", "2"}, {"1", "3"}})); }

OutForest chain(std::size_t n) {
  oracle::EdgeSet e;
  for (std::size_t v = 0; v + 1 < n; ++v) e.insert({v, v + 1});
  return OutForest::require(oracle::make_graph(n, e));
}

std::set<std::pair<std::string, std::string>> named_edges(const DirectedGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [s, r] : g.edges()) out.insert({g.id(s), g.id(r)});
  return out;
}

}  // namespace

TEST_CASE("ampliation of the Lambda graph matches the figure") {
  const auto h = ampliate(lambda(), 2);
  CHECK(h.graph().vertices() == std::vector<std::string>{"(1,1)", "(1,2)", "(2,1)", "(2,2)", "(3,1)", "(3,2)"});
  const std::set<std::pair<std::string, std::string>> want{{"(1,1)", "(1,2)"},
                                                           {"(1,2)", "(2,1)"},
                                                           {"(1,2)", "(3,1)"},
                                                           {"(2,1)", "(2,2)"},
                                                           {"(3,1)", "(3,2)"}};
  CHECK(named_edges(h.graph()) == want);
  CHECK(h.is_tree());
  CHECK(h.graph().id(h.root()) == "(1,1)");
}

TEST_CASE("trivial and degenerate ampliations") {
  const auto g = lambda();
  const auto h = ampliate(g, 1);
  CHECK(oracle::edge_set(h.graph()) == oracle::edge_set(g.graph()));
  CHECK(h.graph().vertex_count() == 3);

  const auto single = OutForest::require(DirectedGraph({"v"}, {}));
  const auto c = ampliate(single, 3);
  CHECK(oracle::edge_set(c.graph()) == oracle::EdgeSet{{0, 1}, {1, 2}});

  CHECK_THROWS_AS(ampliate(g, 0), GraphError);
  const auto two = OutForest::require(DirectedGraph({"a", "b"}, {}));
  CHECK_THROWS_AS(ampliate(two, 2), NotATree);
}

TEST_CASE("ampliation counts and tree property on random trees") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 9, l = 1 + rng() % 4;
    const auto g = OutForest::require(oracle::make_graph(n, oracle::random_out_tree(n, rng)));
    const auto h = ampliate(g, l);
    CHECK(h.graph().vertex_count() == l * n);
    CHECK(h.graph().edge_count() == l * n - 1);
    CHECK(oracle::is_out_forest(l * n, oracle::edge_set(h.graph())));
    CHECK(h.is_tree());
    CHECK(inclusion_identity_holds(g, l));
  }
}

TEST_CASE("refinement images land on two-term sums in the ampliated algebra") {
  const auto g = lambda();
  const auto h = ampliate(g, 2);
  const auto src = DigraphAlgebra::from_graph(g.graph());
  const auto tgt = DigraphAlgebra::from_graph(h.graph());
  const auto e = refinement_embedding(src, 2, tgt);
  // rows (i-1)l+s: e_21 -> e_{(2,1)(1,1)} + e_{(2,2)(1,2)}
  const auto closure = oracle::closure_by_composition(oracle::edge_set(h.graph()));
  for (auto [i, j] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}, {2, 0}}) {
    const auto im = e.image({i, j});
    REQUIRE(im.size() == 2);
    for (std::size_t s = 0; s < 2; ++s) {
      CHECK(im[s] == UnitPair{i * 2 + s, j * 2 + s});
      CHECK(closure.count({j * 2 + s, i * 2 + s}));
    }
  }
}

TEST_CASE("tree-refinement towers") {
  const TreeRefinementSpec one(lambda(), {});
  const auto t1 = build_tree_refinement_tower(one, 1);
  CHECK(t1.size() == 1);
  CHECK(t1.level(0) == DigraphAlgebra::from_graph(lambda().graph()));
  CHECK_THROWS_AS(build_tree_refinement_tower(one, 2), TowerError);

  const TreeRefinementSpec two(lambda(), {2});
  const auto t2 = build_tree_refinement_tower(two, 2);
  REQUIRE(t2.size() == 2);
  CHECK(t2.level(1).dimension() == 6);
  CHECK(t2.map(0).multiplicities() == std::vector<std::vector<std::size_t>>{{2}});

  const TreeRefinementSpec tail(lambda(), {3}, 2);
  const auto tt = build_tree_refinement_tower(tail, 1);
  CHECK(tt.size() == 2);
  CHECK(std::holds_alternative<TreeRefinementRule>(tt.rule()));
  const auto deep = tt.extended(4);
  REQUIRE(deep.size() == 4);
  CHECK(deep.level(3).dimension() == 3 * 3 * 2 * 2);
  const auto seq = ampliation_sequence(tail, 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(deep.level(k) == DigraphAlgebra::from_graph(seq[k].graph()));

  CHECK_THROWS_AS(TreeRefinementSpec(lambda(), {0}), TowerError);
  CHECK_THROWS_AS(TreeRefinementSpec(OutForest::require(DirectedGraph({"a", "b"}, {})), {2}), NotATree);
}

TEST_CASE("a chain base gives a total order at every level") {
  // chain 1 -> 2 -> ... puts e_{ij} at i >= j; ampliation keeps the order total
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto t = build_tree_refinement_tower(TreeRefinementSpec(chain(n), {2, 3}), 3);
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t N = t.level(k).dimension();
      BitMatrix rel(N);
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j <= i; ++j) rel.set(i, j);
      CHECK(t.level(k) == DigraphAlgebra::from_relation({N}, rel));
    }
    CHECK(t.level(2).dimension() == 6 * n);
  }
}
