#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tafkit/embedding.hpp"
#include "tafkit/errors.hpp"

using namespace tafkit;

namespace {

UnitPair up(std::size_t i, std::size_t j) { return {i - 1, j - 1}; }

std::vector<UnitPair> img(const RegularEmbedding& e, std::size_t i, std::size_t j) {
  const auto s = e.image(up(i, j));
  return {s.begin(), s.end()};
}

OutForest tree(std::vector<std::string> v, std::vector<std::pair<std::string, std::string>> e) {
  return OutForest::require(DirectedGraph(std::move(v), e));
}

}  // namespace

TEST_CASE("standard embedding formula") {
  CHECK(img(standard_embedding(2, 2), 1, 2) == std::vector<UnitPair>{up(1, 2), up(3, 4)});
  CHECK(standard_embedding(4, 1) == RegularEmbedding::identity(DigraphAlgebra::upper_triangular(4)));
  CHECK(img(standard_embedding(3, 3), 1, 3) == std::vector<UnitPair>{up(1, 3), up(4, 6), up(7, 9)});
  // direct evaluation of sum_k e_{i+kn, j+kn}
  const auto e = standard_embedding(4, 3);
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t j = i; j <= 4; ++j) {
      std::vector<UnitPair> want;
      for (std::size_t k = 0; k < 3; ++k) want.push_back(up(i + 4 * k, j + 4 * k));
      CHECK(img(e, i, j) == want);
    }
  CHECK(e.multiplicities() == std::vector<std::vector<std::size_t>>{{3}});
}

TEST_CASE("refinement embedding formula") {
  CHECK(img(refinement_embedding(2, 2), 1, 2) == std::vector<UnitPair>{up(1, 3), up(2, 4)});
  CHECK(refinement_embedding(3, 1) == RegularEmbedding::identity(DigraphAlgebra::upper_triangular(3)));
  CHECK(img(refinement_embedding(3, 2), 1, 3) == std::vector<UnitPair>{up(1, 5), up(2, 6)});
  const auto e = refinement_embedding(3, 4);
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = i; j <= 3; ++j) {
      std::vector<UnitPair> want;
      for (std::size_t s = 1; s <= 4; ++s) want.push_back(up((i - 1) * 4 + s, (j - 1) * 4 + s));
      CHECK(img(e, i, j) == want);
    }
}

TEST_CASE("validation rejects broken images") {
  const auto t2 = DigraphAlgebra::upper_triangular(2);
  const auto t4 = DigraphAlgebra::upper_triangular(4);
  // overlapping diagonal images
  CHECK_THROWS_AS(RegularEmbedding(t2, t4, {{up(1, 1)}, {up(1, 2)}, {up(1, 1)}}), EmbeddingError);
  // leaves the target relation
  CHECK_THROWS_AS(RegularEmbedding(t2, t4, {{up(2, 2)}, {up(2, 1)}, {up(1, 1)}}), EmbeddingError);
  // range of e12 image not over diag image of 1
  CHECK_THROWS_AS(RegularEmbedding(t2, t4, {{up(1, 1)}, {up(2, 3)}, {up(3, 3)}}), EmbeddingError);
  // empty image
  CHECK_THROWS_AS(RegularEmbedding(t2, t4, {{up(1, 1)}, {}, {up(3, 3)}}), EmbeddingError);
  // composition failure: e12, e23 composing to the wrong e13 summand
  const auto t3 = DigraphAlgebra::upper_triangular(3);
  const auto t6 = DigraphAlgebra::upper_triangular(6);
  std::vector<std::vector<UnitPair>> im;
  for (const auto& p : t3.pairs()) {
    if (p == up(1, 3)) im.push_back({up(1, 6), up(4, 3)});
    else im.push_back({{p.range, p.source}, {p.range + 3, p.source + 3}});
  }
  CHECK_THROWS_AS(RegularEmbedding(t3, t6, im), EmbeddingError);
  im.clear();
  for (const auto& p : t3.pairs()) im.push_back({{p.range, p.source}, {p.range + 3, p.source + 3}});
  CHECK_NOTHROW(RegularEmbedding(t3, t6, im));
}

TEST_CASE("composition") {
  const auto r = refinement_embedding(4, 2);
  CHECK(compose(RegularEmbedding::identity(r.source()), r) == r);
  const auto rr = compose(refinement_embedding(2, 2), refinement_embedding(4, 2));
  CHECK(rr.source().dimension() == 2);
  CHECK(rr.target().dimension() == 8);
  CHECK(rr.multiplicity(0) == 4);
  CHECK(rr == refinement_embedding(2, 4));
  const auto ss = compose(standard_embedding(2, 2), standard_embedding(4, 2));
  CHECK(ss.image(up(1, 2)).size() == 4);
  CHECK(img(ss, 1, 2) == std::vector<UnitPair>{up(1, 2), up(3, 4), up(5, 6), up(7, 8)});
  CHECK_THROWS_AS(compose(standard_embedding(2, 2), standard_embedding(3, 2)), MismatchedLevels);
}

TEST_CASE("random composable pairs compose into the image of the product") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4, m = 1 + trial % 3;
    const auto e = trial % 2 ? standard_embedding(n, m) : refinement_embedding(n, m);
    const auto& a = e.source();
    for (int k = 0; k < 30; ++k) {
      std::uniform_int_distribution<std::size_t> pick(0, a.pairs().size() - 1);
      const auto p = a.pairs()[pick(rng)];
      for (std::size_t c = 0; c < a.dimension(); ++c) {
        if (!a.contains(p.source, c)) continue;
        std::set<UnitPair> prod;
        for (const auto& x : e.image(p))
          for (const auto& y : e.image({p.source, c}))
            if (x.source == y.range) prod.insert({x.range, y.source});
        const auto want = e.image({p.range, c});
        CHECK(prod == std::set<UnitPair>(want.begin(), want.end()));
      }
    }
  }
}

TEST_CASE("pushforward: image pairs form blown-up copies of the source relation") {
  const auto e = refinement_embedding(3, 2);
  // each copy s restricted to image pairs is an order isomorphism onto its image
  for (std::size_t s = 0; s < 2; ++s) {
    std::set<UnitPair> imgs;
    for (const auto& p : e.source().pairs()) imgs.insert(e.image(p)[s]);
    CHECK(imgs.size() == e.source().pairs().size());
    for (const auto& q : imgs) CHECK(e.target().contains(q));
  }
}

TEST_CASE("block embedding reproduces the TUHF block matrix") {
  const auto t3 = DigraphAlgebra::upper_triangular(3);
  const auto t9 = DigraphAlgebra::upper_triangular(9);
  const auto e = block_embedding(t3, tuhf_pattern(), t9);
  CHECK(img(e, 1, 2) == std::vector<UnitPair>{up(1, 2), up(3, 4), up(7, 8)});
  CHECK(img(e, 1, 3) == std::vector<UnitPair>{up(1, 5), up(3, 6), up(7, 9)});
  CHECK(img(e, 2, 3) == std::vector<UnitPair>{up(2, 5), up(4, 6), up(8, 9)});
  CHECK(e.diag_image(2) == std::vector<std::size_t>{4, 5, 8});
  // next level: blocks of size 3
  const auto f = block_embedding(t9, tuhf_pattern(), DigraphAlgebra::upper_triangular(27));
  CHECK(f.image(up(4, 7)).size() == 3);
  CHECK(img(f, 4, 7)[0] == up(4, 13));
  CHECK_THROWS_AS(block_embedding(DigraphAlgebra::upper_triangular(4), tuhf_pattern(), t9), EmbeddingError);
}

TEST_CASE("tree-standard embeddings") {
  SUBCASE("1-edge chain into itself") {
    const auto t = tree({"a", "b"}, {{"a", "b"}});
    const auto e = tree_standard_embedding({t}, t, {{0, "a", std::nullopt, {}}});
    CHECK(e.embedding == RegularEmbedding::identity(DigraphAlgebra::from_graph(t.graph())));
  }
  SUBCASE("two 1-edge trees do not fit a 3-vertex path") {
    const auto t = tree({"a", "b"}, {{"a", "b"}});
    const auto p = tree({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}});
    CHECK_THROWS_AS(tree_standard_embedding({t, t}, p, {{0, "a", std::nullopt, {}}, {1, "a", "y", {}}}),
                    IllFormedAttachment);
  }
  SUBCASE("two 1-edge trees into a 4-vertex path") {
    const auto t = tree({"a", "b"}, {{"a", "b"}});
    const auto p = tree({"w", "x", "y", "z"}, {{"w", "x"}, {"x", "y"}, {"y", "z"}});
    const auto e = tree_standard_embedding({t, t}, p, {{0, "a", std::nullopt, {}}, {1, "a", "x", {}}});
    // source units: 1=a, 2=b (first tree), 3=a, 4=b (second tree)
    CHECK(img(e.embedding, 2, 1) == std::vector<UnitPair>{up(2, 1)});
    CHECK(img(e.embedding, 4, 3) == std::vector<UnitPair>{up(4, 3)});
    CHECK(is_tree_standard(e.embedding));
    CHECK(e.embedding.source().blocks() == std::vector<std::size_t>{2, 2});
  }
  SUBCASE("Lambda twice into a branching tree, grade-1 preserved") {
    const auto lam = tree({"1", "2", "3"}, {{"1", "2"}, {"1", "3"}});
    const auto h = tree({"r", "p", "q", "u", "v", "w"},
                        {{"r", "p"}, {"r", "q"}, {"p", "u"}, {"q", "v"}, {"q", "w"}});
    CHECK_THROWS_AS(tree_standard_embedding({lam}, h, {{0, "1", std::nullopt, {}}, {0, "1", "r", {}}}),
                    IllFormedAttachment);
    const auto e = tree_standard_embedding({lam}, h, {{0, "1", std::nullopt, {{"2", "p"}, {"3", "q"}}}});
    CHECK(is_tree_standard(e.embedding));
    const auto twice = tree_standard_embedding(
        {lam}, tree({"r", "a", "b", "s", "c", "d"}, {{"r", "a"}, {"r", "b"}, {"r", "s"}, {"s", "c"}, {"s", "d"}}),
        {{0, "1", std::nullopt, {{"2", "a"}, {"3", "b"}}}, {0, "1", "r", {}}});
    CHECK(twice.embedding.multiplicity(0) == 2);
    CHECK(twice.embedding.image(up(2, 1)).size() == 2);
    const auto gs = std::get<Grading>(solve_grading(twice.embedding.source()));
    const auto gt = std::get<Grading>(solve_grading(twice.embedding.target()));
    for (const auto& p : one_elementary_units(gs))
      for (const auto& q : twice.embedding.image(p)) CHECK(gt(q) == 1);
  }
  SUBCASE("explicit map must send edges to edges") {
    const auto t = tree({"a", "b"}, {{"a", "b"}});
    const auto p = tree({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}});
    CHECK_THROWS_AS(tree_standard_embedding({t}, p, {{0, "a", std::nullopt, {{"b", "z"}}}}), IllFormedAttachment);
  }
  SUBCASE("unattached component") {
    const auto t = tree({"a", "b"}, {{"a", "b"}});
    CHECK_THROWS_AS(tree_standard_embedding({t, t}, t, {{0, "a", std::nullopt, {}}}), IllFormedAttachment);
  }
}

TEST_CASE("refinement embeddings are not tree-standard") {
  CHECK(!is_tree_standard(refinement_embedding(2, 2)));
  CHECK(is_tree_standard(standard_embedding(3, 2)));
}

TEST_CASE("normalized trace") {
  const auto m4 = DigraphAlgebra::upper_triangular(4);
  CHECK(normalized_trace({2}, m4) == Rational(1, 4));
  CHECK(normalized_trace({0, 1, 2, 3}, m4) == Rational(1));
  const auto m12 = DigraphAlgebra::diagonal(12);
  CHECK(normalized_trace({0, 3, 5}, m12) == Rational(3, 12));
  CHECK_THROWS_AS(normalized_trace({0}, DigraphAlgebra::from_pairs({2, 2}, {})), MultiBlockUnsupported);
}
