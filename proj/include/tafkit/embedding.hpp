#pragma once

#include <boost/rational.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tafkit/algebra.hpp"
#include "tafkit/graph.hpp"

namespace tafkit {

/// Regular *-extendable embedding between digraph algebras, stored as the
/// image set of every source relation pair. Validated on construction.
class RegularEmbedding {
 public:
  // images[k] is the image of source.pairs()[k]. Throws EmbeddingError.
  RegularEmbedding(DigraphAlgebra source, DigraphAlgebra target, std::vector<std::vector<UnitPair>> images);

  // Each copy maps source units to target units (nullopt where the copy
  // does not cover that unit's block); e_ij goes to the sum of c(i)c(j)
  // over the copies c defined at i.
  using Copy = std::vector<std::optional<std::size_t>>;
  static RegularEmbedding from_copies(DigraphAlgebra source, DigraphAlgebra target, const std::vector<Copy>& copies);

  static RegularEmbedding identity(const DigraphAlgebra& a);

  const DigraphAlgebra& source() const noexcept { return source_; }
  const DigraphAlgebra& target() const noexcept { return target_; }
  std::span<const UnitPair> image(UnitPair p) const;  // throws EmbeddingError outside the relation
  std::span<const UnitPair> image_at(std::size_t pair_index) const { return images_.at(pair_index); }
  const std::vector<std::vector<UnitPair>>& images() const noexcept { return images_; }
  std::vector<std::size_t> diag_image(std::size_t unit) const;

  // multiplicity[s][t]: copies of source block s inside target block t.
  std::vector<std::vector<std::size_t>> multiplicities() const;
  // Total number of copies of each source unit.
  std::size_t multiplicity(std::size_t unit) const { return image({unit, unit}).size(); }

  friend bool operator==(const RegularEmbedding& a, const RegularEmbedding& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.images_ == b.images_;
  }

 private:
  void validate() const;

  DigraphAlgebra source_;
  DigraphAlgebra target_;
  std::vector<std::vector<UnitPair>> images_;
};

// e_ij -> sum_k e_{i+kn, j+kn}, T_n -> T_mn.
RegularEmbedding standard_embedding(std::size_t n, std::size_t m);
RegularEmbedding standard_embedding(const DigraphAlgebra& source, std::size_t m, const DigraphAlgebra& target);
// e_ij -> sum_s e_{(i-1)l+s, (j-1)l+s}, T_n -> T_nl.
RegularEmbedding refinement_embedding(std::size_t n, std::size_t l);
RegularEmbedding refinement_embedding(const DigraphAlgebra& source, std::size_t l, const DigraphAlgebra& target);

/// Block embedding of a single-block algebra of size p*b into one of size
/// grid*b: copy k sends the a-th size-b block to target block copies[k][a].
/// Block indices are 0-based here.
struct BlockPattern {
  std::size_t grid = 0;
  std::vector<std::vector<std::size_t>> copies;
  friend bool operator==(const BlockPattern&, const BlockPattern&) = default;
};
RegularEmbedding block_embedding(const DigraphAlgebra& source, const BlockPattern& pattern,
                                 const DigraphAlgebra& target);
// The 3^infinity TUHF pattern: copies {1,2,5}, {3,4,6}, {7,8,9} of a 9-grid.
BlockPattern tuhf_pattern();

/// One copy of a source tree inside the target tree. The copy's root is
/// joined to `at` by one target edge (it becomes an unused child of `at`),
/// or placed on the target root when `at` is empty. Remaining vertices
/// follow edges greedily in declaration order unless `map` pins them.
struct Attachment {
  std::size_t source = 0;               // index into the source list
  std::string root;                     // root vertex id of the attached tree
  std::optional<std::string> at;        // target vertex id; nullopt = new root
  std::vector<std::pair<std::string, std::string>> map;  // explicit source -> target ids
  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct TreeStandardEmbedding {
  RegularEmbedding embedding;
  // For each source tree component (in source order, then root order) the
  // target vertices of each copy.
  std::vector<std::vector<std::size_t>> vertex_maps;
};

// Source algebra: one block per tree component of the sources, each the
// completion algebra of that tree. Target: completion algebra of `target`.
DigraphAlgebra forest_algebra(const std::vector<OutForest>& forests);
TreeStandardEmbedding tree_standard_embedding(const std::vector<OutForest>& sources, const OutForest& target,
                                              const std::vector<Attachment>& attach);

// True when every covering pair of the source goes to a sum of covering
// pairs of the target.
bool is_tree_standard(const RegularEmbedding& e);

// g after f. Throws MismatchedLevels unless f.target == g.source.
RegularEmbedding compose(const RegularEmbedding& f, const RegularEmbedding& g);

using Rational = boost::rational<long long>;
// |p| / block dimension; throws MultiBlockUnsupported.
Rational normalized_trace(const std::vector<std::size_t>& units, const DigraphAlgebra& a);

}  // namespace tafkit
