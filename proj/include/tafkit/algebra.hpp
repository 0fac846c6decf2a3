#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tafkit/graph.hpp"
#include "tafkit/kernels.hpp"

namespace tafkit {

/// Matrix unit e_{range,source}, both given as global diagonal-unit indices.
struct UnitPair {
  std::size_t range = 0;
  std::size_t source = 0;
  bool diagonal() const noexcept { return range == source; }
  friend auto operator<=>(const UnitPair&, const UnitPair&) = default;
};

/// Finite-dimensional triangular digraph algebra.
///
/// Diagonal units are numbered globally, block by block. The relation is
/// reflexive, transitive and antisymmetric and never crosses blocks. Values
/// share their (immutable) storage, so copies are cheap.
class DigraphAlgebra {
 public:
  DigraphAlgebra();

  // `pairs` are (range, source) global indices; reflexive pairs are implied.
  // With `close` the transitive closure is taken first, otherwise a
  // non-transitive input is rejected.
  static DigraphAlgebra from_pairs(std::vector<std::size_t> blocks, const std::vector<UnitPair>& pairs,
                                   bool close = false);
  static DigraphAlgebra from_relation(std::vector<std::size_t> blocks, BitMatrix relation);
  static DigraphAlgebra upper_triangular(std::size_t n);
  static DigraphAlgebra diagonal(std::size_t n);
  // One block; vertex v is unit v, an edge s -> r becomes the pair (r, s).
  static DigraphAlgebra from_graph(const DirectedGraph& g);

  std::size_t dimension() const noexcept;  // number of diagonal units
  const std::vector<std::size_t>& blocks() const noexcept;
  std::size_t block_of(std::size_t unit) const;
  std::size_t row_in_block(std::size_t unit) const;
  std::size_t unit(std::size_t block, std::size_t row) const;

  bool contains(std::size_t range, std::size_t source) const noexcept;
  bool contains(UnitPair p) const noexcept { return contains(p.range, p.source); }

  // Reflexive relation and its irreflexive part; (i, j) set means e_ij present.
  const BitMatrix& relation() const noexcept;
  const BitMatrix& strict() const noexcept;
  const BitMatrix& covering() const noexcept;

  // All relation pairs, diagonal included, sorted.
  const std::vector<UnitPair>& pairs() const noexcept;
  std::optional<std::size_t> pair_index(UnitPair p) const noexcept;
  std::size_t strict_pair_count() const noexcept;

  // Longest chain of non-diagonal factors of each relation pair.
  const LengthTable& factorization_lengths() const;

  bool is_upper_triangular() const noexcept;

  friend bool operator==(const DigraphAlgebra& a, const DigraphAlgebra& b);

 private:
  struct Data;
  explicit DigraphAlgebra(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  static DigraphAlgebra build(std::vector<std::size_t> blocks, BitMatrix rel);

  std::shared_ptr<const Data> d_;
};

/// Vertices are diagonal units (named "1".."n" for one block, "b.r" otherwise);
/// edges are source -> range for each non-diagonal pair.
DirectedGraph semigroupoid_graph(const DigraphAlgebra& a);
std::string unit_name(const DigraphAlgebra& a, std::size_t unit);

struct NonTreeTriple {
  std::size_t x, y, z;  // (x,y), (x,z) present, y and z incomparable
  friend bool operator==(const NonTreeTriple&, const NonTreeTriple&) = default;
};
struct DoubleReceiver {
  std::size_t vertex, first, second;  // two covering edges into `vertex`
  friend bool operator==(const DoubleReceiver&, const DoubleReceiver&) = default;
};
struct AdditivityConflict {
  std::size_t i, j, k;  // grade(i,k) != grade(i,j) + grade(j,k)
  friend bool operator==(const AdditivityConflict&, const AdditivityConflict&) = default;
};
using GradingWitness = std::variant<NonTreeTriple, DoubleReceiver, AdditivityConflict>;
std::string describe(const GradingWitness& w, const DigraphAlgebra& a);

std::optional<NonTreeTriple> find_non_tree_triple(const DigraphAlgebra& a);
inline bool is_tree_semigroupoid(const DigraphAlgebra& a) { return !find_non_tree_triple(a); }

class Grading {
 public:
  Grading(DigraphAlgebra a, LengthTable grade) : algebra_(std::move(a)), grade_(std::move(grade)) {}

  const DigraphAlgebra& algebra() const noexcept { return algebra_; }
  // Throws AlgebraError for pairs outside the relation.
  std::uint32_t operator()(std::size_t range, std::size_t source) const;
  std::uint32_t operator()(UnitPair p) const { return (*this)(p.range, p.source); }
  const LengthTable& table() const noexcept { return grade_; }

  friend bool operator==(const Grading& a, const Grading& b) {
    return a.algebra_ == b.algebra_ && a.grade_ == b.grade_;
  }

 private:
  DigraphAlgebra algebra_;
  LengthTable grade_;
};

using GradingResult = std::variant<Grading, GradingWitness>;
GradingResult solve_grading(const DigraphAlgebra& a);

// Checks zero set, additivity and coherence; returns a description of the
// first violation found.
std::optional<std::string> grading_violation(const Grading& g);

std::vector<UnitPair> one_elementary_units(const Grading& g);

}  // namespace tafkit
