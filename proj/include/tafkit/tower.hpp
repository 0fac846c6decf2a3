#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tafkit/algebra.hpp"
#include "tafkit/embedding.hpp"
#include "tafkit/graph.hpp"

namespace tafkit {

// Stationary generation rules. Every generative rule maps a single-block
// level to its successor together with the connecting embedding.
struct StandardRule {        // ordinal sum of m copies, T_n -> T_mn
  std::size_t m = 1;
  friend bool operator==(const StandardRule&, const StandardRule&) = default;
};
struct RefinementRule {      // lexicographic refinement, T_n -> T_nl
  std::size_t l = 1;
  friend bool operator==(const RefinementRule&, const RefinementRule&) = default;
};
struct NestRule {            // full nest algebra with nest embeddings
  friend bool operator==(const NestRule&, const NestRule&) = default;
};
struct TreeRefinementRule {  // ampliate the level's covering tree by l
  std::size_t l = 1;
  friend bool operator==(const TreeRefinementRule&, const TreeRefinementRule&) = default;
};
struct BlockRule {           // block embedding of upper-triangular levels
  BlockPattern pattern;
  friend bool operator==(const BlockRule&, const BlockRule&) = default;
};
using Rule = std::variant<std::monostate, StandardRule, RefinementRule, NestRule, TreeRefinementRule, BlockRule>;

std::string rule_name(const Rule& r);
bool is_generative(const Rule& r);

struct Successor {
  DigraphAlgebra level;
  RegularEmbedding map;
};
// Throws TowerError when the rule cannot extend `a`.
Successor apply_rule(const Rule& r, const DigraphAlgebra& a);

/// Finite presentation {A_n, rho_n}.
class Tower {
 public:
  Tower(std::vector<DigraphAlgebra> levels, std::vector<RegularEmbedding> maps, Rule rule = {});

  std::size_t size() const noexcept { return levels_.size(); }
  const DigraphAlgebra& level(std::size_t k) const { return levels_.at(k); }
  const RegularEmbedding& map(std::size_t k) const { return maps_.at(k); }
  const std::vector<DigraphAlgebra>& levels() const noexcept { return levels_; }
  const std::vector<RegularEmbedding>& maps() const noexcept { return maps_; }
  const Rule& rule() const noexcept { return rule_; }

  // At least `depth` levels when the rule can generate them; otherwise as
  // many as are stored.
  Tower extended(std::size_t depth) const;
  bool can_supply(std::size_t depth) const { return depth <= size() || is_generative(rule_); }

  friend bool operator==(const Tower&, const Tower&) = default;

 private:
  std::vector<DigraphAlgebra> levels_;
  std::vector<RegularEmbedding> maps_;
  Rule rule_;
};

/// One summand path: pairs[t] lies at level start + t and each entry is a
/// summand of the image of the previous one. grades[t] is the longest
/// factorization length of pairs[t] inside its level.
struct SummandChain {
  std::size_t start = 0;
  std::vector<UnitPair> pairs;
  std::vector<std::uint32_t> grades;
  friend bool operator==(const SummandChain&, const SummandChain&) = default;
};

// Every chain from `pair` at `level` down to level depth-1. Levels are 0-based.
std::vector<SummandChain> counting_grade(const Tower& t, std::size_t level, UnitPair pair, std::size_t depth);

struct NonTreeWitness {
  std::size_t level;
  NonTreeTriple triple;
  NonTreeTriple persists;  // the same failure one level further down
};
struct DoubleReceiverWitness {
  std::size_t level;
  DoubleReceiver receiver;
};
struct GradeGrowthWitness {
  SummandChain chain;
  std::size_t step;  // grades[step] < grades[step+1] < grades[step+2]
};
struct NestRuleWitness {};
using NoWitness = std::variant<NonTreeWitness, DoubleReceiverWitness, GradeGrowthWitness, NestRuleWitness>;

/// Forest subalgebras B_k with the restricted tree-standard embeddings.
struct ForestPresentation {
  std::vector<OutForest> forests;
  std::vector<DigraphAlgebra> algebras;  // completion of each forest, on the level's units
  std::vector<RegularEmbedding> maps;
};

struct InconclusiveReport {
  std::vector<SummandChain> unstable;  // capped; see unstable_total
  std::size_t unstable_total = 0;
  std::vector<std::string> reasons;
};

enum class Verdict { Yes, No, Inconclusive };
std::string verdict_name(Verdict v);

struct Decision {
  std::size_t depth = 0;  // levels actually inspected
  std::variant<ForestPresentation, NoWitness, InconclusiveReport> certificate;
  Verdict verdict() const noexcept { return static_cast<Verdict>(certificate.index()); }
};

Decision decide_tensor(const Tower& t, std::size_t depth);

// Both use max(depth, 3) levels of evidence when the tower can supply them,
// and throw NotDecidedYes unless the decision at that depth is Yes.
std::vector<std::pair<OutForest, std::optional<RegularEmbedding>>> reconstruct_forest_presentation(
    const Tower& t, std::size_t depth);
DirectedGraph edge_space_level(const Tower& t, std::size_t depth);

struct CocycleComparison {
  std::size_t level;
  UnitPair pair;
  std::uint32_t forest_length;  // path length in G_level
  std::uint32_t chain_sup;      // sup of terminal grades over summand chains
};
// Compares the forest-presentation cocycle with the supremum cocycle on every
// pair of closure(B_k), for every inspected level. Throws NotDecidedYes.
std::vector<CocycleComparison> counting_cocycle_consistency(const Tower& t, std::size_t depth);

std::string describe(const NoWitness& w, const Tower& t);

}  // namespace tafkit
