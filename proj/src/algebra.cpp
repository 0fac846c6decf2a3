#include "tafkit/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tafkit/errors.hpp"

namespace tafkit {

struct DigraphAlgebra::Data {
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> block_of;
  std::vector<std::size_t> block_start;
  BitMatrix relation;
  BitMatrix strict;
  BitMatrix covering;
  std::vector<UnitPair> pairs;
  std::vector<std::uint32_t> pair_slot;  // n*n, kNoSlot when absent
  LengthTable lengths;
  bool upper = false;

  static constexpr std::uint32_t kNoSlot = static_cast<std::uint32_t>(-1);
};

DigraphAlgebra::DigraphAlgebra() : DigraphAlgebra(build({}, BitMatrix(0))) {}

DigraphAlgebra DigraphAlgebra::build(std::vector<std::size_t> blocks, BitMatrix rel) {
  auto d = std::make_shared<Data>();
  const std::size_t n = rel.size();
  d->blocks = std::move(blocks);
  for (std::size_t b = 0; b < d->blocks.size(); ++b) {
    if (d->blocks[b] == 0) throw AlgebraError("block dimensions must be positive");
    d->block_start.push_back(d->block_of.size());
    d->block_of.insert(d->block_of.end(), d->blocks[b], b);
  }
  if (d->block_of.size() != n) throw AlgebraError("relation size differs from total block dimension");

  for (std::size_t i = 0; i < n; ++i) {
    rel.set(i, i);
    for (std::size_t j : rel.row_indices(i)) {
      if (d->block_of[i] != d->block_of[j])
        throw AlgebraError("pair crosses blocks: units " + std::to_string(i + 1) + ", " +
                           std::to_string(j + 1));
      if (i != j && rel.get(j, i))
        throw AlgebraError("relation is not antisymmetric: units " + std::to_string(i + 1) + ", " +
                           std::to_string(j + 1));
    }
  }
  BitMatrix closed = rel;
  kernels::transitive_closure(closed);
  if (!(closed == rel)) throw AlgebraError("relation is not transitive");

  d->relation = std::move(rel);
  d->strict = d->relation;
  for (std::size_t i = 0; i < n; ++i) d->strict.set(i, i, false);
  d->covering = kernels::covering(d->strict);
  d->lengths = kernels::longest_paths(d->strict, d->covering);

  d->pair_slot.assign(n * n, Data::kNoSlot);
  d->upper = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : d->relation.row_indices(i)) {
      d->pair_slot[i * n + j] = static_cast<std::uint32_t>(d->pairs.size());
      d->pairs.push_back({i, j});
      if (j < i) d->upper = false;
    }
  return DigraphAlgebra(std::move(d));
}

DigraphAlgebra DigraphAlgebra::from_relation(std::vector<std::size_t> blocks, BitMatrix relation) {
  return build(std::move(blocks), std::move(relation));
}

DigraphAlgebra DigraphAlgebra::from_pairs(std::vector<std::size_t> blocks, const std::vector<UnitPair>& pairs,
                                          bool close) {
  const std::size_t n = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
  BitMatrix rel(n);
  for (const auto& p : pairs) {
    if (p.range >= n || p.source >= n) throw AlgebraError("matrix unit index out of range");
    rel.set(p.range, p.source);
  }
  if (close) {
    for (std::size_t i = 0; i < n; ++i) rel.set(i, i);
    BitMatrix probe = rel;
    kernels::transitive_closure(probe);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j : probe.row_indices(i))
        if (i != j && probe.get(j, i)) throw AlgebraError("closure of the given pairs contains a cycle");
    rel = std::move(probe);
  }
  return build(std::move(blocks), std::move(rel));
}

DigraphAlgebra DigraphAlgebra::upper_triangular(std::size_t n) {
  BitMatrix rel(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) rel.set(i, j);
  return build({n}, std::move(rel));
}

DigraphAlgebra DigraphAlgebra::diagonal(std::size_t n) {
  BitMatrix rel(n);
  return build({n}, std::move(rel));
}

DigraphAlgebra DigraphAlgebra::from_graph(const DirectedGraph& g) {
  const DirectedGraph c = transitive_completion(g);
  BitMatrix rel = c.adjacency();
  return build({g.vertex_count()}, std::move(rel));
}

std::size_t DigraphAlgebra::dimension() const noexcept { return d_->relation.size(); }
const std::vector<std::size_t>& DigraphAlgebra::blocks() const noexcept { return d_->blocks; }
std::size_t DigraphAlgebra::block_of(std::size_t unit) const { return d_->block_of.at(unit); }
std::size_t DigraphAlgebra::row_in_block(std::size_t unit) const {
  return unit - d_->block_start.at(block_of(unit));
}
std::size_t DigraphAlgebra::unit(std::size_t block, std::size_t row) const {
  if (block >= d_->blocks.size() || row >= d_->blocks[block])
    throw AlgebraError("diagonal unit (" + std::to_string(block + 1) + "," + std::to_string(row + 1) +
                       ") out of range");
  return d_->block_start[block] + row;
}

bool DigraphAlgebra::contains(std::size_t range, std::size_t source) const noexcept {
  const std::size_t n = dimension();
  return range < n && source < n && d_->relation.get(range, source);
}

const BitMatrix& DigraphAlgebra::relation() const noexcept { return d_->relation; }
const BitMatrix& DigraphAlgebra::strict() const noexcept { return d_->strict; }
const BitMatrix& DigraphAlgebra::covering() const noexcept { return d_->covering; }
const std::vector<UnitPair>& DigraphAlgebra::pairs() const noexcept { return d_->pairs; }

std::optional<std::size_t> DigraphAlgebra::pair_index(UnitPair p) const noexcept {
  const std::size_t n = dimension();
  if (p.range >= n || p.source >= n) return std::nullopt;
  const auto slot = d_->pair_slot[p.range * n + p.source];
  if (slot == Data::kNoSlot) return std::nullopt;
  return slot;
}

std::size_t DigraphAlgebra::strict_pair_count() const noexcept { return d_->pairs.size() - dimension(); }
const LengthTable& DigraphAlgebra::factorization_lengths() const { return d_->lengths; }
bool DigraphAlgebra::is_upper_triangular() const noexcept { return d_->upper; }

bool operator==(const DigraphAlgebra& a, const DigraphAlgebra& b) {
  return a.d_ == b.d_ || (a.d_->blocks == b.d_->blocks && a.d_->relation == b.d_->relation);
}

std::string unit_name(const DigraphAlgebra& a, std::size_t unit) {
  if (a.blocks().size() == 1) return std::to_string(unit + 1);
  return std::to_string(a.block_of(unit) + 1) + "." + std::to_string(a.row_in_block(unit) + 1);
}

DirectedGraph semigroupoid_graph(const DigraphAlgebra& a) {
  std::vector<std::string> ids;
  ids.reserve(a.dimension());
  for (std::size_t u = 0; u < a.dimension(); ++u) ids.push_back(unit_name(a, u));
  std::vector<DirectedGraph::Edge> edges;
  for (const auto& p : a.pairs())
    if (!p.diagonal()) edges.emplace_back(p.source, p.range);
  return DirectedGraph::from_indices(std::move(ids), std::move(edges));
}

std::string describe(const GradingWitness& w, const DigraphAlgebra& a) {
  std::ostringstream os;
  auto n = [&](std::size_t u) { return unit_name(a, u); };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NonTreeTriple>)
          os << "non-tree triple: e(" << n(v.x) << "," << n(v.y) << ") and e(" << n(v.x) << "," << n(v.z)
             << ") present but " << n(v.y) << ", " << n(v.z) << " incomparable";
        else if constexpr (std::is_same_v<T, DoubleReceiver>)
          os << "double receiver: " << n(v.vertex) << " covers " << n(v.first) << " and " << n(v.second);
        else
          os << "additivity conflict on " << n(v.i) << ", " << n(v.j) << ", " << n(v.k);
      },
      w);
  return os.str();
}

std::optional<NonTreeTriple> find_non_tree_triple(const DigraphAlgebra& a) {
  const BitMatrix& s = a.strict();
  const BitMatrix& r = a.relation();
  for (std::size_t x = 0; x < a.dimension(); ++x) {
    const auto below = s.row_indices(x);
    for (std::size_t p = 0; p < below.size(); ++p)
      for (std::size_t q = p + 1; q < below.size(); ++q) {
        const std::size_t y = below[p], z = below[q];
        if (!r.get(y, z) && !r.get(z, y)) return NonTreeTriple{x, y, z};
      }
  }
  return std::nullopt;
}

std::uint32_t Grading::operator()(std::size_t range, std::size_t source) const {
  if (!algebra_.contains(range, source))
    throw AlgebraError("pair (" + std::to_string(range + 1) + "," + std::to_string(source + 1) +
                       ") is not in the relation");
  return grade_.at(range, source);
}

GradingResult solve_grading(const DigraphAlgebra& a) {
  if (auto t = find_non_tree_triple(a)) return GradingWitness{*t};
  const BitMatrix& cover = a.covering();
  for (std::size_t v = 0; v < a.dimension(); ++v) {
    const auto into = cover.row_indices(v);
    if (into.size() >= 2) return GradingWitness{DoubleReceiver{v, into[0], into[1]}};
  }
  LengthTable grade = a.factorization_lengths();
  // Covering edges form an out-forest here, so longest and unique chain
  // lengths coincide and additivity is automatic; checked anyway.
  for (const auto& p : a.pairs())
    for (std::size_t k : a.relation().row_indices(p.source))
      if (grade.at(p.range, k) != grade.at(p.range, p.source) + grade.at(p.source, k))
        return GradingWitness{AdditivityConflict{p.range, p.source, k}};
  return Grading(a, std::move(grade));
}

std::optional<std::string> grading_violation(const Grading& g) {
  const DigraphAlgebra& a = g.algebra();
  const LengthTable& t = g.table();
  const std::size_t n = a.dimension();
  auto pname = [&](std::size_t i, std::size_t j) {
    return "(" + unit_name(a, i) + "," + unit_name(a, j) + ")";
  };
  BitMatrix ones(n);
  for (const auto& p : a.pairs()) {
    const auto v = t.at(p.range, p.source);
    if (v == LengthTable::kNone) return "pair " + pname(p.range, p.source) + " has no grade";
    if ((v == 0) != p.diagonal()) return "zero set differs from the diagonal at " + pname(p.range, p.source);
    if (v == 1) ones.set(p.range, p.source);
  }
  for (const auto& p : a.pairs())
    for (std::size_t k : a.relation().row_indices(p.source))
      if (t.at(p.range, k) != t.at(p.range, p.source) + t.at(p.source, k))
        return "additivity fails for " + pname(p.range, p.source) + " and " + pname(p.source, k);
  // With additivity, every chain of grade-1 pairs from j to i has exactly
  // grade(i,j) links, so coherence is reachability in the grade-1 graph.
  kernels::transitive_closure(ones);
  for (const auto& p : a.pairs())
    if (!p.diagonal() && !ones.get(p.range, p.source))
      return "pair " + pname(p.range, p.source) + " does not factor into grade-1 pairs";
  return std::nullopt;
}

std::vector<UnitPair> one_elementary_units(const Grading& g) {
  std::vector<UnitPair> out;
  for (const auto& p : g.algebra().pairs())
    if (g.table().at(p.range, p.source) == 1) out.push_back(p);
  return out;
}

}  // namespace tafkit
