#include "tafkit/tower.hpp"

#include <algorithm>
#include <sstream>

#include "tafkit/ampliation.hpp"
#include "tafkit/errors.hpp"

namespace tafkit {

std::string rule_name(const Rule& r) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "none";
        else if constexpr (std::is_same_v<T, StandardRule>) return "standard(" + std::to_string(v.m) + ")";
        else if constexpr (std::is_same_v<T, RefinementRule>) return "refinement(" + std::to_string(v.l) + ")";
        else if constexpr (std::is_same_v<T, NestRule>) return "nest";
        else if constexpr (std::is_same_v<T, TreeRefinementRule>) return "tree-refinement(" + std::to_string(v.l) + ")";
        else return "block(grid " + std::to_string(v.pattern.grid) + ")";
      },
      r);
}

bool is_generative(const Rule& r) {
  return !std::holds_alternative<std::monostate>(r) && !std::holds_alternative<NestRule>(r);
}

namespace {

void require_single_block(const DigraphAlgebra& a, const std::string& what) {
  if (a.blocks().size() != 1) throw TowerError(what + " rule needs single-block levels");
}

}  // namespace

Successor apply_rule(const Rule& r, const DigraphAlgebra& a) {
  if (const auto* s = std::get_if<StandardRule>(&r)) {
    require_single_block(a, "standard");
    const std::size_t n = a.dimension(), m = s->m;
    if (m == 0) throw TowerError("standard multiplicity must be positive");
    BitMatrix rel(n * m);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : a.relation().row_indices(i)) rel.set(p * n + i, p * n + j);
        for (std::size_t q = p + 1; q < m; ++q)
          for (std::size_t j = 0; j < n; ++j) rel.set(p * n + i, q * n + j);
      }
    auto next = DigraphAlgebra::from_relation({n * m}, std::move(rel));
    return {next, standard_embedding(a, m, next)};
  }
  if (const auto* s = std::get_if<RefinementRule>(&r)) {
    require_single_block(a, "refinement");
    const std::size_t n = a.dimension(), l = s->l;
    if (l == 0) throw TowerError("refinement multiplicity must be positive");
    BitMatrix rel(n * l);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j : a.relation().row_indices(i))
        for (std::size_t x = 0; x < l; ++x)
          for (std::size_t y = (i == j ? x : 0); y < l; ++y) rel.set(i * l + x, j * l + y);
    auto next = DigraphAlgebra::from_relation({n * l}, std::move(rel));
    return {next, refinement_embedding(a, l, next)};
  }
  if (const auto* s = std::get_if<TreeRefinementRule>(&r)) {
    require_single_block(a, "tree-refinement");
    const DirectedGraph cover = covering_graph(semigroupoid_graph(a));
    if (!(DigraphAlgebra::from_graph(cover) == a))
      throw TowerError("tree-refinement rule needs levels that are out-tree completions");
    const OutForest g = OutForest::require_tree(cover);
    auto next = DigraphAlgebra::from_graph(ampliate(g, s->l).graph());
    return {next, refinement_embedding(a, s->l, next)};
  }
  if (const auto* s = std::get_if<BlockRule>(&r)) {
    require_single_block(a, "block");
    if (!(a == DigraphAlgebra::upper_triangular(a.dimension())))
      throw TowerError("block rule needs upper-triangular levels");
    if (s->pattern.copies.empty() || a.dimension() % s->pattern.copies.front().size() != 0)
      throw TowerError("block rule pattern does not divide the level");
    const std::size_t b = a.dimension() / s->pattern.copies.front().size();
    auto next = DigraphAlgebra::upper_triangular(s->pattern.grid * b);
    return {next, block_embedding(a, s->pattern, next)};
  }
  throw TowerError("rule '" + rule_name(r) + "' does not generate levels");
}

Tower::Tower(std::vector<DigraphAlgebra> levels, std::vector<RegularEmbedding> maps, Rule rule)
    : levels_(std::move(levels)), maps_(std::move(maps)), rule_(std::move(rule)) {
  if (levels_.empty()) throw TowerError("a tower needs at least one level");
  if (maps_.size() + 1 != levels_.size())
    throw TowerError("a tower with " + std::to_string(levels_.size()) + " levels needs " +
                     std::to_string(levels_.size() - 1) + " maps, got " + std::to_string(maps_.size()));
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    if (!(maps_[k].source() == levels_[k]))
      throw TowerError("map " + std::to_string(k + 1) + " does not start at level " + std::to_string(k + 1));
    if (!(maps_[k].target() == levels_[k + 1]))
      throw TowerError("map " + std::to_string(k + 1) + " does not end at level " + std::to_string(k + 2));
  }
}

Tower Tower::extended(std::size_t depth) const {
  if (depth <= size() || !is_generative(rule_)) return *this;
  auto levels = levels_;
  auto maps = maps_;
  while (levels.size() < depth) {
    auto s = apply_rule(rule_, levels.back());
    levels.push_back(std::move(s.level));
    maps.push_back(std::move(s.map));
  }
  return Tower(std::move(levels), std::move(maps), rule_);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    default: return "INCONCLUSIVE";
  }
}

std::vector<SummandChain> counting_grade(const Tower& t, std::size_t level, UnitPair pair, std::size_t depth) {
  const Tower tt = t.extended(depth);
  if (depth > tt.size())
    throw TowerError("depth " + std::to_string(depth) + " exceeds the " + std::to_string(tt.size()) +
                     " available levels");
  if (level >= depth) throw TowerError("start level must lie above the depth");
  if (!tt.level(level).contains(pair)) throw TowerError("pair is not in the level relation");
  std::vector<SummandChain> out;
  SummandChain cur{level, {}, {}};
  auto grade_of = [&](std::size_t k, UnitPair p) {
    const auto g = tt.level(k).factorization_lengths().at(p.range, p.source);
    if (g == LengthTable::kNone) throw UngradableLevel("no factorization length at level " + std::to_string(k + 1));
    return g;
  };
  auto walk = [&](auto&& self, std::size_t k, UnitPair p) -> void {
    cur.pairs.push_back(p);
    cur.grades.push_back(grade_of(k, p));
    if (k + 1 == depth) out.push_back(cur);
    else
      for (const auto& q : tt.map(k).image(p)) self(self, k + 1, q);
    cur.pairs.pop_back();
    cur.grades.pop_back();
  };
  walk(walk, level, pair);
  return out;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kReportedChains = 20;

// Chain bookkeeping for levels 0..D-1 of an extended tower.
struct Analysis {
  const Tower& t;
  std::size_t D;
  // parent[k][q]: index of the level k-1 pair whose image contains pair q of level k.
  std::vector<std::vector<std::size_t>> parent;
  // anc[q][k]: ancestor at level k of terminal pair q (kNone above its origin).
  std::vector<std::vector<std::size_t>> anc;
  std::vector<std::vector<std::uint32_t>> grade;  // matching local grades
  std::vector<std::size_t> origin;                // earliest level with an ancestor

  Analysis(const Tower& tower, std::size_t depth) : t(tower), D(depth) {
    parent.resize(D);
    parent[0].assign(t.level(0).pairs().size(), kNone);
    for (std::size_t k = 1; k < D; ++k) {
      parent[k].assign(t.level(k).pairs().size(), kNone);
      const auto& f = t.map(k - 1);
      for (std::size_t p = 0; p < f.images().size(); ++p)
        for (const auto& q : f.image_at(p)) parent[k][*t.level(k).pair_index(q)] = p;
    }
    const auto& last = t.level(D - 1);
    const std::size_t n = last.pairs().size();
    anc.assign(n, std::vector<std::size_t>(D, kNone));
    grade.assign(n, std::vector<std::uint32_t>(D, 0));
    origin.assign(n, D - 1);
    const auto total = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t qi = 0; qi < total; ++qi) {
      const auto q = static_cast<std::size_t>(qi);
      std::size_t cur = q;
      for (std::size_t k = D; k-- > 0;) {
        anc[q][k] = cur;
        const auto p = t.level(k).pairs()[cur];
        grade[q][k] = t.level(k).factorization_lengths().at(p.range, p.source);
        origin[q] = k;
        if (k == 0 || (cur = parent[k][cur]) == kNone) break;
      }
    }
  }

  SummandChain chain(std::size_t q, std::size_t from) const {
    SummandChain c{from, {}, {}};
    for (std::size_t k = from; k < D; ++k) {
      c.pairs.push_back(t.level(k).pairs()[anc[q][k]]);
      c.grades.push_back(grade[q][k]);
    }
    return c;
  }
};

std::optional<NonTreeTriple> persistence(const RegularEmbedding& f, const NonTreeTriple& w) {
  const auto& next = f.target();
  const auto xz = f.image({w.x, w.z});
  for (const auto& a : f.image({w.x, w.y}))
    for (const auto& b : xz)
      if (a.range == b.range && !next.contains(a.source, b.source) && !next.contains(b.source, a.source))
        return NonTreeTriple{a.range, a.source, b.source};
  return std::nullopt;
}

ForestPresentation presentation_from(const Tower& t, const std::vector<std::vector<UnitPair>>& B) {
  ForestPresentation fp;
  for (std::size_t k = 0; k < B.size(); ++k) {
    const auto& lvl = t.level(k);
    fp.algebras.push_back(DigraphAlgebra::from_pairs(lvl.blocks(), B[k], true));
    std::vector<std::string> ids;
    for (std::size_t u = 0; u < lvl.dimension(); ++u) ids.push_back(unit_name(lvl, u));
    std::vector<DirectedGraph::Edge> edges;
    for (const auto& p : B[k]) edges.emplace_back(p.source, p.range);
    fp.forests.push_back(OutForest::require(DirectedGraph::from_indices(std::move(ids), std::move(edges))));
  }
  for (std::size_t k = 0; k + 1 < B.size(); ++k) {
    const auto& src = fp.algebras[k];
    std::vector<std::vector<UnitPair>> images;
    for (const auto& p : src.pairs()) {
      const auto im = t.map(k).image(p);
      images.emplace_back(im.begin(), im.end());
    }
    fp.maps.emplace_back(src, fp.algebras[k + 1], std::move(images));
  }
  return fp;
}

struct Evaluation {
  Decision decision;
  std::optional<Analysis> analysis;
  std::vector<std::vector<UnitPair>> B;
};

Evaluation evaluate(const Tower& input, std::size_t depth) {
  if (depth == 0) throw TowerError("depth must be at least 1");
  if (std::holds_alternative<NestRule>(input.rule()))
    return {Decision{std::min(depth, input.size()), NoWitness{NestRuleWitness{}}}, std::nullopt, {}};

  const Tower t = input.extended(depth);
  const std::size_t D = std::min(depth, t.size());
  InconclusiveReport report;
  if (D < depth)
    report.reasons.push_back("only " + std::to_string(D) + " levels are stored and the tower has no generative rule");

  // A lone level with no rule is a finite-dimensional algebra: decide exactly.
  if (t.size() == 1 && !is_generative(t.rule())) {
    auto r = solve_grading(t.level(0));
    if (auto* w = std::get_if<GradingWitness>(&r)) {
      if (auto* nt = std::get_if<NonTreeTriple>(w)) return {Decision{1, NoWitness{NonTreeWitness{0, *nt, *nt}}}, {}, {}};
      if (auto* dr = std::get_if<DoubleReceiver>(w))
        return {Decision{1, NoWitness{DoubleReceiverWitness{0, *dr}}}, {}, {}};
      report.reasons.push_back(describe(*w, t.level(0)));
      return {Decision{1, report}, {}, {}};
    }
    std::vector<std::vector<UnitPair>> B{one_elementary_units(std::get<Grading>(r))};
    Analysis an(t, 1);
    return {Decision{1, presentation_from(t, B)}, std::move(an), B};
  }

  bool non_tree = false;
  for (std::size_t k = 0; k < D; ++k) {
    const auto w = find_non_tree_triple(t.level(k));
    if (!w) continue;
    non_tree = true;
    const std::string where = "level " + std::to_string(k + 1) + ": " + describe(GradingWitness{*w}, t.level(k));
    if (k + 1 < D) {
      if (auto p = persistence(t.map(k), *w)) return {Decision{D, NoWitness{NonTreeWitness{k, *w, *p}}}, {}, {}};
      report.reasons.push_back(where + "; not persistent at the next level");
    } else {
      report.reasons.push_back(where + "; last inspected level, persistence unchecked");
    }
  }
  if (non_tree) return {Decision{D, report}, {}, {}};

  Analysis an(t, D);
  const std::size_t L = D - 1;
  const std::size_t terminals = an.anc.size();

  if (is_generative(t.rule()) && D >= 3) {
    std::optional<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> best;  // origin, start pair, q, step
    for (std::size_t q = 0; q < terminals; ++q) {
      const std::size_t o = an.origin[q];
      for (std::size_t k = o; k + 2 <= L; ++k)
        if (an.grade[q][k] < an.grade[q][k + 1] && an.grade[q][k + 1] < an.grade[q][k + 2]) {
          const auto key = std::make_tuple(o, an.anc[q][o], q, k - o);
          if (!best || key < *best) best = key;
          break;
        }
    }
    if (best) {
      const auto [o, sp, q, step] = *best;
      return {Decision{D, NoWitness{GradeGrowthWitness{an.chain(q, o), step}}}, {}, {}};
    }
  }

  if (D < 3) {
    report.reasons.push_back("grade stabilization needs at least 3 levels, inspected " + std::to_string(D));
    return {Decision{D, report}, {}, {}};
  }

  // Chains of at least two steps must be constant across the final step.
  for (std::size_t q = 0; q < terminals; ++q) {
    if (an.origin[q] + 2 > L || an.grade[q][L - 1] == an.grade[q][L]) continue;
    if (report.unstable.size() < kReportedChains) report.unstable.push_back(an.chain(q, an.origin[q]));
    ++report.unstable_total;
  }
  if (report.unstable_total > 0) {
    report.reasons.push_back(std::to_string(report.unstable_total) + " summand chains still change grade at the last step" +
                             (is_generative(t.rule()) ? "" : " and the tower has no stationary rule"));
    return {Decision{D, report}, {}, {}};
  }

  // B_k: pairs whose every summand chain ends in a grade-1 unit.
  std::vector<std::vector<char>> inB(D);
  inB[L].assign(t.level(L).pairs().size(), 0);
  for (std::size_t q = 0; q < terminals; ++q) inB[L][q] = an.grade[q][L] == 1;
  for (std::size_t k = L; k-- > 0;) {
    const auto& lvl = t.level(k);
    inB[k].assign(lvl.pairs().size(), 0);
    for (std::size_t p = 0; p < lvl.pairs().size(); ++p) {
      if (lvl.pairs()[p].diagonal()) continue;
      bool all = true;
      for (const auto& q : t.map(k).image_at(p)) all = all && inB[k + 1][*t.level(k + 1).pair_index(q)];
      inB[k][p] = all;
    }
  }
  std::vector<std::vector<UnitPair>> B(D);
  for (std::size_t k = 0; k < D; ++k) {
    for (std::size_t p = 0; p < inB[k].size(); ++p)
      if (inB[k][p]) B[k].push_back(t.level(k).pairs()[p]);
    std::vector<DirectedGraph::Edge> edges;
    for (const auto& p : B[k]) edges.emplace_back(p.source, p.range);
    const auto g = DirectedGraph::from_indices(std::vector<std::string>(semigroupoid_graph(t.level(k)).vertices()),
                                               std::move(edges));
    const auto r = recognize_out_forest(g);
    if (const auto* rej = std::get_if<ForestRejection>(&r)) {
      if (rej->kind == ForestRejection::Kind::DoubleReceiver)
        return {Decision{D, NoWitness{DoubleReceiverWitness{k, {rej->witness[0], rej->witness[1], rej->witness[2]}}}}, {}, {}};
      report.reasons.push_back("grade-1 units at level " + std::to_string(k + 1) + " contain a cycle");
      return {Decision{D, report}, {}, {}};
    }
  }
  // The last level must be generated by its grade-1 units.
  const auto gen = DigraphAlgebra::from_pairs(t.level(L).blocks(), B[L], true);
  if (!(gen == t.level(L))) {
    report.reasons.push_back("level " + std::to_string(D) + " is not generated by its grade-1 units");
    return {Decision{D, report}, {}, {}};
  }
  ForestPresentation fp = presentation_from(t, B);
  for (std::size_t k = 0; k < fp.maps.size(); ++k)
    if (!is_tree_standard(fp.maps[k])) {
      report.reasons.push_back("restricted map " + std::to_string(k + 1) + " is not tree-standard");
      return {Decision{D, report}, {}, {}};
    }
  return {Decision{D, std::move(fp)}, std::move(an), std::move(B)};
}

std::size_t evidence_depth(const Tower& t, std::size_t depth) {
  return t.can_supply(std::max<std::size_t>(depth, 3)) ? std::max<std::size_t>(depth, 3) : depth;
}

}  // namespace

Decision decide_tensor(const Tower& t, std::size_t depth) { return evaluate(t, depth).decision; }

std::vector<std::pair<OutForest, std::optional<RegularEmbedding>>> reconstruct_forest_presentation(
    const Tower& t, std::size_t depth) {
  const Decision d = decide_tensor(t, evidence_depth(t, depth));
  if (d.verdict() != Verdict::Yes)
    throw NotDecidedYes("forest presentation needs a YES decision, got " + verdict_name(d.verdict()));
  const auto& fp = std::get<ForestPresentation>(d.certificate);
  const std::size_t n = std::min(depth, fp.forests.size());
  std::vector<std::pair<OutForest, std::optional<RegularEmbedding>>> out;
  for (std::size_t k = 0; k < n; ++k)
    out.emplace_back(fp.forests[k], k + 1 < n ? std::optional<RegularEmbedding>(fp.maps[k]) : std::nullopt);
  return out;
}

DirectedGraph edge_space_level(const Tower& t, std::size_t depth) {
  return reconstruct_forest_presentation(t, depth).back().first.graph();
}

std::vector<CocycleComparison> counting_cocycle_consistency(const Tower& input, std::size_t depth) {
  const std::size_t ev = evidence_depth(input, depth);
  const Tower t = input.extended(ev);
  auto e = evaluate(t, ev);
  if (e.decision.verdict() != Verdict::Yes)
    throw NotDecidedYes("counting cocycle needs a YES decision, got " + verdict_name(e.decision.verdict()));
  const auto& fp = std::get<ForestPresentation>(e.decision.certificate);
  const Analysis& an = *e.analysis;
  std::vector<CocycleComparison> out;
  for (std::size_t k = 0; k < an.D; ++k) {
    const auto& lvl = t.level(k);
    std::vector<std::uint32_t> sup(lvl.pairs().size(), 0);
    for (std::size_t q = 0; q < an.anc.size(); ++q) {
      if (an.anc[q][k] == kNone) continue;
      std::uint32_t m = 0;
      for (std::size_t j = k; j < an.D; ++j) m = std::max(m, an.grade[q][j]);
      sup[an.anc[q][k]] = std::max(sup[an.anc[q][k]], m);
    }
    const auto& alg = fp.algebras[k];
    for (const auto& p : alg.pairs()) {
      if (p.diagonal()) continue;
      out.push_back({k, p, alg.factorization_lengths().at(p.range, p.source), sup[*lvl.pair_index(p)]});
    }
  }
  return out;
}

std::string describe(const NoWitness& w, const Tower& t) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NonTreeWitness>) {
          os << "level " << v.level + 1 << " " << describe(GradingWitness{v.triple}, t.level(v.level));
        } else if constexpr (std::is_same_v<T, DoubleReceiverWitness>) {
          os << "level " << v.level + 1 << " grade-1 units: "
             << describe(GradingWitness{v.receiver}, t.level(v.level));
        } else if constexpr (std::is_same_v<T, GradeGrowthWitness>) {
          os << "grade growth under rule " << rule_name(t.rule()) << ": chain from level " << v.chain.start + 1
             << " with grades";
          for (auto g : v.chain.grades) os << " " << g;
        } else {
          os << "nest rule: a full nest algebra supports no integer-valued coherent cocycle";
        }
      },
      w);
  return os.str();
}

}  // namespace tafkit
