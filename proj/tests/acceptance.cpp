#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tafkit/classify.hpp"
#include "tafkit/correspondence.hpp"
#include "tafkit/corpus.hpp"
#include "tafkit/errors.hpp"

using namespace tafkit;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && s > limit_s) o.fail("took longer than the limit");
  failures += !o.ok;
  std::printf("%s %2d %-34s %8.3fs (limit %gs)%s%s\n", o.ok ? "PASS" : "FAIL", id, name, s, limit_s,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

// Longest strict chain from source up to range in the relation.
std::uint32_t longest_chain(const DigraphAlgebra& a, std::size_t range, std::size_t source) {
  const std::size_t n = a.dimension();
  std::vector<long> best(n, -1);
  best[source] = 0;
  // units reachable from source, relaxed n times (n is small)
  for (std::size_t round = 0; round < n; ++round)
    for (std::size_t u = 0; u < n; ++u)
      if (best[u] >= 0)
        for (std::size_t v = 0; v < n; ++v)
          if (v != u && a.contains(v, u) && a.contains(range, v)) best[v] = std::max(best[v], best[u] + 1);
  return static_cast<std::uint32_t>(best[range]);
}

// Edge count along the directed path source -> range in a forest, or -1.
long forest_distance(const DirectedGraph& g, std::size_t source, std::size_t range) {
  std::vector<long> d(g.vertex_count(), -1);
  std::queue<std::size_t> q;
  d[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (auto [s, r] : g.edges())
      if (s == u && d[r] < 0) {
        d[r] = d[u] + 1;
        q.push(r);
      }
  }
  return d[range];
}

// Regular *-embedding invariants checked from the image lists alone.
std::string embedding_violation(const RegularEmbedding& e) {
  const auto& S = e.source();
  const auto& T = e.target();
  std::map<UnitPair, std::set<UnitPair>> img;
  for (const auto& p : S.pairs()) {
    const auto span = e.image(p);
    std::set<UnitPair> s(span.begin(), span.end());
    if (s.size() != span.size()) return "repeated matrix unit in an image";
    for (const auto& q : s)
      if (!T.contains(q)) return "image leaves the target relation";
    img[p] = s;
  }
  std::set<std::size_t> used;
  for (std::size_t u = 0; u < S.dimension(); ++u) {
    const auto& d = img[{u, u}];
    if (d.empty()) return "unit with empty image";
    for (const auto& q : d) {
      if (!q.diagonal()) return "diagonal unit sent off the diagonal";
      if (!used.insert(q.range).second) return "diagonal images overlap";
    }
  }
  for (const auto& p : S.pairs()) {
    std::set<std::size_t> rs, ss;
    for (const auto& q : img[p]) {
      rs.insert(q.range);
      ss.insert(q.source);
    }
    std::set<std::size_t> dr, ds;
    for (const auto& q : img[{p.range, p.range}]) dr.insert(q.range);
    for (const auto& q : img[{p.source, p.source}]) ds.insert(q.range);
    if (rs != dr || ss != ds || rs.size() != img[p].size() || ss.size() != img[p].size())
      return "image is not a partial isometry between the diagonal images";
  }
  // multiplicativity on composable pairs
  for (const auto& p : S.pairs())
    for (const auto& q : S.pairs()) {
      if (p.source != q.range) continue;
      std::set<UnitPair> prod;
      for (const auto& a : img[p])
        for (const auto& b : img[q])
          if (a.source == b.range) prod.insert({a.range, b.source});
      if (prod != img[{p.range, q.source}]) return "image is not multiplicative";
    }
  return "";
}

DirectedGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  oracle::EdgeSet e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && coin(rng)) e.insert({a, b});
  return oracle::make_graph(n, e);
}

CorrespondenceVector random_vector(const DirectedGraph& g, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  std::vector<Complex> a(g.edge_count());
  for (auto& c : a) c = {z(rng), z(rng)};
  return CorrespondenceVector(g, a);
}

}  // namespace

int main() {
  criterion(1, "lambda ampliation fidelity", 1, [] {
    Outcome o;
    const auto g = ampliate(corpus::lambda(), 2).graph();
    const std::set<std::string> want_v{"(1,1)", "(1,2)", "(2,1)", "(2,2)", "(3,1)", "(3,2)"};
    const std::set<std::pair<std::string, std::string>> want_e{
        {"(1,1)", "(1,2)"}, {"(1,2)", "(2,1)"}, {"(1,2)", "(3,1)"}, {"(2,1)", "(2,2)"}, {"(3,1)", "(3,2)"}};
    std::set<std::string> v;
    for (std::size_t k = 0; k < g.vertex_count(); ++k) v.insert(g.id(k));
    std::set<std::pair<std::string, std::string>> e;
    for (auto [s, r] : g.edges()) e.insert({g.id(s), g.id(r)});
    if (v != want_v || v.size() != g.vertex_count()) o.fail("vertex set differs");
    if (e != want_e || e.size() != g.edge_count()) o.fail("edge set differs");
    return o;
  });

  criterion(2, "four-vertex cocycle example", 1, [] {
    Outcome o;
    const auto a = DigraphAlgebra::from_graph(DirectedGraph({"1", "2", "3", "4"}, {{"1", "2"}, {"1", "3"}, {"3", "4"}}));
    const auto r = solve_grading(a);
    const auto* g = std::get_if<Grading>(&r);
    if (!g) {
      o.fail("no grading");
      return o;
    }
    const std::map<UnitPair, std::uint32_t> want{{{1, 0}, 1}, {{2, 0}, 1}, {{3, 2}, 1}, {{3, 0}, 2}};
    const auto all = oracle::brute_gradings(a);
    if (all.size() != 1 || all.front() != want) o.fail("exhaustive search does not give the unique expected grading");
    std::size_t strict = 0;
    for (const auto& p : a.pairs()) {
      if (p.diagonal()) continue;
      ++strict;
      if (!want.count(p) || (*g)(p) != want.at(p)) o.fail("solver grade differs");
    }
    if (strict != want.size()) o.fail("unexpected relation");
    return o;
  });

  criterion(3, "TUHF 3^inf forest presentation", 10, [] {
    Outcome o;
    const auto t = corpus::tuhf();
    if (decide_tensor(t, 3).verdict() != Verdict::Yes) {
      o.fail("verdict is not YES");
      return o;
    }
    const auto fp = reconstruct_forest_presentation(t, 3);
    const auto ext = t.extended(3);
    if (fp.size() != 3) o.fail("expected three forests");
    for (std::size_t k = 0; k < fp.size(); ++k) {
      const auto& g = fp[k].first.graph();
      if (g.vertex_count() != ext.level(k).dimension()) o.fail("forest does not cover the level's units");
      if (!oracle::is_out_forest(g.vertex_count(), oracle::edge_set(g))) o.fail("not an out-forest");
      for (auto [s, r] : g.edges())
        if (!ext.level(k).contains(r, s)) o.fail("forest edge outside the level");
      if (k + 1 < fp.size()) {
        if (!fp[k].second) {
          o.fail("missing map");
          continue;
        }
        const auto& m = *fp[k].second;
        if (const auto v = embedding_violation(m); !v.empty()) o.fail(v);
        if (!is_tree_standard(m)) o.fail("map is not tree-standard");
        // edges go to sums of edges of the next forest
        const auto& next = fp[k + 1].first.graph();
        for (auto [s, r] : g.edges())
          for (const auto& q : m.image({r, s}))
            if (!next.has_edge(q.source, q.range)) o.fail("edge image is not a sum of forest edges");
      }
    }
    if (fp.size() == 3 && oracle::closure_by_composition(oracle::edge_set(fp[2].first.graph())).size() !=
                              ext.level(2).strict_pair_count())
      o.fail("last forest does not generate the last level");
    return o;
  });

  criterion(4, "refinement NO certificate", 1, [] {
    Outcome o;
    const auto t = corpus::refinement(2, 2);
    const auto d = decide_tensor(t, 3);
    if (d.verdict() != Verdict::No) {
      o.fail("verdict is not NO");
      return o;
    }
    const auto& w = std::get<NoWitness>(d.certificate);
    if (std::holds_alternative<NestRuleWitness>(w)) return o;
    const auto* gg = std::get_if<GradeGrowthWitness>(&w);
    if (!gg) {
      o.fail("witness is neither grade growth nor nest");
      return o;
    }
    const auto& c = gg->chain;
    const auto ext = t.extended(3);
    for (std::size_t k = 0; k < c.pairs.size(); ++k)
      if (c.grades[k] != longest_chain(ext.level(c.start + k), c.pairs[k].range, c.pairs[k].source))
        o.fail("chain grade differs from the longest-chain oracle");
    for (std::size_t k = 0; k + 1 < c.grades.size(); ++k)
      if (c.grades[k] >= c.grades[k + 1]) o.fail("grades do not strictly increase");
    if (c.start != 0 || c.grades.size() < 2 || c.grades[0] != 1 || c.grades[1] < 2)
      o.fail("chain does not start at grade 1 with grade >= 2 next");
    return o;
  });

  criterion(5, "tree-refinement is never YES", 5, [] {
    Outcome o;
    const auto t = build_tree_refinement_tower(corpus::stationary(corpus::lambda(), 2), 3);
    for (std::size_t depth = 1; depth <= 3; ++depth)
      if (decide_tensor(t, depth).verdict() == Verdict::Yes) o.fail("YES at depth " + std::to_string(depth));
    return o;
  });

  criterion(6, "AHU agrees with exhaustive search", 60, [] {
    Outcome o;
    std::mt19937_64 rng(6);
    std::size_t positive = 0, negative = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + rng() % 8;
      const std::uint64_t maxw = trial % 2;
      const auto a = oracle::random_weighted_tree(n, rng, maxw);
      const auto b = trial % 4 < 2 ? oracle::relabel(a, rng) : oracle::random_weighted_tree(n, rng, maxw);
      const bool reduced = oracle::brute_isomorphic(oracle::brute_reduce(a), oracle::brute_reduce(b), true);
      if (trees_isomorphic(a, b) != reduced) o.fail("trees_isomorphic disagrees on trial " + std::to_string(trial));
      const bool raw = oracle::brute_isomorphic(a, b, true);
      if (ahu_equivalent(a, b) != raw || tree_isomorphism(a, b).has_value() != raw)
        o.fail("AHU disagrees on trial " + std::to_string(trial));
      // unweighted trees: reductions decide isomorphism of the trees themselves
      const auto ua = OutForest::require_tree(a.graph().without_weights());
      const auto ub = OutForest::require_tree(b.graph().without_weights());
      if (trees_isomorphic(ua, ub) != oracle::brute_isomorphic(ua, ub, false))
        o.fail("reduced form is not a complete invariant on trial " + std::to_string(trial));
      (reduced ? positive : negative)++;
    }
    if (positive < 100 || negative < 100) o.fail("unbalanced sample");
    return o;
  });

  criterion(7, "classification", 5, [] {
    Outcome o;
    const auto lam = corpus::stationary(corpus::lambda(), 2);
    const auto amp = corpus::stationary(ampliate(corpus::lambda(), 2), 2);
    const auto eq = classify_tree_refinement(lam, amp, 2);
    if (eq.verdict != Classification::Equivalent || !eq.witness) {
      o.fail("lambda vs its ampliation is not EQUIVALENT");
    } else {
      // witness: the ampliated bases are isomorphic under the given bijection
      auto ga = lam.base, gb = amp.base;
      for (std::size_t i = 0; i < eq.witness->ampliations_a; ++i) ga = ampliate(ga, 2);
      for (std::size_t i = 0; i < eq.witness->ampliations_b; ++i) gb = ampliate(gb, 2);
      std::map<std::size_t, std::size_t> p;
      for (const auto& [u, v] : eq.witness->bijection) p[ga.graph().index(u)] = gb.graph().index(v);
      if (p.size() != ga.graph().vertex_count() || ga.graph().vertex_count() != gb.graph().vertex_count())
        o.fail("witness is not a bijection");
      else
        for (auto [s, r] : ga.graph().edges())
          if (!gb.graph().has_edge(p[s], p[r])) o.fail("witness does not preserve edges");
    }
    if (classify_tree_refinement(lam, corpus::stationary(corpus::chain(3), 2), 3).verdict != Classification::Distinct)
      o.fail("lambda vs 3-chain is not DISTINCT");
    const auto two = TreeRefinementSpec(corpus::chain(2), {}, 2);
    const auto three = TreeRefinementSpec(corpus::chain(2), {3}, 2);
    if (supernatural(two) != supernatural({}, 2)) o.fail("first spec is not 2^inf");
    if (supernatural(three) != supernatural({3}, 2)) o.fail("second spec is not 2^inf * 3");
    if (classify_tree_refinement(two, three, 3).verdict != Classification::Distinct)
      o.fail("2^inf vs 2^inf * 3 is not DISTINCT");
    return o;
  });

  criterion(8, "CKT relations hold exactly", 30, [] {
    Outcome o;
    std::size_t trees = 0;
    // every labelled recursive tree (parent[v] < v) on up to 8 vertices covers all shapes
    for (std::size_t n = 1; n <= 8; ++n) {
      std::vector<std::size_t> parent(n, 0);
      while (true) {
        oracle::EdgeSet e;
        for (std::size_t v = 1; v < n; ++v) e.insert({parent[v], v});
        const auto f = build_ckt_family(oracle::make_graph(n, e));
        const auto r = check_ckt(f);
        if (!r.all() || r.deficiency != 0 || f.truncated) o.fail("out-tree on " + std::to_string(n) + " vertices");
        ++trees;
        std::size_t v = n;
        while (v > 1 && parent[v - 1] == v - 2) parent[--v] = 0;
        if (v <= 1) break;
        ++parent[v - 1];
      }
    }
    if (trees != 1 + 1 + 2 + 6 + 24 + 120 + 720 + 5040) o.fail("tree enumeration incomplete");
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
      const auto g = random_graph(1 + rng() % 5, 0.35, rng);
      const auto f = build_ckt_family(g);
      const auto r = check_ckt(f);
      if (!r.all()) o.fail("random graph " + std::to_string(trial) + ": " + (r.failures.empty() ? "" : r.failures[0]));
      // relation (2) directly: distinct edges have orthogonal ranges
      for (std::size_t e1 = 0; e1 < g.edge_count(); ++e1)
        for (std::size_t e2 = 0; e2 < g.edge_count(); ++e2)
          if (e1 != e2 && Eigen::SparseMatrix<int>(f.edge_isometries[e1].transpose() * f.edge_isometries[e2]).nonZeros())
            o.fail("L_e* L_f is not zero");
    }
    return o;
  });

  criterion(9, "neat inequality, 1000 instances", 10, [] {
    Outcome o;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + rng() % 6;
      const auto g = random_graph(n, 0.4, rng);
      std::vector<double> d(n);
      std::vector<int> cls(n);
      for (std::size_t v = 0; v < n; ++v) {
        cls[v] = int(rng() % 3);
        d[v] = cls[v] == 0 ? 1.0 : cls[v] == 1 ? 0.0 : unit(rng);
      }
      auto a = random_vector(g, rng).amplitudes();
      auto b = random_vector(g, rng).amplitudes();
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const int c = cls[g.edges()[e].first];
        if (c != 0) a[e] = 0;
        if (c != 1) b[e] = 0;
      }
      const CorrespondenceVector x(g, a), y(g, b);
      const auto r = check_neat_inequality(x, y, d);
      // recomputed from amplitudes: per-vertex sums of |.|^2
      auto sup = [&](const std::vector<Complex>& amp) {
        std::vector<double> s(n, 0.0);
        for (std::size_t e = 0; e < g.edge_count(); ++e) s[g.edges()[e].first] += std::norm(amp[e]);
        return std::sqrt(*std::max_element(s.begin(), s.end()));
      };
      std::vector<Complex> sum(a.size());
      for (std::size_t e = 0; e < a.size(); ++e) sum[e] = a[e] + b[e];
      const double lhs = g.edge_count() ? sup(sum) : 0.0;
      const double rhs = g.edge_count() ? std::max(sup(a), sup(b)) : 0.0;
      if (!r.holds || lhs > rhs + 1e-12) o.fail("violated on trial " + std::to_string(trial));
    }
    return o;
  });

  criterion(10, "counting cocycle consistency", 10, [] {
    Outcome o;
    std::size_t compared = 0;
    for (const auto& t : {corpus::tuhf(), corpus::standard(2, 2), corpus::standard(3, 2), corpus::doubling(3, 3),
                          corpus::doubling(4, 3), Tower({DigraphAlgebra::from_graph(corpus::lambda().graph())}, {})}) {
      if (decide_tensor(t, 3).verdict() != Verdict::Yes) {
        o.fail("corpus tower is not YES");
        continue;
      }
      const auto fp = reconstruct_forest_presentation(t, 3);
      for (const auto& c : counting_cocycle_consistency(t, 3)) {
        ++compared;
        if (c.forest_length != c.chain_sup) o.fail("forest length differs from chain supremum");
        const long d = forest_distance(fp.at(c.level).first.graph(), c.pair.source, c.pair.range);
        if (d != long(c.forest_length)) o.fail("forest length differs from the path-length oracle");
      }
    }
    if (compared == 0) o.fail("nothing compared");
    return o;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
