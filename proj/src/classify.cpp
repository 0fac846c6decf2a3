#include "tafkit/classify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "tafkit/errors.hpp"

namespace tafkit {

namespace {

std::uint64_t weight_of(const DirectedGraph& g, std::size_t v) { return g.has_weights() ? g.weight(v) : 0; }

// Children before parents.
std::vector<std::size_t> post_order(const OutForest& t) {
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{t.root()};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto c : t.children(v)) stack.push_back(c);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<std::string> all_codes(const OutForest& t) {
  std::vector<std::string> code(t.graph().vertex_count());
  for (auto v : post_order(t)) {
    std::vector<std::string> kids;
    for (auto c : t.children(v)) kids.push_back(code[c]);
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + std::to_string(weight_of(t.graph(), v));
    for (const auto& k : kids) s += " " + k;
    code[v] = s + ")";
  }
  return code;
}

OutForest unweighted(const OutForest& t) { return OutForest::require(t.graph().without_weights()); }

}  // namespace

OutForest reduce(const OutForest& g) {
  const auto root = g.root();
  const auto& gr = g.graph();
  const std::size_t n = gr.vertex_count();
  std::vector<char> kept(n);
  for (std::size_t v = 0; v < n; ++v) kept[v] = v == root || gr.successors(v).size() != 1;
  std::vector<std::string> ids;
  std::vector<std::uint64_t> w;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t v = 0; v < n; ++v) {
    if (!kept[v]) continue;
    ids.push_back(gr.id(v));
    std::uint64_t acc = weight_of(gr, v);
    if (v != root) {
      auto p = *g.parent(v);
      while (!kept[p]) {
        acc += 1 + weight_of(gr, p);
        p = *g.parent(p);
      }
      edges.emplace_back(gr.id(p), gr.id(v));
    }
    w.push_back(acc);
  }
  return OutForest::require_tree(DirectedGraph(std::move(ids), edges, std::move(w)));
}

std::vector<std::size_t> heights(const OutForest& t) {
  std::vector<std::size_t> h(t.graph().vertex_count(), 0);
  for (auto v : post_order(t))
    for (auto c : t.children(v)) h[v] = std::max(h[v], h[c] + 1);
  return h;
}

std::vector<std::vector<LevelEntry>> level_lists(const OutForest& t) {
  const auto h = heights(t);
  const auto code = all_codes(t);
  const std::size_t top = h[t.root()];
  std::vector<std::vector<LevelEntry>> out(top + 1);
  for (std::size_t k = 0; k <= top; ++k) {
    for (std::size_t v = 0; v < h.size(); ++v) {
      const auto p = t.parent(v);
      if (h[v] <= k && (!p || h[*p] > k)) out[k].push_back({v, code[v]});
    }
    std::stable_sort(out[k].begin(), out[k].end(), [](const auto& a, const auto& b) { return a.code < b.code; });
  }
  return out;
}

std::string canonical_code(const OutForest& t, std::size_t v) { return all_codes(t).at(v); }
std::string canonical_code(const OutForest& t) { return canonical_code(t, t.root()); }

bool ahu_equivalent(const OutForest& a, const OutForest& b) {
  const auto ha = heights(a), hb = heights(b);
  if (a.graph().vertex_count() != b.graph().vertex_count() || ha[a.root()] != hb[b.root()]) return false;
  // Labels are assigned one height at a time through a table shared by both trees.
  std::vector<std::size_t> la(ha.size()), lb(hb.size());
  for (std::size_t k = 0; k <= ha[a.root()]; ++k) {
    std::map<std::pair<std::uint64_t, std::vector<std::size_t>>, std::size_t> table;
    auto key = [&](const OutForest& t, const std::vector<std::size_t>& lab, std::size_t v) {
      std::vector<std::size_t> kids;
      for (auto c : t.children(v)) kids.push_back(lab[c]);
      std::sort(kids.begin(), kids.end());
      return std::make_pair(weight_of(t.graph(), v), kids);
    };
    std::multiset<std::size_t> sa, sb;
    for (std::size_t v = 0; v < ha.size(); ++v)
      if (ha[v] == k) sa.insert(la[v] = table.try_emplace(key(a, la, v), table.size()).first->second);
    for (std::size_t v = 0; v < hb.size(); ++v)
      if (hb[v] == k) sb.insert(lb[v] = table.try_emplace(key(b, lb, v), table.size()).first->second);
    if (sa != sb) return false;
  }
  return la[a.root()] == lb[b.root()];
}

bool trees_isomorphic(const OutForest& g, const OutForest& h) {
  return canonical_code(reduce(g)) == canonical_code(reduce(h));
}

bool same_reduced_shape(const OutForest& g, const OutForest& h) {
  return canonical_code(unweighted(reduce(g))) == canonical_code(unweighted(reduce(h)));
}

std::optional<std::vector<std::pair<std::size_t, std::size_t>>> tree_isomorphism(const OutForest& a,
                                                                                 const OutForest& b) {
  const auto ca = all_codes(a), cb = all_codes(b);
  if (ca[a.root()] != cb[b.root()]) return std::nullopt;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{a.root(), b.root()}};
  while (!stack.empty()) {
    const auto [u, v] = stack.back();
    stack.pop_back();
    out.emplace_back(u, v);
    std::vector<std::size_t> ka(a.children(u).begin(), a.children(u).end());
    std::vector<std::size_t> kb(b.children(v).begin(), b.children(v).end());
    auto by = [](const std::vector<std::string>& c) {
      return [&c](std::size_t x, std::size_t y) { return std::tie(c[x], x) < std::tie(c[y], y); };
    };
    std::sort(ka.begin(), ka.end(), by(ca));
    std::sort(kb.begin(), kb.end(), by(cb));
    for (std::size_t i = 0; i < ka.size(); ++i) stack.emplace_back(ka[i], kb[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string branch_shape(const OutForest& g) {
  auto r = unweighted(reduce(g));
  // contract the root chain as well
  std::size_t top = r.root();
  while (r.children(top).size() == 1) top = r.children(top)[0];
  std::function<std::string(std::size_t)> code = [&](std::size_t v) {
    std::vector<std::string> kids;
    for (auto c : r.children(v)) kids.push_back(code(c));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return code(top);
}

std::string to_string(const Supernatural& s) {
  std::set<std::uint64_t> primes(s.infinite);
  for (const auto& [p, e] : s.finite) primes.insert(p);
  if (primes.empty()) return "1";
  std::string out;
  for (auto p : primes) {
    if (!out.empty()) out += " * ";
    out += std::to_string(p) + "^" + (s.infinite.count(p) ? std::string("inf") : std::to_string(s.finite.at(p)));
  }
  return out;
}

namespace {

std::map<std::uint64_t, std::uint64_t> factor(std::uint64_t n) {
  std::map<std::uint64_t, std::uint64_t> f;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  if (n > 1) ++f[n];
  return f;
}

}  // namespace

Supernatural supernatural(const std::vector<std::size_t>& multiplicities, std::optional<std::size_t> tail) {
  Supernatural s;
  for (auto m : multiplicities) {
    if (m == 0) throw TowerError("multiplicities must be positive");
    for (const auto& [p, e] : factor(m)) s.finite[p] += e;
  }
  if (tail) {
    if (*tail == 0) throw TowerError("tail multiplicity must be positive");
    for (const auto& [p, e] : factor(*tail)) {
      s.infinite.insert(p);
      s.finite.erase(p);
    }
  }
  return s;
}

Supernatural supernatural(const TreeRefinementSpec& spec) {
  std::vector<std::size_t> m{spec.base.graph().vertex_count()};
  m.insert(m.end(), spec.multiplicities.begin(), spec.multiplicities.end());
  return supernatural(m, spec.tail);
}

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::Equivalent: return "EQUIVALENT";
    case Classification::Distinct: return "DISTINCT";
    default: return "UNDETERMINED";
  }
}

ClassificationResult classify_tree_refinement(const TreeRefinementSpec& a, const TreeRefinementSpec& b,
                                              std::size_t ampliation_bound) {
  const auto sa = supernatural(a), sb = supernatural(b);
  if (!(sa == sb))
    return {Classification::Distinct, std::nullopt,
            "supernatural numbers differ: " + to_string(sa) + " vs " + to_string(sb)};
  if (branch_shape(a.base) != branch_shape(b.base))
    return {Classification::Distinct, std::nullopt, "branching shapes differ; ampliation never changes them"};

  // G_1 .. G_{bound+1} of each spec, as far as its multiplicities reach.
  auto sequence = [&](const TreeRefinementSpec& s) {
    std::vector<OutForest> g{s.base};
    for (std::size_t i = 0; i < ampliation_bound; ++i) {
      const auto l = s.multiplicity(i);
      if (!l) break;
      g.push_back(ampliate(g.back(), *l));
    }
    return g;
  };
  const auto ga = sequence(a), gb = sequence(b);
  // Try the smallest total number of ampliations first.
  for (std::size_t total = 0; total <= 2 * ampliation_bound; ++total)
    for (std::size_t i = 0; i <= total; ++i) {
      const std::size_t j = total - i;
      if (i >= ga.size() || j >= gb.size()) continue;
      const auto& x = ga[i];
      const auto& y = gb[j];
      if (x.graph().vertex_count() != y.graph().vertex_count()) continue;
      const auto iso = tree_isomorphism(x, y);
      if (!iso) continue;
      EquivalenceWitness w{i, j, {}};
      for (auto [u, v] : *iso) w.bijection.emplace_back(x.graph().id(u), y.graph().id(v));
      return {Classification::Equivalent, std::move(w),
              "G_" + std::to_string(i + 1) + " and G_" + std::to_string(j + 1) + " are isomorphic"};
    }
  return {Classification::Undetermined, std::nullopt,
          "no isomorphic pair within " + std::to_string(ampliation_bound) + " ampliations"};
}

}  // namespace tafkit
