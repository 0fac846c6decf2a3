#include "tafkit/correspondence.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tafkit/errors.hpp"

namespace tafkit {

namespace {

constexpr double kTol = 1e-12;

void same_graph(const DirectedGraph& a, const DirectedGraph& b) {
  if (!(a.without_weights() == b.without_weights())) throw GraphMismatch("vectors live over different graphs");
}

}  // namespace

CorrespondenceVector::CorrespondenceVector(DirectedGraph g)
    : graph_(std::move(g)), amp_(graph_.edge_count(), Complex{}) {}

CorrespondenceVector::CorrespondenceVector(DirectedGraph g, std::vector<Complex> amplitudes)
    : graph_(std::move(g)), amp_(std::move(amplitudes)) {
  if (amp_.size() != graph_.edge_count())
    throw GraphError("expected " + std::to_string(graph_.edge_count()) + " amplitudes, got " +
                     std::to_string(amp_.size()));
}

CorrespondenceVector CorrespondenceVector::from_edges(DirectedGraph g,
                                                      const std::map<std::pair<std::string, std::string>, Complex>& a) {
  CorrespondenceVector x(std::move(g));
  const auto& edges = x.graph_.edges();
  for (const auto& [key, value] : a) {
    const std::pair<std::size_t, std::size_t> e{x.graph_.index(key.first), x.graph_.index(key.second)};
    const auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) throw GraphError("no edge " + key.first + " -> " + key.second);
    x.amp_[static_cast<std::size_t>(it - edges.begin())] = value;
  }
  return x;
}

CorrespondenceVector CorrespondenceVector::indicator(DirectedGraph g, std::size_t edge) {
  CorrespondenceVector x(std::move(g));
  x.amp_.at(edge) = 1.0;
  return x;
}

CorrespondenceVector CorrespondenceVector::operator+(const CorrespondenceVector& o) const {
  same_graph(graph_, o.graph_);
  auto out = *this;
  for (std::size_t e = 0; e < amp_.size(); ++e) out.amp_[e] += o.amp_[e];
  return out;
}

CorrespondenceVector CorrespondenceVector::right_action(const std::vector<double>& d) const {
  if (d.size() != graph_.vertex_count()) throw GraphError("right action needs one value per vertex");
  auto out = *this;
  for (std::size_t e = 0; e < amp_.size(); ++e) out.amp_[e] *= d[graph_.edges()[e].first];
  return out;
}

std::vector<Complex> module_inner_product(const CorrespondenceVector& x, const CorrespondenceVector& y) {
  same_graph(x.graph(), y.graph());
  std::vector<Complex> out(x.graph().vertex_count(), Complex{});
  for (std::size_t e = 0; e < x.amplitudes().size(); ++e)
    out[x.graph().edges()[e].first] += std::conj(x[e]) * y[e];
  return out;
}

double module_norm(const CorrespondenceVector& x) {
  double best = 0;
  for (const auto& v : module_inner_product(x, x)) best = std::max(best, v.real());
  return std::sqrt(best);
}

PartialIsometryFamily build_ckt_family(const DirectedGraph& g, std::optional<std::size_t> cutoff) {
  PartialIsometryFamily f;
  f.graph = g;
  const std::size_t n = g.vertex_count();
  const bool acyclic = is_acyclic(g);
  std::size_t limit = cutoff.value_or(kDefaultCutoff);
  if (acyclic) limit = n;  // no path is longer than n - 1
  // Paths by length; each new path is an edge prepended to a shorter one.
  for (std::size_t v = 0; v < n; ++v) {
    f.paths.push_back({});
    f.path_range.push_back(v);
  }
  std::size_t begin = 0;
  std::size_t longest = 0;
  for (std::size_t len = 1; len <= limit; ++len) {
    const std::size_t end = f.paths.size();
    for (std::size_t m = begin; m < end; ++m)
      for (std::size_t e = 0; e < g.edge_count(); ++e)
        if (g.edges()[e].first == f.path_range[m]) {
          auto p = f.paths[m];
          p.insert(p.begin(), e);
          f.paths.push_back(std::move(p));
          f.path_range.push_back(g.edges()[e].second);
        }
    if (f.paths.size() == end) break;
    longest = len;
    begin = end;
  }
  f.cutoff = acyclic ? longest : limit;
  f.truncated = !acyclic && g.edge_count() > 0;
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t m = n; m < f.paths.size(); ++m) index[f.paths[m]] = m;  // lookups never need vertex paths
  const std::size_t dim = f.paths.size();
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<Eigen::Triplet<int>> t;
    for (std::size_t m = 0; m < dim; ++m)
      if (f.path_range[m] == v) t.emplace_back(int(m), int(m), 1);
    Eigen::SparseMatrix<int> P(static_cast<int>(dim), static_cast<int>(dim));
    P.setFromTriplets(t.begin(), t.end());
    f.vertex_projections.push_back(std::move(P));
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::vector<Eigen::Triplet<int>> t;
    for (std::size_t m = 0; m < dim; ++m) {
      if (f.path_range[m] != g.edges()[e].first) continue;
      std::vector<std::size_t> p = f.paths[m];
      p.insert(p.begin(), e);
      if (const auto it = index.find(p); it != index.end()) t.emplace_back(int(it->second), int(m), 1);
    }
    Eigen::SparseMatrix<int> L(static_cast<int>(dim), static_cast<int>(dim));
    L.setFromTriplets(t.begin(), t.end());
    f.edge_isometries.push_back(std::move(L));
  }
  return f;
}

namespace {

using SpI = Eigen::SparseMatrix<int>;

bool equal(const SpI& a, const SpI& b) {
  SpI d = a - b;
  d.prune(0);
  return d.nonZeros() == 0;
}

bool is_zero(const SpI& a) {
  SpI d = a;
  d.prune(0);
  return d.nonZeros() == 0;
}

// P <= Q for projections: P is a projection and QP = P.
bool below(const SpI& P, const SpI& Q) { return equal(SpI(P * P), P) && equal(SpI(Q * P), P); }

}  // namespace

CktReport check_ckt(const PartialIsometryFamily& f) {
  CktReport r;
  r.holds.fill(true);
  const auto& g = f.graph;
  const auto& Lp = f.vertex_projections;
  const auto& Le = f.edge_isometries;
  const int dim = int(f.dimension());
  auto fail = [&](int k, std::string what) {
    r.holds[k - 1] = false;
    r.failures.push_back("(" + std::to_string(k) + ") " + what);
  };
  for (std::size_t p = 0; p < Lp.size(); ++p) {
    if (!equal(SpI(Lp[p] * Lp[p]), Lp[p])) fail(1, "L_" + g.id(p) + " is not a projection");
    for (std::size_t q = p + 1; q < Lp.size(); ++q)
      if (!is_zero(SpI(Lp[p] * Lp[q]))) fail(1, "L_" + g.id(p) + " L_" + g.id(q) + " != 0");
  }
  auto edge_name = [&](std::size_t e) { return "e(" + g.id(g.edges()[e].first) + "->" + g.id(g.edges()[e].second) + ")"; };
  for (std::size_t e = 0; e < Le.size(); ++e)
    for (std::size_t h = 0; h < Le.size(); ++h)
      if (e != h && !is_zero(SpI(SpI(Le[e].transpose()) * Le[h])))
        fail(2, "L_" + edge_name(e) + "* L_" + edge_name(h) + " != 0");

  // the cutoff layer, where L_e has nowhere to go
  std::vector<Eigen::Triplet<int>> t;
  for (int m = 0; m < dim; ++m)
    if (!f.truncated || f.paths[m].size() < f.cutoff) t.emplace_back(m, m, 1);
  SpI inner(dim, dim);
  inner.setFromTriplets(t.begin(), t.end());
  for (std::size_t e = 0; e < Le.size(); ++e) {
    const SpI lhs = SpI(Le[e].transpose()) * Le[e];
    const SpI& rhs = Lp[g.edges()[e].first];
    SpI diff = lhs - rhs;
    diff.prune(0);
    r.deficiency += diff.nonZeros();
    if (!equal(SpI(inner * lhs * inner), SpI(inner * rhs * inner))) fail(3, "L_" + edge_name(e) + "* L_e != L_s(e)");
    const SpI range = Le[e] * SpI(Le[e].transpose());
    if (!below(range, Lp[g.edges()[e].second])) fail(4, "L_" + edge_name(e) + " L_e* is not below L_r(e)");
  }
  for (std::size_t p = 0; p < Lp.size(); ++p) {
    SpI sum(dim, dim);
    for (std::size_t e = 0; e < Le.size(); ++e)
      if (g.edges()[e].second == p) sum += Le[e] * SpI(Le[e].transpose());
    if (!below(sum, Lp[p])) fail(5, "sum of L_e L_e* over r(e) = " + g.id(p) + " is not below L_p");
  }
  return r;
}

double operator_norm(const PartialIsometryFamily& f, const CorrespondenceVector& x) {
  same_graph(f.graph, x.graph());
  const auto dim = Eigen::Index(f.dimension());
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t e = 0; e < f.edge_isometries.size(); ++e)
    for (int k = 0; k < f.edge_isometries[e].outerSize(); ++k)
      for (Eigen::SparseMatrix<int>::InnerIterator it(f.edge_isometries[e], k); it; ++it)
        T(it.row(), it.col()) += x[e] * double(it.value());
  if (dim == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T);
  return svd.singularValues()(0);
}

NeatResult check_neat_inequality(const CorrespondenceVector& x, const CorrespondenceVector& y,
                                 const std::vector<double>& d) {
  same_graph(x.graph(), y.graph());
  for (double v : d)
    if (!(v >= -kTol && v <= 1 + kTol)) throw PreconditionViolated("d must take values in [0,1]");
  const auto xd = x.right_action(d), yd = y.right_action(d);
  for (std::size_t e = 0; e < x.amplitudes().size(); ++e) {
    if (std::abs(xd[e] - x[e]) > kTol) throw PreconditionViolated("x d != x on edge " + std::to_string(e));
    if (std::abs(yd[e]) > kTol) throw PreconditionViolated("y d != 0 on edge " + std::to_string(e));
  }
  NeatResult r{false, module_norm(x), module_norm(y), module_norm(x + y)};
  r.holds = r.norm_sum <= std::max(r.norm_x, r.norm_y) + kTol;
  return r;
}

}  // namespace tafkit
