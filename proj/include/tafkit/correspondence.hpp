#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "tafkit/graph.hpp"

namespace tafkit {

using Complex = std::complex<double>;

/// An element of c_0(G^1): one amplitude per edge, in the graph's edge order.
class CorrespondenceVector {
 public:
  explicit CorrespondenceVector(DirectedGraph g);  // zero vector
  CorrespondenceVector(DirectedGraph g, std::vector<Complex> amplitudes);
  // Keys are (source id, range id); throws GraphError for undeclared edges.
  static CorrespondenceVector from_edges(DirectedGraph g, const std::map<std::pair<std::string, std::string>, Complex>& a);
  static CorrespondenceVector indicator(DirectedGraph g, std::size_t edge);

  const DirectedGraph& graph() const noexcept { return graph_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amp_; }
  Complex operator[](std::size_t e) const { return amp_.at(e); }

  CorrespondenceVector operator+(const CorrespondenceVector& o) const;
  // (x d)(e) = x(e) d(s(e))
  CorrespondenceVector right_action(const std::vector<double>& d) const;

 private:
  DirectedGraph graph_;
  std::vector<Complex> amp_;
};

// <x,y>(p) = sum over s(e) = p of conj(x(e)) y(e). Throws GraphMismatch.
std::vector<Complex> module_inner_product(const CorrespondenceVector& x, const CorrespondenceVector& y);
// sup over vertices of <x,x>(p)^(1/2)
double module_norm(const CorrespondenceVector& x);

/// L_p and L_e acting on the span of paths mu (vertex paths included) of
/// length at most `cutoff`: L_p fixes paths with range p and L_e sends mu to
/// e mu when s(e) = r(mu) and e mu still fits under the cutoff.
struct PartialIsometryFamily {
  DirectedGraph graph;
  std::size_t cutoff = 0;
  bool truncated = false;  // a path of length cutoff could be extended
  std::vector<std::vector<std::size_t>> paths;  // edge indices, first edge first; vertex paths empty
  std::vector<std::size_t> path_range;           // r(mu)
  std::vector<Eigen::SparseMatrix<int>> vertex_projections;
  std::vector<Eigen::SparseMatrix<int>> edge_isometries;
  std::size_t dimension() const noexcept { return paths.size(); }
};

inline constexpr std::size_t kDefaultCutoff = 4;

// Acyclic graphs get their whole (finite) path space; cyclic graphs are cut
// at `cutoff` (kDefaultCutoff when unset).
PartialIsometryFamily build_ckt_family(const DirectedGraph& g, std::optional<std::size_t> cutoff = std::nullopt);

struct CktReport {
  std::array<bool, 5> holds{};  // relations (1)..(5)
  // Basis paths where L_e* L_e and L_{s(e)} disagree, summed over edges.
  // These are exactly the paths of length cutoff in a truncated family;
  // relation (3) is checked on the complement.
  std::size_t deficiency = 0;
  std::vector<std::string> failures;
  bool all() const noexcept {
    for (bool b : holds)
      if (!b) return false;
    return true;
  }
};
// Exact integer arithmetic on the 0/1 matrices.
CktReport check_ckt(const PartialIsometryFamily& f);

// Largest singular value of t(x) = sum_e x(e) L_e.
double operator_norm(const PartialIsometryFamily& f, const CorrespondenceVector& x);

struct NeatResult {
  bool holds;
  double norm_x, norm_y, norm_sum;
};
// Needs d(p) in [0,1], x d = x and y d = 0 up to 1e-12, else PreconditionViolated.
NeatResult check_neat_inequality(const CorrespondenceVector& x, const CorrespondenceVector& y,
                                 const std::vector<double>& d);

}  // namespace tafkit
