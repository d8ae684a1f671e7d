#pragma once

// Links of codimension-2 cells, the bipartite graph C_A, and the local to
// global (Garland) eigenvalue estimate.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cayspec/complex.hpp"
#include "cayspec/spectral.hpp"

namespace cayspec {

/// Bipartite graph on {1,2} x G. Vertex (1,x) is x, vertex (2,y) is n+y.
struct BipartiteGraph {
  std::size_t n = 0;
  std::vector<std::pair<Element, Element>> edges;  ///< (x, y) for {(1,x),(2,y)}, sorted

  std::size_t vertex_count() const noexcept { return 2 * n; }
  /// Standard (unreduced) graph Laplacian D - Adj.
  Eigen::MatrixXd laplacian() const;
  /// Degree of every vertex, first part then second part.
  std::vector<std::size_t> degrees() const;
};

/// C_A: edge {(1,x),(2,y)} iff x*y in A.
BipartiteGraph build_CA(const GroupTable& G, const Subset& A);

/// Second smallest eigenvalue of the unreduced Laplacian. SizeCap above 3000 vertices.
double lambda2(const BipartiteGraph& graph);
double lambda2_CA(const GroupTable& G, const Subset& A);

struct SggrCheck {
  double lambda2 = 0.0;
  double bound = 0.0;  ///< |A| - nu(A)
  bool holds = false;
  double slack = 0.0;
};

/// lambda_2(C_A) >= |A| - nu(A), within 1e-8.
SggrCheck check_sggr(const GroupTable& G, const Subset& A);

/// Omitted parts (i1 < i2) of a (k-2)-cell.
std::pair<int, int> omitted_parts(const ComplexHandle& handle, const Cell& tau);

/// The link of a (k-2)-cell tau as a bipartite graph on {i1,i2} x G,
/// enumerated from the top cells of the complex: local vertex x is
/// (i1,x) and n+y is (i2,y).
BipartiteGraph link_graph(const ComplexHandle& handle, CellId tau);

struct LinkReport {
  CellId tau = 0;
  std::vector<std::size_t> iso_map;  ///< local link vertex -> C_A vertex
  bool bijective = false;
  bool edges_match = false;
  double lambda2 = 0.0;  ///< of the link graph
};

/// Checks the explicit map (i1,x) -> (1, z1 x z2), (i2,y) -> (2, y z3) onto C_A.
/// Requires k >= 2; NotACell for an invalid id.
LinkReport link_isomorphism(const ComplexHandle& handle, CellId tau, bool compute_lambda2 = true);

struct GarlandSides {
  double lhs = 0.0;  ///< ||d_{k-1} phi||^2
  double rhs = 0.0;  ///< sum_tau ||d_0 phi_tau||^2 - |A|(k-1)||phi||^2
  double discrepancy() const { return std::abs(lhs - rhs); }
};

/// Both sides of the Garland identity for a (k-1)-cochain phi, with every
/// link enumerated explicitly and phi_tau(v) = phi([v, tau]).
GarlandSides garland_identity(const ComplexHandle& handle, std::span<const double> phi);
double garland_identity_check(const ComplexHandle& handle, std::span<const double> phi);

struct GarlandBound {
  double bound = 0.0;       ///< k lambda(X) - (k-1)|A|
  double lambda_CA = 0.0;   ///< lambda_2(C_A)
  std::size_t links_checked = 0;
  double max_link_deviation = 0.0;  ///< |lambda_2(link) - lambda_2(C_A)| over sampled links
};

/// lambda(X) from C_A, spot-checked against `sample` random links.
GarlandBound garland_bound(const ComplexHandle& handle, std::size_t sample = 5, std::uint64_t seed = 1);

}  // namespace cayspec
