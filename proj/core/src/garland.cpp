#include "cayspec/garland.hpp"

#include <algorithm>
#include <cmath>

#include "cayspec/error.hpp"
#include "cayspec/fourier.hpp"
#include "cayspec/linalg.hpp"
#include "cayspec/random.hpp"

namespace cayspec {

Eigen::MatrixXd BipartiteGraph::laplacian() const {
  const auto V = static_cast<Eigen::Index>(vertex_count());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(V, V);
  for (auto [x, y] : edges) {
    const Eigen::Index u = x, v = static_cast<Eigen::Index>(n + y);
    L(u, u) += 1.0;
    L(v, v) += 1.0;
    L(u, v) -= 1.0;
    L(v, u) -= 1.0;
  }
  return L;
}

std::vector<std::size_t> BipartiteGraph::degrees() const {
  std::vector<std::size_t> deg(vertex_count(), 0);
  for (auto [x, y] : edges) {
    ++deg[x];
    ++deg[n + y];
  }
  return deg;
}

BipartiteGraph build_CA(const GroupTable& G, const Subset& A) {
  if (A.empty()) throw Error(ErrorCode::InvalidArgument, "C_A needs a nonempty A");
  BipartiteGraph g;
  g.n = G.order();
  for (Element x = 0; x < g.n; ++x)
    for (Element y = 0; y < g.n; ++y)
      if (A.contains(G.mul(x, y))) g.edges.emplace_back(x, y);
  return g;
}

double lambda2(const BipartiteGraph& graph) {
  if (graph.vertex_count() > kDenseSpectralCap)
    throw Error(ErrorCode::SizeCap, "lambda2 dense path limited to " + std::to_string(kDenseSpectralCap) + " vertices");
  const auto ev = linalg::symmetric_eigenvalues(graph.laplacian());
  return ev.size() < 2 ? 0.0 : ev[1];
}

double lambda2_CA(const GroupTable& G, const Subset& A) { return lambda2(build_CA(G, A)); }

SggrCheck check_sggr(const GroupTable& G, const Subset& A) {
  SggrCheck out;
  out.lambda2 = lambda2_CA(G, A);
  out.bound = static_cast<double>(A.size()) - nu(G, A).nu;
  out.slack = out.lambda2 - out.bound;
  out.holds = out.lambda2 >= out.bound - 1e-8;
  return out;
}

std::pair<int, int> omitted_parts(const ComplexHandle& handle, const Cell& tau) {
  const int parts = static_cast<int>(handle.k()) + 1;
  std::vector<int> missing;
  for (int p = 0; p < parts; ++p)
    if (std::find(tau.parts.begin(), tau.parts.end(), p) == tau.parts.end()) missing.push_back(p);
  if (missing.size() != 2) throw Error(ErrorCode::NotACell, "not a codimension-2 cell");
  return {missing[0], missing[1]};
}

namespace {

Cell checked_tau(const ComplexHandle& handle, CellId tau) {
  const int k = static_cast<int>(handle.k());
  const auto& idx = handle.cells(k - 2);
  if (tau < 0 || static_cast<std::size_t>(tau) >= idx.count())
    throw Error(ErrorCode::NotACell, "(k-2)-cell id " + std::to_string(tau) + " out of range");
  return idx.unrank(tau);
}

// Tuple with tau's entries in place and slots for the two omitted parts.
std::vector<Element> tau_tuple(const ComplexHandle& handle, const Cell& tau) {
  std::vector<Element> tuple(handle.k() + 1, 0);
  for (std::size_t t = 0; t < tau.parts.size(); ++t) tuple[static_cast<std::size_t>(tau.parts[t])] = tau.elems[t];
  return tuple;
}

}  // namespace

BipartiteGraph link_graph(const ComplexHandle& handle, CellId tau_id) {
  const Cell tau = checked_tau(handle, tau_id);
  const auto [i1, i2] = omitted_parts(handle, tau);
  const auto& top = handle.cells(static_cast<int>(handle.k()));
  auto tuple = tau_tuple(handle, tau);
  BipartiteGraph g;
  g.n = handle.group().order();
  for (Element x = 0; x < g.n; ++x) {
    tuple[static_cast<std::size_t>(i1)] = x;
    for (Element y = 0; y < g.n; ++y) {
      tuple[static_cast<std::size_t>(i2)] = y;
      if (top.rank_top(tuple)) g.edges.emplace_back(x, y);
    }
  }
  return g;
}

LinkReport link_isomorphism(const ComplexHandle& handle, CellId tau_id, bool compute_lambda2) {
  if (handle.k() < 2) throw Error(ErrorCode::InvalidArgument, "link isomorphism needs k >= 2");
  const GroupTable& G = handle.group();
  const std::size_t n = G.order();
  const Cell tau = checked_tau(handle, tau_id);
  const auto [i1, i2] = omitted_parts(handle, tau);

  Element z1 = GroupTable::kIdentity, z2 = GroupTable::kIdentity, z3 = GroupTable::kIdentity;
  for (std::size_t t = 0; t < tau.parts.size(); ++t) {
    Element& z = tau.parts[t] < i1 ? z1 : (tau.parts[t] < i2 ? z2 : z3);
    z = G.mul(z, tau.elems[t]);
  }

  LinkReport report;
  report.tau = tau_id;
  report.iso_map.resize(2 * n);
  std::vector<std::uint8_t> hit(2 * n, 0);
  for (Element x = 0; x < n; ++x) {
    report.iso_map[x] = G.mul(G.mul(z1, x), z2);
    report.iso_map[n + x] = n + G.mul(x, z3);
  }
  report.bijective = true;
  for (auto v : report.iso_map) {
    if (hit[v]) report.bijective = false;
    hit[v] = 1;
  }

  const BipartiteGraph link = link_graph(handle, tau_id);
  std::vector<std::pair<Element, Element>> mapped;
  mapped.reserve(link.edges.size());
  for (auto [x, y] : link.edges)
    mapped.emplace_back(static_cast<Element>(report.iso_map[x]), static_cast<Element>(report.iso_map[n + y] - n));
  std::sort(mapped.begin(), mapped.end());
  const BipartiteGraph ca = build_CA(G, handle.generators());
  report.edges_match = report.bijective && mapped == ca.edges;
  if (compute_lambda2) report.lambda2 = lambda2(link);
  return report;
}

GarlandSides garland_identity(const ComplexHandle& handle, std::span<const double> phi) {
  const int k = static_cast<int>(handle.k());
  if (phi.size() != handle.dim(k - 1)) throw Error(ErrorCode::InvalidArgument, "cochain length must equal dim C^{k-1}");
  GarlandSides sides;

  const auto& d = handle.coboundary(k - 1);
  std::vector<double> dphi(d.rows());
  d.apply(phi, dphi);
  for (double v : dphi) sides.lhs += v * v;

  const auto& lower = handle.cells(k - 1);
  const std::size_t taus = handle.dim(k - 2);
  double link_sum = 0.0;
  std::vector<Element> elems(static_cast<std::size_t>(k));
  for (std::size_t t = 0; t < taus; ++t) {
    const Cell tau = handle.cells(k - 2).unrank(static_cast<CellId>(t));
    const auto [i1, i2] = omitted_parts(handle, tau);
    std::uint32_t tau_mask = 0;
    for (int p : tau.parts) tau_mask |= 1u << p;

    // phi_tau(v) = phi([v, tau]) = (-1)^{position of v} phi(sorted(tau + v)).
    auto phi_tau = [&](int part, Element v) {
      std::size_t w = 0, pos = 0;
      bool placed = false;
      for (std::size_t s = 0; s < tau.parts.size(); ++s) {
        if (!placed && part < tau.parts[s]) {
          pos = w;
          elems[w++] = v;
          placed = true;
        }
        elems[w++] = tau.elems[s];
      }
      if (!placed) {
        pos = w;
        elems[w++] = v;
      }
      const CellId id = lower.rank_lower(tau_mask | (1u << part), elems);
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      return sign * phi[static_cast<std::size_t>(id)];
    };

    const BipartiteGraph link = link_graph(handle, static_cast<CellId>(t));
    for (auto [x, y] : link.edges) {
      const double diff = phi_tau(i2, y) - phi_tau(i1, x);
      link_sum += diff * diff;
    }
  }
  double norm2 = 0.0;
  for (double v : phi) norm2 += v * v;
  sides.rhs = link_sum - static_cast<double>(handle.generators().size()) * static_cast<double>(k - 1) * norm2;
  return sides;
}

double garland_identity_check(const ComplexHandle& handle, std::span<const double> phi) {
  return garland_identity(handle, phi).discrepancy();
}

GarlandBound garland_bound(const ComplexHandle& handle, std::size_t sample, std::uint64_t seed) {
  const int k = static_cast<int>(handle.k());
  GarlandBound out;
  out.lambda_CA = lambda2_CA(handle.group(), handle.generators());
  const std::size_t taus = handle.dim(k - 2);
  Rng rng(seed);
  std::vector<CellId> picks;
  if (sample >= taus) {
    for (std::size_t t = 0; t < taus; ++t) picks.push_back(static_cast<CellId>(t));
  } else {
    for (std::size_t s = 0; s < sample; ++s) picks.push_back(static_cast<CellId>(rng.below(taus)));
  }
  for (CellId t : picks) {
    const double l2 = lambda2(link_graph(handle, t));
    out.max_link_deviation = std::max(out.max_link_deviation, std::abs(l2 - out.lambda_CA));
    ++out.links_checked;
  }
  out.bound = static_cast<double>(k) * out.lambda_CA -
              static_cast<double>(k - 1) * static_cast<double>(handle.generators().size());
  return out;
}

}  // namespace cayspec
