#include "cayspec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cayspec/error.hpp"
#include "cayspec/linalg.hpp"
#include "cayspec/random.hpp"

namespace cayspec {

ConvolutionOperator::ConvolutionOperator(const GroupTable& G, std::vector<cplx> weights)
    : G_(&G), weights_(std::move(weights)) {
  if (weights_.size() != G.order())
    throw Error(ErrorCode::InvalidArgument, "weight vector length must equal the group order");
}

Eigen::MatrixXcd ConvolutionOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd T(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) T(x, y) = entry(static_cast<Element>(x), static_cast<Element>(y));
  return T;
}

std::vector<cplx> ConvolutionOperator::apply(std::span<const cplx> v) const {
  // (Tv)[x] = sum_a w(a) v[x a^-1]
  const std::size_t n = dim();
  std::vector<cplx> out(n, cplx{});
  for (Element a = 0; a < n; ++a) {
    if (weights_[a] == cplx{}) continue;
    const Element ainv = G_->inv(a);
    for (Element x = 0; x < n; ++x) out[x] += weights_[a] * v[G_->mul(x, ainv)];
  }
  return out;
}

bool ConvolutionOperator::hermitian_weights(double tol) const {
  for (Element x = 0; x < dim(); ++x)
    if (std::abs(weights_[G_->inv(x)] - std::conj(weights_[x])) > tol) return false;
  return true;
}

FourierReport nu(const GroupTable& G, const Subset& A, double tol, std::uint64_t seed) {
  if (A.empty()) throw Error(ErrorCode::InvalidArgument, "nu needs a nonempty subset");
  const std::size_t n = G.order();
  const double shift = static_cast<double>(A.size()) / static_cast<double>(n);
  FourierReport report;

  if (n <= kNuDenseCap) {
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd M(N, N);
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y)
        M(x, y) = (A.contains(G.mul(G.inv(y), x)) ? 1.0 : 0.0) - shift;
    // Largest eigenpair of M^T M. Eigen 3.4's BDCSVD returns a wrong leading
    // singular value on some of these highly degenerate matrices.
    const Eigen::MatrixXd MtM = M.transpose() * M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(MtM);
    const double lambda = std::max(0.0, es.eigenvalues()(N - 1));
    const Eigen::VectorXd v = es.eigenvectors().col(N - 1);
    report.nu = std::sqrt(lambda);
    report.solver = "dense";
    report.residual = (MtM * v - lambda * v).norm();
    return report;
  }

  // Matrix-free M^T M with M = T - shift*J, (Tv)[x] = sum_a v[x a^-1],
  // (T^T w)[y] = sum_a w[y a].
  std::vector<Element> ainv;
  for (Element a : A) ainv.push_back(G.inv(a));
  std::vector<double> tmp(n);
  auto apply = [&](std::span<const double> v, std::span<double> out) {
    const double sv = std::accumulate(v.begin(), v.end(), 0.0);
    for (Element x = 0; x < n; ++x) {
      double s = 0.0;
      for (Element ai : ainv) s += v[G.mul(x, ai)];
      tmp[x] = s - shift * sv;
    }
    const double st = std::accumulate(tmp.begin(), tmp.end(), 0.0);
    for (Element y = 0; y < n; ++y) {
      double s = 0.0;
      for (Element a : A) s += tmp[G.mul(y, a)];
      out[y] = s - shift * st;
    }
  };
  const double scale = static_cast<double>(A.size() * A.size());
  auto res = linalg::lanczos_extreme(apply, n, /*smallest=*/false, tol * std::max(1.0, scale), 10 * n, seed);
  report.solver = "lanczos";
  report.iterations = res.iterations;
  report.residual = res.residual;
  report.nu = std::sqrt(std::max(res.value, 0.0));
  if (!res.converged)
    throw Error(ErrorCode::NoConvergence, "nu: residual " + std::to_string(res.residual) + " after " +
                                              std::to_string(res.iterations) + " products");
  return report;
}

CharacterTable abelian_characters(const GroupTable& G) {
  if (!G.is_abelian()) throw Error(ErrorCode::NotAbelian, G.name() + " is not abelian");
  const std::size_t n = G.order();

  // Greedy generating set; every element gets coordinates along it by BFS.
  std::vector<Element> gens;
  std::vector<std::size_t> orders;
  Subset span_so_far({GroupTable::kIdentity});
  for (Element x = 0; x < n; ++x) {
    if (span_so_far.contains(x)) continue;
    gens.push_back(x);
    orders.push_back(element_order(G, x));
    span_so_far = subgroup_closure(G, Subset(gens));
  }
  std::size_t exponent = 1;
  for (std::size_t o : orders) exponent = std::lcm(exponent, o);

  const std::size_t r = gens.size();
  std::vector<std::vector<std::size_t>> coord(n);
  std::vector<std::uint8_t> seen(n, 0);
  coord[GroupTable::kIdentity].assign(r, 0);
  seen[GroupTable::kIdentity] = 1;
  std::vector<Element> queue{GroupTable::kIdentity};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element x = queue[head];
    for (std::size_t i = 0; i < r; ++i) {
      const Element y = G.mul(x, gens[i]);
      if (seen[y]) continue;
      seen[y] = 1;
      coord[y] = coord[x];
      coord[y][i] += 1;
      queue.push_back(y);
    }
  }

  std::size_t candidates = 1;
  for (std::size_t o : orders) {
    candidates *= o;
    if (candidates > 10'000'000) throw Error(ErrorCode::SizeCap, "character enumeration too large");
  }

  CharacterTable table;
  table.exponent = exponent;
  std::vector<std::size_t> choice(r, 0);
  std::vector<std::size_t> values(n);
  for (std::size_t c = 0; c < candidates; ++c) {
    std::size_t rest = c;
    for (std::size_t i = 0; i < r; ++i) {
      choice[i] = (rest % orders[i]) * (exponent / orders[i]);
      rest /= orders[i];
    }
    for (Element x = 0; x < n; ++x) {
      std::size_t v = 0;
      for (std::size_t i = 0; i < r; ++i) v += coord[x][i] * choice[i];
      values[x] = v % exponent;
    }
    bool hom = true;
    for (Element x = 0; x < n && hom; ++x)
      for (Element y = 0; y < n && hom; ++y)
        hom = values[G.mul(x, y)] == (values[x] + values[y]) % exponent;
    if (hom) table.values.push_back(values);
  }
  if (table.values.size() != n)
    throw Error(ErrorCode::InvalidArgument, "found " + std::to_string(table.values.size()) + " characters, expected " +
                                                std::to_string(n));
  return table;
}

double nu_characters(const GroupTable& G, const Subset& A) {
  const auto table = abelian_characters(G);
  const double e = static_cast<double>(table.exponent);
  double best = 0.0;
  for (const auto& chi : table.values) {
    const bool trivial = std::all_of(chi.begin(), chi.end(), [](std::size_t v) { return v == 0; });
    if (trivial) continue;
    cplx sum{};
    for (Element a : A) sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(chi[a]) / e);
    best = std::max(best, std::abs(sum));
  }
  return best;
}

std::optional<std::vector<std::size_t>> feasible_degree_vector(std::size_t n, std::size_t classes, std::size_t D) {
  std::vector<std::size_t> degrees;
  // Depth-first over nonincreasing degree sequences, largest first.
  auto search = [&](auto&& self, std::size_t slots, std::size_t sq_left, std::size_t sum_left,
                    std::size_t cap) -> bool {
    if (slots == 0) return sq_left == 0 && sum_left == 0;
    // Each remaining slot needs at least degree 1.
    if (sum_left < slots || sq_left < slots) return false;
    for (std::size_t d = std::min(cap, sum_left - (slots - 1)); d >= 1; --d) {
      if (d * d > sq_left) continue;
      degrees.push_back(d);
      if (self(self, slots - 1, sq_left - d * d, sum_left - d, d)) return true;
      degrees.pop_back();
    }
    return false;
  };
  if (classes == 0) return std::nullopt;
  if (search(search, classes, n, D, D)) return degrees;
  return std::nullopt;
}

DsumReport dsum(const GroupTable& G, std::uint64_t seed) {
  const std::size_t n = G.order();
  DsumReport report;
  report.classes = conjugacy_classes(G).size();
  if (G.is_abelian()) {
    report.dsum = n;
    report.degree_vector.assign(n, 1);
    return report;
  }
  if (n > kDsumDenseCap) throw Error(ErrorCode::SizeCap, "dsum dense path limited to order " + std::to_string(kDsumDenseCap));

  constexpr int kSamples = 3;
  for (int s = 0; s < kSamples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::vector<cplx> w(n);
    for (Element x = 0; x < n; ++x) {
      const Element xi = G.inv(x);
      if (xi < x) continue;
      if (xi == x) {
        w[x] = cplx(rng.normal(), 0.0);
      } else {
        w[x] = cplx(rng.normal(), rng.normal());
        w[xi] = std::conj(w[x]);
      }
    }
    const ConvolutionOperator T(G, std::move(w));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T.dense(), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    std::vector<double> vals(ev.data(), ev.data() + ev.size());
    const double op_norm = std::max(std::abs(vals.front()), std::abs(vals.back()));
    report.sample_counts.push_back(linalg::cluster_sorted(vals, 1e-6 * op_norm).size());
  }
  const std::size_t D = *std::max_element(report.sample_counts.begin(), report.sample_counts.end());
  auto degrees = feasible_degree_vector(n, report.classes, D);
  if (!degrees)
    throw Error(ErrorCode::InconsistentSamples, "no degree vector with " + std::to_string(report.classes) +
                                                    " classes, sum of squares " + std::to_string(n) + ", sum " +
                                                    std::to_string(D));
  const double root = std::sqrt(static_cast<double>(n));
  if (static_cast<double>(D) + 1e-9 < root || D > n)
    throw Error(ErrorCode::InconsistentSamples, "D outside [sqrt(n), n]");
  report.dsum = D;
  report.degree_vector = std::move(*degrees);
  return report;
}

double parseval_check(const GroupTable& G, std::span<const cplx> phi, std::span<const cplx> psi) {
  const std::size_t n = G.order();
  if (phi.size() != n || psi.size() != n) throw Error(ErrorCode::InvalidArgument, "function length must equal n");
  cplx lhs{};
  for (std::size_t x = 0; x < n; ++x) lhs += phi[x] * std::conj(psi[x]);
  const ConvolutionOperator Tphi(G, {phi.begin(), phi.end()});
  const ConvolutionOperator Tpsi(G, {psi.begin(), psi.end()});
  // tr(A B^*) = sum_{x,y} A[x][y] conj(B[x][y])
  cplx trace{};
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) trace += Tphi.entry(x, y) * std::conj(Tpsi.entry(x, y));
  return std::abs(lhs - trace / static_cast<double>(n));
}

}  // namespace cayspec
