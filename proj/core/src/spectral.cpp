#include "cayspec/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "cayspec/error.hpp"
#include "cayspec/fourier.hpp"

namespace cayspec {

namespace {

void check_degree(const ComplexHandle& h, int j) {
  if (j < 0 || j > static_cast<int>(h.k()))
    throw Error(ErrorCode::InvalidArgument, "Laplacian degree " + std::to_string(j) + " outside [0, k]");
}

bool has_lower(LaplacianKind kind) { return kind != LaplacianKind::Upper; }
bool has_upper(LaplacianKind kind) { return kind != LaplacianKind::Lower; }

}  // namespace

Eigen::SparseMatrix<double> to_eigen(const SparseIncidence& d) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(d.nnz());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const auto cols = d.row_cols(r);
    const auto sg = d.row_signs(r);
    for (std::size_t i = 0; i < cols.size(); ++i)
      trips.emplace_back(static_cast<int>(r), static_cast<int>(cols[i]), static_cast<double>(sg[i]));
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(d.rows()), static_cast<Eigen::Index>(d.cols()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

LaplacianOperator::LaplacianOperator(ComplexHandle handle, int j, LaplacianKind kind)
    : handle_(std::move(handle)), j_(j), kind_(kind) {
  check_degree(handle_, j);
  dim_ = handle_.dim(j);
}

void LaplacianOperator::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  if (has_lower(kind_)) {
    const auto& d = handle_.coboundary(j_ - 1);
    std::vector<double> t(d.cols());
    d.apply_transpose(x, t);
    std::vector<double> back(dim_);
    d.apply(t, back);
    for (std::size_t i = 0; i < dim_; ++i) y[i] += back[i];
  }
  if (has_upper(kind_) && j_ < static_cast<int>(handle_.k())) {
    const auto& d = handle_.coboundary(j_);
    std::vector<double> s(d.rows());
    d.apply(x, s);
    std::vector<double> back(dim_);
    d.apply_transpose(s, back);
    for (std::size_t i = 0; i < dim_; ++i) y[i] += back[i];
  }
}

Eigen::SparseMatrix<double> LaplacianOperator::sparse() const {
  const auto N = static_cast<Eigen::Index>(dim_);
  Eigen::SparseMatrix<double> L(N, N);
  if (has_lower(kind_)) {
    const auto D = to_eigen(handle_.coboundary(j_ - 1));
    L = (D * D.transpose()).pruned();
  }
  if (has_upper(kind_) && j_ < static_cast<int>(handle_.k())) {
    const auto E = to_eigen(handle_.coboundary(j_));
    Eigen::SparseMatrix<double> up = (E.transpose() * E).pruned();
    L = L + up;
  }
  return L;
}

Eigen::MatrixXd LaplacianOperator::dense() const { return Eigen::MatrixXd(sparse()); }

SpectralReport spectral_gap(const ComplexHandle& handle, int j, double tol, GapMethod method, std::uint64_t seed) {
  check_degree(handle, j);
  const LaplacianOperator L(handle, j);
  const std::size_t dim = L.dim();
  SpectralReport report;
  const bool dense = method == GapMethod::Dense || (method == GapMethod::Auto && dim <= kDenseSpectralCap);
  if (dense) {
    if (dim > kDenseSpectralCap)
      throw Error(ErrorCode::SizeCap, "dense spectrum of dimension " + std::to_string(dim) + " exceeds " +
                                          std::to_string(kDenseSpectralCap));
    auto spectrum = linalg::symmetric_eigenvalues(L.dense());
    report.gap = spectrum.front();
    report.method = "dense";
    report.spectrum = std::move(spectrum);
    return report;
  }
  auto apply = [&L](std::span<const double> x, std::span<double> y) { L.apply(x, y); };
  auto res = linalg::lanczos_extreme(apply, dim, /*smallest=*/true, tol, 50 * dim, seed);
  report.gap = res.value;
  report.method = "lanczos";
  report.iterations = res.iterations;
  report.residual = res.residual;
  if (!res.converged)
    throw Error(ErrorCode::NoConvergence, "spectral_gap: residual " + std::to_string(res.residual) + " after " +
                                              std::to_string(res.iterations) + " products");
  return report;
}

std::vector<double> full_spectrum(const ComplexHandle& handle, int j, LaplacianKind kind) {
  check_degree(handle, j);
  const LaplacianOperator L(handle, j, kind);
  if (L.dim() > kDenseSpectralCap)
    throw Error(ErrorCode::SizeCap, "full spectrum of dimension " + std::to_string(L.dim()) + " exceeds " +
                                        std::to_string(kDenseSpectralCap));
  return linalg::symmetric_eigenvalues(L.dense());
}

double multiplicity_gap(std::size_t n) { return std::max(1e-6, 1e-6 * static_cast<double>(n)); }

std::vector<linalg::Cluster> ygk_expected_spectrum(std::size_t n, std::size_t k, int j, LaplacianKind kind) {
  std::vector<linalg::Cluster> out;
  const long kk = static_cast<long>(k);
  auto powm1 = [n](std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= (n - 1);
    return r;
  };
  for (long t = 0; t <= kk + 1; ++t) {
    std::size_t mult = 0;
    const std::size_t ck = binomial(k + 1, static_cast<std::size_t>(t));
    const std::size_t tail = powm1(static_cast<std::size_t>(kk + 1 - t));
    switch (kind) {
      case LaplacianKind::Full:
        if (t >= kk - j) mult = ck * binomial(static_cast<std::size_t>(t), static_cast<std::size_t>(kk - j)) * tail;
        break;
      case LaplacianKind::Lower:
        if (t >= kk - j + 1)
          mult = ck * binomial(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(kk - j)) * tail;
        break;
      case LaplacianKind::Upper:
        if (j < kk && t >= kk - j)
          mult = ck * binomial(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(kk - j - 1)) * tail;
        break;
    }
    if (mult > 0) out.push_back({static_cast<double>(t) * static_cast<double>(n), mult});
  }
  return out;
}

YgkReport verify_ygk_spectra(const GroupTable& G, std::size_t k) {
  const std::size_t n = G.order();
  const auto handle = build_complex(G, k, full_subset(G));
  YgkReport report;
  const double zero_cut = 1e-6 * std::max<double>(1.0, static_cast<double>(n));
  for (int j = 0; j <= static_cast<int>(k); ++j) {
    for (auto kind : {LaplacianKind::Full, LaplacianKind::Lower, LaplacianKind::Upper}) {
      if (kind == LaplacianKind::Upper && j == static_cast<int>(k)) continue;
      auto computed = full_spectrum(handle, j, kind);
      if (kind != LaplacianKind::Full)
        computed.erase(std::remove_if(computed.begin(), computed.end(), [&](double v) { return v <= zero_cut; }),
                       computed.end());
      std::vector<double> expected;
      for (const auto& c : ygk_expected_spectrum(n, k, j, kind)) expected.insert(expected.end(), c.multiplicity, c.value);
      std::sort(expected.begin(), expected.end());

      YgkCheck check;
      check.j = j;
      check.kind = kind;
      check.expected_count = expected.size();
      check.computed_count = computed.size();
      if (expected.size() == computed.size()) {
        for (std::size_t i = 0; i < expected.size(); ++i)
          check.deviation = std::max(check.deviation, std::abs(expected[i] - computed[i]));
        check.ok = check.deviation <= kSpectrumTol;
      } else {
        check.deviation = INFINITY;
        check.ok = false;
      }
      report.ok = report.ok && check.ok;
      report.max_deviation = std::max(report.max_deviation, check.deviation);
      report.checks.push_back(check);
    }
  }
  return report;
}

double restricted_gap(const ComplexHandle& handle) {
  const int k = static_cast<int>(handle.k());
  const std::size_t dim = handle.dim(k - 1);
  if (dim > kDenseSpectralCap)
    throw Error(ErrorCode::SizeCap, "restricted_gap needs dim C^{k-1} <= " + std::to_string(kDenseSpectralCap));
  const Eigen::MatrixXd D = handle.coboundary(k - 2).dense();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
  const auto rank = qr.rank();
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd basis = Q.rightCols(static_cast<Eigen::Index>(dim) - rank);
  if (basis.cols() == 0) return INFINITY;
  const auto E = to_eigen(handle.coboundary(k - 1));
  const Eigen::MatrixXd EB = E * basis;
  const Eigen::MatrixXd M = EB.transpose() * EB;
  return linalg::symmetric_eigenvalues(M).front();
}

GapBound gap_lower_bound(const ComplexHandle& handle, double tol, GapMethod method, std::uint64_t seed) {
  const int k = static_cast<int>(handle.k());
  GapBound out;
  out.nu = nu(handle.group(), handle.generators(), std::min(tol, 1e-10), seed).nu;
  out.report = spectral_gap(handle, k - 1, tol, method, seed);
  out.mu = out.report.gap;
  out.bound = static_cast<double>(handle.generators().size()) - static_cast<double>(k) * out.nu;
  out.report.bound_rhs = out.bound;
  out.slack = out.mu - out.bound;
  out.holds = out.mu >= out.bound - 1e-8;
  return out;
}

}  // namespace cayspec
