#include "cayspec/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "cayspec/random.hpp"

namespace cayspec::linalg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

IterativeEigen lanczos_extreme(const MatVec& apply, std::size_t dim, bool smallest, double tol,
                               std::size_t max_matvecs, std::uint64_t seed) {
  IterativeEigen out;
  if (dim == 0) return out;
  const std::size_t krylov = std::min<std::size_t>(dim, dim > 50'000 ? 60 : 120);

  Rng rng(seed);
  std::vector<double> start(dim);
  for (auto& x : start) x = rng.uniform(-1.0, 1.0);
  double nrm = norm(start);
  for (auto& x : start) x /= nrm;

  Eigen::MatrixXd basis(dim, krylov);
  std::vector<double> w(dim), ritz(dim), resid(dim);

  while (true) {
    std::vector<double> alpha, beta;
    std::size_t m = 0;
    Eigen::Map<Eigen::VectorXd>(basis.col(0).data(), dim) = Eigen::Map<const Eigen::VectorXd>(start.data(), dim);
    for (; m < krylov; ++m) {
      std::span<const double> v(basis.col(m).data(), dim);
      apply(v, w);
      ++out.iterations;
      alpha.push_back(dot(v, w));
      // Two passes of classical Gram-Schmidt against the whole basis.
      Eigen::Map<Eigen::VectorXd> wv(w.data(), dim);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = basis.leftCols(m + 1).transpose() * wv;
        wv -= basis.leftCols(m + 1) * coeff;
      }
      const double b = wv.norm();
      if (m + 1 == krylov) break;
      if (b <= 1e-12 * std::max(1.0, std::abs(alpha.back()))) {
        ++m;
        break;
      }
      beta.push_back(b);
      basis.col(m + 1) = wv / b;
    }
    m = alpha.size();

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      tri(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
      if (i + 1 < m) {
        tri(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
        tri(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const Eigen::Index pick = smallest ? 0 : static_cast<Eigen::Index>(m) - 1;
    const Eigen::VectorXd y = es.eigenvectors().col(pick);

    Eigen::Map<Eigen::VectorXd> rv(ritz.data(), dim);
    rv = basis.leftCols(static_cast<Eigen::Index>(m)) * y;
    rv /= rv.norm();
    apply(ritz, resid);
    ++out.iterations;
    const double rq = dot(ritz, resid);
    for (std::size_t i = 0; i < dim; ++i) resid[i] -= rq * ritz[i];
    out.value = rq;
    out.residual = norm(resid);
    out.vector = ritz;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= max_matvecs) return out;
    start = ritz;
  }
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<Cluster> cluster_sorted(std::span<const double> sorted, double gap) {
  std::vector<Cluster> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    double sum = sorted[i];
    while (j < sorted.size() && sorted[j] - sorted[j - 1] <= gap) sum += sorted[j++];
    out.push_back({sum / static_cast<double>(j - i), j - i});
    i = j;
  }
  return out;
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel) {
  if (m.size() == 0) return 0;
  // BDCSVD in Eigen 3.4 can misplace the leading singular values of
  // matrices with large repeated blocks; Jacobi is slower but reliable.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel * s(0);
  return static_cast<std::size_t>((s.array() > cut).count());
}

}  // namespace cayspec::linalg
