#pragma once

// Small numerical kernels shared by the spectral, fourier and garland code.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cayspec::linalg {

/// y = A x for a symmetric operator A.
using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

struct IterativeEigen {
  double value = 0.0;
  double residual = 0.0;  ///< ||A v - value v|| for the returned unit vector
  std::size_t iterations = 0;  ///< matrix-vector products spent
  bool converged = false;
  std::vector<double> vector;
};

/// Restarted Lanczos with full reorthogonalization for the smallest (or
/// largest) eigenvalue. Converged when the explicit residual is <= tol.
/// Never throws on non-convergence; callers decide.
IterativeEigen lanczos_extreme(const MatVec& apply, std::size_t dim, bool smallest, double tol,
                               std::size_t max_matvecs, std::uint64_t seed);

/// Ascending eigenvalues of a dense symmetric matrix.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

struct Cluster {
  double value = 0.0;  ///< mean of the clustered eigenvalues
  std::size_t multiplicity = 0;
};

/// Groups an ascending sequence into runs whose consecutive gaps are <= gap.
std::vector<Cluster> cluster_sorted(std::span<const double> sorted, double gap);

/// Numerical rank from singular values at relative threshold rel * sigma_max.
std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel = 1e-8);

}  // namespace cayspec::linalg
