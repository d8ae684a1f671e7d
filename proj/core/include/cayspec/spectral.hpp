#pragma once

// Reduced Laplacians L_j = d_{j-1} d_{j-1}^* + d_j^* d_j of a balanced
// Cayley complex, their spectra and spectral gaps.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cayspec/complex.hpp"
#include "cayspec/linalg.hpp"

namespace cayspec {

/// Dense eigensolves are used up to this cochain dimension.
inline constexpr std::size_t kDenseSpectralCap = 3000;

/// Absolute tolerance for comparing against integer-valued spectra.
inline constexpr double kSpectrumTol = 1e-8;

enum class LaplacianKind { Full, Lower, Upper };

/// Matrix-free reduced Laplacian on C^j, 0 <= j <= k. The upper part is
/// zero on the top dimension.
class LaplacianOperator {
 public:
  LaplacianOperator(ComplexHandle handle, int j, LaplacianKind kind = LaplacianKind::Full);

  std::size_t dim() const noexcept { return dim_; }
  int degree() const noexcept { return j_; }
  LaplacianKind kind() const noexcept { return kind_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  Eigen::SparseMatrix<double> sparse() const;
  Eigen::MatrixXd dense() const;

 private:
  ComplexHandle handle_;
  int j_;
  LaplacianKind kind_;
  std::size_t dim_;
};

Eigen::SparseMatrix<double> to_eigen(const SparseIncidence& d);

enum class GapMethod { Auto, Dense, Iterative };

struct SpectralReport {
  double gap = 0.0;
  std::string method;  ///< "dense" or "lanczos"
  std::optional<std::vector<double>> spectrum;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::optional<double> bound_rhs;  ///< |A| - k nu(A) when computed
};

/// mu_j, the smallest eigenvalue of L_j. Auto picks dense up to
/// kDenseSpectralCap. The iterative path is restarted Lanczos with
/// residual tolerance tol and 50*dim products; throws NoConvergence.
SpectralReport spectral_gap(const ComplexHandle& handle, int j, double tol = 1e-9, GapMethod method = GapMethod::Auto,
                            std::uint64_t seed = 1);

/// Sorted eigenvalues of L_j (or of L_j^-/L_j^+). Throws SizeCap above the dense cap.
std::vector<double> full_spectrum(const ComplexHandle& handle, int j, LaplacianKind kind = LaplacianKind::Full);

/// Cluster gap used for multiplicity counting: max(1e-6, 1e-6 n).
double multiplicity_gap(std::size_t n);

/// Closed-form spectra of the full complex Y_{G,k} as (value, multiplicity):
///   Full : {tn : k-j <= t <= k+1},   mult C(k+1,t) C(t,k-j) (n-1)^{k+1-t}
///   Lower: {tn : k-j+1 <= t <= k+1}, mult C(k+1,t) C(t-1,k-j) (n-1)^{k+1-t}   (on img d_{j-1})
///   Upper: {tn : k-j <= t <= k+1},   mult C(k+1,t) C(t-1,k-j-1) (n-1)^{k+1-t} (on img d_j^*, j<k)
std::vector<linalg::Cluster> ygk_expected_spectrum(std::size_t n, std::size_t k, int j, LaplacianKind kind);

struct YgkCheck {
  int j = 0;
  LaplacianKind kind = LaplacianKind::Full;
  std::size_t expected_count = 0;
  std::size_t computed_count = 0;
  double deviation = 0.0;
  bool ok = false;
};

struct YgkReport {
  bool ok = true;
  double max_deviation = 0.0;
  std::vector<YgkCheck> checks;
};

/// Compares every L_j, and L_j^-/L_j^+ restricted to img d_{j-1}/img d_j^*,
/// on Y_{G,k} against the closed forms. The restriction to the image of
/// d is the nonzero part of the spectrum.
YgkReport verify_ygk_spectra(const GroupTable& G, std::size_t k);

/// min of ||d_{k-1} phi||^2 / ||phi||^2 over 0 != phi in ker d_{k-2}^*,
/// from an explicit orthonormal basis of that kernel. Dense only.
double restricted_gap(const ComplexHandle& handle);

struct GapBound {
  double bound = 0.0;  ///< |A| - k nu(A)
  double mu = 0.0;
  double nu = 0.0;
  bool holds = false;  ///< mu >= bound - 1e-8
  double slack = 0.0;  ///< mu - bound
  SpectralReport report;
};

GapBound gap_lower_bound(const ComplexHandle& handle, double tol = 1e-9, GapMethod method = GapMethod::Auto,
                         std::uint64_t seed = 1);

}  // namespace cayspec
