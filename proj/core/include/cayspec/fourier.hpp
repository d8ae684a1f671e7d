#pragma once

// Fourier-side quantities on a finite group, evaluated through the regular
// representation so that no irreducible representation is ever built.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cayspec/group.hpp"

namespace cayspec {

using cplx = std::complex<double>;

/// Right convolution by a weight function: T[x][y] = w(y^-1 x). Every
/// irreducible rho appears d_rho times among its diagonal blocks.
class ConvolutionOperator {
 public:
  ConvolutionOperator(const GroupTable& G, std::vector<cplx> weights);

  std::size_t dim() const noexcept { return G_->order(); }
  const std::vector<cplx>& weights() const noexcept { return weights_; }

  cplx entry(Element x, Element y) const { return weights_[G_->mul(G_->inv(y), x)]; }
  Eigen::MatrixXcd dense() const;
  std::vector<cplx> apply(std::span<const cplx> v) const;

  /// w(x^-1) == conj(w(x)) for all x, within tol.
  bool hermitian_weights(double tol = 0.0) const;

 private:
  const GroupTable* G_;
  std::vector<cplx> weights_;
};

struct FourierReport {
  double nu = 0.0;
  std::string method = "regular";  ///< "regular" or "characters"
  std::string solver = "dense";    ///< "dense" (SVD) or "lanczos"
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Dense eigensolve of M^T M up to this order; above it, Lanczos on M^T M.
inline constexpr std::size_t kNuDenseCap = 512;

/// nu(A): largest singular value of T_{1_A} - (|A|/n) J.
/// Throws Error(NoConvergence) if the iterative path hits 10*n products.
FourierReport nu(const GroupTable& G, const Subset& A, double tol = 1e-10, std::uint64_t seed = 1);

/// Character-sum oracle for abelian groups: max over nontrivial characters
/// chi of |sum_{a in A} chi(a)|. Throws Error(NotAbelian).
double nu_characters(const GroupTable& G, const Subset& A);

/// All characters of an abelian group as exponents into Z_e, where e is
/// the group exponent: chi(x) = exp(2 pi i values[x] / e).
struct CharacterTable {
  std::size_t exponent = 1;
  std::vector<std::vector<std::size_t>> values;  ///< values[chi][x]
};
CharacterTable abelian_characters(const GroupTable& G);

struct DsumReport {
  std::size_t dsum = 0;
  std::size_t classes = 0;
  std::vector<std::size_t> degree_vector;  ///< nonincreasing, sum of squares == n
  std::vector<std::size_t> sample_counts;  ///< distinct-eigenvalue counts per draw
};

inline constexpr std::size_t kDsumDenseCap = 512;

/// D(G) = sum of irreducible degrees, from the number of distinct
/// eigenvalues of random Hermitian convolution operators (3 draws).
DsumReport dsum(const GroupTable& G, std::uint64_t seed = 1);

/// Some positive degree vector d_1 >= ... >= d_c with sum d_i^2 == n and
/// sum d_i == D, if one exists.
std::optional<std::vector<std::size_t>> feasible_degree_vector(std::size_t n, std::size_t classes, std::size_t D);

/// |<phi,psi> - (1/n) tr(T_phi T_psi^*)|.
double parseval_check(const GroupTable& G, std::span<const cplx> phi, std::span<const cplx> psi);

}  // namespace cayspec
