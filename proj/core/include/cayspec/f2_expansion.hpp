#pragma once

// Exhaustive coboundary expansion over F_2 for tiny complexes.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cayspec/complex.hpp"

namespace cayspec {

/// Largest cochain dimension that is enumerated (2^28 vectors).
inline constexpr std::size_t kEnumerationBits = 28;

struct F2Cochain {
  int degree = 0;
  std::vector<std::uint8_t> bits;  ///< one 0/1 entry per cell

  std::size_t weight() const;
  std::string to_string() const;  ///< "0101...", cell order
};

/// min |supp(phi + d_{j-1} psi)| over psi in C^{j-1}. The augmentation
/// makes B^0 = {0, all-ones}. EnumerationCap if dim C^{j-1} > 28.
std::size_t cosystolic_norm(const ComplexHandle& handle, const F2Cochain& phi);

/// ||d_j phi||_H, the support size of the F_2 coboundary.
std::size_t coboundary_weight(const ComplexHandle& handle, const F2Cochain& phi);

struct ExpansionResult {
  int degree = 0;
  std::uint64_t num = 0;
  std::uint64_t den = 0;  ///< 0 when every cochain is a coboundary
  double value() const;
  F2Cochain witness;
  std::uint64_t enumerated = 0;  ///< cochains examined
  std::uint64_t cosets = 0;      ///< nonzero classes of C^j / B^j
};

/// h_j = min ||d_j phi||_H / ||phi||_csy over phi not in B^j, 0 <= j < k,
/// as a reduced fraction. Ties keep the lexicographically smallest witness.
/// EnumerationCap if dim C^j > 28.
ExpansionResult h_constant(const ComplexHandle& handle, int j);

/// dim C^j - rank_2 d_j - rank_2 d_{j-1}.
std::size_t f2_reduced_betti(const ComplexHandle& handle, int j);

}  // namespace cayspec
