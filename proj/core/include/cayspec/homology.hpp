#pragma once

// Reduced Betti numbers of Y_{A,k} from ranks of the coboundaries over a
// prime field, and the closed forms for subgroup generator sets.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cayspec/complex.hpp"

namespace cayspec {

inline constexpr std::uint64_t kDefaultPrime = 1073741789;

/// Rank of a signed incidence matrix over GF(p), p prime (p = 2 allowed).
/// Sparse elimination; rows are taken in increasing fill order.
std::size_t rank_mod_p(const SparseIncidence& d, std::uint64_t p = kDefaultPrime);

/// Deterministic Miller-Rabin for x < 2^32.
bool is_prime(std::uint64_t x);

/// A uniformly chosen prime in [2^29, 2^30).
std::uint64_t random_prime30(std::uint64_t seed);

struct BettiProfile {
  std::uint64_t prime = kDefaultPrime;
  std::vector<std::size_t> dims;   ///< dim C^j, j = 0..top
  std::vector<std::size_t> ranks;  ///< rank d_j, j = -1..top-1 (index j+1)
  std::vector<long long> betti;    ///< reduced Betti numbers, j = 0..top
};

/// Betti numbers of the complex truncated at dimension `top` (default k),
/// i.e. of its top-skeleton.
BettiProfile betti(const ComplexHandle& handle, std::uint64_t p = kDefaultPrime, int top = -1);

struct Gamma {
  long long gamma0 = 0;
  long long gamma1 = 0;
};

/// gamma0 = (n-m) n^k + l^k (m-1)^{k+1} - (n-1)^{k+1}, gamma1 = l^k (m-1)^{k+1}, l = n/m.
/// Throws NotADivisor unless m | n.
Gamma gamma(std::size_t m, std::size_t k, std::size_t n);

/// N_k = n^k - (n-1)^k.
long long matroid_count(std::size_t n, std::size_t k);

struct SubgroupHomotopyReport {
  std::size_t m = 0;
  std::size_t index = 0;  ///< l = n/m
  Gamma expected;
  BettiProfile profile;
  bool ok = false;
};

/// For a subgroup A: k >= 2 checks beta_{k-1} = gamma0, beta_k = gamma1 and
/// all lower reduced Betti numbers vanish; k = 1 checks beta_0 = l-1 and
/// beta_1 = l (m-1)^2. Throws NotASubgroup.
SubgroupHomotopyReport verify_subgroup_homotopy(const GroupTable& G, const Subset& A, std::size_t k,
                                                std::uint64_t p = kDefaultPrime);

struct ZeroGapReport {
  bool proper = false;  ///< <A> != G
  std::size_t closure_order = 0;
  long long betti_km1 = 0;
  long long gamma0 = 0;
  double gap = 0.0;
  bool betti_ok = true;
  bool gap_ok = true;
  bool holds() const { return betti_ok && gap_ok; }
};

/// When <A> is proper, beta_{k-1}(Y_{A,k}) >= gamma0(|<A>|, k) > 0 and mu_{k-1} = 0 within 1e-6.
ZeroGapReport zero_gap_when_proper(const GroupTable& G, const Subset& A, std::size_t k);

}  // namespace cayspec
