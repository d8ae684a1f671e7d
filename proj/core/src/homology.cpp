#include "cayspec/homology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "cayspec/error.hpp"
#include "cayspec/random.hpp"
#include "cayspec/spectral.hpp"

namespace cayspec {

namespace {

using SparseRow = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

long long ipow(long long b, std::size_t e) {
  long long r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t x) {
  if (x >> 32) throw Error(ErrorCode::InvalidArgument, "primality test limited to 32-bit inputs");
  if (x < 2) return false;
  for (std::uint64_t q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (x == q) return true;
    if (x % q == 0) return false;
  }
  std::uint64_t d = x - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t y = pow_mod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      y = y * y % x;
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t random_prime30(std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    const std::uint64_t c = (std::uint64_t{1} << 29) + rng.below(std::uint64_t{1} << 29);
    if (is_prime(c | 1)) return c | 1;
  }
}

std::size_t rank_mod_p(const SparseIncidence& d, std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "modulus " + std::to_string(p) + " is not prime");
  std::vector<std::size_t> order(d.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.row_cols(a).size() < d.row_cols(b).size(); });

  std::unordered_map<std::uint32_t, SparseRow> pivots;
  pivots.reserve(std::min(d.rows(), d.cols()));
  SparseRow row, next;
  std::size_t rank = 0;
  for (std::size_t r : order) {
    if (rank == d.cols()) break;
    row.clear();
    const auto cols = d.row_cols(r);
    const auto sg = d.row_signs(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::uint64_t v = sg[i] > 0 ? 1 % p : p - 1;
      if (v) row.emplace_back(cols[i], v);
    }
    std::sort(row.begin(), row.end());

    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) {
        const std::uint64_t s = inv_mod(row.front().second, p);
        for (auto& e : row) e.second = e.second * s % p;
        pivots.emplace(row.front().first, row);
        ++rank;
        break;
      }
      // row -= row[0] * pivot (pivot has leading coefficient 1)
      const std::uint64_t f = row.front().second;
      const SparseRow& piv = it->second;
      next.clear();
      std::size_t a = 0, b = 0;
      while (a < row.size() || b < piv.size()) {
        if (b == piv.size() || (a < row.size() && row[a].first < piv[b].first)) {
          next.push_back(row[a++]);
        } else {
          const std::uint64_t sub = f * piv[b].second % p;
          if (a < row.size() && row[a].first == piv[b].first) {
            const std::uint64_t v = (row[a].second + p - sub) % p;
            if (v) next.emplace_back(row[a].first, v);
            ++a;
          } else if (sub) {
            next.emplace_back(piv[b].first, p - sub);
          }
          ++b;
        }
      }
      row.swap(next);
    }
  }
  return rank;
}

BettiProfile betti(const ComplexHandle& handle, std::uint64_t p, int top) {
  const int k = static_cast<int>(handle.k());
  if (top < 0) top = k;
  if (top > k) throw Error(ErrorCode::InvalidArgument, "skeleton dimension exceeds k");
  BettiProfile out;
  out.prime = p;
  for (int j = 0; j <= top; ++j) out.dims.push_back(handle.dim(j));
  for (int j = -1; j < top; ++j) out.ranks.push_back(rank_mod_p(handle.coboundary(j), p));
  auto rank = [&](int j) -> long long {
    return j >= top ? 0 : static_cast<long long>(out.ranks[static_cast<std::size_t>(j + 1)]);
  };
  long long euler_cells = -1, euler_betti = 0;
  for (int j = 0; j <= top; ++j) {
    const long long b = static_cast<long long>(out.dims[static_cast<std::size_t>(j)]) - rank(j) - rank(j - 1);
    if (b < 0) throw std::logic_error("negative Betti number: rank computation is inconsistent");
    out.betti.push_back(b);
    const long long sign = (j % 2 == 0) ? 1 : -1;
    euler_cells += sign * static_cast<long long>(out.dims[static_cast<std::size_t>(j)]);
    euler_betti += sign * b;
  }
  if (euler_cells != euler_betti) throw std::logic_error("reduced Euler characteristic mismatch");
  return out;
}

Gamma gamma(std::size_t m, std::size_t k, std::size_t n) {
  if (m == 0 || n % m != 0)
    throw Error(ErrorCode::NotADivisor, std::to_string(m) + " does not divide " + std::to_string(n));
  const long long l = static_cast<long long>(n / m);
  const long long N = static_cast<long long>(n), M = static_cast<long long>(m);
  Gamma g;
  g.gamma1 = ipow(l, k) * ipow(M - 1, k + 1);
  g.gamma0 = (N - M) * ipow(N, k) + g.gamma1 - ipow(N - 1, k + 1);
  return g;
}

long long matroid_count(std::size_t n, std::size_t k) {
  return ipow(static_cast<long long>(n), k) - ipow(static_cast<long long>(n) - 1, k);
}

SubgroupHomotopyReport verify_subgroup_homotopy(const GroupTable& G, const Subset& A, std::size_t k,
                                                std::uint64_t p) {
  if (A.empty() || !is_subgroup(G, A)) throw Error(ErrorCode::NotASubgroup, "generator set is not a subgroup");
  SubgroupHomotopyReport out;
  const std::size_t n = G.order();
  out.m = A.size();
  out.index = n / out.m;
  out.expected = gamma(out.m, k, n);
  out.profile = betti(build_complex(G, k, A), p);
  const auto& b = out.profile.betti;
  const long long l = static_cast<long long>(out.index), m = static_cast<long long>(out.m);
  if (k == 1) {
    out.ok = b[0] == l - 1 && b[1] == l * (m - 1) * (m - 1);
  } else {
    out.ok = b[k - 1] == out.expected.gamma0 && b[k] == out.expected.gamma1;
    for (std::size_t j = 0; j + 1 < k; ++j) out.ok = out.ok && b[j] == 0;
  }
  return out;
}

ZeroGapReport zero_gap_when_proper(const GroupTable& G, const Subset& A, std::size_t k) {
  ZeroGapReport out;
  out.closure_order = subgroup_closure(G, A).size();
  out.proper = out.closure_order < G.order();
  if (!out.proper) return out;
  const auto handle = build_complex(G, k, A);
  out.betti_km1 = betti(handle).betti[k - 1];
  out.gamma0 = gamma(out.closure_order, k, G.order()).gamma0;
  out.betti_ok = out.gamma0 > 0 && out.betti_km1 >= out.gamma0;
  out.gap = spectral_gap(handle, static_cast<int>(k) - 1).gap;
  out.gap_ok = out.gap <= 1e-6;
  return out;
}

}  // namespace cayspec
