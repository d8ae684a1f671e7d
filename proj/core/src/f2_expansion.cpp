#include "cayspec/f2_expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "cayspec/error.hpp"
#include "cayspec/homology.hpp"

namespace cayspec {

namespace {

using Words = std::vector<std::uint64_t>;

std::size_t popcount(const Words& w) {
  std::size_t c = 0;
  for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
  return c;
}

void xor_into(Words& dst, const Words& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

Words to_words(std::span<const std::uint8_t> bits) {
  Words w((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1) w[i / 64] |= std::uint64_t{1} << (i % 64);
  return w;
}

// Columns of d_j over F_2: column c is d_j applied to the indicator of cell c.
std::vector<Words> f2_columns(const SparseIncidence& d) {
  std::vector<Words> cols(d.cols(), Words((d.rows() + 63) / 64, 0));
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (auto c : d.row_cols(r)) cols[c][r / 64] ^= std::uint64_t{1} << (r % 64);
  return cols;
}

void check_degree(const ComplexHandle& handle, int j, bool below_top) {
  const int k = static_cast<int>(handle.k());
  if (j < 0 || j > k || (below_top && j == k))
    throw Error(ErrorCode::InvalidArgument, "cochain degree " + std::to_string(j) + " out of range");
}

}  // namespace

std::size_t F2Cochain::weight() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return (b & 1) != 0; }));
}

std::string F2Cochain::to_string() const {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1) s[i] = '1';
  return s;
}

double ExpansionResult::value() const {
  return den == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t cosystolic_norm(const ComplexHandle& handle, const F2Cochain& phi) {
  const int j = phi.degree;
  check_degree(handle, j, false);
  if (phi.bits.size() != handle.dim(j)) throw Error(ErrorCode::InvalidArgument, "cochain length mismatch");
  const std::size_t below = handle.dim(j - 1);
  if (below > kEnumerationBits)
    throw Error(ErrorCode::EnumerationCap, "dim C^{j-1} = " + std::to_string(below) + " exceeds 28");
  const auto cols = f2_columns(handle.coboundary(j - 1));
  Words cur = to_words(phi.bits);
  std::size_t best = popcount(cur);
  const std::uint64_t total = std::uint64_t{1} << below;
  for (std::uint64_t g = 1; g < total; ++g) {
    xor_into(cur, cols[static_cast<std::size_t>(std::countr_zero(g))]);
    best = std::min(best, popcount(cur));
  }
  return best;
}

std::size_t coboundary_weight(const ComplexHandle& handle, const F2Cochain& phi) {
  const int j = phi.degree;
  check_degree(handle, j, false);
  if (phi.bits.size() != handle.dim(j)) throw Error(ErrorCode::InvalidArgument, "cochain length mismatch");
  if (j == static_cast<int>(handle.k())) return 0;
  const auto& d = handle.coboundary(j);
  std::size_t w = 0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    unsigned parity = 0;
    for (auto c : d.row_cols(r)) parity ^= phi.bits[c] & 1u;
    w += parity;
  }
  return w;
}

ExpansionResult h_constant(const ComplexHandle& handle, int j) {
  check_degree(handle, j, true);
  const std::size_t dim = handle.dim(j);
  if (dim > kEnumerationBits)
    throw Error(ErrorCode::EnumerationCap, "dim C^j = " + std::to_string(dim) + " exceeds 28");

  // B^j as masks over the j-cells, reduced to echelon form.
  std::vector<std::uint32_t> basis;
  for (const auto& col : f2_columns(handle.coboundary(j - 1))) {
    auto v = static_cast<std::uint32_t>(col.empty() ? 0 : col[0]);
    for (auto b : basis) v = std::min(v, v ^ b);
    if (v) {
      basis.push_back(v);
      std::sort(basis.begin(), basis.end(), std::greater<>());
    }
  }
  std::uint32_t pivot_bits = 0;
  for (auto b : basis) pivot_bits |= std::bit_floor(b);
  std::vector<std::size_t> free_cells;
  for (std::size_t c = 0; c < dim; ++c)
    if (!(pivot_bits & (std::uint32_t{1} << c))) free_cells.push_back(c);

  const auto up = f2_columns(handle.coboundary(j));
  ExpansionResult out;
  out.degree = j;
  Words dphi(up.empty() ? 0 : up[0].size(), 0);
  std::uint32_t phi = 0;
  std::uint64_t best_num = 0, best_den = 0;
  std::uint32_t best_phi = 0;
  const std::uint64_t reps = std::uint64_t{1} << free_cells.size();
  const std::uint64_t span = std::uint64_t{1} << basis.size();
  auto lex_key = [dim](std::uint32_t v) {
    // Bit-string order with cell 0 first.
    std::uint32_t r = 0;
    for (std::size_t c = 0; c < dim; ++c)
      if (v & (std::uint32_t{1} << c)) r |= std::uint32_t{1} << (dim - 1 - c);
    return r;
  };
  for (std::uint64_t g = 1; g < reps; ++g) {
    const std::size_t cell = free_cells[static_cast<std::size_t>(std::countr_zero(g))];
    phi ^= std::uint32_t{1} << cell;
    xor_into(dphi, up[cell]);
    const std::uint64_t num = popcount(dphi);
    std::uint32_t cur = phi;
    std::uint64_t csy = static_cast<std::uint64_t>(std::popcount(cur));
    for (std::uint64_t h = 1; h < span; ++h) {
      cur ^= basis[static_cast<std::size_t>(std::countr_zero(h))];
      csy = std::min<std::uint64_t>(csy, static_cast<std::uint64_t>(std::popcount(cur)));
    }
    out.enumerated += span;
    ++out.cosets;
    const bool first = best_den == 0;
    const std::uint64_t lhs = static_cast<std::uint64_t>(num) * best_den;
    const std::uint64_t rhs = static_cast<std::uint64_t>(best_num) * csy;
    if (first || lhs < rhs || (lhs == rhs && lex_key(phi) < lex_key(best_phi))) {
      best_num = num;
      best_den = csy;
      best_phi = phi;
    }
  }
  out.enumerated += span;  // the zero class
  if (best_den != 0) {
    const std::uint64_t g = std::gcd(best_num, best_den);
    out.num = best_num / g;
    out.den = best_den / g;
    if (out.num == 0) out.den = 1;
    out.witness.degree = j;
    out.witness.bits.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) out.witness.bits[c] = (best_phi >> c) & 1u;
  }
  return out;
}

std::size_t f2_reduced_betti(const ComplexHandle& handle, int j) {
  check_degree(handle, j, false);
  const std::size_t upper = j < static_cast<int>(handle.k()) ? rank_mod_p(handle.coboundary(j), 2) : 0;
  return handle.dim(j) - upper - rank_mod_p(handle.coboundary(j - 1), 2);
}

}  // namespace cayspec
