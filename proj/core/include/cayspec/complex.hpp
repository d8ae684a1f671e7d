#pragma once

// Balanced Cayley complexes Y_{A,k}: k+1 parts {i} x G, the full
// (k-1)-skeleton of their join, and top cells (y_1..y_{k+1}) with
// y_1 * ... * y_{k+1} in A. Parts are 0-based here.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cayspec/group.hpp"

namespace cayspec {

using CellId = std::int64_t;

/// Limit on (k+1) * n^k, the dimension of C^{k-1}.
inline constexpr std::size_t kCochainCap = 200'000;

/// An oriented simplex: vertices listed in increasing part order.
struct Cell {
  std::vector<int> parts;
  std::vector<Element> elems;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Bijection between the j-cells of Y_{A,k} and [0, count).
///   j < k : rank(parts) * n^{j+1} + mixed-radix(elems), first elem most significant
///   j == k: mixed-radix(y_1..y_k) * |A| + position of the product in A
class CellIndexer {
 public:
  CellIndexer(GroupPtr G, std::size_t k, int j, std::shared_ptr<const Subset> A);

  int dim() const noexcept { return j_; }
  std::size_t count() const noexcept { return count_; }

  Cell unrank(CellId id) const;
  /// nullopt when the vertex set is not a j-cell of the complex.
  std::optional<CellId> rank(const Cell& cell) const;

  // Allocation-free paths used when assembling coboundaries.
  CellId rank_lower(std::uint32_t part_mask, std::span<const Element> elems) const;
  void unrank_top(CellId id, std::span<Element> tuple) const;
  std::optional<CellId> rank_top(std::span<const Element> tuple) const;

 private:
  GroupPtr G_;
  std::size_t k_;
  int j_;
  std::shared_ptr<const Subset> A_;
  std::size_t n_;
  std::size_t count_;
  std::size_t block_;                     // n^{j+1}
  std::vector<std::uint32_t> masks_;      // part subsets of size j+1, lex order
  std::vector<std::int32_t> mask_rank_;   // mask -> rank, -1 otherwise
  std::vector<std::int32_t> a_pos_;       // element -> position in A, -1 otherwise
};

struct IncidenceEntry {
  std::size_t row;
  std::size_t col;
  int sign;
  friend bool operator==(const IncidenceEntry&, const IncidenceEntry&) = default;
};

/// Signed 0/+-1 matrix in CSR form.
class SparseIncidence {
 public:
  SparseIncidence() = default;
  SparseIncidence(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                  std::vector<std::uint32_t> col_idx, std::vector<std::int8_t> signs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t r) const noexcept {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const std::int8_t> row_signs(std::size_t r) const noexcept {
    return {signs_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  std::vector<IncidenceEntry> entries() const;

  /// y = D x
  void apply(std::span<const double> x, std::span<double> y) const;
  /// x = D^T y
  void apply_transpose(std::span<const double> y, std::span<double> x) const;

  Eigen::MatrixXd dense() const;

  /// "ROWS COLS NNZ" then one "row col sign" line per entry, 0-based.
  void write_text(std::ostream& out) const;

  friend bool operator==(const SparseIncidence&, const SparseIncidence&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<std::int8_t> signs_;
};

/// Product of two incidence matrices as exact integers: (B*A) == 0.
bool composes_to_zero(const SparseIncidence& after, const SparseIncidence& before);

/// Immutable realization of Y_{A,k}. Copies share state; coboundaries are
/// assembled on first use under std::call_once.
class ComplexHandle {
 public:
  const GroupTable& group() const noexcept { return *state_->G; }
  const GroupPtr& group_ptr() const noexcept { return state_->G; }
  std::size_t k() const noexcept { return state_->k; }
  const Subset& generators() const noexcept { return *state_->A; }

  /// Indexer for j-cells, -1 <= j <= k.
  const CellIndexer& cells(int j) const;
  std::size_t dim(int j) const { return cells(j).count(); }

  /// d_j : C^j -> C^{j+1}, -1 <= j <= k-1 (rows are (j+1)-cells).
  const SparseIncidence& coboundary(int j) const;

 private:
  friend ComplexHandle build_complex(GroupPtr G, std::size_t k, Subset A);

  struct State {
    GroupPtr G;
    std::size_t k = 0;
    std::shared_ptr<const Subset> A;
    std::vector<CellIndexer> indexers;  // index j+1
    std::unique_ptr<std::once_flag[]> once;
    mutable std::vector<SparseIncidence> d;  // index j+1
  };
  std::shared_ptr<State> state_;
};

/// Requires k >= 1, A nonempty, (k+1) n^k <= kCochainCap (else SizeCap).
ComplexHandle build_complex(GroupPtr G, std::size_t k, Subset A);
ComplexHandle build_complex(const GroupTable& G, std::size_t k, Subset A);

struct DegreeCheck {
  bool ok = true;
  std::optional<CellId> counterexample;  ///< first (k-1)-cell with the wrong degree
  std::size_t degree = 0;                ///< its degree
};

/// Every (k-1)-cell must lie in exactly |A| top cells.
DegreeCheck degree_check(const ComplexHandle& handle);

/// C(n, r) as an integer.
std::size_t binomial(std::size_t n, std::size_t r);

}  // namespace cayspec
