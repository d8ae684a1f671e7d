#include "cayspec/complex.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <string>

#include "cayspec/error.hpp"

namespace cayspec {

namespace {

// Subsets of {0..parts-1} of the given size, as bitmasks in lex order of
// their sorted member lists.
std::vector<std::uint32_t> lex_subsets(std::size_t parts, std::size_t size) {
  std::vector<std::uint32_t> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int next) -> void {
    if (pick.size() == size) {
      std::uint32_t m = 0;
      for (int p : pick) m |= 1u << p;
      out.push_back(m);
      return;
    }
    for (int p = next; p < static_cast<int>(parts); ++p) {
      pick.push_back(p);
      self(self, p + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::size_t checked_pow(std::size_t base, std::size_t e, std::size_t limit) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > limit / std::max<std::size_t>(base, 1)) return limit + 1;
    r *= base;
  }
  return r;
}

}  // namespace

std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  std::size_t c = 1;
  for (std::size_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

// ---------------------------------------------------------------- indexer

CellIndexer::CellIndexer(GroupPtr G, std::size_t k, int j, std::shared_ptr<const Subset> A)
    : G_(std::move(G)), k_(k), j_(j), A_(std::move(A)), n_(G_->order()) {
  if (j < -1 || j > static_cast<int>(k)) throw Error(ErrorCode::InvalidArgument, "cell dimension out of range");
  const std::size_t verts = static_cast<std::size_t>(j + 1);
  if (j < static_cast<int>(k)) {
    masks_ = lex_subsets(k + 1, verts);
    mask_rank_.assign(std::size_t{1} << (k + 1), -1);
    for (std::size_t i = 0; i < masks_.size(); ++i) mask_rank_[masks_[i]] = static_cast<std::int32_t>(i);
    block_ = checked_pow(n_, verts, SIZE_MAX / 2);
    count_ = masks_.size() * block_;
  } else {
    block_ = checked_pow(n_, k, SIZE_MAX / 2);
    count_ = block_ * A_->size();
    a_pos_.assign(n_, -1);
    for (std::size_t i = 0; i < A_->size(); ++i) a_pos_[(*A_)[i]] = static_cast<std::int32_t>(i);
  }
}

CellId CellIndexer::rank_lower(std::uint32_t part_mask, std::span<const Element> elems) const {
  std::size_t mixed = 0;
  for (Element e : elems) mixed = mixed * n_ + e;
  return static_cast<CellId>(static_cast<std::size_t>(mask_rank_[part_mask]) * block_ + mixed);
}

void CellIndexer::unrank_top(CellId id, std::span<Element> tuple) const {
  const std::size_t m = A_->size();
  const Element a = (*A_)[static_cast<std::size_t>(id) % m];
  std::size_t mixed = static_cast<std::size_t>(id) / m;
  for (std::size_t t = k_; t-- > 0;) {
    tuple[t] = static_cast<Element>(mixed % n_);
    mixed /= n_;
  }
  Element prefix = GroupTable::kIdentity;
  for (std::size_t t = 0; t < k_; ++t) prefix = G_->mul(prefix, tuple[t]);
  tuple[k_] = G_->mul(G_->inv(prefix), a);
}

std::optional<CellId> CellIndexer::rank_top(std::span<const Element> tuple) const {
  Element prod = GroupTable::kIdentity;
  std::size_t mixed = 0;
  for (std::size_t t = 0; t <= k_; ++t) {
    prod = G_->mul(prod, tuple[t]);
    if (t < k_) mixed = mixed * n_ + tuple[t];
  }
  const auto pos = a_pos_[prod];
  if (pos < 0) return std::nullopt;
  return static_cast<CellId>(mixed * A_->size() + static_cast<std::size_t>(pos));
}

Cell CellIndexer::unrank(CellId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= count_) throw Error(ErrorCode::NotACell, "cell id out of range");
  Cell cell;
  if (j_ == static_cast<int>(k_)) {
    cell.elems.resize(k_ + 1);
    unrank_top(id, cell.elems);
    for (std::size_t p = 0; p <= k_; ++p) cell.parts.push_back(static_cast<int>(p));
    return cell;
  }
  const std::size_t verts = static_cast<std::size_t>(j_ + 1);
  const std::uint32_t mask = masks_[static_cast<std::size_t>(id) / block_];
  for (int p = 0; p <= static_cast<int>(k_); ++p)
    if (mask & (1u << p)) cell.parts.push_back(p);
  cell.elems.resize(verts);
  std::size_t mixed = static_cast<std::size_t>(id) % block_;
  for (std::size_t t = verts; t-- > 0;) {
    cell.elems[t] = static_cast<Element>(mixed % n_);
    mixed /= n_;
  }
  return cell;
}

std::optional<CellId> CellIndexer::rank(const Cell& cell) const {
  const std::size_t verts = static_cast<std::size_t>(j_ + 1);
  if (cell.parts.size() != verts || cell.elems.size() != verts) return std::nullopt;
  std::uint32_t mask = 0;
  for (std::size_t t = 0; t < verts; ++t) {
    if (cell.parts[t] < 0 || cell.parts[t] > static_cast<int>(k_) || cell.elems[t] >= n_) return std::nullopt;
    if (t > 0 && cell.parts[t] <= cell.parts[t - 1]) return std::nullopt;
    mask |= 1u << cell.parts[t];
  }
  if (j_ == static_cast<int>(k_)) return rank_top(cell.elems);
  return rank_lower(mask, cell.elems);
}

// ------------------------------------------------------------- incidence

SparseIncidence::SparseIncidence(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                                 std::vector<std::uint32_t> col_idx, std::vector<std::int8_t> signs)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), signs_(std::move(signs)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.back() != col_idx_.size() || col_idx_.size() != signs_.size())
    throw Error(ErrorCode::InvalidArgument, "malformed CSR arrays");
}

std::vector<IncidenceEntry> SparseIncidence::entries() const {
  std::vector<IncidenceEntry> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out.push_back({r, col_idx_[p], signs_[p]});
  return out;
}

void SparseIncidence::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += signs_[p] * x[col_idx_[p]];
    y[r] = s;
  }
}

void SparseIncidence::apply_transpose(std::span<const double> y, std::span<double> x) const {
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double v = y[r];
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) x[col_idx_[p]] += signs_[p] * v;
  }
}

Eigen::MatrixXd SparseIncidence::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      m(static_cast<Eigen::Index>(r), col_idx_[p]) += signs_[p];
  return m;
}

void SparseIncidence::write_text(std::ostream& out) const {
  out << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      out << r << ' ' << col_idx_[p] << ' ' << static_cast<int>(signs_[p]) << '\n';
}

bool composes_to_zero(const SparseIncidence& after, const SparseIncidence& before) {
  if (after.cols() != before.rows()) return false;
  std::vector<long long> acc(before.cols(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < after.rows(); ++r) {
    touched.clear();
    const auto cols = after.row_cols(r);
    const auto sg = after.row_signs(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto inner_cols = before.row_cols(cols[i]);
      const auto inner_sg = before.row_signs(cols[i]);
      for (std::size_t t = 0; t < inner_cols.size(); ++t) {
        acc[inner_cols[t]] += sg[i] * inner_sg[t];
        touched.push_back(inner_cols[t]);
      }
    }
    for (auto c : touched) {
      if (acc[c] != 0) return false;
    }
  }
  return true;
}

// --------------------------------------------------------------- complex

const CellIndexer& ComplexHandle::cells(int j) const {
  if (j < -1 || j > static_cast<int>(state_->k))
    throw Error(ErrorCode::InvalidArgument, "cell dimension " + std::to_string(j) + " out of range");
  return state_->indexers[static_cast<std::size_t>(j + 1)];
}

const SparseIncidence& ComplexHandle::coboundary(int j) const {
  const int k = static_cast<int>(state_->k);
  if (j < -1 || j > k - 1) throw Error(ErrorCode::InvalidArgument, "coboundary index " + std::to_string(j) + " out of range");
  const auto slot = static_cast<std::size_t>(j + 1);
  std::call_once(state_->once[slot], [&] {
    const CellIndexer& rows = cells(j + 1);
    const CellIndexer& cols = cells(j);
    const std::size_t R = rows.count();
    const std::size_t per_row = static_cast<std::size_t>(j + 2);
    std::vector<std::size_t> row_ptr(R + 1);
    std::vector<std::uint32_t> col_idx(R * per_row);
    std::vector<std::int8_t> signs(R * per_row);
    for (std::size_t r = 0; r <= R; ++r) row_ptr[r] = r * per_row;

    if (j == -1) {
      std::fill(col_idx.begin(), col_idx.end(), 0u);
      std::fill(signs.begin(), signs.end(), std::int8_t{1});
    } else {
      std::vector<Element> elems(per_row), face(per_row - 1);
      std::vector<int> parts(per_row);
      for (std::size_t r = 0; r < R; ++r) {
        std::uint32_t mask = 0;
        if (j + 1 == k) {
          rows.unrank_top(static_cast<CellId>(r), elems);
          for (std::size_t t = 0; t < per_row; ++t) parts[t] = static_cast<int>(t);
          mask = (1u << per_row) - 1u;
        } else {
          const Cell c = rows.unrank(static_cast<CellId>(r));
          for (std::size_t t = 0; t < per_row; ++t) {
            parts[t] = c.parts[t];
            elems[t] = c.elems[t];
            mask |= 1u << c.parts[t];
          }
        }
        for (std::size_t i = 0; i < per_row; ++i) {
          std::size_t w = 0;
          for (std::size_t t = 0; t < per_row; ++t)
            if (t != i) face[w++] = elems[t];
          const CellId col = cols.rank_lower(mask & ~(1u << parts[i]), face);
          col_idx[r * per_row + i] = static_cast<std::uint32_t>(col);
          signs[r * per_row + i] = (i % 2 == 0) ? std::int8_t{1} : std::int8_t{-1};
        }
      }
    }
    state_->d[slot] = SparseIncidence(R, cols.count(), std::move(row_ptr), std::move(col_idx), std::move(signs));
  });
  return state_->d[slot];
}

ComplexHandle build_complex(GroupPtr G, std::size_t k, Subset A) {
  if (!G) throw Error(ErrorCode::InvalidArgument, "null group");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "complex dimension k must be >= 1");
  if (A.empty()) throw Error(ErrorCode::InvalidArgument, "generator set A must be nonempty");
  for (Element a : A)
    if (a >= G->order()) throw Error(ErrorCode::InvalidArgument, "element " + std::to_string(a) + " out of range");
  const std::size_t n = G->order();
  const std::size_t nk = checked_pow(n, k, kCochainCap);
  if (nk > kCochainCap || (k + 1) * nk > kCochainCap || k > 20)
    throw Error(ErrorCode::SizeCap, "(k+1) n^k exceeds " + std::to_string(kCochainCap) + " for n=" +
                                        std::to_string(n) + ", k=" + std::to_string(k));
  auto state = std::make_shared<ComplexHandle::State>();
  state->G = std::move(G);
  state->k = k;
  state->A = std::make_shared<const Subset>(std::move(A));
  for (int j = -1; j <= static_cast<int>(k); ++j) state->indexers.emplace_back(state->G, k, j, state->A);
  state->once = std::make_unique<std::once_flag[]>(k + 1);
  state->d.resize(k + 1);
  ComplexHandle h;
  h.state_ = std::move(state);
  return h;
}

ComplexHandle build_complex(const GroupTable& G, std::size_t k, Subset A) {
  return build_complex(std::make_shared<const GroupTable>(G), k, std::move(A));
}

DegreeCheck degree_check(const ComplexHandle& handle) {
  const auto& d = handle.coboundary(static_cast<int>(handle.k()) - 1);
  std::vector<std::size_t> deg(d.cols(), 0);
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (auto c : d.row_cols(r)) ++deg[c];
  DegreeCheck out;
  const std::size_t want = handle.generators().size();
  for (std::size_t c = 0; c < deg.size(); ++c) {
    if (deg[c] != want) {
      out.ok = false;
      out.counterexample = static_cast<CellId>(c);
      out.degree = deg[c];
      return out;
    }
  }
  out.degree = want;
  return out;
}

}  // namespace cayspec
