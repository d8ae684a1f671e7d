#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cayspec {

using Element = std::uint32_t;

/// Largest group order accepted by any constructor or loader.
inline constexpr std::size_t kMaxGroupOrder = 10'000;

/// Finite group stored as a full multiplication table. The identity is
/// always element 0. Immutable once constructed.
class GroupTable {
 public:
  static constexpr Element kIdentity = 0;

  /// Takes ownership of a row-major n*n table and validates every group
  /// axiom. Throws Error(NotAGroup) on the first failing instance and
  /// Error(OrderTooLarge) above kMaxGroupOrder. The identity must already
  /// be at index 0; use from_table/from_json for arbitrary labellings.
  GroupTable(std::string name, std::size_t n, std::vector<Element> mul);

  std::size_t order() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }

  Element mul(Element x, Element y) const noexcept { return mul_[static_cast<std::size_t>(x) * n_ + y]; }
  Element inv(Element x) const noexcept { return inv_[x]; }

  /// Product of a word, left to right; empty word gives the identity.
  Element product(std::span<const Element> word) const noexcept;

  bool is_abelian() const noexcept { return abelian_; }

  const std::vector<std::uint16_t>& raw_table() const noexcept { return mul_; }

  friend bool operator==(const GroupTable& a, const GroupTable& b) noexcept {
    return a.n_ == b.n_ && a.mul_ == b.mul_;
  }

 private:
  std::string name_;
  std::size_t n_;
  std::vector<std::uint16_t> mul_;
  std::vector<Element> inv_;
  bool abelian_ = false;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

/// Sorted, duplicate-free set of group elements.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::vector<Element> elements);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  Element operator[](std::size_t i) const noexcept { return elements_[i]; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  bool contains(Element x) const noexcept;

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  std::vector<Element> elements_;
};

/// Throws InvalidArgument if any element is out of range for G.
Subset make_subset(const GroupTable& G, std::vector<Element> elements);
Subset full_subset(const GroupTable& G);

/// Left translate {g*a : a in A}.
Subset left_translate(const GroupTable& G, Element g, const Subset& A);

// Constructors for standard families.
GroupTable make_cyclic(std::size_t n);
GroupTable make_product(std::span<const GroupTable> factors);
GroupTable make_dihedral(std::size_t m);
GroupTable make_symmetric(std::size_t m);
GroupTable make_psl2(std::size_t q);

/// Parses "Z<n>", "D<m>", "S<m>", "PSL2-<q>", "file:<path>" and products of
/// the non-file forms joined by 'x' (e.g. "Z2xZ3").
GroupTable parse_group_spec(std::string_view spec);

/// Loads a Cayley table JSON file {"name", "n", "mul", optional "inv", "id"}.
GroupTable from_table(const std::filesystem::path& path);
GroupTable from_table_json(std::string_view text);
std::string to_table_json(const GroupTable& G);

/// Re-checks every invariant; throws Error(NotAGroup) describing the first
/// violation. Associativity is exhaustive for n <= 256 and sampled
/// (10*n^2 triples) above.
void validate(const GroupTable& G, std::uint64_t seed = 0x5eed);

/// Orbits under conjugation, each sorted, ordered by smallest member.
std::vector<std::vector<Element>> conjugacy_classes(const GroupTable& G);

/// Smallest subgroup containing A.
Subset subgroup_closure(const GroupTable& G, const Subset& A);

bool is_subgroup(const GroupTable& G, const Subset& A);

std::size_t element_order(const GroupTable& G, Element x);

}  // namespace cayspec
