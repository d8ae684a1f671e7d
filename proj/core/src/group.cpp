#include "cayspec/group.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cayspec/error.hpp"
#include "cayspec/random.hpp"

namespace cayspec {

namespace {

[[noreturn]] void not_a_group(const std::string& what) { throw Error(ErrorCode::NotAGroup, what); }

std::string fmt_idx(std::size_t x, std::size_t y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

// Latin-square check on a row-major table; values already range-checked.
void check_latin(std::size_t n, const std::vector<Element>& mul) {
  std::vector<std::uint8_t> seen(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t c = 0; c < n; ++c) {
      const Element v = mul[r * n + c];
      if (seen[v]) not_a_group("row " + std::to_string(r) + " is not a permutation (value " + std::to_string(v) + " repeated)");
      seen[v] = 1;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t r = 0; r < n; ++r) {
      const Element v = mul[r * n + c];
      if (seen[v]) not_a_group("column " + std::to_string(c) + " is not a permutation (value " + std::to_string(v) + " repeated)");
      seen[v] = 1;
    }
  }
}

void check_associative(std::size_t n, const auto& at, std::uint64_t seed) {
  auto fail = [](std::size_t x, std::size_t y, std::size_t z) {
    not_a_group("associativity fails at (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")");
  };
  if (n <= 256) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t xy = at(x, y);
        for (std::size_t z = 0; z < n; ++z)
          if (at(xy, z) != at(x, at(y, z))) fail(x, y, z);
      }
    return;
  }
  Rng rng(seed);
  const std::size_t samples = 10 * n * n;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t x = rng.below(n), y = rng.below(n), z = rng.below(n);
    if (at(at(x, y), z) != at(x, at(y, z))) fail(x, y, z);
  }
}

std::size_t parse_size(std::string_view text, std::string_view context) {
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw Error(ErrorCode::ParseError, "bad integer '" + std::string(text) + "' in " + std::string(context));
  return value;
}

GroupTable parse_factor(std::string_view spec) {
  if (spec.starts_with("PSL2-")) return make_psl2(parse_size(spec.substr(5), spec));
  if (spec.size() >= 2) {
    const auto arg = parse_size(spec.substr(1), spec);
    switch (spec[0]) {
      case 'Z': return make_cyclic(arg);
      case 'D': return make_dihedral(arg);
      case 'S': return make_symmetric(arg);
      default: break;
    }
  }
  throw Error(ErrorCode::ParseError, "unknown group spec '" + std::string(spec) + "'");
}

}  // namespace

GroupTable::GroupTable(std::string name, std::size_t n, std::vector<Element> mul)
    : name_(std::move(name)), n_(n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "group order must be positive");
  if (n > kMaxGroupOrder)
    throw Error(ErrorCode::OrderTooLarge, "order " + std::to_string(n) + " exceeds " + std::to_string(kMaxGroupOrder));
  if (mul.size() != n * n) not_a_group("table has " + std::to_string(mul.size()) + " entries, expected n^2");
  for (std::size_t i = 0; i < mul.size(); ++i)
    if (mul[i] >= n) not_a_group("entry " + fmt_idx(i / n, i % n) + " out of range");
  check_latin(n, mul);
  for (std::size_t x = 0; x < n; ++x) {
    if (mul[x] != x || mul[x * n] != x) not_a_group("element 0 is not the identity at " + std::to_string(x));
  }
  mul_.assign(mul.begin(), mul.end());
  inv_.assign(n, 0);
  abelian_ = true;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (mul[x * n + y] == kIdentity) inv_[x] = static_cast<Element>(y);
      if (mul[x * n + y] != mul[y * n + x]) abelian_ = false;
    }
    if (mul[inv_[x] * n + x] != kIdentity) not_a_group("left and right inverse of " + std::to_string(x) + " differ");
  }
  check_associative(n, [this](std::size_t x, std::size_t y) { return mul_[x * n_ + y]; }, 0x5eed);
}

Element GroupTable::product(std::span<const Element> word) const noexcept {
  Element acc = kIdentity;
  for (Element w : word) acc = mul(acc, w);
  return acc;
}

Subset::Subset(std::vector<Element> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool Subset::contains(Element x) const noexcept {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

Subset make_subset(const GroupTable& G, std::vector<Element> elements) {
  for (Element e : elements)
    if (e >= G.order())
      throw Error(ErrorCode::InvalidArgument,
                  "element " + std::to_string(e) + " out of range for group of order " + std::to_string(G.order()));
  return Subset(std::move(elements));
}

Subset full_subset(const GroupTable& G) {
  std::vector<Element> all(G.order());
  std::iota(all.begin(), all.end(), Element{0});
  return Subset(std::move(all));
}

Subset left_translate(const GroupTable& G, Element g, const Subset& A) {
  std::vector<Element> out;
  out.reserve(A.size());
  for (Element a : A) out.push_back(G.mul(g, a));
  return Subset(std::move(out));
}

GroupTable make_cyclic(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::UnsupportedParameter, "Z_n needs n >= 1");
  if (n > kMaxGroupOrder) throw Error(ErrorCode::OrderTooLarge, "Z_" + std::to_string(n));
  std::vector<Element> mul(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) mul[x * n + y] = static_cast<Element>((x + y) % n);
  return GroupTable("Z" + std::to_string(n), n, std::move(mul));
}

GroupTable make_product(std::span<const GroupTable> factors) {
  if (factors.empty()) throw Error(ErrorCode::UnsupportedParameter, "product of zero factors");
  std::size_t n = 1;
  std::string name;
  for (const auto& f : factors) {
    n *= f.order();
    if (n > kMaxGroupOrder) throw Error(ErrorCode::OrderTooLarge, "product order exceeds " + std::to_string(kMaxGroupOrder));
    name += (name.empty() ? "" : "x") + f.name();
  }
  if (factors.size() == 1) return factors.front();
  // Mixed radix, first factor most significant.
  const std::size_t r = factors.size();
  std::vector<std::size_t> radix(r);
  for (std::size_t i = 0; i < r; ++i) radix[i] = factors[i].order();
  auto decode = [&](std::size_t x, std::vector<std::size_t>& digits) {
    for (std::size_t i = r; i-- > 0;) {
      digits[i] = x % radix[i];
      x /= radix[i];
    }
  };
  std::vector<Element> mul(n * n);
  std::vector<std::size_t> dx(r), dy(r);
  for (std::size_t x = 0; x < n; ++x) {
    decode(x, dx);
    for (std::size_t y = 0; y < n; ++y) {
      decode(y, dy);
      std::size_t z = 0;
      for (std::size_t i = 0; i < r; ++i)
        z = z * radix[i] + factors[i].mul(static_cast<Element>(dx[i]), static_cast<Element>(dy[i]));
      mul[x * n + y] = static_cast<Element>(z);
    }
  }
  return GroupTable(name, n, std::move(mul));
}

GroupTable make_dihedral(std::size_t m) {
  if (m < 2) throw Error(ErrorCode::UnsupportedParameter, "D_m needs m >= 2");
  if (2 * m > kMaxGroupOrder) throw Error(ErrorCode::OrderTooLarge, "D" + std::to_string(m));
  // Index f*m + a encodes r^a s^f, with s r = r^{-1} s.
  const std::size_t n = 2 * m;
  std::vector<Element> mul(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t f = x / m, a = x % m;
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t g = y / m, b = y % m;
      const std::size_t rot = f == 0 ? (a + b) % m : (a + m - b) % m;
      mul[x * n + y] = static_cast<Element>(((f + g) % 2) * m + rot);
    }
  }
  return GroupTable("D" + std::to_string(m), n, std::move(mul));
}

GroupTable make_symmetric(std::size_t m) {
  if (m < 1 || m > 6) throw Error(ErrorCode::UnsupportedParameter, "S_m supported for 1 <= m <= 6");
  std::vector<std::array<std::uint8_t, 6>> perms;
  std::array<std::uint8_t, 6> p{};
  std::iota(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), std::uint8_t{0});
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m)));
  auto code = [m](const std::array<std::uint8_t, 6>& q) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < m; ++i) c = c * m + q[i];
    return c;
  };
  std::size_t space = 1;
  for (std::size_t i = 0; i < m; ++i) space *= m;
  std::vector<Element> rank(space, 0);
  for (std::size_t i = 0; i < perms.size(); ++i) rank[code(perms[i])] = static_cast<Element>(i);
  const std::size_t n = perms.size();
  std::vector<Element> mul(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      // (x*y)(i) = x(y(i))
      std::array<std::uint8_t, 6> c{};
      for (std::size_t i = 0; i < m; ++i) c[i] = perms[x][perms[y][i]];
      mul[x * n + y] = rank[code(c)];
    }
  return GroupTable("S" + std::to_string(m), n, std::move(mul));
}

GroupTable make_psl2(std::size_t q) {
  constexpr std::array<std::size_t, 5> kPrimes{3, 5, 7, 11, 13};
  if (std::find(kPrimes.begin(), kPrimes.end(), q) == kPrimes.end()) throw Error(ErrorCode::UnsupportedParameter, "PSL2 needs an odd prime q <= 13");
  using Mat = std::array<std::size_t, 4>;  // a b c d
  const std::size_t half = (q - 1) / 2;
  auto canonical = [&](Mat mat) {
    for (std::size_t e : mat) {
      if (e == 0) continue;
      if (e > half)
        for (auto& v : mat) v = (q - v) % q;
      break;
    }
    return mat;
  };
  std::vector<Mat> elems;
  const Mat identity{1, 0, 0, 1};
  elems.push_back(identity);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t c = 0; c < q; ++c)
        for (std::size_t d = 0; d < q; ++d) {
          if ((a * d + q * q - b * c) % q != 1) continue;
          const Mat m{a, b, c, d};
          if (canonical(m) != m || m == identity) continue;
          elems.push_back(m);
        }
  std::map<Mat, Element> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<Element>(i);
  const std::size_t n = elems.size();
  std::vector<Element> mul(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const Mat& u = elems[x];
      const Mat& v = elems[y];
      const Mat w{(u[0] * v[0] + u[1] * v[2]) % q, (u[0] * v[1] + u[1] * v[3]) % q,
                  (u[2] * v[0] + u[3] * v[2]) % q, (u[2] * v[1] + u[3] * v[3]) % q};
      mul[x * n + y] = index.at(canonical(w));
    }
  return GroupTable("PSL2-" + std::to_string(q), n, std::move(mul));
}

GroupTable parse_group_spec(std::string_view spec) {
  if (spec.starts_with("file:")) return from_table(std::filesystem::path(std::string(spec.substr(5))));
  std::vector<GroupTable> factors;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto pos = spec.find('x', start);
    const auto token = spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    factors.push_back(parse_factor(token));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (factors.size() == 1) return std::move(factors.front());
  return make_product(factors);
}

namespace {

GroupTable table_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("mul"))
    throw Error(ErrorCode::ParseError, "table JSON needs keys \"n\" and \"mul\"");
  std::size_t n = 0;
  std::vector<std::vector<long long>> rows;
  std::string name = "table";
  try {
    n = doc.at("n").get<std::size_t>();
    rows = doc.at("mul").get<std::vector<std::vector<long long>>>();
    if (doc.contains("name")) name = doc.at("name").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (n == 0) throw Error(ErrorCode::ParseError, "n must be positive");
  if (n > kMaxGroupOrder) throw Error(ErrorCode::OrderTooLarge, "order " + std::to_string(n));
  if (rows.size() != n) throw Error(ErrorCode::ParseError, "mul must have n rows");
  std::vector<Element> mul(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw Error(ErrorCode::ParseError, "row " + std::to_string(r) + " must have n entries");
    for (std::size_t c = 0; c < n; ++c) {
      if (rows[r][c] < 0 || static_cast<std::size_t>(rows[r][c]) >= n) not_a_group("entry " + fmt_idx(r, c) + " out of range");
      mul[r * n + c] = static_cast<Element>(rows[r][c]);
    }
  }
  check_latin(n, mul);
  // Locate the identity: a row that is the identity permutation.
  std::size_t e = n;
  for (std::size_t x = 0; x < n && e == n; ++x) {
    bool ok = true;
    for (std::size_t y = 0; y < n && ok; ++y) ok = mul[x * n + y] == y && mul[y * n + x] == y;
    if (ok) e = x;
  }
  if (e == n) not_a_group("no two-sided identity element");
  if (doc.contains("id") && doc.at("id").get<long long>() != static_cast<long long>(e))
    not_a_group("declared id " + doc.at("id").dump() + " is not the identity (found " + std::to_string(e) + ")");
  if (doc.contains("inv")) {
    const auto inv = doc.at("inv").get<std::vector<long long>>();
    if (inv.size() != n) throw Error(ErrorCode::ParseError, "inv must have n entries");
    for (std::size_t x = 0; x < n; ++x) {
      if (inv[x] < 0 || static_cast<std::size_t>(inv[x]) >= n ||
          mul[x * n + static_cast<std::size_t>(inv[x])] != e)
        not_a_group("declared inverse of " + std::to_string(x) + " is wrong");
    }
  }
  check_associative(n, [&](std::size_t x, std::size_t y) { return mul[x * n + y]; }, 0x5eed);
  if (e != 0) {
    auto relabel = [e](std::size_t x) -> std::size_t { return x == e ? 0 : (x == 0 ? e : x); };
    std::vector<Element> out(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        out[relabel(x) * n + relabel(y)] = static_cast<Element>(relabel(mul[x * n + y]));
    mul = std::move(out);
  }
  return GroupTable(std::move(name), n, std::move(mul));
}

}  // namespace

GroupTable from_table_json(std::string_view text) {
  try {
    return table_from_json(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

GroupTable from_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_table_json(buf.str());
}

std::string to_table_json(const GroupTable& G) {
  const std::size_t n = G.order();
  nlohmann::json doc;
  doc["name"] = G.name();
  doc["n"] = n;
  doc["id"] = 0;
  auto rows = nlohmann::json::array();
  auto inv = nlohmann::json::array();
  for (std::size_t x = 0; x < n; ++x) {
    auto row = nlohmann::json::array();
    for (std::size_t y = 0; y < n; ++y) row.push_back(G.mul(static_cast<Element>(x), static_cast<Element>(y)));
    rows.push_back(std::move(row));
    inv.push_back(G.inv(static_cast<Element>(x)));
  }
  doc["mul"] = std::move(rows);
  doc["inv"] = std::move(inv);
  return doc.dump() + "\n";
}

void validate(const GroupTable& G, std::uint64_t seed) {
  const std::size_t n = G.order();
  auto at = [&](std::size_t x, std::size_t y) -> std::size_t {
    return G.mul(static_cast<Element>(x), static_cast<Element>(y));
  };
  std::vector<Element> mul(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) mul[x * n + y] = static_cast<Element>(at(x, y));
  check_latin(n, mul);
  for (std::size_t x = 0; x < n; ++x) {
    if (at(0, x) != x || at(x, 0) != x) not_a_group("identity law fails at " + std::to_string(x));
    const std::size_t ix = G.inv(static_cast<Element>(x));
    if (at(x, ix) != 0 || at(ix, x) != 0) not_a_group("inverse law fails at " + std::to_string(x));
  }
  check_associative(n, at, seed);
}

std::vector<std::vector<Element>> conjugacy_classes(const GroupTable& G) {
  const std::size_t n = G.order();
  std::vector<std::uint8_t> assigned(n, 0);
  std::vector<std::vector<Element>> classes;
  for (Element x = 0; x < n; ++x) {
    if (assigned[x]) continue;
    std::vector<Element> cls;
    for (Element g = 0; g < n; ++g) {
      const Element c = G.mul(G.mul(g, x), G.inv(g));
      if (!assigned[c]) {
        assigned[c] = 1;
        cls.push_back(c);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

Subset subgroup_closure(const GroupTable& G, const Subset& A) {
  std::vector<std::uint8_t> in(G.order(), 0);
  std::vector<Element> members{GroupTable::kIdentity};
  in[GroupTable::kIdentity] = 1;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (Element a : A) {
      const Element y = G.mul(members[i], a);
      if (!in[y]) {
        in[y] = 1;
        members.push_back(y);
      }
    }
  }
  return Subset(std::move(members));
}

bool is_subgroup(const GroupTable& G, const Subset& A) {
  if (!A.contains(GroupTable::kIdentity)) return false;
  for (Element a : A) {
    if (!A.contains(G.inv(a))) return false;
    for (Element b : A)
      if (!A.contains(G.mul(a, b))) return false;
  }
  return true;
}

std::size_t element_order(const GroupTable& G, Element x) {
  std::size_t k = 1;
  for (Element y = x; y != GroupTable::kIdentity; y = G.mul(y, x)) ++k;
  return k;
}

}  // namespace cayspec
