#include <doctest.h>

#include <numeric>

#include "cayspec/error.hpp"
#include "cayspec/f2_expansion.hpp"
#include "oracles.hpp"

using namespace cayspec;

namespace {

GroupPtr share(GroupTable G) { return std::make_shared<const GroupTable>(std::move(G)); }

F2Cochain indicator(int degree, std::size_t dim, std::size_t cell) {
  F2Cochain c{degree, std::vector<std::uint8_t>(dim, 0)};
  c.bits[cell] = 1;
  return c;
}

void check_against_bruteforce(const GroupTable& G0, std::size_t k, const Subset& A, int j) {
  const auto G = share(G0);
  const auto X = build_complex(G, k, A);
  oracle::BruteComplex B(*G, k, A);
  const auto want = oracle::h_bruteforce(B.coboundary(j - 1), B.coboundary(j));
  const auto got = h_constant(X, j);
  REQUIRE(want.has_value() == (got.den != 0));
  if (want) CHECK(got.value() == doctest::Approx(*want).epsilon(1e-15));
  CHECK(got.enumerated == (std::uint64_t{1} << X.dim(j)));
  if (got.den != 0) CHECK(std::gcd(got.num, got.den) == 1);
}

}  // namespace

TEST_SUITE("f2") {
  TEST_CASE("cochain helpers") {
    F2Cochain c{0, {1, 0, 1, 1}};
    CHECK(c.weight() == 3);
    CHECK(c.to_string() == "1011");
  }

  TEST_CASE("cosystolic norm") {
    const auto G = share(make_cyclic(2));
    const auto X = build_complex(G, 1, full_subset(*G));
    // Constants are coboundaries of the augmentation.
    CHECK(cosystolic_norm(X, F2Cochain{0, {1, 1, 1, 1}}) == 0);
    CHECK(cosystolic_norm(X, F2Cochain{0, {0, 0, 0, 0}}) == 0);
    CHECK(cosystolic_norm(X, indicator(0, 4, 2)) == 1);
    CHECK(cosystolic_norm(X, F2Cochain{0, {1, 1, 1, 0}}) == 1);
    CHECK(cosystolic_norm(X, F2Cochain{0, {1, 1, 0, 0}}) == 2);
    // Degree 1: coboundaries of vertex sets have norm 0.
    const std::size_t e = X.dim(1);
    F2Cochain cut{1, std::vector<std::uint8_t>(e, 0)};
    const auto& d0 = X.coboundary(0);
    for (std::size_t r = 0; r < d0.rows(); ++r)
      for (auto c : d0.row_cols(r))
        if (c == 0) cut.bits[r] ^= 1;
    CHECK(cut.weight() == 2);
    CHECK(cosystolic_norm(X, cut) == 0);
    for (std::size_t i = 0; i < e; ++i) CHECK(cosystolic_norm(X, indicator(1, e, i)) <= 1);
  }

  TEST_CASE("coboundary weight") {
    const auto G = share(make_cyclic(3));
    const auto X = build_complex(G, 1, full_subset(*G));
    CHECK(coboundary_weight(X, indicator(0, 6, 0)) == 3);
    CHECK(coboundary_weight(X, F2Cochain{0, std::vector<std::uint8_t>(6, 1)}) == 0);
    CHECK(coboundary_weight(X, F2Cochain{0, {1, 1, 1, 0, 0, 0}}) == 9);
  }

  TEST_CASE("h_0 on small graphs against full enumeration") {
    check_against_bruteforce(make_cyclic(2), 1, full_subset(make_cyclic(2)), 0);
    check_against_bruteforce(make_cyclic(3), 1, full_subset(make_cyclic(3)), 0);
    const auto z3 = make_cyclic(3);
    check_against_bruteforce(z3, 1, make_subset(z3, {0}), 0);
    const auto z4 = make_cyclic(4);
    check_against_bruteforce(z4, 1, make_subset(z4, {1, 3}), 0);
    check_against_bruteforce(z4, 1, make_subset(z4, {0, 1}), 0);
    check_against_bruteforce(make_symmetric(3), 1, make_subset(make_symmetric(3), {1, 2}), 0);
  }

  TEST_CASE("h_1 for k = 2 against full enumeration") {
    const auto z2 = make_cyclic(2);
    check_against_bruteforce(z2, 2, full_subset(z2), 1);
    check_against_bruteforce(z2, 2, make_subset(z2, {0}), 1);
    check_against_bruteforce(z2, 2, make_subset(z2, {1}), 1);
    check_against_bruteforce(z2, 2, full_subset(z2), 0);
  }

  TEST_CASE("h examples") {
    const auto z3 = share(make_cyclic(3));
    const auto matching = build_complex(z3, 1, make_subset(*z3, {0}));
    const auto h = h_constant(matching, 0);
    CHECK(h.num == 0);
    CHECK(h.den > 0);
    CHECK(coboundary_weight(matching, h.witness) == 0);
    CHECK(cosystolic_norm(matching, h.witness) > 0);
    // K_{3,3}: the best cut takes two vertices on one side and one on the
    // other, crossing 5 edges.
    const auto k33 = build_complex(z3, 1, full_subset(*z3));
    const auto hk = h_constant(k33, 0);
    CHECK(hk.num == 5);
    CHECK(hk.den == 3);
    CHECK(hk.cosets == 31);
    CHECK(coboundary_weight(k33, hk.witness) == 5);
    CHECK(cosystolic_norm(k33, hk.witness) == 3);
  }

  TEST_CASE("h > 0 exactly when F2 cohomology vanishes") {
    for (std::size_t n = 2; n <= 4; ++n) {
      const auto G = share(make_cyclic(n));
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<Element> a;
        for (Element x = 0; x < n; ++x)
          if (mask >> x & 1) a.push_back(x);
        const auto X = build_complex(G, 1, Subset(a));
        const auto h = h_constant(X, 0);
        CHECK((h.num > 0) == (f2_reduced_betti(X, 0) == 0));
      }
    }
  }

  TEST_CASE("h is invariant under translating A") {
    const auto G = share(make_cyclic(4));
    const auto A = make_subset(*G, {0, 1});
    const auto ref = h_constant(build_complex(G, 1, A), 0);
    for (Element g = 1; g < 4; ++g) {
      const auto h = h_constant(build_complex(G, 1, left_translate(*G, g, A)), 0);
      CHECK(h.num == ref.num);
      CHECK(h.den == ref.den);
    }
  }

  TEST_CASE("enumeration limits") {
    const auto G = share(make_cyclic(5));
    const auto X = build_complex(G, 2, full_subset(*G));
    try {
      h_constant(X, 1);
      FAIL("expected EnumerationCap");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EnumerationCap);
    }
    CHECK_THROWS_AS(h_constant(X, 2), Error);
    CHECK_THROWS_AS(cosystolic_norm(X, F2Cochain{2, std::vector<std::uint8_t>(X.dim(2), 0)}), Error);
  }
}
