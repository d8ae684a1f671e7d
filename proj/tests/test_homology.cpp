#include <doctest.h>

#include <cmath>

#include "cayspec/error.hpp"
#include "cayspec/experiments.hpp"
#include "cayspec/homology.hpp"
#include "cayspec/random.hpp"
#include "cayspec/spectral.hpp"
#include "oracles.hpp"

using namespace cayspec;

namespace {

GroupPtr share(GroupTable G) { return std::make_shared<const GroupTable>(std::move(G)); }

ComplexHandle complex_of(const char* spec, std::size_t k, std::vector<Element> A) {
  auto G = share(parse_group_spec(spec));
  auto S = make_subset(*G, std::move(A));
  return build_complex(G, k, std::move(S));
}

long long ipow(long long b, std::size_t e) {
  long long r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_SUITE("homology") {
  TEST_CASE("primes") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(561));       // Carmichael
    CHECK_FALSE(is_prime(3215031751));  // strong pseudoprime to 2, 3, 5, 7
    CHECK(is_prime(kDefaultPrime));
    CHECK(is_prime(4294967291ULL));
    CHECK_THROWS_AS(is_prime(1ULL << 33), Error);
    // Trial division on a range.
    for (std::uint64_t x = 0; x < 3000; ++x) {
      bool td = x >= 2;
      for (std::uint64_t d = 2; d * d <= x && td; ++d) td = x % d != 0;
      CHECK(is_prime(x) == td);
    }
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto p = random_prime30(s);
      CHECK(p >= (1ULL << 29));
      CHECK(p < (1ULL << 30));
      CHECK(is_prime(p));
    }
    CHECK(random_prime30(3) == random_prime30(3));
  }

  TEST_CASE("gamma closed forms") {
    auto g = gamma(1, 1, 3);
    CHECK(g.gamma0 == 2);
    CHECK(g.gamma1 == 0);
    g = gamma(2, 2, 6);
    CHECK(g.gamma0 == 28);
    CHECK(g.gamma1 == 9);
    g = gamma(3, 2, 6);
    CHECK(g.gamma0 == 15);
    CHECK(g.gamma1 == 32);
    for (std::size_t n : {2u, 5u, 7u}) {
      const auto f = gamma(n, 3, n);
      CHECK(f.gamma0 == 0);
      CHECK(f.gamma1 == ipow(static_cast<long long>(n) - 1, 4));
    }
    CHECK_THROWS_AS(gamma(4, 2, 6), Error);
    CHECK(matroid_count(5, 2) == 25 - 16);
    CHECK(matroid_count(3, 1) == 1);
  }

  TEST_CASE("rank mod p matches dense elimination") {
    for (const char* spec : {"Z3", "S3", "Z4", "Z2xZ2"}) {
      const auto G = share(parse_group_spec(spec));
      for (std::size_t k : {1u, 2u}) {
        const auto A = sample_subset(*G, 2, 3 * k);
        const auto X = build_complex(G, k, A);
        for (int j = -1; j < static_cast<int>(k); ++j) {
          const Eigen::MatrixXd D = X.coboundary(j).dense();
          for (std::uint64_t p : {std::uint64_t{2}, std::uint64_t{3}, std::uint64_t{1000003}, kDefaultPrime})
            CHECK(rank_mod_p(X.coboundary(j), p) == oracle::dense_rank_mod_p(D, static_cast<std::int64_t>(p)));
        }
      }
    }
    CHECK_THROWS_AS(rank_mod_p(SparseIncidence(), 1ULL << 33), Error);
  }

  TEST_CASE("Betti numbers of the full complex") {
    for (const char* spec : {"Z2", "Z3", "S3"}) {
      const auto G = share(parse_group_spec(spec));
      const auto n = static_cast<long long>(G->order());
      for (std::size_t k : {1u, 2u}) {
        const auto X = build_complex(G, k, full_subset(*G));
        const auto b = betti(X);
        REQUIRE(b.betti.size() == k + 1);
        for (std::size_t j = 0; j < k; ++j) CHECK(b.betti[j] == 0);
        CHECK(b.betti[k] == ipow(n - 1, k + 1));
      }
    }
  }

  TEST_CASE("Betti examples") {
    auto b = betti(complex_of("Z3", 1, {0}));
    CHECK(b.betti == std::vector<long long>{2, 0});
    b = betti(complex_of("Z6", 2, {0, 3}));
    CHECK(b.betti == std::vector<long long>{0, 28, 9});
    b = betti(complex_of("Z4", 1, {0, 2}));
    CHECK(b.betti == std::vector<long long>{1, 2});
    const auto s3 = make_symmetric(3);
    Element r = 1;
    while (element_order(s3, r) != 3) ++r;
    b = betti(complex_of("S3", 2, {0, r, s3.mul(r, r)}));
    CHECK(b.betti == std::vector<long long>{0, 15, 32});
    // 0-skeleton of Y_{G,1}: 2n points.
    const auto pts = betti(complex_of("Z5", 1, {1}), kDefaultPrime, 0);
    CHECK(pts.betti == std::vector<long long>{9});
    // The 1-skeleton of Y_{Z3,2} is the complete 3-partite graph K_{3,3,3}.
    const auto sk = betti(complex_of("Z3", 2, {0}), kDefaultPrime, 1);
    const long long V = 9, E = 27;
    CHECK(sk.betti[0] == 0);
    CHECK(sk.betti[1] == E - V + 1);
  }

  TEST_CASE("Euler characteristic and dimensions") {
    const auto X = complex_of("S3", 2, {1, 2});
    const auto b = betti(X);
    long long chi = -1, bsum = 0;
    for (std::size_t j = 0; j < b.dims.size(); ++j) {
      chi += (j % 2 == 0 ? 1 : -1) * static_cast<long long>(b.dims[j]);
      bsum += (j % 2 == 0 ? 1 : -1) * b.betti[j];
    }
    CHECK(chi == bsum);
    CHECK(b.ranks.front() == 1);
  }

  TEST_CASE("prime invariance and harmonic dimension") {
    for (const char* spec : {"Z4", "S3", "Z6"}) {
      const auto G = share(parse_group_spec(spec));
      for (std::uint64_t s = 0; s < 3; ++s) {
        const auto A = sample_subset(*G, 1 + s, derive_seed(17, s));
        const auto X = build_complex(G, 2, A);
        const auto ref = betti(X);
        for (std::uint64_t t = 0; t < 3; ++t) CHECK(betti(X, random_prime30(derive_seed(s, t))).betti == ref.betti);
        for (int j = 0; j <= 2; ++j) {
          std::size_t zeros = 0;
          for (double v : full_spectrum(X, j)) zeros += std::abs(v) < 1e-6;
          CHECK(static_cast<long long>(zeros) == ref.betti[static_cast<std::size_t>(j)]);
        }
        CHECK(ref.betti[0] == 0);
      }
    }
  }

  TEST_CASE("subgroup homotopy") {
    const auto z6 = make_cyclic(6);
    auto r = verify_subgroup_homotopy(z6, make_subset(z6, {0, 3}), 2);
    CHECK(r.ok);
    CHECK(r.m == 2);
    CHECK(r.index == 3);
    CHECK(r.expected.gamma0 == 28);
    r = verify_subgroup_homotopy(z6, make_subset(z6, {0, 2, 4}), 1);
    CHECK(r.ok);
    CHECK(r.profile.betti == std::vector<long long>{1, 2 * 4});
    try {
      verify_subgroup_homotopy(z6, make_subset(z6, {0, 1}), 2);
      FAIL("expected NotASubgroup");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotASubgroup);
    }
  }

  TEST_CASE("zero gap when A does not generate") {
    const auto z6 = make_cyclic(6);
    auto z = zero_gap_when_proper(z6, make_subset(z6, {2}), 1);
    CHECK(z.proper);
    CHECK(z.closure_order == 3);
    CHECK(z.gap <= 1e-6);
    CHECK(z.holds());
    const auto z4 = make_cyclic(4);
    z = zero_gap_when_proper(z4, make_subset(z4, {2}), 2);
    CHECK(z.proper);
    CHECK(z.betti_km1 >= z.gamma0);
    CHECK(z.gamma0 > 0);
    CHECK(z.holds());
    const auto z5 = make_cyclic(5);
    z = zero_gap_when_proper(z5, make_subset(z5, {1}), 2);
    CHECK_FALSE(z.proper);
    CHECK(z.holds());
  }
}
