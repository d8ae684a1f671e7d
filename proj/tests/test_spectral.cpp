#include <doctest.h>

#include <cmath>

#include "cayspec/error.hpp"
#include "cayspec/experiments.hpp"
#include "cayspec/fourier.hpp"
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

std::vector<std::pair<double, std::size_t>> clusters(const std::vector<double>& v) {
  std::vector<std::pair<double, std::size_t>> out;
  for (const auto& c : linalg::cluster_sorted(v, 1e-6)) out.emplace_back(c.value, c.multiplicity);
  return out;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("Y_{Z3,2} spectrum on 1-cochains") {
    const auto X = complex_of("Z3", 2, {0, 1, 2});
    const auto c = clusters(full_spectrum(X, 1));
    REQUIRE(c.size() == 3);
    CHECK(c[0].first == doctest::Approx(3.0));
    CHECK(c[0].second == 12);
    CHECK(c[1].first == doctest::Approx(6.0));
    CHECK(c[1].second == 12);
    CHECK(c[2].first == doctest::Approx(9.0));
    CHECK(c[2].second == 3);
    const auto e = ygk_expected_spectrum(3, 2, 1, LaplacianKind::Full);
    REQUIRE(e.size() == 3);
    CHECK(e[0].value == 3.0);
    CHECK(e[0].multiplicity == 12);
  }

  TEST_CASE("reduced Laplacian of K_{2,2}") {
    // Y_{Z2,1} with A = G is the complete bipartite graph K_{2,2}; the
    // reduced L_0 adds J, lifting the constant vector to 4.
    const auto X = complex_of("Z2", 1, {0, 1});
    const auto s = full_spectrum(X, 0);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == doctest::Approx(2.0));
    CHECK(s[1] == doctest::Approx(2.0));
    CHECK(s[2] == doctest::Approx(4.0));
    CHECK(s[3] == doctest::Approx(4.0));
  }

  TEST_CASE("closed-form spectra of the full complex") {
    for (const char* spec : {"Z2", "Z3", "S3", "Z4"}) {
      const auto G = parse_group_spec(spec);
      for (std::size_t k = 1; k <= 3; ++k) {
        if ((k + 1) * static_cast<std::size_t>(std::pow(G.order(), k)) > 1500) continue;
        CAPTURE(spec);
        CAPTURE(k);
        const auto r = verify_ygk_spectra(G, k);
        CHECK(r.ok);
        CHECK(r.max_deviation <= 1e-8);
        CHECK(r.checks.size() >= k + 1);
      }
    }
  }

  TEST_CASE("expected multiplicities sum to the cochain dimension") {
    for (std::size_t n : {2u, 3u, 5u, 8u}) {
      for (std::size_t k = 1; k <= 4; ++k) {
        for (int j = 0; j <= static_cast<int>(k); ++j) {
          std::size_t total = 0;
          for (const auto& c : ygk_expected_spectrum(n, k, j, LaplacianKind::Full)) total += c.multiplicity;
          const std::size_t dim = j < static_cast<int>(k)
                                      ? binomial(k + 1, static_cast<std::size_t>(j) + 1) *
                                            static_cast<std::size_t>(std::pow(n, j + 1))
                                      : static_cast<std::size_t>(std::pow(n, k + 1));
          CHECK(total == dim);
        }
      }
    }
  }

  TEST_CASE("gap examples") {
    CHECK(spectral_gap(complex_of("Z5", 1, {1, 2, 3, 4}), 0).gap == doctest::Approx(3.0));
    // A = G: mu_{k-1} = n.
    CHECK(spectral_gap(complex_of("Z3", 2, {0, 1, 2}), 1).gap == doctest::Approx(3.0));
    // Proper subgroup: zero gap.
    CHECK(spectral_gap(complex_of("Z4", 2, {0, 2}), 1).gap == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    const auto b = gap_lower_bound(complex_of("Z5", 1, {1, 2, 3, 4}));
    CHECK(b.bound == doctest::Approx(3.0));
    CHECK(b.nu == doctest::Approx(1.0));
    CHECK(b.holds);
    CHECK(b.slack == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  }

  TEST_CASE("matches brute-force Laplacians") {
    for (const char* spec : {"Z3", "S3", "Z2xZ2"}) {
      const auto G = share(parse_group_spec(spec));
      const auto A = sample_subset(*G, 2, 31);
      const auto X = build_complex(G, 2, A);
      oracle::BruteComplex B(*G, 2, A);
      for (int j = 0; j <= 2; ++j) {
        const auto want = oracle::sorted_eigenvalues(B.laplacian(j));
        CHECK(spectral_gap(X, j, 1e-9, GapMethod::Dense).gap == doctest::Approx(want.front()).scale(1.0).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("dense and Lanczos agree") {
    for (const char* spec : {"Z5", "S3", "Z7", "D4"}) {
      const auto G = share(parse_group_spec(spec));
      for (std::uint64_t s = 0; s < 4; ++s) {
        const auto A = sample_subset(*G, 2 + s, derive_seed(3, s));
        const auto X = build_complex(G, 2, A);
        const auto dense = spectral_gap(X, 1, 1e-9, GapMethod::Dense);
        const auto iter = spectral_gap(X, 1, 1e-9, GapMethod::Iterative, 42);
        CHECK(iter.method == "lanczos");
        CHECK(std::abs(dense.gap - iter.gap) <= 1e-8);
        CHECK(iter.residual <= 1e-9);
      }
    }
  }

  TEST_CASE("Laplacian is self-adjoint and positive semidefinite") {
    const auto X = complex_of("S3", 2, {1, 3});
    Rng rng(9);
    for (int j = 0; j <= 2; ++j) {
      for (auto kind : {LaplacianKind::Full, LaplacianKind::Lower, LaplacianKind::Upper}) {
        LaplacianOperator L(X, j, kind);
        std::vector<double> x(L.dim()), y(L.dim()), Lx(L.dim()), Ly(L.dim());
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        L.apply(x, Lx);
        L.apply(y, Ly);
        double a = 0, b = 0, q = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          a += Lx[i] * y[i];
          b += x[i] * Ly[i];
          q += x[i] * Lx[i];
        }
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
        CHECK(q >= -1e-10);
        const Eigen::MatrixXd D = L.dense();
        CHECK((D - Eigen::MatrixXd(L.sparse())).norm() == 0.0);
        CHECK((D - D.transpose()).norm() == 0.0);
      }
    }
    LaplacianOperator top(X, 2, LaplacianKind::Upper);
    CHECK(top.dense().norm() == 0.0);
  }

  TEST_CASE("translation invariance") {
    // Left translating A by g gives an isomorphic complex (rescale the last part).
    const auto G = share(make_symmetric(3));
    const auto A = make_subset(*G, {1, 2});
    const double g0 = spectral_gap(build_complex(G, 2, A), 1).gap;
    for (Element g = 1; g < 6; ++g)
      CHECK(spectral_gap(build_complex(G, 2, left_translate(*G, g, A)), 1).gap == doctest::Approx(g0).epsilon(1e-9));
  }

  TEST_CASE("harmonic space dimension equals kernel of the Hodge Laplacian") {
    const auto X = complex_of("Z4", 2, {0, 2});
    for (int j = 0; j <= 2; ++j) {
      const auto s = full_spectrum(X, j);
      std::size_t zeros = 0;
      for (double v : s) zeros += std::abs(v) < 1e-8;
      const Eigen::MatrixXd lo = X.coboundary(j - 1).dense();
      std::size_t up_rank = 0;
      if (j < 2) up_rank = linalg::numerical_rank(X.coboundary(j).dense());
      const std::size_t want = X.dim(j) - linalg::numerical_rank(lo) - up_rank;
      CHECK(zeros == want);
    }
  }

  TEST_CASE("restricted gap against an explicit kernel basis") {
    for (const char* spec : {"Z5", "S3", "Z4"}) {
      const auto G = share(parse_group_spec(spec));
      const auto A = sample_subset(*G, 2, 8);
      const auto X = build_complex(G, 2, A);
      oracle::BruteComplex B(*G, 2, A);
      // ker d_0^T from a full SVD of d_0^T.
      const Eigen::MatrixXd below = B.coboundary(0).transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(below, Eigen::ComputeFullV);
      const auto r = static_cast<Eigen::Index>(oracle::dense_rank_mod_p(B.coboundary(0), 1000003));
      const Eigen::MatrixXd Q = svd.matrixV().rightCols(below.cols() - r);
      const Eigen::MatrixXd up = B.coboundary(1) * Q;
      const double want = oracle::sorted_eigenvalues(up.transpose() * up).front();
      const double got = restricted_gap(X);
      CHECK(got == doctest::Approx(want).epsilon(1e-8).scale(1.0));
      CHECK(got >= spectral_gap(X, 1).gap - 1e-8);
    }
  }

  TEST_CASE("gap lower bound on random instances") {
    for (const char* spec : {"Z7", "S3", "D5", "Z3xZ3"}) {
      const auto G = share(parse_group_spec(spec));
      for (std::uint64_t s = 0; s < 5; ++s) {
        const auto A = sample_subset(*G, 2 + s % 4, derive_seed(21, s));
        const auto b = gap_lower_bound(build_complex(G, 2, A));
        CHECK(b.mu >= b.bound - 1e-8);
        CHECK(b.nu == doctest::Approx(nu(*G, A).nu));
        REQUIRE(b.report.bound_rhs.has_value());
      }
    }
  }

  TEST_CASE("clustering helper") {
    const std::vector<double> v{0.0, 1e-9, 1.0, 1.0 + 5e-7, 2.0};
    const auto c = linalg::cluster_sorted(v, 1e-6);
    REQUIRE(c.size() == 3);
    CHECK(c[0].multiplicity == 2);
    CHECK(c[1].multiplicity == 2);
    CHECK(multiplicity_gap(10) == doctest::Approx(1e-5));
    CHECK(multiplicity_gap(0) == doctest::Approx(1e-6));
  }

  TEST_CASE("spectrum size cap") {
    const auto X = complex_of("Z40", 2, {0});
    try {
      full_spectrum(X, 1);
      FAIL("expected SizeCap");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SizeCap);
    }
  }
}
