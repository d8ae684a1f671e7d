#include <doctest.h>

#include <cmath>

#include "cayspec/error.hpp"
#include "cayspec/experiments.hpp"
#include "cayspec/fourier.hpp"
#include "cayspec/random.hpp"
#include "oracles.hpp"

using namespace cayspec;

TEST_SUITE("fourier") {
  TEST_CASE("nu on small examples") {
    const auto z4 = make_cyclic(4);
    CHECK(nu(z4, make_subset(z4, {1, 3})).nu == doctest::Approx(2.0).epsilon(1e-12));
    const auto z5 = make_cyclic(5);
    CHECK(nu(z5, make_subset(z5, {1, 2, 3, 4})).nu == doctest::Approx(1.0).epsilon(1e-12));
    for (const char* spec : {"Z7", "S3", "D4"}) {
      const auto G = parse_group_spec(spec);
      CHECK(nu(G, full_subset(G)).nu == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("nu via characters") {
    const auto z2 = make_cyclic(2);
    CHECK(nu_characters(z2, make_subset(z2, {1})) == doctest::Approx(1.0));
    const auto z4 = make_cyclic(4);
    CHECK(nu_characters(z4, make_subset(z4, {1, 3})) == doctest::Approx(2.0));
    const auto z6 = make_cyclic(6);
    CHECK(nu_characters(z6, make_subset(z6, {0, 3})) == doctest::Approx(2.0));
    const auto s3 = make_symmetric(3);
    CHECK_THROWS_AS(nu_characters(s3, make_subset(s3, {1})), Error);
  }

  TEST_CASE("regular and character paths agree with the DFT oracle") {
    const std::vector<std::pair<const char*, std::vector<std::size_t>>> groups{
        {"Z8", {8}}, {"Z2xZ4", {2, 4}}, {"Z3xZ3", {3, 3}}, {"Z2xZ2xZ3", {2, 2, 3}}, {"Z15", {15}}};
    for (const auto& [spec, moduli] : groups) {
      const auto G = parse_group_spec(spec);
      for (std::uint64_t s = 0; s < 10; ++s) {
        const std::size_t m = 1 + s % (G.order() - 1);
        const auto A = sample_subset(G, m, derive_seed(99, s));
        const double want = oracle::nu_abelian(moduli, A);
        CHECK(nu(G, A).nu == doctest::Approx(want).epsilon(1e-9));
        CHECK(nu_characters(G, A) == doctest::Approx(want).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("nu matches a from-scratch dense SVD on non-abelian groups") {
    for (const char* spec : {"S3", "D4", "D5", "S4"}) {
      const auto G = parse_group_spec(spec);
      for (std::uint64_t s = 0; s < 6; ++s) {
        const auto A = sample_subset(G, 1 + s % G.order(), derive_seed(7, s));
        CHECK(nu(G, A).nu == doctest::Approx(oracle::nu_dense(G, A)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("iterative nu path on a large group") {
    const auto G = make_cyclic(600);
    const auto A = sample_subset(G, 40, 3);
    const auto r = nu(G, A, 1e-10, 5);
    CHECK(r.solver == "lanczos");
    CHECK(r.nu == doctest::Approx(oracle::nu_abelian({600}, A)).epsilon(1e-8));
  }

  TEST_CASE("nu invariants") {
    for (const char* spec : {"S3", "D6", "Z10", "S4"}) {
      const auto G = parse_group_spec(spec);
      for (std::uint64_t s = 0; s < 5; ++s) {
        const auto A = sample_subset(G, 2 + s, derive_seed(11, s));
        const double v = nu(G, A).nu;
        CHECK(v <= static_cast<double>(A.size()) + 1e-12);
        CHECK(v >= 0.0);
        for (Element g = 1; g < G.order(); g += 2)
          CHECK(nu(G, left_translate(G, g, A)).nu == doctest::Approx(v).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("convolution operator") {
    const auto G = make_symmetric(3);
    Rng rng(4);
    std::vector<cplx> w(6);
    for (auto& x : w) x = {rng.normal(), rng.normal()};
    const ConvolutionOperator T(G, w);
    const auto M = T.dense();
    // T * 1 = (sum w) 1
    std::vector<cplx> ones(6, 1.0);
    const auto y = T.apply(ones);
    cplx total = 0;
    for (auto x : w) total += x;
    for (auto v : y) CHECK(std::abs(v - total) < 1e-12);
    // Entries T[x][y] = w(y^-1 x)
    for (Element x = 0; x < 6; ++x)
      for (Element yy = 0; yy < 6; ++yy) CHECK(std::abs(M(x, yy) - w[G.mul(G.inv(yy), x)]) < 1e-15);
    CHECK_FALSE(T.hermitian_weights(1e-12));
    // Hermitian symmetrized weights give a Hermitian operator.
    std::vector<cplx> h(6);
    for (Element x = 0; x < 6; ++x) h[x] = w[x] + std::conj(w[G.inv(x)]);
    const ConvolutionOperator H(G, h);
    CHECK(H.hermitian_weights(1e-12));
    CHECK((H.dense() - H.dense().adjoint()).norm() < 1e-12);
  }

  TEST_CASE("dsum") {
    for (std::size_t n : {1u, 2u, 5u, 12u}) CHECK(dsum(make_cyclic(n)).dsum == n);
    CHECK(dsum(parse_group_spec("Z2xZ2")).dsum == 4);
    const auto s3 = dsum(make_symmetric(3));
    CHECK(s3.dsum == 4);
    CHECK(s3.degree_vector == std::vector<std::size_t>{2, 1, 1});
    CHECK(oracle::feasible_dsums(6, 3) == std::vector<std::size_t>{4});
    CHECK(dsum(make_dihedral(4)).dsum == 6);
    CHECK(oracle::feasible_dsums(8, 5) == std::vector<std::size_t>{6});
    CHECK(dsum(make_symmetric(4)).dsum == 10);
    CHECK(dsum(make_dihedral(5)).dsum == 6);      // degrees 1,1,2,2
    CHECK(dsum(make_psl2(5)).dsum == 1 + 3 + 3 + 4 + 5);
    for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(dsum(make_symmetric(3), seed).dsum == 4);
  }

  TEST_CASE("dsum bounds and feasibility") {
    for (const char* spec : {"S3", "D4", "D6", "S4", "Z2xD3", "PSL2-3"}) {
      const auto G = parse_group_spec(spec);
      const auto r = dsum(G);
      const double n = static_cast<double>(G.order());
      CHECK(static_cast<double>(r.dsum) >= std::sqrt(n) - 1e-12);
      CHECK(r.dsum <= G.order());
      const auto classes = conjugacy_classes(G).size();
      CHECK(r.classes == classes);
      CHECK(feasible_degree_vector(G.order(), classes, r.dsum).has_value());
      std::size_t sq = 0, sum = 0;
      for (auto d : r.degree_vector) {
        sq += d * d;
        sum += d;
      }
      CHECK(sq == G.order());
      CHECK(sum == r.dsum);
    }
    CHECK_FALSE(feasible_degree_vector(6, 3, 5).has_value());
  }

  TEST_CASE("parseval") {
    const auto s3 = make_symmetric(3);
    std::vector<cplx> delta(6, 0.0);
    delta[0] = 1.0;
    CHECK(parseval_check(s3, delta, delta) == 0.0);
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
      std::vector<cplx> phi(6), psi(6);
      for (auto& x : phi) x = rng.normal();
      for (auto& x : psi) x = rng.normal();
      CHECK(parseval_check(s3, phi, psi) <= 1e-10);
    }
    std::vector<cplx> a(6, 0.0), b(6, 0.0);
    a[1] = a[2] = 1.0;
    b[3] = b[4] = 1.0;
    CHECK(parseval_check(s3, a, b) <= 1e-10);
  }

  TEST_CASE("Frobenius submultiplicativity") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXd S(5, 5), T(5, 5);
      for (Eigen::Index i = 0; i < 25; ++i) {
        S.data()[i] = rng.normal();
        T.data()[i] = rng.normal();
      }
      const double op = Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues()(0);
      CHECK((S * T).norm() <= op * T.norm() + 1e-10);
    }
  }
}
