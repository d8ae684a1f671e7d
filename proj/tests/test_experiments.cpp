#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cayspec/error.hpp"
#include "cayspec/experiments.hpp"
#include "cayspec/random.hpp"

using namespace cayspec;

TEST_SUITE("experiments") {
  TEST_CASE("subset sampling") {
    const auto G = make_cyclic(20);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto A = sample_subset(G, 7, s);
      CHECK(A.size() == 7);
      CHECK(A == sample_subset(G, 7, s));
    }
    CHECK(sample_subset(G, 20, 3) == full_subset(G));
    CHECK_THROWS_AS(sample_subset(G, 0, 1), Error);
    CHECK_THROWS_AS(sample_subset(G, 21, 1), Error);
    CHECK_FALSE(sample_subset(G, 7, 1) == sample_subset(G, 7, 2));
  }

  TEST_CASE("sampled subsets are uniform") {
    // All C(5,2) = 10 subsets of Z5 equally likely: chi-square with 9 dof.
    const auto G = make_cyclic(5);
    std::map<std::vector<Element>, std::size_t> counts;
    const std::size_t N = 10'000;
    for (std::uint64_t s = 0; s < N; ++s) ++counts[sample_subset(G, 2, derive_seed(1234, s)).elements()];
    CHECK(counts.size() == 10);
    double chi2 = 0;
    for (const auto& [k, c] : counts) {
      const double e = static_cast<double>(N) / 10.0;
      chi2 += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
    }
    CHECK(chi2 < 27.88);  // 0.999 quantile of chi-square(9)
    // Each element appears with probability m/n.
    std::vector<std::size_t> hits(5, 0);
    for (const auto& [k, c] : counts)
      for (auto x : k) hits[x] += c;
    for (auto h : hits) CHECK(std::abs(static_cast<double>(h) / N - 0.4) < 0.03);
  }

  TEST_CASE("seed derivation") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3) != derive_seed(8, 3));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(9);
    for (int i = 0; i < 1000; ++i) {
      const auto x = c.below(7);
      CHECK(x < 7);
      const double u = c.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("Bernstein tail") {
    CHECK(bernstein_tail(3, 10, 1, 1, 0) == 6.0);
    const double v = bernstein_tail(4, 30, 1, 1, 5);
    CHECK(v == doctest::Approx(8.0 * std::exp(-75.0 / 190.0)));
    double prev = bernstein_tail(4, 30, 1, 1, 0.5);
    for (double l = 1.0; l < 40.0; l += 1.0) {
      const double cur = bernstein_tail(4, 30, 1, 1, l);
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(bernstein_tail(4, 30, 1, 1, 5) < bernstein_tail(4, 60, 1, 1, 5));
    CHECK(bernstein_tail(4, 30, 1, 1, 5) < bernstein_tail(8, 30, 1, 1, 5));
    CHECK_THROWS_AS(bernstein_tail(-1, 1, 1, 1, 1), Error);
  }

  TEST_CASE("Wilson interval") {
    auto [lo, hi] = wilson_interval(0, 200);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.018846).epsilon(1e-4));
    std::tie(lo, hi) = wilson_interval(10, 100);
    CHECK(lo == doctest::Approx(0.05523).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.17437).epsilon(1e-3));
    std::tie(lo, hi) = wilson_interval(50, 50);
    CHECK(hi == 1.0);
    CHECK(lo < 1.0);
    std::tie(lo, hi) = wilson_interval(0, 0);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }

  TEST_CASE("auto m") {
    CHECK(auto_m(1, 101, 0.5) == static_cast<std::size_t>(std::ceil(36.0 * std::log(101.0))));
    CHECK(auto_m(2, 10, 0.5) == static_cast<std::size_t>(std::ceil(144.0 * std::log(10.0))));
    CHECK(auto_m(1, 1, 0.5) == 0);
    CHECK_THROWS_AS(auto_m(1, 10, 1.5), Error);
  }

  TEST_CASE("m = n never fails") {
    ExperimentConfig cfg;
    cfg.group_spec = "Z7";
    cfg.k = 2;
    cfg.eps = 0.3;
    cfg.m = 7;
    cfg.trials = 5;
    const auto r = run_experiment(cfg);
    CHECK(r.failures == 0);
    CHECK(r.computed == 5);
    for (const auto& t : r.records) {
      CHECK(t.nu == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
      CHECK(t.mu == doctest::Approx(7.0));
    }
  }

  TEST_CASE("per-trial invariants") {
    ExperimentConfig cfg;
    cfg.group_spec = "Z31";
    cfg.k = 1;
    cfg.eps = 0.5;
    cfg.m = 8;
    cfg.trials = 40;
    cfg.seed = 77;
    cfg.threads = 3;
    const auto r = run_experiment(cfg);
    CHECK(r.n == 31);
    CHECK(r.dsum == 31);
    CHECK(r.used_m == 8);
    CHECK(r.records.size() == 40);
    CHECK(r.bound_violations == 0);
    CHECK(r.implication_violations == 0);
    std::size_t fails = 0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& t = r.records[i];
      CHECK(t.trial == i);
      CHECK(t.seed == derive_seed(77, i));
      CHECK(t.computed);
      CHECK(t.mu >= t.bound - 1e-6);
      CHECK(t.bound == doctest::Approx(8.0 - t.nu));
      CHECK(t.fail == (t.mu < 4.0));
      fails += t.fail;
    }
    CHECK(r.failures == fails);
    CHECK(r.emp_prob == doctest::Approx(static_cast<double>(fails) / 40.0));
    CHECK(r.six_over_n == doctest::Approx(6.0 / 31.0));
    CHECK(r.bernstein_tail_at_eps == doctest::Approx(bernstein_tail(30, 8, 1, 1, 4)));
    CHECK(r.wilson95.first <= r.emp_prob);
    CHECK(r.wilson95.second >= r.emp_prob);
    CHECK_FALSE(r.warnings.empty());
  }

  TEST_CASE("auto m is clamped with a warning") {
    ExperimentConfig cfg;
    cfg.group_spec = "Z11";
    cfg.k = 1;
    cfg.eps = 0.5;
    cfg.trials = 2;
    const auto r = run_experiment(cfg);
    CHECK(r.auto_m == auto_m(1, 11, 0.5));
    CHECK(r.used_m == 11);
    CHECK(r.warnings.size() == 2);
  }

  TEST_CASE("results do not depend on the thread count") {
    ExperimentConfig cfg;
    cfg.group_spec = "S3";
    cfg.k = 2;
    cfg.eps = 0.5;
    cfg.m = 3;
    cfg.trials = 24;
    cfg.seed = 5;
    cfg.threads = 1;
    const auto a = run_experiment(cfg);
    cfg.threads = 4;
    const auto b = run_experiment(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].subset_hash == b.records[i].subset_hash);
      CHECK(a.records[i].nu == b.records[i].nu);
      CHECK(a.records[i].mu == b.records[i].mu);
    }
    CHECK(a.failures == b.failures);
  }

  TEST_CASE("invalid configurations") {
    ExperimentConfig cfg;
    cfg.group_spec = "Z5";
    cfg.m = 9;
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    cfg.m = 2;
    cfg.eps = 1.0;
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    cfg.eps = 0.5;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    cfg.trials = 1;
    cfg.group_spec = "nonsense";
    CHECK_THROWS_AS(run_experiment(cfg), Error);
  }
}
