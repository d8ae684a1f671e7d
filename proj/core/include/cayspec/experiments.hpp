#pragma once

// Monte Carlo trials over random m-subsets: nu(A), mu_{k-1}(Y_{A,k}) and
// the failure event mu < (1-eps) m.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cayspec/group.hpp"

namespace cayspec {

/// Uniform m-subset by a seeded partial Fisher-Yates shuffle.
Subset sample_subset(const GroupTable& G, std::size_t m, std::uint64_t seed);

/// 2 d exp(-3 lambda^2 / (6 m sigma2 + 2 R lambda)), sigma2 per summand.
double bernstein_tail(double d, double m, double R, double sigma2, double lambda);

/// 95% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// ceil(9 k^2 ln D / eps^2).
std::size_t auto_m(std::size_t k, std::size_t D, double eps);

struct ExperimentConfig {
  std::string group_spec;
  std::size_t k = 1;
  double eps = 0.5;
  std::optional<std::size_t> m;  ///< nullopt means auto
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t threads = 1;  ///< does not affect results
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t subset_hash = 0;
  double nu = 0.0;
  double mu = 0.0;
  double bound = 0.0;  ///< |A| - k nu
  bool fail = false;   ///< mu < (1-eps) m
  bool computed = true;
  std::string error;
  double seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t n = 0;
  std::size_t dsum = 0;
  std::size_t auto_m = 0;  ///< before clamping to n
  std::size_t used_m = 0;
  std::vector<std::string> warnings;
  std::vector<TrialRecord> records;

  std::size_t computed = 0;
  std::size_t failures = 0;
  double emp_prob = 0.0;
  std::pair<double, double> wilson95{0.0, 1.0};
  double six_over_n = 0.0;
  double bernstein_tail_at_eps = 0.0;
  double max_nu = 0.0;
  double mean_mu = 0.0;
  double frac_nu_above = 0.0;          ///< nu > eps m / k
  std::size_t bound_violations = 0;    ///< mu < |A| - k nu - 1e-6
  std::size_t implication_violations = 0;  ///< nu <= eps m / k but failed
};

/// Runs every trial with seed derive_seed(config.seed, i) on a pool of
/// config.threads workers; results are ordered by trial index. A failed
/// eigensolve marks its trial and does not abort the batch.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace cayspec
