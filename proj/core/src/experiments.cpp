#include "cayspec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "cayspec/complex.hpp"
#include "cayspec/error.hpp"
#include "cayspec/fourier.hpp"
#include "cayspec/random.hpp"
#include "cayspec/spectral.hpp"

namespace cayspec {

Subset sample_subset(const GroupTable& G, std::size_t m, std::uint64_t seed) {
  const std::size_t n = G.order();
  if (m < 1 || m > n) throw Error(ErrorCode::InvalidArgument, "subset size must lie in [1, n]");
  std::vector<Element> pool(n);
  std::iota(pool.begin(), pool.end(), Element{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[r]);
  }
  pool.resize(m);
  return Subset(std::move(pool));
}

double bernstein_tail(double d, double m, double R, double sigma2, double lambda) {
  if (d < 0 || m < 0 || R < 0 || sigma2 < 0 || lambda < 0)
    throw Error(ErrorCode::InvalidArgument, "bernstein_tail arguments must be nonnegative");
  if (lambda == 0) return 2.0 * d;
  return 2.0 * d * std::exp(-3.0 * lambda * lambda / (6.0 * m * sigma2 + 2.0 * R * lambda));
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * t)) / (1 + z2 / t);
  const double half = z / (1 + z2 / t) * std::sqrt(p * (1 - p) / t + z2 / (4 * t * t));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::size_t auto_m(std::size_t k, std::size_t D, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
  const double kk = static_cast<double>(k);
  return static_cast<std::size_t>(std::ceil(9.0 * kk * kk * std::log(static_cast<double>(D)) / (eps * eps)));
}

namespace {

std::uint64_t hash_subset(const Subset& A) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Element a : A) {
    for (int b = 0; b < 4; ++b) {
      h ^= (a >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

TrialRecord run_trial(const GroupPtr& G, const ExperimentConfig& cfg, std::size_t m, std::size_t i) {
  TrialRecord rec;
  rec.trial = i;
  rec.seed = derive_seed(cfg.seed, i);
  const auto start = std::chrono::steady_clock::now();
  try {
    const Subset A = sample_subset(*G, m, rec.seed);
    rec.subset_hash = hash_subset(A);
    rec.nu = nu(*G, A, 1e-10, rec.seed).nu;
    rec.bound = static_cast<double>(m) - static_cast<double>(cfg.k) * rec.nu;
    const auto handle = build_complex(G, cfg.k, A);
    rec.mu = spectral_gap(handle, static_cast<int>(cfg.k) - 1, 1e-9, GapMethod::Auto, rec.seed).gap;
    rec.fail = rec.mu < (1.0 - cfg.eps) * static_cast<double>(m);
  } catch (const Error& e) {
    if (!is_computational(e.code())) throw;
    rec.computed = false;
    rec.error = std::string(to_string(e.code())) + ": " + e.detail();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (config.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
  const auto G = std::make_shared<const GroupTable>(parse_group_spec(config.group_spec));

  ExperimentResult res;
  res.config = config;
  res.n = G->order();
  res.dsum = dsum(*G, config.seed).dsum;
  res.auto_m = auto_m(config.k, res.dsum, config.eps);
  if (config.m) {
    if (*config.m < 1 || *config.m > res.n) throw Error(ErrorCode::InvalidArgument, "m must lie in [1, n]");
    res.used_m = *config.m;
  } else {
    res.used_m = std::min(res.auto_m, res.n);
    if (res.auto_m > res.n)
      res.warnings.push_back("auto m = " + std::to_string(res.auto_m) + " exceeds n = " + std::to_string(res.n) +
                             "; clamped to n");
  }
  const double n = static_cast<double>(res.n);
  const double kk = static_cast<double>(config.k);
  if (n <= 1e6 * std::pow(kk / config.eps, 8))
    res.warnings.push_back("n is below 1e6 (k/eps)^8: the asymptotic failure bound 6/n is not expected to apply");

  res.records.resize(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < config.trials;) {
      try {
        res.records[i] = run_trial(G, config, res.used_m, i);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  const std::size_t width = std::clamp<std::size_t>(config.threads, 1, config.trials);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  const double m = static_cast<double>(res.used_m);
  const double threshold = config.eps * m / kk;
  double mu_sum = 0.0;
  std::size_t above = 0;
  for (const auto& r : res.records) {
    if (!r.computed) continue;
    ++res.computed;
    res.failures += r.fail ? 1 : 0;
    res.max_nu = std::max(res.max_nu, r.nu);
    mu_sum += r.mu;
    if (r.nu > threshold) ++above;
    if (r.mu < r.bound - 1e-6) ++res.bound_violations;
    if (r.nu <= threshold && r.fail) ++res.implication_violations;
  }
  if (res.computed > 0) {
    const double c = static_cast<double>(res.computed);
    res.emp_prob = static_cast<double>(res.failures) / c;
    res.mean_mu = mu_sum / c;
    res.frac_nu_above = static_cast<double>(above) / c;
  }
  res.wilson95 = wilson_interval(res.failures, res.computed);
  res.six_over_n = 6.0 / n;
  res.bernstein_tail_at_eps = bernstein_tail(static_cast<double>(res.dsum - 1), m, 1.0, 1.0, threshold);
  return res;
}

}  // namespace cayspec
