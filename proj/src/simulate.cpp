#include "dsinfer/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

namespace dsinfer {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void validate(const SimulationConfig& config) {
  if (config.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (config.datasets < 1) {
    throw std::invalid_argument("config: datasets must be >= 1");
  }
  if (config.m < 1) throw std::invalid_argument("config: m must be >= 1");
  if (config.weaken.r < 0) {
    throw std::invalid_argument("config: weaken must be >= 0");
  }
  if (config.threads < 1) {
    throw std::invalid_argument("config: threads must be >= 1");
  }
  if (config.resolutions.empty()) {
    throw std::invalid_argument("config: no resolutions given");
  }
  for (int k : config.resolutions) {
    if (k < 2) throw std::invalid_argument("config: resolutions must be >= 2");
  }
  if (config.methods.empty()) {
    throw std::invalid_argument("config: no methods given");
  }
  if (!(config.hypothesis.a > 0.0 && config.hypothesis.b > 0.0)) {
    throw std::invalid_argument("config: Beta parameters must be positive");
  }
}

}  // namespace

HypothesisSpec make_hypothesis(Hypothesis tag) {
  HypothesisSpec spec;
  spec.tag = tag;
  spec.a = 1.0;
  spec.b = tag == Hypothesis::h0 ? 1.0 : 2.0;
  return spec;
}

double beta_inverse_cdf(double u, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) {
    throw std::invalid_argument("beta_inverse_cdf: parameters must be positive");
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("beta_inverse_cdf: u outside [0,1]");
  }
  if (a == 1.0) {
    if (b == 1.0) return u;
    if (b == 2.0) return 1.0 - std::sqrt(1.0 - u);
    return 1.0 - std::pow(1.0 - u, 1.0 / b);
  }
  if (b == 1.0) {
    return std::pow(u, 1.0 / a);
  }
  throw std::invalid_argument(
      "beta_inverse_cdf: only Beta(1,b) and Beta(a,1) are supported");
}

std::vector<SamplePoint> generate_dataset(const HypothesisSpec& hyp, int n,
                                          RandomStream& rng) {
  if (n < 1) {
    throw std::invalid_argument("generate_dataset: n must be >= 1");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SamplePoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = beta_inverse_cdf(unif(rng), hyp.a, hyp.b);
    const double y = beta_inverse_cdf(unif(rng), hyp.a, hyp.b);
    points.push_back(SamplePoint{x, y});
  }
  return points;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t dataset,
                          std::uint64_t tag, std::uint64_t k) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ dataset);
  s = splitmix64(s ^ tag);
  s = splitmix64(s ^ k);
  return s;
}

std::vector<PValueRecord> run_experiment(const SimulationConfig& config) {
  validate(config);
  std::vector<int> resolutions = config.resolutions;
  std::sort(resolutions.begin(), resolutions.end());

  const std::size_t per_dataset = resolutions.size() * config.methods.size();
  std::vector<PValueRecord> records(per_dataset *
                                    static_cast<std::size_t>(config.datasets));

  auto run_dataset = [&](int index) {
    RandomStream gen_rng(derive_seed(config.master_seed,
                                     static_cast<std::uint64_t>(index),
                                     kSeedTagDataset, 0));
    const auto points = generate_dataset(config.hypothesis, config.n, gen_rng);
    std::size_t slot = static_cast<std::size_t>(index) * per_dataset;
    for (int k : resolutions) {
      const ContingencyTable table = bin_samples(points, k);
      for (Method method : config.methods) {
        TestReport report;
        try {
          if (method == Method::ds) {
            RandomStream test_rng(derive_seed(
                config.master_seed, static_cast<std::uint64_t>(index),
                kSeedTagDsTest, static_cast<std::uint64_t>(k)));
            report =
                ds_uniformity_test(table, config.m, config.weaken, test_rng);
          } else {
            report = chi_square_uniformity_test(table);
          }
        } catch (const std::exception& e) {
          throw std::runtime_error(std::string(method_name(method)) + " at k=" +
                                   std::to_string(k) + ": " + e.what());
        }
        records[slot++] = PValueRecord{index, method, k, report.p_upper,
                                       report.p_lower};
      }
    }
  };

  const int threads =
      std::min(std::max(config.threads, 1), config.datasets);
  if (threads == 1) {
    for (int i = 0; i < config.datasets; ++i) {
      try {
        run_dataset(i);
      } catch (const std::exception& e) {
        throw std::runtime_error("dataset " + std::to_string(i) +
                                 " failed: " + e.what());
      }
    }
  } else {
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;
    auto worker = [&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= config.datasets || failed.load()) {
          return;
        }
        try {
          run_dataset(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) {
            error_message =
                "dataset " + std::to_string(i) + " failed: " + e.what();
          }
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
    if (failed.load()) {
      throw std::runtime_error(error_message);
    }
  }

  std::sort(records.begin(), records.end(),
            [](const PValueRecord& a, const PValueRecord& b) {
              return std::tuple(a.dataset, static_cast<int>(a.method), a.k) <
                     std::tuple(b.dataset, static_cast<int>(b.method), b.k);
            });
  return records;
}

EcdfCurve ecdf(std::span<const double> values, std::span<const double> grid) {
  if (values.empty()) {
    throw std::invalid_argument("ecdf: no values");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) {
      throw std::invalid_argument("ecdf: grid must be sorted ascending");
    }
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  EcdfCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.reserve(grid.size());
  for (double g : grid) {
    const auto count =
        std::upper_bound(sorted.begin(), sorted.end(), g) - sorted.begin();
    curve.values.push_back(static_cast<double>(count) /
                           static_cast<double>(sorted.size()));
  }
  return curve;
}

std::vector<double> ecdf_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) {
    grid[static_cast<std::size_t>(i)] = i / 100.0;
  }
  return grid;
}

}  // namespace dsinfer
