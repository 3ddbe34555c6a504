#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsinfer/uniformity.hpp"

namespace dsinfer {

enum class Hypothesis { h0, h1 };

/// Product measure on [0,1]^2 with the same Beta(a, b) marginal on both
/// axes. h0 is Beta(1,1)^2 (uniform), h1 is Beta(1,2)^2.
struct HypothesisSpec {
  Hypothesis tag = Hypothesis::h0;
  double a = 1.0;
  double b = 1.0;
};

HypothesisSpec make_hypothesis(Hypothesis tag);

struct SimulationConfig {
  int n = 30;                            // samples per dataset
  int datasets = 100;
  std::vector<int> resolutions{2, 3, 6};
  int m = 200;                           // polytopes per DS test
  Weakening weaken{};
  std::uint64_t master_seed = 0;
  std::vector<Method> methods{Method::ds, Method::chi_square};
  HypothesisSpec hypothesis{};
  int threads = 1;
};

struct PValueRecord {
  int dataset = 0;
  Method method = Method::ds;
  int k = 0;
  double p_upper = 0.0;
  double p_lower = 0.0;
};

struct EcdfCurve {
  std::vector<double> grid;
  std::vector<double> values;  // fraction of inputs <= each grid point
};

/// Quantile of Beta(a, b); only the analytic cases a == 1 or b == 1 are
/// supported (F(x) = 1 - (1-x)^b resp. x^a, inverted in closed form).
double beta_inverse_cdf(double u, double a, double b);

/// n i.i.d. sample points; each coordinate is the Beta quantile of a
/// uniform [0,1) draw, x first then y.
std::vector<SamplePoint> generate_dataset(const HypothesisSpec& hyp, int n,
                                          RandomStream& rng);

// Stream-seed tags used by run_experiment.
inline constexpr std::uint64_t kSeedTagDataset = 1;
inline constexpr std::uint64_t kSeedTagDsTest = 2;

/// Deterministic collision-resistant seed for the (dataset, tag, k) tuple:
/// a splitmix64 avalanche chained over the fields.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t dataset,
                          std::uint64_t tag, std::uint64_t k);

/// Runs every configured method at every resolution on each generated
/// dataset. Datasets may be processed in parallel (config.threads); results
/// are identical for any thread count and come back sorted by
/// (dataset, method, k).
std::vector<PValueRecord> run_experiment(const SimulationConfig& config);

EcdfCurve ecdf(std::span<const double> values, std::span<const double> grid);

/// 101 equispaced grid points 0.00 .. 1.00.
std::vector<double> ecdf_grid();

}  // namespace dsinfer
