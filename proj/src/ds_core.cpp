#include "dsinfer/ds_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsinfer {

namespace {

constexpr double kWeightSumTol = 1e-12;

// Gamma(shape, 1) variate. Shape 0 is the point mass at 0 by convention,
// so zero-count categories consume no randomness and get weight exactly 0.
double gamma_draw(RandomStream& rng, double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(rng);
}

void check_partition(const Partition& groups, std::size_t dimension) {
  if (groups.size() < 2) {
    throw std::invalid_argument("partition needs at least 2 blocks");
  }
  std::vector<bool> seen(dimension, false);
  std::size_t covered = 0;
  for (const auto& block : groups) {
    if (block.empty()) {
      throw std::invalid_argument("partition block is empty");
    }
    for (std::size_t idx : block) {
      if (idx >= dimension) {
        throw std::invalid_argument("partition index " + std::to_string(idx) +
                                    " out of range");
      }
      if (seen[idx]) {
        throw std::invalid_argument("partition blocks overlap at index " +
                                    std::to_string(idx));
      }
      seen[idx] = true;
      ++covered;
    }
  }
  if (covered != dimension) {
    throw std::invalid_argument("partition does not cover every category");
  }
}

}  // namespace

CategoryCounts::CategoryCounts(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.size() < 2) {
    throw std::invalid_argument(
        "CategoryCounts: need at least 2 categories, got " +
        std::to_string(counts_.size()));
  }
  for (std::int64_t z : counts_) {
    if (z < 0) {
      throw std::invalid_argument("CategoryCounts: negative count");
    }
    total_ += z;
  }
}

DsSimplexPolytope::DsSimplexPolytope(DsWeights weights)
    : weights_(std::move(weights)) {
  if (weights_.w.size() < 2) {
    throw std::invalid_argument("DsSimplexPolytope: need dimension >= 2");
  }
  double sum = weights_.w0;
  if (weights_.w0 < 0.0) {
    throw std::invalid_argument("DsSimplexPolytope: negative slack weight");
  }
  for (double wi : weights_.w) {
    if (wi < 0.0) {
      throw std::invalid_argument("DsSimplexPolytope: negative lower bound");
    }
    sum += wi;
  }
  if (std::fabs(sum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument(
        "DsSimplexPolytope: weights must sum to 1, got " +
        std::to_string(sum));
  }
}

std::vector<double> DsSimplexPolytope::vertex(std::size_t i) const {
  std::vector<double> v = weights_.w;
  v.at(i) += weights_.w0;
  return v;
}

std::vector<std::vector<double>> DsSimplexPolytope::vertices() const {
  std::vector<std::vector<double>> out;
  out.reserve(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) {
    out.push_back(vertex(i));
  }
  return out;
}

DsWeights sample_ds_weights(const CategoryCounts& counts, Weakening weaken,
                            RandomStream& rng) {
  if (weaken.r < 0) {
    throw std::invalid_argument("Weakening: r must be non-negative");
  }
  const std::size_t d = counts.dimension();
  DsWeights out;
  out.w.resize(d);

  const double slack = gamma_draw(rng, 1.0 + static_cast<double>(weaken.r));
  double sum = slack;
  for (std::size_t i = 0; i < d; ++i) {
    const std::int64_t z = counts[i];
    out.w[i] = z > 0 ? gamma_draw(rng, static_cast<double>(z)) : 0.0;
    sum += out.w[i];
  }
  // slack has shape >= 1 so sum > 0; dividing by the exact sum of the
  // draws is the only normalization.
  out.w0 = slack / sum;
  for (double& wi : out.w) {
    wi /= sum;
  }
  return out;
}

DsSimplexPolytope polytope_from_weights(DsWeights weights) {
  return DsSimplexPolytope(std::move(weights));
}

CategoryCounts merge_categories(const CategoryCounts& counts,
                                const Partition& groups) {
  check_partition(groups, counts.dimension());
  std::vector<std::int64_t> merged;
  merged.reserve(groups.size());
  for (const auto& block : groups) {
    std::int64_t sum = 0;
    for (std::size_t idx : block) {
      sum += counts[idx];
    }
    merged.push_back(sum);
  }
  return CategoryCounts(std::move(merged));
}

DsWeights merge_weights(const DsWeights& weights, const Partition& groups) {
  check_partition(groups, weights.dimension());
  DsWeights out;
  out.w0 = weights.w0;
  out.w.reserve(groups.size());
  for (const auto& block : groups) {
    double sum = 0.0;
    for (std::size_t idx : block) {
      sum += weights.w[idx];
    }
    out.w.push_back(sum);
  }
  return out;
}

}  // namespace dsinfer
