#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dsinfer {

/// Observed multinomial counts z_1..z_d with d >= 2. Zero entries are
/// allowed, including the all-zero vector (total ignorance).
class CategoryCounts {
 public:
  explicit CategoryCounts(std::vector<std::int64_t> counts);

  std::size_t dimension() const { return counts_.size(); }
  std::int64_t total() const { return total_; }
  const std::vector<std::int64_t>& values() const { return counts_; }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// r unobserved multinoulli trials, possibly removed adversarially.
/// Raises the slack shape of the Dirichlet draw from 1 to 1 + r.
struct Weakening {
  std::int64_t r = 0;
};

/// One draw (w0, w_1..w_d) from Dirichlet(1+r, z_1..z_d). Each w_i is the
/// lower bound on p_i and w0 is the unassigned slack mass, so
/// w0 + sum(w) == 1. Categories with z_i == 0 get w_i == 0 exactly.
struct DsWeights {
  double w0 = 0.0;
  std::vector<double> w;

  std::size_t dimension() const { return w.size(); }
};

/// Focal element {p : p_i >= w_i for all i, sum(p) = 1}. Non-empty since
/// sum(w) = 1 - w0 <= 1, and always a simplex whose d vertices are
/// w + w0 * e_i.
class DsSimplexPolytope {
 public:
  explicit DsSimplexPolytope(DsWeights weights);

  std::size_t dimension() const { return weights_.w.size(); }
  const DsWeights& weights() const { return weights_; }
  double slack() const { return weights_.w0; }
  const std::vector<double>& lower_bounds() const { return weights_.w; }

  std::vector<double> vertex(std::size_t i) const;
  std::vector<std::vector<double>> vertices() const;

 private:
  DsWeights weights_;
};

using RandomStream = std::mt19937_64;

/// Draws (w0, w) ~ Dirichlet(1+r, z_1..z_d) via independent Gamma(shape, 1)
/// variates normalized by their exact sum. Marginal means are
/// E[w0] = (1+r)/(1+r+n) and E[w_i] = z_i/(1+r+n).
DsWeights sample_ds_weights(const CategoryCounts& counts, Weakening weaken,
                            RandomStream& rng);

DsSimplexPolytope polytope_from_weights(DsWeights weights);

/// Partition of the index set {0..d-1} into at least two non-empty blocks.
using Partition = std::vector<std::vector<std::size_t>>;

/// Sums counts within each block, in block order.
CategoryCounts merge_categories(const CategoryCounts& counts,
                                const Partition& groups);

/// Sums weights within each block; w0 is unchanged. Merged draws are
/// distributed as draws from the merged counts.
DsWeights merge_weights(const DsWeights& weights, const Partition& groups);

}  // namespace dsinfer
