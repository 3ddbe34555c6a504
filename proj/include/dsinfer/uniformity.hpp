#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dsinfer/ds_core.hpp"
#include "dsinfer/geometry.hpp"

namespace dsinfer {

/// One bivariate observation on the closed unit square.
struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
};

/// k x k binned counts in row-major order; cell (i, j) counts samples whose
/// x falls in the i-th and y in the j-th of the k intervals of [0,1].
class ContingencyTable {
 public:
  ContingencyTable(int k, std::vector<std::int64_t> cells);

  int resolution() const { return k_; }
  std::int64_t total() const { return total_; }
  const std::vector<std::int64_t>& cells() const { return cells_; }
  std::int64_t cell(int i, int j) const {
    return cells_[static_cast<std::size_t>(i) * k_ + j];
  }

 private:
  int k_;
  std::vector<std::int64_t> cells_;
  std::int64_t total_ = 0;
};

enum class Method { ds, chi_square };

std::string_view method_name(Method m);  // "ds" / "chisq"

struct TestReport {
  Method method = Method::ds;
  int k = 0;
  double p_upper = 0.0;
  double p_lower = 0.0;  // equals p_upper for chi-square
  double r_center = 0.0;
  int m = 0;  // polytope draws; 0 for chi-square
};

/// Bins points into a k x k table. Intervals are [(i-1)/k, i/k) with the
/// last one closed at 1, so the partition covers [0,1]. Coordinates outside
/// [0,1] raise std::domain_error.
ContingencyTable bin_samples(std::span<const SamplePoint> points, int k);

/// Smoothed estimator (z_i + 1/d) / (n + 1); entries are strictly positive
/// and sum to 1.
ProbVector smoothed_estimator(const CategoryCounts& counts);

/// The k*k-cell case of the smoothed estimator: ((z_c + k^-2) / (n+1)).
ProbVector point_estimator(const ContingencyTable& table);

/// Euclidean distance from p_hat (length k^2) to the uniform vector
/// (k^-2, ..., k^-2).
double center_distance(std::span<const double> p_hat, int k);

/// Draws m DS polytopes from the flattened cell counts and reports
/// p_upper = #{u_i >= r_center}/m, p_lower = #{l_i >= r_center}/m where u_i
/// and l_i are the upper and lower distances from polytope i to the point
/// estimator. Counting uses plain >= with no tolerance; the
/// (count+1)/(m+1) finite-sample correction is deliberately not applied.
TestReport ds_uniformity_test(const ContingencyTable& table, int m,
                              Weakening weaken, RandomStream& rng);

/// Pearson statistic against the uniform null with k^2 - 1 degrees of
/// freedom; p_lower == p_upper.
TestReport chi_square_uniformity_test(const ContingencyTable& table);

/// Upper tail of the chi-square distribution: Q(df/2, x/2), the regularized
/// upper incomplete gamma. Series for small arguments, Lentz continued
/// fraction for large; absolute error below 1e-10.
double chi_square_sf(double x, int df);

}  // namespace dsinfer
