#include "dsinfer/uniformity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsinfer {

namespace {

// Regularized lower incomplete gamma P(a, x) by series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) {
      break;
    }
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction, for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      break;
    }
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

ContingencyTable::ContingencyTable(int k, std::vector<std::int64_t> cells)
    : k_(k), cells_(std::move(cells)) {
  if (k_ < 2) {
    throw std::invalid_argument("ContingencyTable: resolution must be >= 2");
  }
  if (cells_.size() != static_cast<std::size_t>(k_) * k_) {
    throw std::invalid_argument("ContingencyTable: expected " +
                                std::to_string(k_ * k_) + " cells, got " +
                                std::to_string(cells_.size()));
  }
  for (std::int64_t z : cells_) {
    if (z < 0) {
      throw std::invalid_argument("ContingencyTable: negative cell count");
    }
    total_ += z;
  }
}

std::string_view method_name(Method m) {
  return m == Method::ds ? "ds" : "chisq";
}

ContingencyTable bin_samples(std::span<const SamplePoint> points, int k) {
  if (k < 2) {
    throw std::invalid_argument("bin_samples: resolution must be >= 2");
  }
  std::vector<std::int64_t> cells(static_cast<std::size_t>(k) * k, 0);
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& p = points[idx];
    if (!(p.x >= 0.0 && p.x <= 1.0) || !(p.y >= 0.0 && p.y <= 1.0)) {
      throw std::domain_error("bin_samples: point " + std::to_string(idx) +
                              " outside [0,1]^2");
    }
    // Half-open intervals [(i-1)/k, i/k); the last one is closed at 1.
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(p.x * k),
                                         static_cast<std::size_t>(k - 1));
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(p.y * k),
                                         static_cast<std::size_t>(k - 1));
    ++cells[i * k + j];
  }
  return ContingencyTable(k, std::move(cells));
}

ProbVector smoothed_estimator(const CategoryCounts& counts) {
  const double d = static_cast<double>(counts.dimension());
  const double denom = static_cast<double>(counts.total()) + 1.0;
  ProbVector p(counts.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (static_cast<double>(counts[i]) + 1.0 / d) / denom;
  }
  return p;
}

ProbVector point_estimator(const ContingencyTable& table) {
  return smoothed_estimator(CategoryCounts(table.cells()));
}

double center_distance(std::span<const double> p_hat, int k) {
  const std::size_t d = static_cast<std::size_t>(k) * k;
  if (p_hat.size() != d) {
    throw std::invalid_argument("center_distance: estimator length " +
                                std::to_string(p_hat.size()) +
                                " does not match k^2 = " + std::to_string(d));
  }
  const double uniform = 1.0 / static_cast<double>(d);
  double sq = 0.0;
  for (double p : p_hat) {
    const double diff = p - uniform;
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

TestReport ds_uniformity_test(const ContingencyTable& table, int m,
                              Weakening weaken, RandomStream& rng) {
  if (m < 1) {
    throw std::invalid_argument("ds_uniformity_test: m must be >= 1");
  }
  const CategoryCounts counts(table.cells());
  const ProbVector p_hat = point_estimator(table);
  const double r_center = center_distance(p_hat, table.resolution());

  int upper_hits = 0;
  int lower_hits = 0;
  for (int i = 0; i < m; ++i) {
    const auto poly = polytope_from_weights(sample_ds_weights(counts, weaken, rng));
    const DistancePair d = distance_pair(poly, p_hat);
    if (d.upper >= r_center) ++upper_hits;
    if (d.lower >= r_center) ++lower_hits;
  }
  TestReport report;
  report.method = Method::ds;
  report.k = table.resolution();
  report.p_upper = static_cast<double>(upper_hits) / m;
  report.p_lower = static_cast<double>(lower_hits) / m;
  report.r_center = r_center;
  report.m = m;
  return report;
}

TestReport chi_square_uniformity_test(const ContingencyTable& table) {
  if (table.total() < 1) {
    throw std::invalid_argument("chi_square_uniformity_test: empty table");
  }
  const int cells = table.resolution() * table.resolution();
  const double expected = static_cast<double>(table.total()) / cells;
  double stat = 0.0;
  for (std::int64_t z : table.cells()) {
    const double diff = static_cast<double>(z) - expected;
    stat += diff * diff / expected;
  }
  const double p = chi_square_sf(stat, cells - 1);

  TestReport report;
  report.method = Method::chi_square;
  report.k = table.resolution();
  report.p_upper = p;
  report.p_lower = p;
  report.r_center = center_distance(point_estimator(table), table.resolution());
  report.m = 0;
  return report;
}

double chi_square_sf(double x, int df) {
  if (df < 1) {
    throw std::invalid_argument("chi_square_sf: df must be positive");
  }
  if (x < 0.0) {
    throw std::domain_error("chi_square_sf: x must be non-negative");
  }
  if (x == 0.0) {
    return 1.0;
  }
  const double a = 0.5 * df;
  const double half_x = 0.5 * x;
  if (half_x < a + 1.0) {
    return 1.0 - gamma_p_series(a, half_x);
  }
  return gamma_q_contfrac(a, half_x);
}

}  // namespace dsinfer
