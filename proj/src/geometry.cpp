#include "dsinfer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace dsinfer {

namespace {

constexpr double kContainsSlack = 1e-10;

void check_dimension(const DsSimplexPolytope& poly,
                     std::span<const double> target) {
  if (poly.dimension() != target.size()) {
    throw std::invalid_argument("polytope and target dimensions differ");
  }
}

}  // namespace

bool is_prob_vector(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= -1e-12)) {
      return false;
    }
    sum += x;
  }
  return std::fabs(sum - 1.0) <= 1e-9;
}

namespace detail {

double simplex_threshold(std::span<const double> v, double total) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // tau = (sum of the rho largest v_i - total) / rho for the largest prefix
  // where every kept coordinate stays above tau. Ties at tau are harmless:
  // max(v - tau, 0) is continuous in tau.
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - total) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) {
      tau = candidate;
    }
  }
  return tau;
}

}  // namespace detail

ProbVector project_to_constrained_simplex(std::span<const double> target,
                                          const DsSimplexPolytope& poly) {
  check_dimension(poly, target);
  const auto& w = poly.lower_bounds();
  const double w0 = poly.slack();
  if (w0 <= 0.0) {
    return w;  // the polytope is the single point w
  }
  std::vector<double> v(target.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = target[i] - w[i];
  }
  const double tau = detail::simplex_threshold(v, w0);
  ProbVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = w[i] + std::max(v[i] - tau, 0.0);
  }
  return out;
}

double lower_distance(const DsSimplexPolytope& poly,
                      std::span<const double> target) {
  check_dimension(poly, target);
  const auto& w = poly.lower_bounds();
  bool feasible = true;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (target[i] < w[i]) {
      feasible = false;
      break;
    }
  }
  if (feasible) {
    return 0.0;
  }
  const ProbVector y = project_to_constrained_simplex(target, poly);
  double sq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double diff = y[i] - target[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

double upper_distance(const DsSimplexPolytope& poly,
                      std::span<const double> target) {
  check_dimension(poly, target);
  const auto& w = poly.lower_bounds();
  const double w0 = poly.slack();
  // ||w + w0*e_i - t||^2 = ||w - t||^2 + 2*w0*(w_i - t_i) + w0^2, so the
  // farthest vertex maximizes w_i - t_i.
  double base = 0.0;
  double max_gap = w[0] - target[0];
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double diff = w[i] - target[i];
    base += diff * diff;
    max_gap = std::max(max_gap, diff);
  }
  const double sq = base + w0 * (2.0 * max_gap + w0);
  return std::sqrt(std::max(sq, 0.0));
}

DistancePair distance_pair(const DsSimplexPolytope& poly,
                           std::span<const double> target) {
  return DistancePair{lower_distance(poly, target),
                      upper_distance(poly, target)};
}

bool contains(const DsSimplexPolytope& poly, std::span<const double> target) {
  check_dimension(poly, target);
  const auto& w = poly.lower_bounds();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (target[i] < w[i] - kContainsSlack) {
      return false;
    }
  }
  return true;
}

}  // namespace dsinfer
