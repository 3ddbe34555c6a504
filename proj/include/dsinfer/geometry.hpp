#pragma once

#include <span>
#include <vector>

#include "dsinfer/ds_core.hpp"

namespace dsinfer {

/// Point in the probability simplex: entries >= -1e-12, sum within 1e-9
/// of 1.
using ProbVector = std::vector<double>;

bool is_prob_vector(std::span<const double> p);

struct DistancePair {
  double lower = 0.0;  // inf over the polytope of the distance to the target
  double upper = 0.0;  // sup, attained at a vertex
};

/// Nearest point of the polytope to the target in Euclidean norm:
/// argmin {||y - target|| : y_i >= w_i, sum(y) = 1}. Shift-and-threshold:
/// with v = target - w, finds tau such that sum(max(v_i - tau, 0)) = w0 and
/// returns w + max(v - tau, 0).
ProbVector project_to_constrained_simplex(std::span<const double> target,
                                          const DsSimplexPolytope& poly);

/// ||projection - target||; exactly 0 when the target is feasible.
double lower_distance(const DsSimplexPolytope& poly,
                      std::span<const double> target);

/// Max over the d vertices w + w0*e_i of the distance to the target.
double upper_distance(const DsSimplexPolytope& poly,
                      std::span<const double> target);

DistancePair distance_pair(const DsSimplexPolytope& poly,
                           std::span<const double> target);

/// True iff target_i >= w_i - 1e-10 for all i.
bool contains(const DsSimplexPolytope& poly, std::span<const double> target);

namespace detail {

/// Threshold tau of the sort-based projection onto {x >= 0, sum(x) = total}
/// for total > 0: sum(max(v_i - tau, 0)) == total.
double simplex_threshold(std::span<const double> v, double total);

}  // namespace detail

}  // namespace dsinfer
