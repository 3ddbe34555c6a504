#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "dsinfer/ds_core.hpp"

// Independent oracles and generators used by the test suites. Everything
// here deliberately avoids the library's algorithm paths: projections use
// Michelot's alternating method, tail probabilities come from quadrature,
// and moments from closed forms.
namespace testsupport {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

// Marginal mean/variance of one Dirichlet component with concentration
// alpha_i out of total alpha_sum.
Moments dirichlet_moments(double alpha_i, double alpha_sum);

double mean(std::span<const double> xs);

// Kolmogorov asymptotic tail Q(lambda) = 2 sum_j (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

// One-sample Kolmogorov-Smirnov p-value of xs against a CDF.
double ks_test(std::span<const double> xs,
               const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov p-value.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Adaptive Simpson quadrature to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// Upper tail of the chi-square distribution by integrating the density.
double chi_square_sf_by_integration(double x, int df);

// Euclidean projection of v onto {x >= 0, sum(x) = total} by Michelot's
// alternating hyperplane-projection/clipping algorithm.
std::vector<double> michelot_project(std::vector<double> v, double total);

// Minimum distance from target to the polytope via michelot_project.
double oracle_lower_distance(const dsinfer::DsSimplexPolytope& poly,
                             std::span<const double> target);

// Largest KKT violation of y as the claimed nearest point of the polytope
// to target: bound feasibility, normalization, equal gradient on the free
// set, and gradient dominance on the active set. Near zero certifies
// optimality of the convex program.
double kkt_violation(std::span<const double> y, std::span<const double> target,
                     const dsinfer::DsSimplexPolytope& poly);

dsinfer::DsSimplexPolytope random_polytope(std::mt19937_64& rng,
                                           std::size_t d);

// Uniform draw from the standard probability simplex.
std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t d);

}  // namespace testsupport
