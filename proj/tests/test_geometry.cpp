#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "dsinfer/geometry.hpp"
#include "support/test_support.hpp"

using namespace dsinfer;
namespace ts = testsupport;

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

// Interior point w + w0 * lambda for a barycentric lambda.
std::vector<double> polytope_point(const DsSimplexPolytope& poly,
                                   std::span<const double> lambda) {
  std::vector<double> y(poly.dimension());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = poly.lower_bounds()[i] + poly.slack() * lambda[i];
  }
  return y;
}

}  // namespace

TEST_CASE("projection keeps a feasible target in place") {
  const DsSimplexPolytope poly(DsWeights{0.7, {0.1, 0.1, 0.1}});
  const std::vector<double> target{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const ProbVector y = project_to_constrained_simplex(target, poly);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(y[i] == doctest::Approx(target[i]).epsilon(1e-12));
  }
}

TEST_CASE("projection clamps an infeasible target to the boundary") {
  const DsSimplexPolytope poly(DsWeights{0.1, {0.6, 0.3}});
  const std::vector<double> target{0.5, 0.5};

  // 1-D brute force along the feasible segment (0.6,0.4) .. (0.7,0.3)
  double best = 1e9;
  std::vector<double> best_point;
  const int grid = 100000;
  for (int g = 0; g <= grid; ++g) {
    const double s = 0.1 * g / grid;
    const std::vector<double> y{0.6 + s, 0.4 - s};
    const double d = distance(y, target);
    if (d < best) {
      best = d;
      best_point = y;
    }
  }
  CHECK(best_point[0] == doctest::Approx(0.6).epsilon(1e-5));
  CHECK(best_point[1] == doctest::Approx(0.4).epsilon(1e-5));

  const ProbVector y = project_to_constrained_simplex(target, poly);
  CHECK(y[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(y[1] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("projection onto the whole simplex is the identity inside it") {
  const DsSimplexPolytope poly(DsWeights{1.0, {0.0, 0.0, 0.0}});
  const std::vector<double> target{0.9, 0.05, 0.05};
  const ProbVector y = project_to_constrained_simplex(target, poly);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(y[i] == doctest::Approx(target[i]).epsilon(1e-12));
  }
}

TEST_CASE("lower distance is zero exactly on feasible targets") {
  const DsSimplexPolytope poly(DsWeights{0.7, {0.1, 0.1, 0.1}});
  const std::vector<double> target{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(lower_distance(poly, target) == 0.0);
}

TEST_CASE("lower distance matches the hand-computed boundary case") {
  const DsSimplexPolytope poly(DsWeights{0.1, {0.6, 0.3}});
  const std::vector<double> target{0.5, 0.5};
  CHECK(lower_distance(poly, target) ==
        doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

TEST_CASE("lower distance agrees with the Michelot oracle") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + i % 9;
    const auto poly = ts::random_polytope(rng, d);
    const auto target = ts::random_simplex_point(rng, d);
    const double got = lower_distance(poly, target);
    const double want = ts::oracle_lower_distance(poly, target);
    CHECK(std::fabs(got - want) < 1e-6);
  }
}

TEST_CASE("projection is feasible and passes the KKT certificate") {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + i % 9;
    const auto poly = ts::random_polytope(rng, d);
    const auto target = ts::random_simplex_point(rng, d);
    const ProbVector y = project_to_constrained_simplex(target, poly);

    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(y[j] >= poly.lower_bounds()[j] - 1e-10);
      sum += y[j];
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-10);
    CHECK(ts::kkt_violation(y, target, poly) < 1e-9);
  }
}

TEST_CASE("no sampled polytope point beats the projection") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 40; ++i) {
    const std::size_t d = 2 + i % 7;
    const auto poly = ts::random_polytope(rng, d);
    const auto target = ts::random_simplex_point(rng, d);
    const double best = lower_distance(poly, target);
    for (int s = 0; s < 500; ++s) {
      const auto y = polytope_point(poly, ts::random_simplex_point(rng, d));
      CHECK(distance(y, target) >= best - 1e-9);
    }
  }
}

TEST_CASE("threshold splits exactly the requested mass") {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> total_dist(0.01, 2.0);
  for (int i = 0; i < 300; ++i) {
    const std::size_t d = 2 + i % 15;
    std::vector<double> v(d);
    for (double& x : v) {
      x = unif(rng);
    }
    const double total = total_dist(rng);
    const double tau = detail::simplex_threshold(v, total);
    double mass = 0.0;
    for (double x : v) {
      mass += std::max(x - tau, 0.0);
    }
    CHECK(std::fabs(mass - total) <= 1e-12);
  }
}

TEST_CASE("upper distance picks the farthest vertex") {
  SUBCASE("hand-enumerated 2-D case") {
    const DsSimplexPolytope poly(DsWeights{0.5, {0.2, 0.3}});
    const std::vector<double> target{0.5, 0.5};
    // vertices (0.7,0.3) and (0.2,0.8): distances sqrt(0.08), sqrt(0.18)
    CHECK(upper_distance(poly, target) ==
          doctest::Approx(std::sqrt(0.18)).epsilon(1e-12));
  }
  SUBCASE("point polytope at the target") {
    const DsSimplexPolytope poly(DsWeights{0.0, {0.4, 0.6}});
    const std::vector<double> target{0.4, 0.6};
    CHECK(upper_distance(poly, target) == 0.0);
  }
  SUBCASE("equals the max over explicit vertices") {
    std::mt19937_64 rng(105);
    for (int i = 0; i < 100; ++i) {
      const std::size_t d = 2 + i % 7;
      const auto poly = ts::random_polytope(rng, d);
      const auto target = ts::random_simplex_point(rng, d);
      double max_dist = 0.0;
      for (const auto& v : poly.vertices()) {
        max_dist = std::max(max_dist, distance(v, target));
      }
      CHECK(upper_distance(poly, target) ==
            doctest::Approx(max_dist).epsilon(1e-12));
    }
  }
  SUBCASE("interior samples never exceed it") {
    std::mt19937_64 rng(106);
    for (int i = 0; i < 30; ++i) {
      const std::size_t d = 2 + i % 7;
      const auto poly = ts::random_polytope(rng, d);
      const auto target = ts::random_simplex_point(rng, d);
      const double u = upper_distance(poly, target);
      for (int s = 0; s < 500; ++s) {
        const auto y = polytope_point(poly, ts::random_simplex_point(rng, d));
        CHECK(distance(y, target) <= u + 1e-12);
      }
    }
  }
}

TEST_CASE("lower never exceeds upper") {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 300; ++i) {
    const std::size_t d = 2 + i % 9;
    const auto poly = ts::random_polytope(rng, d);
    const auto target = ts::random_simplex_point(rng, d);
    const DistancePair pair = distance_pair(poly, target);
    CHECK(pair.lower >= 0.0);
    CHECK(pair.lower <= pair.upper);
  }
}

TEST_CASE("containment matches the lower bounds") {
  const DsSimplexPolytope wide(DsWeights{0.7, {0.1, 0.1, 0.1}});
  const std::vector<double> inside{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(contains(wide, inside));

  const DsSimplexPolytope narrow(DsWeights{0.1, {0.6, 0.3}});
  const std::vector<double> outside{0.5, 0.5};
  CHECK_FALSE(contains(narrow, outside));

  std::mt19937_64 rng(108);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + i % 9;
    const auto poly = ts::random_polytope(rng, d);
    const auto target = ts::random_simplex_point(rng, d);
    CHECK(contains(poly, target) == (lower_distance(poly, target) <= 1e-9));
  }
}

TEST_CASE("the 2-D case reduces to clamping onto a segment") {
  std::mt19937_64 rng(109);
  for (int i = 0; i < 200; ++i) {
    const auto poly = ts::random_polytope(rng, 2);
    const auto target = ts::random_simplex_point(rng, 2);

    const auto& w = poly.lower_bounds();
    const double w0 = poly.slack();
    // segment A=(w1+w0, w2) to B=(w1, w2+w0); clamp the line parameter
    const double ax = w[0] + w0;
    const double ay = w[1];
    double t = 0.0;
    if (w0 > 0.0) {
      t = ((target[0] - ax) * -w0 + (target[1] - ay) * w0) / (2.0 * w0 * w0);
      t = std::clamp(t, 0.0, 1.0);
    }
    const std::vector<double> expected{ax - t * w0, ay + t * w0};

    const ProbVector y = project_to_constrained_simplex(target, poly);
    CHECK(y[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(expected[1]).epsilon(1e-12));
    CHECK(lower_distance(poly, target) ==
          doctest::Approx(distance(expected, target)).epsilon(1e-12));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const DsSimplexPolytope poly(DsWeights{0.1, {0.6, 0.3}});
  const std::vector<double> target{0.2, 0.3, 0.5};
  CHECK_THROWS_AS(project_to_constrained_simplex(target, poly),
                  std::invalid_argument);
  CHECK_THROWS_AS(lower_distance(poly, target), std::invalid_argument);
  CHECK_THROWS_AS(upper_distance(poly, target), std::invalid_argument);
  CHECK_THROWS_AS(contains(poly, target), std::invalid_argument);
}

TEST_CASE("probability vector check enforces sign and normalization") {
  CHECK(is_prob_vector(std::vector<double>{0.5, 0.5}));
  CHECK(is_prob_vector(std::vector<double>{1.0, 0.0, 0.0}));
  CHECK_FALSE(is_prob_vector(std::vector<double>{0.6, 0.6}));
  CHECK_FALSE(is_prob_vector(std::vector<double>{-0.1, 1.1}));
}
