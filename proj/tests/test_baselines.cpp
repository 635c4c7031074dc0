#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "dmf/baselines.hpp"
#include "dmf/metrics.hpp"
#include "dmf/rng.hpp"
#include "support/synthetic.hpp"

using dmf::DenseMatrix;
using dmf::EuclideanCoord;

namespace {

DenseMatrix random_square(dmf::Rng& rng, int n, double scale = 100.0) {
  DenseMatrix m(n, n);
  for (double& v : m.a) v = scale * rng.next_double();
  return m;
}

double frobenius_error(const DenseMatrix& m, const dmf::FactorPair& f) {
  double sq = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      const double r = m.at(i, j) - f.predict(i, j);
      sq += r * r;
    }
  }
  return std::sqrt(sq);
}

}  // namespace

TEST_CASE("svd_lowrank reproduces an exactly rank-1 matrix") {
  DenseMatrix m(2, 2);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 0) = 2;
  m.at(1, 1) = 4;
  const auto f = dmf::svd_lowrank(m, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(f.predict(i, j) == doctest::Approx(m.at(i, j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("full-rank svd is an identity") {
  dmf::Rng rng(3);
  const auto m = random_square(rng, 8);
  const auto f = dmf::svd_lowrank(m, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(std::abs(f.predict(i, j) - m.at(i, j)) <= 1e-9 * std::max(1.0, m.at(i, j)));
    }
  }
}

TEST_CASE("svd_lowrank satisfies the eckart-young error formula") {
  dmf::Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    const auto m = random_square(rng, 25);
    const auto sv = dmf::singular_values(m);
    double prev_err = std::numeric_limits<double>::infinity();
    for (int r : {1, 5, 10}) {
      const auto f = dmf::svd_lowrank(m, r);
      double tail = 0.0;
      for (std::size_t i = r; i < sv.size(); ++i) tail += sv[i] * sv[i];
      const double expect = std::sqrt(tail);
      const double got = frobenius_error(m, f);
      CHECK(got == doctest::Approx(expect).epsilon(1e-8));
      CHECK(got <= prev_err + 1e-9);
      prev_err = got;
    }
  }
}

TEST_CASE("svd_lowrank validates its rank") {
  dmf::Rng rng(7);
  const auto m = random_square(rng, 4);
  CHECK_THROWS_AS((void)dmf::svd_lowrank(m, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)dmf::svd_lowrank(m, 5), std::invalid_argument);
}

TEST_CASE("vivaldi step worked example") {
  dmf::Rng rng(9);
  const EuclideanCoord xi{{0, 0}, std::nullopt};
  const EuclideanCoord xj{{3, 4}, std::nullopt};
  const auto out = dmf::vivaldi_step(xi, xj, 10.0, 0.1, rng);
  // dhat = 5, residual 5: moves away from xj since the link is longer
  CHECK(out.x[0] == doctest::Approx(-0.3));
  CHECK(out.x[1] == doctest::Approx(-0.4));
}

TEST_CASE("vivaldi step is a no-op at zero residual") {
  dmf::Rng rng(11);
  const EuclideanCoord xi{{1, 2}, std::nullopt};
  const EuclideanCoord xj{{4, 6}, std::nullopt};
  const auto out = dmf::vivaldi_step(xi, xj, 5.0, 0.25, rng);
  CHECK(out.x == xi.x);
}

TEST_CASE("vivaldi handles coincident coordinates with a random direction") {
  dmf::Rng rng(13);
  const EuclideanCoord xi{{1, 1, 1}, std::nullopt};
  const EuclideanCoord xj{{1, 1, 1}, std::nullopt};
  const auto out = dmf::vivaldi_step(xi, xj, 8.0, 0.5, rng);
  double moved = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double d = out.x[c] - xi.x[c];
    moved += d * d;
  }
  // eta * d * unit direction has length 4
  CHECK(std::sqrt(moved) == doctest::Approx(4.0));
}

TEST_CASE("vivaldi converges on planar points") {
  const auto truth = testsupport::planar_distances(10, 17);
  dmf::Rng rng(21);
  std::vector<EuclideanCoord> coords(10);
  for (auto& c : coords) c.x = {rng.next_double(), rng.next_double()};

  for (int round = 0; round < 200; ++round) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        if (i == j) continue;
        coords[i] = dmf::vivaldi_step(coords[i], coords[j], truth.distance(i, j), 0.05,
                                      rng);
      }
    }
  }
  dmf::EvalPairSet pairs;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i != j) pairs.add(truth.distance(i, j), euclidean_predict(coords[i], coords[j]));
    }
  }
  CHECK(dmf::stress(pairs) < 0.02);
}

TEST_CASE("euclidean predictions form a metric") {
  dmf::Rng rng(23);
  std::vector<EuclideanCoord> coords(12);
  for (auto& c : coords) {
    c.x.resize(4);
    for (double& v : c.x) v = 50 * rng.next_double() - 25;
  }
  for (int t = 0; t < 300; ++t) {
    const int a = static_cast<int>(rng.next_index(12));
    const int b = static_cast<int>(rng.next_index(12));
    const int c = static_cast<int>(rng.next_index(12));
    CHECK(dmf::euclidean_predict(coords[a], coords[b]) ==
          dmf::euclidean_predict(coords[b], coords[a]));
    CHECK(dmf::euclidean_predict(coords[a], coords[b]) <=
          dmf::euclidean_predict(coords[a], coords[c]) +
              dmf::euclidean_predict(coords[c], coords[b]) + 1e-12);
  }
}

TEST_CASE("heights add to predictions and stay nonnegative under updates") {
  dmf::Rng rng(29);
  EuclideanCoord a{{0, 0}, 2.0};
  EuclideanCoord b{{3, 4}, 1.0};
  CHECK(dmf::euclidean_predict(a, b) == 8.0);

  // strong negative residual drives the height toward its floor at 0
  for (int t = 0; t < 50; ++t) a = dmf::vivaldi_step(a, b, 0.0, 0.5, rng);
  REQUIRE(a.height.has_value());
  CHECK(*a.height >= 0.0);

  const EuclideanCoord no_height{{0, 0}, std::nullopt};
  CHECK_THROWS_AS((void)dmf::euclidean_predict(a, no_height), std::invalid_argument);
}

TEST_CASE("vivaldi keeps finite coordinates for bounded inputs") {
  dmf::Rng rng(31);
  EuclideanCoord c{{0.5, 0.5}, std::nullopt};
  const EuclideanCoord peer{{0.9, 0.1}, std::nullopt};
  for (int t = 0; t < 1000; ++t) {
    c = dmf::vivaldi_step(c, peer, 500 * rng.next_double(), 1.0, rng);
    for (double v : c.x) CHECK(std::isfinite(v));
  }
}
