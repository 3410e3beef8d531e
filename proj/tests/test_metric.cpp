#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "robloc/metric.hpp"

using namespace robloc;

namespace {

double factorial_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<double> draw(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<double> v(n);
  for (auto& e : v) e = u(rng);
  return v;
}

EstimateSet set1(std::initializer_list<double> vals) {
  std::vector<Vector> m;
  for (double v : vals) m.push_back(Vector::Constant(1, v));
  return EstimateSet(std::move(m));
}

MedianInterval median_of(std::span<const double> v) { return univariate_median(v); }

}  // namespace

TEST(SampleDistance, Examples) {
  std::vector<double> a{3, 1, 2}, b{1, 2, 3};
  EXPECT_EQ(sample_distance(a, b), 0.0);
  EXPECT_EQ(sample_distance(std::vector<double>{0, 10}, std::vector<double>{9, 1}), 1.0);
  EXPECT_THROW(sample_distance(std::vector<double>{1}, std::vector<double>{1, 2}), ParameterError);
}

TEST(SampleDistance, EqualsFactorialOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 7;
    auto x = draw(n, rng), y = draw(n, rng);
    EXPECT_EQ(sample_distance(x, y), factorial_oracle(x, y));
  }
}

TEST(SampleDistance, MetricAxioms) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    auto x = draw(n, rng), y = draw(n, rng), z = draw(n, rng);
    const double dxy = factorial_oracle(x, y), dyz = factorial_oracle(y, z), dxz = factorial_oracle(x, z);
    EXPECT_EQ(sample_distance(x, y), sample_distance(y, x));
    EXPECT_LE(sample_distance(x, z), sample_distance(x, y) + sample_distance(y, z) + 1e-12);
    EXPECT_LE(dxz, dxy + dyz + 1e-12);
    auto px = x;
    std::shuffle(px.begin(), px.end(), rng);
    EXPECT_EQ(sample_distance(x, px), 0.0);
    EXPECT_EQ(sample_distance(x, y) == 0.0, std::is_permutation(x.begin(), x.end(), y.begin()));
  }
}

TEST(EstimateSetDistance, Examples) {
  EXPECT_EQ(estimate_set_distance(set1({2}), set1({2})), 0.0);
  EXPECT_EQ(estimate_set_distance(set1({0}), set1({3})), 3.0);
  EXPECT_EQ(estimate_set_distance(set1({0, 1}), set1({0, 1})), 1.0);
  EXPECT_EQ(hausdorff_distance(set1({0, 1}), set1({1, 0})), 0.0);
}

TEST(EstimateSetTest, DeduplicatesAndKeepsCanonical) {
  EstimateSet s({Vector::Constant(1, 1.0), Vector::Constant(1, 1.0 + 1e-14), Vector::Constant(1, 2.0)});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.canonical()(0), 1.0);
  EXPECT_THROW(EstimateSet(std::vector<Vector>{}), EstimatorError);
}

TEST(Lipschitz, Examples) {
  std::vector<double> x{1, 2, 3};
  EXPECT_EQ(lipschitz_probe(median_of, x, 0.0, 10, 1), 0.0);
  std::vector<double> shifted{1.25, 2.25, 3.25};
  EXPECT_EQ(univariate_median(shifted).low - univariate_median(x).low, 0.25);
}

TEST(Lipschitz, MedianShiftBoundedByDelta) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    auto x = draw(9 + t % 2, rng);
    const double delta = std::pow(10.0, -(t % 4));
    EXPECT_LE(lipschitz_probe(median_of, x, delta, 1000, 100 + t), delta + 1e-12);
  }
}

TEST(Monotonicity, OrderedPairs) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> up(0, 3);
  for (int t = 0; t < 1000; ++t) {
    auto x = draw(1 + t % 10, rng), y = x;
    for (auto& e : y) e += t % 5 == 0 ? 0.0 : up(rng);
    const auto mx = univariate_median(x), my = univariate_median(y);
    EXPECT_LE(mx.low, my.low);
    EXPECT_LE(mx.high, my.high);
  }
}
