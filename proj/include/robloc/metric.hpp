#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "robloc/depth.hpp"
#include "robloc/errors.hpp"
#include "robloc/estimate_set.hpp"

namespace robloc {

/// min over permutations π of max_i |x_i − y_π(i)|, computed as the
/// sorted-order matching max_i |x_(i) − y_(i)|.
inline double sample_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("sample_distance: length mismatch");
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Supremum of Euclidean distance over all member pairs. A non-singleton set
/// has positive distance to itself.
inline double estimate_set_distance(const EstimateSet& s1, const EstimateSet& s2) {
  if (s1.dim() != s2.dim()) throw ParameterError("estimate set dimension mismatch");
  double d = 0.0;
  for (const auto& a : s1.members())
    for (const auto& b : s2.members()) d = std::max(d, (a - b).norm());
  return d;
}

/// Hausdorff distance between member sets; zero iff the sets coincide.
inline double hausdorff_distance(const EstimateSet& s1, const EstimateSet& s2) {
  if (s1.dim() != s2.dim()) throw ParameterError("estimate set dimension mismatch");
  auto directed = [](const EstimateSet& a, const EstimateSet& b) {
    double worst = 0.0;
    for (const auto& p : a.members()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : b.members()) nearest = std::min(nearest, (p - q).norm());
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(s1, s2), directed(s2, s1));
}

using UnivariateEstimator = std::function<MedianInterval(std::span<const double>)>;

/// Largest endpoint shift of `estimator` over `trials` seeded perturbations
/// that move every value by at most `delta` (uniform in [−δ, δ]).
inline double lipschitz_probe(const UnivariateEstimator& estimator, std::span<const double> x, double delta,
                              std::size_t trials, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw ParameterError("lipschitz_probe: delta must be nonnegative");
  const MedianInterval base = estimator(x);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-delta, delta);
  std::vector<double> y(x.size());
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = delta == 0.0 ? x[i] : x[i] + shift(rng);
    const MedianInterval m = estimator(y);
    worst = std::max({worst, std::abs(m.low - base.low), std::abs(m.high - base.high)});
  }
  return worst;
}

}  // namespace robloc
