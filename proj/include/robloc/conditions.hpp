#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "robloc/depth.hpp"
#include "robloc/errors.hpp"
#include "robloc/estimators.hpp"
#include "robloc/geometry.hpp"
#include "robloc/metric.hpp"

namespace robloc {

// ---------------------------------------------------------------------------
// Boundary condition (C_h)

struct ConditionProbe {
  Vector direction;          // unit u with h points tied at the minimum of u'x_i
  std::vector<double> sorted_projections;
  double margin;             // min over estimate members of u'T − y_h
};

/// Verdicts are empirical: a positive minimum margin means no violation was
/// found among the probes, not that the condition is proven.
struct ConditionReport {
  std::size_t h = 0;
  std::vector<ConditionProbe> probes;
  double min_margin = std::numeric_limits<double>::infinity();
  double epsilon = 0.0;  // 1e-9 × data diameter
  bool holds_empirically = false;
};

struct ConditionOptions {
  std::uint64_t seed = 0;
  std::size_t probes_per_face = 32;
  /// When false, probes come from hyperplanes through k data points that leave
  /// every point on one side with exactly h points tied at the minimum; this
  /// admits h > k on data that is not in general position.
  bool require_general_position = true;
};

namespace detail {

inline ConditionProbe make_probe(const Vector& u, const DataSet& x, const EstimateSet& est, std::size_t h) {
  ConditionProbe p{u, x.project(u), std::numeric_limits<double>::infinity()};
  std::sort(p.sorted_projections.begin(), p.sorted_projections.end());
  const double yh = p.sorted_projections[h - 1];
  for (const auto& m : est.members()) p.margin = std::min(p.margin, u.dot(m) - yh);
  return p;
}

// exactly `h` projections within tol of the minimum, the rest strictly above
inline bool has_tie_pattern(const std::vector<double>& proj, std::size_t h, double tol) {
  const double lo = *std::min_element(proj.begin(), proj.end());
  const auto tied = static_cast<std::size_t>(std::count_if(proj.begin(), proj.end(), [&](double y) { return y - lo <= tol; }));
  return tied == h;
}

}  // namespace detail

inline ConditionReport condition_margin(const LocationEstimator& t, const DataSet& x, std::size_t h,
                                        const ConditionOptions& opt = {}) {
  const std::size_t k = x.dim();
  require_more_points_than_dim(x, "condition_margin");
  if (h < 1) throw ParameterError("condition_margin: need h >= 1");
  ConditionReport report;
  report.h = h;
  report.epsilon = kGeometryRelTol * x.diameter();
  const EstimateSet est = t(x);
  const double tol = report.epsilon;

  if (!opt.require_general_position) {
    if (k < 2) throw ParameterError("condition_margin: need k >= 2");
    for_each_combination(x.size(), k, [&](const IndexList& idx) {
      const auto normal = hyperplane_normal(x.subset(idx));
      if (!normal) return true;
      for (const double sign : {1.0, -1.0}) {
        const Vector u = sign * *normal;
        const auto proj = x.project(u);
        const double lo = *std::min_element(proj.begin(), proj.end());
        if (std::abs(lo - u.dot(x[idx[0]])) > tol) continue;
        if (detail::has_tie_pattern(proj, h, tol)) report.probes.push_back(detail::make_probe(u, x, est, h));
      }
      return true;
    });
  } else {
    if (h > k) throw ParameterError("condition_margin: need h <= k for data in general position");
    if (!check_general_position(x).in_general_position) throw GeometryError("condition_margin: data not in general position");
    const auto facets = enumerate_facets(x);
    if (h == k) {
      for (const auto& f : facets) report.probes.push_back(detail::make_probe(f.inward_normal.vec(), x, est, h));
    } else {
      // faces spanned by h points, each with the inward normals of its facets
      std::map<IndexList, std::vector<Vector>> faces;
      for (const auto& f : facets)
        for_each_combination(k, h, [&](const IndexList& sub) {
          IndexList face;
          for (auto s : sub) face.push_back(f.indices[s]);
          faces[face].push_back(f.inward_normal.vec());
          return true;
        });
      std::mt19937_64 rng(opt.seed);
      std::uniform_real_distribution<double> weight(0.05, 1.0);
      for (const auto& [face, normals] : faces) {
        for (std::size_t s = 0; s < opt.probes_per_face; ++s) {
          Vector u = Vector::Zero(static_cast<Eigen::Index>(k));
          for (const auto& nrm : normals) u += weight(rng) * nrm;
          if (u.norm() == 0.0) continue;
          u /= u.norm();
          const auto proj = x.project(u);
          const double lo = *std::min_element(proj.begin(), proj.end());
          const bool face_at_min =
              std::all_of(face.begin(), face.end(), [&](std::size_t i) { return proj[i] - lo <= tol; });
          if (face_at_min && detail::has_tie_pattern(proj, h, tol)) report.probes.push_back(detail::make_probe(u, x, est, h));
        }
      }
    }
  }
  if (report.probes.empty()) throw GeometryError("condition_margin: no admissible direction found");
  for (const auto& p : report.probes) report.min_margin = std::min(report.min_margin, p.margin);
  report.holds_empirically = report.min_margin > report.epsilon;
  return report;
}

// ---------------------------------------------------------------------------
// Depth condition depth(T, X) ≥ k + 1

struct DepthConditionReport {
  std::vector<std::size_t> member_depths;
  std::size_t depth = 0;  // minimum over members
  bool exact = false;     // false: sampled upper bound
  bool satisfied = false;
  bool implication_checked = false;  // C_k evaluated because the exact condition held
  bool implication_holds = true;     // C_k held whenever checked
};

inline DepthConditionReport depth_condition(const LocationEstimator& t, const DataSet& x,
                                            const DirectionBudget& budget = DirectionBudget(0),
                                            const ConditionOptions& copt = {}) {
  DepthConditionReport r;
  r.exact = x.dim() == 2;
  const EstimateSet est = t(x);
  const auto mode = r.exact ? DepthMode::exact2d : DepthMode::sampled;
  for (const auto& m : est.members()) r.member_depths.push_back(tukey_depth(m, x, mode, budget));
  r.depth = *std::min_element(r.member_depths.begin(), r.member_depths.end());
  r.satisfied = r.depth >= x.dim() + 1;
  if (r.exact && r.satisfied) {
    r.implication_checked = true;
    r.implication_holds = condition_margin(t, x, x.dim(), copt).holds_empirically;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Equivariance

struct EquivarianceReport {
  Equivariance tested = Equivariance::translation;
  std::size_t trials = 0;
  double max_discrepancy = 0.0;  // Hausdorff distance / max(1e-300, diam(g(X)))
  double tolerance = 0.0;
  bool passed = false;
};

/// Compares T(g(X)) with g(T(X)) for each given map.
inline EquivarianceReport check_equivariance_under(const LocationEstimator& t, const DataSet& x,
                                                   std::span<const AffineMap> maps, Equivariance tested,
                                                   double tolerance = 1e-8) {
  EquivarianceReport r;
  r.tested = tested;
  r.tolerance = tolerance;
  const EstimateSet base = t(x);
  for (const auto& g : maps) {
    const DataSet gx = apply_map(g, x);
    std::vector<Vector> moved;
    for (const auto& m : base.members()) moved.push_back(g(m));
    const EstimateSet expected(std::move(moved));
    const double scale = std::max(gx.diameter(), 1e-300);
    r.max_discrepancy = std::max(r.max_discrepancy, hausdorff_distance(t(gx), expected) / scale);
    ++r.trials;
  }
  r.passed = r.max_discrepancy <= tolerance;
  return r;
}

/// Random nonsingular linear part with singular values in [1, 10^3].
inline Matrix random_well_conditioned(std::size_t k, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(k);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> log_sv(0.0, 3.0);
  auto orthogonal = [&] {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
    return Matrix(Eigen::HouseholderQR<Matrix>(g).householderQ());
  };
  const Matrix q1 = orthogonal();
  const Matrix q2 = orthogonal();
  Vector sv(n);
  for (Eigen::Index i = 0; i < n; ++i) sv(i) = std::pow(10.0, log_sv(rng));
  return q1 * sv.asDiagonal() * q2;
}

/// Seeded random maps: translations b ~ N(0, diam²) and, for the affine
/// class, a linear part with condition number at most 10^3.
inline EquivarianceReport check_equivariance(const LocationEstimator& t, const DataSet& x, Equivariance tested,
                                             std::size_t trials, std::uint64_t seed, double tolerance = 1e-8) {
  std::mt19937_64 rng(seed);
  const auto k = static_cast<Eigen::Index>(x.dim());
  std::normal_distribution<double> gauss(0.0, std::max(1.0, x.diameter()));
  std::vector<AffineMap> maps;
  for (std::size_t i = 0; i < trials; ++i) {
    Vector b(k);
    for (Eigen::Index j = 0; j < k; ++j) b(j) = gauss(rng);
    Matrix a = tested == Equivariance::affine ? random_well_conditioned(x.dim(), rng) : Matrix::Identity(k, k);
    maps.emplace_back(std::move(a), std::move(b));
  }
  return check_equivariance_under(t, x, maps, tested, tolerance);
}

}  // namespace robloc
