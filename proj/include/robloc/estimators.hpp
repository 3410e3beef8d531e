#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robloc/depth.hpp"
#include "robloc/errors.hpp"
#include "robloc/estimate_set.hpp"
#include "robloc/geometry.hpp"

namespace robloc {

enum class Equivariance { translation, affine };

inline const char* to_string(Equivariance e) { return e == Equivariance::affine ? "affine" : "translation"; }

/// A named, deterministic functional DataSet → EstimateSet.
class LocationEstimator {
 public:
  using Function = std::function<EstimateSet(const DataSet&)>;

  LocationEstimator(std::string name, Equivariance equivariance, Function fn)
      : name_(std::move(name)), equivariance_(equivariance), fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  Equivariance equivariance() const { return equivariance_; }
  EstimateSet operator()(const DataSet& x) const { return fn_(x); }

 private:
  std::string name_;
  Equivariance equivariance_;
  Function fn_;
};

// ---------------------------------------------------------------------------
// Coordinatewise median

/// Per-coordinate median intervals. Members are the distinct corners of the
/// interval box; the canonical estimate is the box midpoint.
inline EstimateSet coordinatewise_median(const DataSet& x) {
  const std::size_t k = x.dim();
  std::vector<MedianInterval> iv;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> col;
    col.reserve(x.size());
    for (const auto& p : x.points()) col.push_back(p(static_cast<Eigen::Index>(j)));
    iv.push_back(univariate_median(col));
  }
  std::vector<Vector> corners;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Vector c(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) c(static_cast<Eigen::Index>(j)) = (mask >> j) & 1 ? iv[j].high : iv[j].low;
    corners.push_back(std::move(c));
  }
  Vector mid(static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) mid(static_cast<Eigen::Index>(j)) = iv[j].midpoint();
  return EstimateSet(std::move(corners), std::move(mid));
}

// ---------------------------------------------------------------------------
// Weighted and trimmed means

/// (Σ w_i x_i) / (Σ w_i) with 0 ≤ w_i ≤ 1.
inline Vector weighted_mean(const DataSet& x, std::span<const double> weights) {
  if (weights.size() != x.size()) throw ParameterError("weighted_mean: one weight per point required");
  double total = 0.0;
  Vector acc = Vector::Zero(static_cast<Eigen::Index>(x.dim()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0 && w <= 1.0)) throw ParameterError("weighted_mean: weights must lie in [0, 1]");
    acc += w * x[i];
    total += w;
  }
  if (!(total > 0.0)) throw ParameterError("weighted_mean: weights sum to zero");
  return acc / total;
}

struct TrimmedMeanOptions {
  std::size_t trim_count;
  std::size_t scale_shift = 0;
  DirectionBudget budget{0};
};

/// Mean of the n − t points of smallest projection outlyingness (ties by index).
inline Vector trimmed_mean(const DataSet& x, const TrimmedMeanOptions& opt) {
  const std::size_t n = x.size();
  if (opt.trim_count > n || n - opt.trim_count < x.dim() + 1)
    throw ParameterError("trimmed_mean: need n - t >= k + 1");
  std::vector<double> w(n, 1.0);
  if (opt.trim_count > 0) {
    const ProjectionOutlyingness out(x, opt.scale_shift, opt.budget);
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) score[i] = out(x[i]);
    IndexList order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return score[a] < score[b]; });
    for (std::size_t r = n - opt.trim_count; r < n; ++r) w[order[r]] = 0.0;
  }
  return weighted_mean(x, w);
}

// ---------------------------------------------------------------------------
// Exhaustive minimum covariance determinant

struct McdResult {
  EstimateSet estimate;
  double objective;                    // minimal covariance determinant
  std::vector<IndexList> optimal_subsets;  // in lexicographic order
};

inline std::size_t default_mcd_coverage(std::size_t n, std::size_t k) { return (n + k + 1) / 2; }

inline constexpr std::uint64_t kMcdSubsetBudget = 10'000'000;

/// Determinant of the sample covariance of `pts`, from a column-pivoted QR
/// of the centered data (det = Π R_ii² / (h − 1)^k). Returns 0 when the
/// centered data is rank deficient at working precision.
inline double covariance_determinant(std::span<const Vector> pts) {
  const auto h = static_cast<Eigen::Index>(pts.size());
  const auto k = pts.front().size();
  Vector mean = Vector::Zero(k);
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(h);
  Matrix centered(h, k);
  for (Eigen::Index i = 0; i < h; ++i) centered.row(i) = (pts[static_cast<std::size_t>(i)] - mean).transpose();
  const Eigen::ColPivHouseholderQR<Matrix> qr(centered);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  const double largest = diag.size() ? diag(0) : 0.0;
  const double rank_tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(h, k)) * largest;
  double det = 1.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(diag(j) > rank_tol)) return 0.0;
    const double r = diag(j) / std::sqrt(static_cast<double>(h - 1));
    det *= r * r;
  }
  return det;
}

/// Exhaustive MCD over all h-subsets. Returns the means of every subset whose
/// determinant is within relative tolerance 1e-9 of the minimum.
inline McdResult mcd_exhaustive(const DataSet& x, std::optional<std::size_t> coverage = std::nullopt) {
  const std::size_t n = x.size(), k = x.dim();
  const std::size_t h = coverage.value_or(default_mcd_coverage(n, k));
  if (h < k + 1 || h > n) throw ParameterError("mcd: coverage must satisfy k + 1 <= h <= n");
  if (binomial(n, h) > kMcdSubsetBudget) throw ParameterError("mcd: combinatorial budget exceeded");

  constexpr double tie = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, IndexList>> near;
  std::vector<Vector> pts(h);
  for_each_combination(n, h, [&](const IndexList& idx) {
    for (std::size_t i = 0; i < h; ++i) pts[i] = x[idx[i]];
    const double det = covariance_determinant(pts);
    if (det > 0.0 && det <= best * (1.0 + tie)) {
      if (det < best) {
        best = det;
        std::erase_if(near, [&](const auto& e) { return e.first > best * (1.0 + tie); });
      }
      near.emplace_back(det, idx);
    }
    return true;
  });
  if (near.empty()) throw EstimatorError("mcd: every h-subset has a singular covariance");

  McdResult out{EstimateSet(std::vector<Vector>{x[0]}), best, {}};
  std::vector<Vector> means;
  for (auto& [det, idx] : near) {
    if (det > best * (1.0 + tie)) continue;
    Vector m = Vector::Zero(static_cast<Eigen::Index>(k));
    for (auto i : idx) m += x[i];
    means.push_back(m / static_cast<double>(h));
    out.optimal_subsets.push_back(std::move(idx));
  }
  out.estimate = EstimateSet(std::move(means));
  return out;
}

// ---------------------------------------------------------------------------
// Projection median (projection-depth argmax surrogate)

struct ProjectionMedianOptions {
  std::size_t scale_shift = 0;
  DirectionBudget budget{0};
  std::size_t grid_refinements = 30;
  std::size_t grid_half_steps = 4;  // grid has 2·steps + 1 nodes per axis
};

struct ProjectionMedianResult {
  EstimateSet estimate;
  double depth;       // 1 / (1 + Out) at the canonical member
  double resolution;  // node spacing of the finest grid
};

/// Maximizes projection depth 1/(1 + Out(x)) over the data points, the
/// coordinatewise median, and a grid around the incumbent whose box (side =
/// data diameter) is halved after each pass.
inline ProjectionMedianResult projection_median_detailed(const DataSet& x, const ProjectionMedianOptions& opt) {
  const ProjectionOutlyingness out(x, opt.scale_shift, opt.budget);
  const auto k = static_cast<Eigen::Index>(x.dim());
  const std::size_t steps = std::max<std::size_t>(1, opt.grid_half_steps);

  std::vector<std::pair<Vector, double>> seen;
  Vector incumbent;
  double best = -1.0;
  auto consider = [&](const Vector& p) {
    const double d = 1.0 / (1.0 + out(p));
    seen.emplace_back(p, d);
    if (d > best) {
      best = d;
      incumbent = p;
    }
  };
  for (const auto& p : x.points()) consider(p);
  consider(coordinatewise_median(x).canonical());

  double side = x.diameter();
  if (side == 0.0) side = 1.0;
  double spacing = side;
  const auto per_axis = 2 * steps + 1;
  std::size_t nodes = 1;
  for (Eigen::Index j = 0; j < k; ++j) nodes *= per_axis;
  for (std::size_t r = 0; r < opt.grid_refinements; ++r) {
    spacing = side / (2.0 * static_cast<double>(steps));
    const Vector center = incumbent;
    for (std::size_t node = 0; node < nodes; ++node) {
      Vector p = center;
      std::size_t rest = node;
      bool is_center = true;
      for (Eigen::Index j = 0; j < k; ++j) {
        const auto offset = static_cast<long>(rest % per_axis) - static_cast<long>(steps);
        rest /= per_axis;
        if (offset != 0) is_center = false;
        p(j) += static_cast<double>(offset) * spacing;
      }
      if (!is_center) consider(p);
    }
    side /= 2.0;
  }

  if (!(best > 0.0)) throw EstimatorError("projection median: every candidate has infinite outlyingness");
  std::vector<Vector> members{incumbent};
  for (const auto& [p, d] : seen)
    if (d >= best * (1.0 - 1e-9)) members.push_back(p);
  return {EstimateSet(std::move(members), incumbent), best, spacing};
}

inline EstimateSet projection_median(const DataSet& x, const ProjectionMedianOptions& opt) {
  return projection_median_detailed(x, opt).estimate;
}

// ---------------------------------------------------------------------------
// Registry

/// Parameters accepted by the named estimators. Unset values take the
/// documented defaults for the dataset at hand.
struct EstimatorParams {
  std::optional<std::size_t> coverage;    // mcd
  std::optional<std::size_t> trim_count;  // tmean
  std::vector<double> weights;            // wmean (empty: all ones)
  std::size_t scale_shift = 0;            // tmean, pm
  std::uint64_t seed = 0;                 // tmean, pm
  std::size_t random_directions = 2000;   // tmean, pm
  std::size_t grid_refinements = 30;      // pm
};

inline const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names{"cmedian", "mcd", "tmean", "pm", "wmean"};
  return names;
}

inline bool estimator_uses_seed(const std::string& name) { return name == "tmean" || name == "pm"; }

inline LocationEstimator make_estimator(const std::string& name, const EstimatorParams& params = {}) {
  if (name == "cmedian")
    return {name, Equivariance::translation, [](const DataSet& x) { return coordinatewise_median(x); }};
  if (name == "mcd")
    return {name, Equivariance::affine, [params](const DataSet& x) { return mcd_exhaustive(x, params.coverage).estimate; }};
  if (name == "wmean")
    return {name, Equivariance::affine, [params](const DataSet& x) {
              std::vector<double> w = params.weights;
              if (w.empty()) w.assign(x.size(), 1.0);
              return EstimateSet(std::vector<Vector>{weighted_mean(x, w)});
            }};
  if (name == "tmean")
    return {name, Equivariance::translation, [params](const DataSet& x) {
              TrimmedMeanOptions opt{params.trim_count.value_or(x.size() - default_mcd_coverage(x.size(), x.dim())),
                                     params.scale_shift, DirectionBudget(params.seed, params.random_directions)};
              return EstimateSet(std::vector<Vector>{trimmed_mean(x, opt)});
            }};
  if (name == "pm")
    return {name, Equivariance::translation, [params](const DataSet& x) {
              ProjectionMedianOptions opt;
              opt.scale_shift = params.scale_shift;
              opt.budget = DirectionBudget(params.seed, params.random_directions);
              opt.grid_refinements = params.grid_refinements;
              return projection_median(x, opt);
            }};
  throw EstimatorError("unknown estimator '" + name + "'");
}

}  // namespace robloc
