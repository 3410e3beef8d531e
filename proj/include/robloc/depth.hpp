#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "robloc/errors.hpp"
#include "robloc/geometry.hpp"

namespace robloc {

// ---------------------------------------------------------------------------
// Univariate median and MAD

/// Set-valued sample median: [x_(n/2), x_(n/2+1)] for even n, a single
/// order statistic for odd n.
struct MedianInterval {
  double low;
  double high;

  double midpoint() const { return low + (high - low) / 2.0; }
};

inline MedianInterval univariate_median(std::span<const double> values) {
  if (values.empty()) throw InputError("median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  if (!std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); }))
    throw InputError("median of a non-finite sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return {v[n / 2], v[n / 2]};
  return {v[n / 2 - 1], v[n / 2]};
}

/// Order-statistic MAD: the ⌈(n + j + 1)/2⌉-th smallest absolute deviation
/// from the median midpoint, index clamped to n. j = 0 is the ordinary
/// (high-median) MAD; j = k − 1 is the shifted MAD_{k−1} variant.
inline double mad(std::span<const double> values, std::size_t order_shift = 0) {
  const std::size_t n = values.size();
  if (n == 0) throw InputError("MAD of an empty sample");
  if (order_shift > n - 1) throw ParameterError("MAD order shift must be at most n - 1");
  const double center = univariate_median(values).midpoint();
  std::vector<double> dev;
  dev.reserve(n);
  for (double v : values) dev.push_back(std::abs(v - center));
  const std::size_t rank = std::min(n, (n + order_shift + 2) / 2);
  std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(rank - 1), dev.end());
  return dev[rank - 1];
}

// ---------------------------------------------------------------------------
// Direction sets

/// How the supremum over directions is approximated: seeded Gaussian
/// directions plus, optionally, the normals of hyperplanes through k data
/// points.
struct DirectionBudget {
  explicit DirectionBudget(std::uint64_t seed_, std::size_t random_count_ = 2000,
                           bool include_data_directions_ = true)
      : random_count(random_count_), include_data_directions(include_data_directions_), seed(seed_) {}

  std::size_t random_count;
  bool include_data_directions;
  std::uint64_t seed;
};

/// Unit directions probed under `budget`, as rows of a matrix. The set is a
/// pure function of (X, budget).
inline Matrix probe_directions(const DataSet& x, const DirectionBudget& budget) {
  const auto k = static_cast<Eigen::Index>(x.dim());
  std::vector<Vector> dirs;
  std::mt19937_64 rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < budget.random_count; ++i) {
    Vector v(k);
    do {
      for (Eigen::Index j = 0; j < k; ++j) v(j) = gauss(rng);
    } while (v.norm() < 1e-8);
    dirs.push_back(v / v.norm());
  }
  if (budget.include_data_directions) {
    if (k == 1) {
      dirs.push_back(Vector::Ones(1));
    } else if (x.size() >= static_cast<std::size_t>(k)) {
      for_each_combination(x.size(), static_cast<std::size_t>(k), [&](const IndexList& idx) {
        const auto pts = x.subset(idx);
        if (auto nrm = hyperplane_normal(pts)) dirs.push_back(*nrm);
        return true;
      });
    }
  }
  if (dirs.empty()) throw ParameterError("direction budget yields no directions");
  Matrix out(static_cast<Eigen::Index>(dirs.size()), k);
  for (std::size_t i = 0; i < dirs.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = dirs[i].transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Projection outlyingness

/// Out(x) = max_u |u'x − med(u'X)| / MAD_j(u'X) over a fixed direction set.
/// Directions with zero scale contribute +∞ unless x projects onto the
/// (degenerate) median there.
class ProjectionOutlyingness {
 public:
  ProjectionOutlyingness(const DataSet& x, std::size_t scale_shift, const DirectionBudget& budget)
      : ProjectionOutlyingness(x, scale_shift, probe_directions(x, budget)) {}

  ProjectionOutlyingness(const DataSet& x, std::size_t scale_shift, const Matrix& directions) {
    if (directions.cols() != static_cast<Eigen::Index>(x.dim()))
      throw ParameterError("direction dimension mismatch");
    if (scale_shift > x.size() - 1) throw ParameterError("scale shift must be at most n - 1");
    const Matrix proj = x.as_rows() * directions.transpose();  // n × D
    std::vector<Eigen::Index> live, dead;
    std::vector<double> centers, scales, dead_centers, dead_tols;
    for (Eigen::Index d = 0; d < directions.rows(); ++d) {
      std::vector<double> y(proj.col(d).data(), proj.col(d).data() + proj.rows());
      const double center = univariate_median(y).midpoint();
      const double scale = mad(y, scale_shift);
      const double ref = 1.0 + proj.col(d).cwiseAbs().maxCoeff();
      if (scale > kZeroScale * ref) {
        live.push_back(d);
        centers.push_back(center);
        scales.push_back(scale);
      } else {
        dead.push_back(d);
        dead_centers.push_back(center);
        dead_tols.push_back(kZeroScale * ref);
      }
    }
    live_dirs_ = gather(directions, live);
    live_centers_ = Eigen::Map<Vector>(centers.data(), static_cast<Eigen::Index>(centers.size()));
    live_inv_scales_ = Eigen::Map<Vector>(scales.data(), static_cast<Eigen::Index>(scales.size())).cwiseInverse();
    dead_dirs_ = gather(directions, dead);
    dead_centers_ = Eigen::Map<Vector>(dead_centers.data(), static_cast<Eigen::Index>(dead_centers.size()));
    dead_tols_ = Eigen::Map<Vector>(dead_tols.data(), static_cast<Eigen::Index>(dead_tols.size()));
  }

  /// Throws EstimatorError if every direction is degenerate with a zero
  /// numerator.
  double operator()(const Vector& p) const {
    if (dead_dirs_.rows() > 0) {
      const Vector num = (dead_dirs_ * p - dead_centers_).cwiseAbs();
      if ((num.array() > dead_tols_.array()).any()) return std::numeric_limits<double>::infinity();
    }
    if (live_dirs_.rows() == 0) throw EstimatorError("outlyingness undefined: every probed direction has zero scale");
    return ((live_dirs_ * p - live_centers_).cwiseAbs().cwiseProduct(live_inv_scales_)).maxCoeff();
  }

  std::size_t direction_count() const { return static_cast<std::size_t>(live_dirs_.rows() + dead_dirs_.rows()); }
  std::size_t degenerate_direction_count() const { return static_cast<std::size_t>(dead_dirs_.rows()); }

 private:
  static constexpr double kZeroScale = 1e-14;

  static Matrix gather(const Matrix& m, const std::vector<Eigen::Index>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
  }

  Matrix live_dirs_;
  Vector live_centers_;
  Vector live_inv_scales_;
  Matrix dead_dirs_;
  Vector dead_centers_;
  Vector dead_tols_;
};

inline double outlyingness(const Vector& p, const DataSet& x, std::size_t scale_shift, const DirectionBudget& budget) {
  if (static_cast<std::size_t>(p.size()) != x.dim()) throw ParameterError("point dimension mismatch");
  return ProjectionOutlyingness(x, scale_shift, budget)(p);
}

// ---------------------------------------------------------------------------
// Tukey halfspace depth

enum class DepthMode { exact2d, sampled };

namespace detail {

// Angular sweep: a closed halfplane with inner normal at angle φ contains
// data point i iff φ lies in [a_i − π/2, a_i + π/2], where a_i is the angle
// of x_i − x. The minimum count is attained on an open arc between
// consecutive event angles.
inline std::size_t tukey_depth_sweep(const Vector& p, const DataSet& x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double half_pi = std::numbers::pi / 2.0;
  double scale = 0.0;
  for (const auto& q : x.points()) scale = std::max(scale, (q - p).norm());
  const double coincide = 1e-12 * std::max(1.0, scale);

  std::size_t always = 0;
  std::vector<double> angles;
  for (const auto& q : x.points()) {
    const Vector d = q - p;
    if (d.norm() <= coincide) {
      ++always;
      continue;
    }
    angles.push_back(std::atan2(d(1), d(0)));
  }
  if (angles.empty()) return always;

  auto wrap = [&](double a) {
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
  };
  struct Event {
    double angle;
    int delta;
  };
  std::vector<Event> events;
  events.reserve(2 * angles.size());
  for (double a : angles) {
    events.push_back({wrap(a - half_pi), +1});
    events.push_back({wrap(a + half_pi), -1});
  }
  std::sort(events.begin(), events.end(), [](const Event& l, const Event& r) { return l.angle < r.angle; });

  // group events sharing an angle
  constexpr double same = 1e-12;
  std::vector<std::pair<double, int>> groups;
  for (const auto& e : events) {
    if (!groups.empty() && e.angle - groups.back().first <= same)
      groups.back().second += e.delta;
    else
      groups.emplace_back(e.angle, e.delta);
  }
  if (groups.size() > 1 && groups.front().first + two_pi - groups.back().first <= same) {
    groups.front().second += groups.back().second;
    groups.pop_back();
  }

  // strict count on the arc just after the last group (wrapping to the first)
  const double start =
      groups.size() == 1 ? groups[0].first + std::numbers::pi
                         : (groups.back().first + groups.front().first + two_pi) / 2.0;
  long count = 0;
  for (double a : angles)
    if (std::cos(start - a) > 0.0) ++count;
  long best = count;
  for (const auto& g : groups) {
    count += g.second;
    best = std::min(best, count);
  }
  return always + static_cast<std::size_t>(best);
}

}  // namespace detail

/// Halfspace depth min_u #{i : u'x_i ≥ u'x}. `exact2d` is exact for k = 2;
/// `sampled` minimizes over the budget's directions (both signs) and is
/// therefore an upper bound on the true depth.
inline std::size_t tukey_depth(const Vector& p, const DataSet& x, DepthMode mode,
                               const DirectionBudget& budget = DirectionBudget(0)) {
  if (static_cast<std::size_t>(p.size()) != x.dim()) throw ParameterError("point dimension mismatch");
  if (mode == DepthMode::exact2d) {
    if (x.dim() != 2) throw ParameterError("exact2d depth requires k = 2");
    return detail::tukey_depth_sweep(p, x);
  }
  const Matrix dirs = probe_directions(x, budget);
  const Matrix proj = x.as_rows() * dirs.transpose();
  const Vector at = dirs * p;
  const double tol = 1e-12 * (1.0 + proj.cwiseAbs().maxCoeff());
  std::size_t best = x.size();
  for (Eigen::Index d = 0; d < dirs.rows(); ++d) {
    std::size_t up = 0, down = 0;
    for (Eigen::Index i = 0; i < proj.rows(); ++i) {
      const double s = proj(i, d) - at(d);
      if (s >= -tol) ++up;
      if (s <= tol) ++down;
    }
    best = std::min({best, up, down});
  }
  return best;
}

}  // namespace robloc
