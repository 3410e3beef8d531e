#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "robloc/errors.hpp"

namespace robloc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexList = std::vector<std::size_t>;

/// Relative tolerance used for general-position and facet side tests.
inline constexpr double kGeometryRelTol = 1e-9;

/// Calls `visit` with every r-subset of {0, ..., n-1} in lexicographic order.
/// Enumeration stops early when `visit` returns false.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t r, Visit&& visit) {
  if (r > n) return;
  IndexList idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    if (!visit(static_cast<const IndexList&>(idx))) return;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Binomial coefficient, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t num = n - r + i;
    if (out > UINT64_MAX / num) return UINT64_MAX;
    out = out * num / i;
  }
  return out;
}

/// Largest pairwise Euclidean distance; zero for fewer than two points.
inline double diameter_of(std::span<const Vector> pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

/// An ordered collection of n points in R^k.
///
/// Construction checks that every point has the same dimension and only
/// finite coordinates. The stricter n > k requirement of the breakdown
/// machinery is checked by the operations that need it.
class DataSet {
 public:
  explicit DataSet(std::vector<Vector> points) : points_(std::move(points)) {
    if (points_.empty()) throw InputError("dataset has no points");
    dim_ = static_cast<std::size_t>(points_.front().size());
    if (dim_ == 0) throw InputError("points must have at least one coordinate");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (static_cast<std::size_t>(points_[i].size()) != dim_)
        throw InputError("dimension mismatch at point " + std::to_string(i));
      if (!points_[i].allFinite())
        throw InputError("non-finite coordinate at point " + std::to_string(i));
    }
  }

  /// Rows of `rows` become the points.
  static DataSet from_rows(const Matrix& rows) {
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) pts.emplace_back(rows.row(i).transpose());
    return DataSet(std::move(pts));
  }

  /// Univariate convenience constructor.
  static DataSet from_values(std::span<const double> values) {
    std::vector<Vector> pts;
    pts.reserve(values.size());
    for (double v : values) pts.push_back(Vector::Constant(1, v));
    return DataSet(std::move(pts));
  }

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vector>& points() const { return points_; }

  Matrix as_rows() const {
    Matrix m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points_[i].transpose();
    return m;
  }

  double diameter() const { return diameter_of(points_); }

  Vector centroid() const {
    Vector c = Vector::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto& p : points_) c += p;
    return c / static_cast<double>(size());
  }

  /// Inner products u'x_i in point order.
  std::vector<double> project(const Vector& u) const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& p : points_) out.push_back(u.dot(p));
    return out;
  }

  std::vector<Vector> subset(const IndexList& idx) const {
    std::vector<Vector> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(points_.at(i));
    return out;
  }

  /// Copy with points at `idx` replaced by `replacements` (same order).
  DataSet with_replaced(const IndexList& idx, const std::vector<Vector>& replacements) const {
    if (idx.size() != replacements.size()) throw ParameterError("replacement count mismatch");
    auto pts = points_;
    for (std::size_t j = 0; j < idx.size(); ++j) pts.at(idx[j]) = replacements[j];
    return DataSet(std::move(pts));
  }

 private:
  std::vector<Vector> points_;
  std::size_t dim_ = 0;
};

/// Throws ParameterError unless n > k.
inline void require_more_points_than_dim(const DataSet& x, const char* what) {
  if (x.size() <= x.dim())
    throw ParameterError(std::string(what) + ": need n > k (n=" + std::to_string(x.size()) +
                         ", k=" + std::to_string(x.dim()) + ")");
}

/// A vector of unit Euclidean norm.
class UnitDirection {
 public:
  explicit UnitDirection(Vector u) : u_(std::move(u)) {
    if (u_.size() == 0 || !u_.allFinite() || std::abs(u_.norm() - 1.0) > 1e-12)
      throw ParameterError("direction is not unit-norm");
  }

  static UnitDirection normalized(const Vector& v) {
    const double len = v.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw ParameterError("cannot normalize a zero vector");
    Vector u = v / len;
    // one refinement step keeps |‖u‖ − 1| at rounding level
    u /= u.norm();
    return UnitDirection(std::move(u));
  }

  const Vector& vec() const { return u_; }
  std::size_t dim() const { return static_cast<std::size_t>(u_.size()); }
  double dot(const Vector& x) const { return u_.dot(x); }
  UnitDirection operator-() const { return UnitDirection(-u_); }

 private:
  Vector u_;
};

// ---------------------------------------------------------------------------
// General position

struct GeneralPositionReport {
  bool in_general_position = true;
  IndexList witness;  // a (k+1)-subset lying on one hyperplane, when violated
};

/// |det| of the k×k difference matrix of a (k+1)-subset versus the
/// degeneracy threshold kGeometryRelTol · diam(subset)^k.
inline bool affinely_dependent(std::span<const Vector> pts) {
  const auto k = static_cast<Eigen::Index>(pts.front().size());
  Matrix diff(k, k);
  for (Eigen::Index r = 0; r < k; ++r) diff.row(r) = (pts[static_cast<std::size_t>(r) + 1] - pts[0]).transpose();
  const double diam = diameter_of(pts);
  if (diam == 0.0) return true;
  const double det = diff.fullPivLu().determinant();
  return std::abs(det) <= kGeometryRelTol * std::pow(diam, static_cast<double>(k));
}

/// True iff every (k+1)-subset of points is affinely independent.
inline GeneralPositionReport check_general_position(const DataSet& x) {
  GeneralPositionReport report;
  const std::size_t k = x.dim();
  if (x.size() < k + 1) return report;
  for_each_combination(x.size(), k + 1, [&](const IndexList& idx) {
    const auto pts = x.subset(idx);
    if (affinely_dependent(pts)) {
      report.in_general_position = false;
      report.witness = idx;
      return false;
    }
    return true;
  });
  return report;
}

/// Unit normal of the hyperplane spanned by k points in R^k (sign unspecified),
/// or nullopt when they do not span a hyperplane.
inline std::optional<Vector> hyperplane_normal(std::span<const Vector> pts) {
  const auto k = static_cast<Eigen::Index>(pts.front().size());
  if (static_cast<Eigen::Index>(pts.size()) != k) throw ParameterError("hyperplane needs exactly k points");
  if (k == 1) return Vector::Ones(1);
  Matrix diff(k - 1, k);
  for (Eigen::Index r = 0; r < k - 1; ++r) diff.row(r) = (pts[static_cast<std::size_t>(r) + 1] - pts[0]).transpose();
  Eigen::JacobiSVD<Matrix> svd(diff, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(k - 2) <= 1e-12 * sv(0)) return std::nullopt;
  Vector n = svd.matrixV().col(k - 1);
  return Vector(n / n.norm());
}

// ---------------------------------------------------------------------------
// Convex hull facets

/// A (k−1)-face of conv(X) spanned by exactly k data points.
struct Facet {
  IndexList indices;
  UnitDirection inward_normal;
  double support_value;  // common projection of the facet points
};

/// Brute-force facet enumeration over all k-subsets. Requires n > k ≥ 2 and
/// data in general position; throws GeometryError when a non-facet point
/// lies on a candidate hyperplane.
inline std::vector<Facet> enumerate_facets(const DataSet& x) {
  const std::size_t k = x.dim();
  if (k < 2) throw ParameterError("enumerate_facets: need k >= 2");
  require_more_points_than_dim(x, "enumerate_facets");
  const double tol = kGeometryRelTol * x.diameter();
  std::vector<Facet> facets;
  for_each_combination(x.size(), k, [&](const IndexList& idx) {
    const auto pts = x.subset(idx);
    auto normal = hyperplane_normal(pts);
    if (!normal) throw GeometryError("general position violated: degenerate k-subset");
    Vector u = *normal;
    double support = 0.0;
    for (const auto& p : pts) support += u.dot(p);
    support /= static_cast<double>(k);
    std::size_t above = 0, below = 0;
    for (std::size_t i = 0, j = 0; i < x.size(); ++i) {
      if (j < k && idx[j] == i) {
        ++j;
        continue;
      }
      const double s = u.dot(x[i]) - support;
      if (std::abs(s) <= tol) {
        IndexList witness = idx;
        witness.push_back(i);
        std::sort(witness.begin(), witness.end());
        // close to the hyperplane but independent by the determinant test: trust the sign
        if (!affinely_dependent(x.subset(witness))) {
          (s > 0 ? above : below) += 1;
          continue;
        }
        std::string msg = "general position violated: points";
        for (auto w : witness) msg += " " + std::to_string(w);
        throw GeometryError(msg + " share a hyperplane");
      }
      (s > 0 ? above : below) += 1;
    }
    if (above == 0 || below == 0) {
      if (above == 0) {
        u = -u;
        support = -support;
      }
      facets.push_back(Facet{idx, UnitDirection::normalized(u), support});
    }
    return true;
  });
  return facets;
}

// ---------------------------------------------------------------------------
// Orthonormal frames and affine maps

/// Orthonormal basis e_1..e_k (columns of `axes`) with an origin shift that
/// places a reference hyperplane through zero.
class OrthonormalBasis {
 public:
  OrthonormalBasis(Matrix axes, Vector origin) : axes_(std::move(axes)), origin_(std::move(origin)) {
    const Matrix gram = axes_.transpose() * axes_;
    if (axes_.rows() != axes_.cols() || origin_.size() != axes_.rows() ||
        (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
      throw ParameterError("basis is not orthonormal");
  }

  const Matrix& axes() const { return axes_; }
  Vector axis(std::size_t j) const { return axes_.col(static_cast<Eigen::Index>(j)); }
  const Vector& origin() const { return origin_; }
  std::size_t dim() const { return static_cast<std::size_t>(axes_.cols()); }

  /// Coordinates of x relative to origin in this basis.
  Vector to_local(const Vector& x) const { return axes_.transpose() * (x - origin_); }
  Vector to_ambient(const Vector& z) const { return origin_ + axes_ * z; }

 private:
  Matrix axes_;
  Vector origin_;
};

/// Completes e_1 := u to an orthonormal basis. The standard axes other than
/// the one most parallel to u are orthogonalized against the growing basis
/// in index order (two Gram–Schmidt passes each).
inline OrthonormalBasis basis_from_normal(const UnitDirection& u, const Vector& origin) {
  const auto k = static_cast<Eigen::Index>(u.dim());
  if (origin.size() != k) throw ParameterError("origin dimension mismatch");
  Eigen::Index pivot = 0;
  u.vec().cwiseAbs().maxCoeff(&pivot);
  Matrix axes(k, k);
  axes.col(0) = u.vec();
  Eigen::Index filled = 1;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == pivot) continue;
    Vector v = Vector::Unit(k, j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c = 0; c < filled; ++c) v -= axes.col(c).dot(v) * axes.col(c);
    axes.col(filled++) = v / v.norm();
  }
  return OrthonormalBasis(std::move(axes), origin);
}

/// x ↦ linear·x + offset with a nonsingular linear part.
class AffineMap {
 public:
  /// Rejects maps whose row-max-scaled determinant is at most 1e-12.
  AffineMap(Matrix linear, Vector offset) : linear_(std::move(linear)), offset_(std::move(offset)) {
    if (linear_.rows() != linear_.cols() || offset_.size() != linear_.rows())
      throw ParameterError("affine map dimension mismatch");
    if (!linear_.allFinite() || !offset_.allFinite()) throw ParameterError("affine map is not finite");
    Matrix scaled = linear_;
    for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
      const double mx = scaled.row(r).cwiseAbs().maxCoeff();
      if (mx == 0.0) throw ParameterError("affine map is singular");
      scaled.row(r) /= mx;
    }
    if (std::abs(scaled.fullPivLu().determinant()) <= 1e-12) throw ParameterError("affine map is singular");
  }

  static AffineMap identity(std::size_t k) {
    const auto n = static_cast<Eigen::Index>(k);
    return AffineMap(Matrix::Identity(n, n), Vector::Zero(n));
  }

  const Matrix& linear() const { return linear_; }
  const Vector& offset() const { return offset_; }
  std::size_t dim() const { return static_cast<std::size_t>(linear_.rows()); }
  bool unimodular() const { return unimodular_; }

  Vector operator()(const Vector& x) const { return linear_ * x + offset_; }

  /// outer ∘ inner.
  friend AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    if (outer.dim() != inner.dim()) throw ParameterError("affine map dimension mismatch");
    Matrix lin = outer.linear_ * inner.linear_;
    Vector off = outer.linear_ * inner.offset_ + outer.offset_;
    if (outer.unimodular_ && inner.unimodular_) return AffineMap(std::move(lin), std::move(off), Unimodular{});
    return AffineMap(std::move(lin), std::move(off));
  }

  AffineMap inverse() const {
    Matrix inv = linear_.fullPivLu().inverse();
    Vector off = -(inv * offset_);
    if (unimodular_) return AffineMap(std::move(inv), std::move(off), Unimodular{});
    return AffineMap(std::move(inv), std::move(off));
  }

  /// Max absolute entry difference over linear part and offset.
  double max_abs_difference(const AffineMap& other) const {
    return std::max((linear_ - other.linear_).cwiseAbs().maxCoeff(),
                    (offset_ - other.offset_).cwiseAbs().maxCoeff());
  }

  double max_abs_entry() const {
    return std::max(linear_.cwiseAbs().maxCoeff(), offset_.size() ? offset_.cwiseAbs().maxCoeff() : 0.0);
  }

 private:
  struct Unimodular {};
  // Determinant is ±1 by construction; large shears are ill-conditioned
  // but exactly invertible, so the scaled-determinant test is skipped.
  AffineMap(Matrix linear, Vector offset, Unimodular)
      : linear_(std::move(linear)), offset_(std::move(offset)), unimodular_(true) {}

  friend AffineMap shear_transform(double gamma, const OrthonormalBasis& basis);

  Matrix linear_;
  Vector offset_;
  bool unimodular_ = false;
};

/// The shear g_γ: in the basis e_1..e_k it sends e_1 ↦ e_1 + γ e_2 and fixes
/// e_j for j ≠ 1; conjugated to ambient coordinates about basis.origin(), so
/// the hyperplane through the origin orthogonal to e_1 is fixed pointwise.
inline AffineMap shear_transform(double gamma, const OrthonormalBasis& basis) {
  const auto k = static_cast<Eigen::Index>(basis.dim());
  if (k < 2) throw ParameterError("shear_transform: need k >= 2");
  if (!std::isfinite(gamma)) throw ParameterError("shear_transform: gamma must be finite");
  const Vector e1 = basis.axis(0);
  const Vector e2 = basis.axis(1);
  Matrix lin = Matrix::Identity(k, k) + gamma * e2 * e1.transpose();
  Vector off = -gamma * e1.dot(basis.origin()) * e2;
  return AffineMap(std::move(lin), std::move(off), AffineMap::Unimodular{});
}

inline DataSet apply_map(const AffineMap& g, const DataSet& x) {
  if (g.dim() != x.dim()) throw ParameterError("apply_map: dimension mismatch");
  std::vector<Vector> pts;
  pts.reserve(x.size());
  for (const auto& p : x.points()) pts.push_back(g(p));
  return DataSet(std::move(pts));
}

}  // namespace robloc
