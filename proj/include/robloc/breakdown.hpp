#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "robloc/bounds.hpp"
#include "robloc/errors.hpp"
#include "robloc/estimators.hpp"
#include "robloc/geometry.hpp"
#include "robloc/metric.hpp"

namespace robloc {

inline std::vector<double> default_gamma_grid() { return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8}; }
inline std::vector<double> default_radius_grid() { return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9}; }

inline constexpr double kDefaultThresholdFactor = 1e6;
/// Bound on the relative residual of the inline shear-algebra checks.
inline constexpr double kAlgebraTol = 1e-9;
/// Relative step applied to γ when a contaminated set leaves general position.
inline constexpr double kGammaNudge = 1e-6;

enum class PartitionRule { largest_projection, smallest_projection };

inline const char* to_string(PartitionRule r) {
  return r == PartitionRule::largest_projection ? "largest" : "smallest";
}

/// One contaminated dataset built at a grid parameter.
struct FamilyOutcome {
  std::string label;
  IndexList replaced;  // always exactly m indices
  std::size_t identity_padding = 0;  // replaced indices whose replacement is the original point
  std::optional<EstimateSet> estimate;  // empty when the estimator refused the contaminated set
  double distance;  // estimate_set_distance against T(X), 0 when refused
  std::string error;
};

struct AttackRecord {
  double requested_parameter;
  double parameter;  // after any general-position nudge
  bool nudged = false;
  std::vector<FamilyOutcome> outcomes;
  double distance = 0.0;  // max over outcomes
};

struct AttackTrace {
  std::string family;
  std::string estimator;
  std::size_t n = 0, k = 0, h = 0, m = 0;
  std::vector<double> grid;
  std::vector<AttackRecord> records;
  double divergence_threshold = 0.0;
  bool diverged = false;
  std::optional<double> witness_parameter;
  double max_distance = 0.0;
  std::size_t refused_evaluations = 0;  // contaminated sets the estimator threw on

  // shear attack geometry
  IndexList facet;
  IndexList support;  // S
  IndexList kept;     // A
  IndexList moved;    // B
  PartitionRule partition = PartitionRule::largest_projection;
  bool dual_family = false;
  double algebra_residual = 0.0;
  bool algebra_verified = true;

  // translation cluster attack
  std::optional<Vector> direction;
};

namespace detail {

inline void finish_trace(AttackTrace& tr) {
  for (const auto& r : tr.records) {
    for (const auto& o : r.outcomes) tr.refused_evaluations += o.estimate ? 0 : 1;
    tr.max_distance = std::max(tr.max_distance, r.distance);
    if (!tr.diverged && r.distance > tr.divergence_threshold) {
      tr.diverged = true;
      tr.witness_parameter = r.parameter;
    }
  }
}

inline FamilyOutcome evaluate_family(const LocationEstimator& t, const DataSet& contaminated, const EstimateSet& base,
                                     std::string label, IndexList replaced, std::size_t padding) {
  try {
    EstimateSet est = t(contaminated);
    const double d = estimate_set_distance(est, base);
    return FamilyOutcome{std::move(label), std::move(replaced), padding, std::move(est), d, {}};
  } catch (const EstimatorError& e) {
    return FamilyOutcome{std::move(label), std::move(replaced), padding, std::nullopt, 0.0, e.what()};
  }
}

// General position of S ∪ A ∪ g_{sγ}(moved) in the attack frame. A point
// sheared by sγ has local coordinate 2 shifted by sγ·z_1, so the homogeneous
// determinant of every (k+1)-subset is affine in γ: D(γ) = D0 + γ·D1.
class ShearedPositionCheck {
 public:
  ShearedPositionCheck(const std::vector<Vector>& local, const std::vector<double>& multiplier) {
    const std::size_t n = local.size();
    const auto k = local.front().size();
    for_each_combination(n, static_cast<std::size_t>(k) + 1, [&](const IndexList& idx) {
      bool touches = false;
      for (auto i : idx) touches = touches || multiplier[i] != 0.0;
      if (!touches) return true;  // unmoved subsets inherit general position of X
      Matrix h0(k + 1, k + 1);
      for (Eigen::Index r = 0; r <= k; ++r) {
        h0(r, 0) = 1.0;
        h0.row(r).tail(k) = local[idx[static_cast<std::size_t>(r)]].transpose();
      }
      Matrix h1 = h0;
      for (Eigen::Index r = 0; r <= k; ++r) {
        const auto i = idx[static_cast<std::size_t>(r)];
        h1(r, 2) = multiplier[i] * local[i](0);
      }
      std::vector<Vector> pts;
      for (auto i : idx) pts.push_back(local[i]);
      const double thr = kGeometryRelTol * std::pow(diameter_of(pts), static_cast<double>(k));
      terms_.push_back({h0.fullPivLu().determinant(), h1.fullPivLu().determinant(), thr});
      return true;
    });
  }

  bool in_general_position(double gamma) const {
    return std::none_of(terms_.begin(), terms_.end(),
                        [&](const Term& t) { return std::abs(t.d0 + gamma * t.d1) <= t.threshold; });
  }

 private:
  struct Term {
    double d0, d1, threshold;
  };
  std::vector<Term> terms_;
};

inline double relative_point_residual(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                      const std::vector<Vector>& scale_ref) {
  double diff = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, (a[i] - b[i]).norm());
    scale = std::max({scale, a[i].norm(), b[i].norm(), scale_ref[i].norm()});
  }
  return diff / scale;
}

// Normal of a hyperplane through the h points `support` of facet `f` that
// leaves every other data point and `theta` strictly on the positive side.
// For h < k the facet hyperplane is tilted about the support.
inline Vector support_normal(const DataSet& x, const Facet& f, const IndexList& support, const Vector& theta) {
  const std::size_t k = x.dim();
  const Vector u = f.inward_normal.vec();
  if (support.size() == k) return u;
  const Vector s0 = x[support[0]];
  // w ⊥ u with w'(s − s0) = 0 on the support, w'(p − s0) = 1 on the other facet points
  const auto rows = static_cast<Eigen::Index>(k);
  Matrix a(rows, rows);
  Vector rhs(rows);
  Eigen::Index r = 0;
  a.row(r) = u.transpose();
  rhs(r++) = 0.0;
  for (auto i : f.indices) {
    if (i == support[0]) continue;
    const bool in_support = std::find(support.begin(), support.end(), i) != support.end();
    a.row(r) = (x[i] - s0).transpose();
    rhs(r++) = in_support ? 0.0 : 1.0;
  }
  const Vector w = a.fullPivLu().solve(rhs);
  double min_gap = u.dot(theta - s0), max_tilt = std::abs(w.dot(theta - s0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::find(f.indices.begin(), f.indices.end(), i) != f.indices.end()) continue;
    min_gap = std::min(min_gap, u.dot(x[i] - s0));
    max_tilt = std::max(max_tilt, std::abs(w.dot(x[i] - s0)));
  }
  const double eta = max_tilt > 0.0 ? 0.5 * min_gap / max_tilt : 1.0;
  const Vector tilted = u + eta * w;
  return tilted / tilted.norm();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shear attack

struct ShearAttackConfig {
  std::size_t h = 1;
  std::optional<std::size_t> m;  // default ⌊(n − h + 1)/2⌋
  std::vector<double> gamma_grid = default_gamma_grid();
  PartitionRule partition = PartitionRule::largest_projection;
  std::size_t facet_choice = 0;   // rank among admissible facets, farthest from T(X) first
  std::size_t subset_choice = 0;  // lexicographic rank of the h-subset of the facet points
  double threshold_factor = kDefaultThresholdFactor;
};

/// Facets of conv(X) whose hyperplane separates `theta` strictly from the
/// boundary, i.e. facets of conv(X ∪ {θ}) not containing θ, ordered by
/// decreasing normal distance of θ (ties by enumeration order).
inline std::vector<Facet> admissible_facets(const DataSet& x, const Vector& theta) {
  const double tol = kGeometryRelTol * x.diameter();
  std::vector<std::pair<double, Facet>> ranked;
  for (auto& f : enumerate_facets(x)) {
    const double gap = f.inward_normal.dot(theta) - f.support_value;
    if (gap > tol) ranked.emplace_back(gap, std::move(f));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Facet> out;
  for (auto& [gap, f] : ranked) out.push_back(std::move(f));
  return out;
}

/// Replaces B by g_γ(B) (family "replace-B": S ∪ A ∪ g_γ(B)) and, when
/// |A| ≤ m, A by g_{−γ}(A) (family "replace-A": S ∪ g_{−γ}(A) ∪ B) for each
/// γ on the grid, where g_γ shears along e_2 in proportion to the distance
/// from the hyperplane through S.
inline AttackTrace shear_attack(const LocationEstimator& t, const DataSet& x, const ShearAttackConfig& cfg) {
  const std::size_t n = x.size(), k = x.dim(), h = cfg.h;
  if (k < 2) throw ParameterError("shear_attack: need k >= 2");
  require_more_points_than_dim(x, "shear_attack");
  if (h < 1 || h > k) throw ParameterError("shear_attack: need 1 <= h <= k");
  if (cfg.gamma_grid.empty()) throw ParameterError("shear_attack: empty gamma grid");
  const std::size_t m = cfg.m.value_or((n - h + 1) / 2);
  if (m < 1 || m > n - h) throw ParameterError("shear_attack: need 1 <= m <= n - h");
  if (const auto gp = check_general_position(x); !gp.in_general_position)
    throw GeometryError("shear_attack: data not in general position");

  const EstimateSet base = t(x);
  const Vector theta = base.canonical();
  const auto facets = admissible_facets(x, theta);
  if (facets.empty()) throw EstimatorError("shear_attack: estimate is on or outside every facet of conv(X)");
  if (cfg.facet_choice >= facets.size()) throw ParameterError("shear_attack: facet choice out of range");
  const Facet& facet = facets[cfg.facet_choice];

  IndexList support;
  std::size_t rank = 0;
  for_each_combination(k, h, [&](const IndexList& sub) {
    if (rank++ == cfg.subset_choice) {
      for (auto s : sub) support.push_back(facet.indices[s]);
      return false;
    }
    return true;
  });
  if (support.empty()) throw ParameterError("shear_attack: subset choice out of range");

  Vector origin = Vector::Zero(static_cast<Eigen::Index>(k));
  for (auto i : support) origin += x[i];
  origin /= static_cast<double>(h);
  const auto basis = basis_from_normal(UnitDirection::normalized(detail::support_normal(x, facet, support, theta)), origin);
  const Vector e2 = basis.axis(1);

  std::vector<Vector> local;
  for (const auto& p : x.points()) local.push_back(basis.to_local(p));

  AttackTrace tr;
  tr.family = "shear";
  tr.estimator = t.name();
  tr.n = n;
  tr.k = k;
  tr.h = h;
  tr.m = m;
  tr.grid = cfg.gamma_grid;
  tr.divergence_threshold = cfg.threshold_factor * x.diameter();
  tr.facet = facet.indices;
  tr.support = support;
  tr.partition = cfg.partition;

  IndexList rest;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(support.begin(), support.end(), i) == support.end()) rest.push_back(i);
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    return cfg.partition == PartitionRule::largest_projection ? local[a](0) > local[b](0) : local[a](0) < local[b](0);
  });
  tr.moved.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(m));
  tr.kept.assign(rest.begin() + static_cast<std::ptrdiff_t>(m), rest.end());
  std::sort(tr.moved.begin(), tr.moved.end());
  std::sort(tr.kept.begin(), tr.kept.end());
  tr.dual_family = tr.kept.size() <= m;

  std::vector<double> mult_b(n, 0.0), mult_a(n, 0.0);
  for (auto i : tr.moved) mult_b[i] = 1.0;
  for (auto i : tr.kept) mult_a[i] = -1.0;
  const detail::ShearedPositionCheck gp_b(local, mult_b);
  const std::optional<detail::ShearedPositionCheck> gp_a =
      tr.dual_family ? std::optional(detail::ShearedPositionCheck(local, mult_a)) : std::nullopt;
  auto admissible = [&](double g) { return gp_b.in_general_position(g) && (!gp_a || gp_a->in_general_position(g)); };

  IndexList replaced_a = tr.kept;
  std::size_t padding = 0;
  if (tr.dual_family) {
    for (std::size_t j = 0; replaced_a.size() < m; ++j, ++padding) replaced_a.push_back(tr.moved[j]);
    std::sort(replaced_a.begin(), replaced_a.end());
  }

  // g_γ in the attack frame: z_2 += γ·z_1, the block matrix [[1, 0], [γ, 1]] ⊕ I
  const auto kk = static_cast<Eigen::Index>(k);
  auto local_shear = [&](double gamma) {
    Matrix g = Matrix::Identity(kk, kk);
    g(1, 0) = gamma;
    return g;
  };
  const Matrix g_one = local_shear(1.0);
  for (const double requested : cfg.gamma_grid) {
    AttackRecord rec{requested, requested, false, {}, 0.0};
    if (!admissible(rec.parameter)) {
      rec.parameter = requested + kGammaNudge * std::abs(requested);
      rec.nudged = true;
      if (!admissible(rec.parameter))
        throw GeometryError("shear_attack: general position unrecoverable at gamma " + std::to_string(requested));
    }
    const double gamma = rec.parameter;

    // X'_γ = S ∪ A ∪ g_γ(B): each point of B travels γ·|z_1| along e_2
    std::vector<Vector> xb = x.points();
    for (auto i : tr.moved) xb[i] = x[i] + gamma * local[i](0) * e2;
    rec.outcomes.push_back(detail::evaluate_family(t, DataSet(xb), base, "replace-B", tr.moved, 0));

    // X''_γ = S ∪ g_{−γ}(A) ∪ B
    std::vector<Vector> xa = x.points();
    for (auto i : tr.kept) xa[i] = x[i] - gamma * local[i](0) * e2;

    // inline algebra in the attack frame: group law, X'_γ = g_γ(S ∪ A_{−γ} ∪ B)
    // and X''_γ = g_{−γ}(X'_γ)
    const Matrix g = local_shear(gamma), g_inv = local_shear(-gamma), g_next = local_shear(gamma + 1.0);
    const double law_scale = std::max(1.0, std::abs(gamma) + 1.0);
    double residual = std::max({(g * g_one - g_next).cwiseAbs().maxCoeff(), (g_one * g - g_next).cwiseAbs().maxCoeff(),
                                (g * g_inv - Matrix::Identity(kk, kk)).cwiseAbs().maxCoeff()}) /
                      law_scale;
    std::vector<Vector> zb = local, za = local, pre = local, via_b, via_a;
    for (auto i : tr.moved) zb[i](1) += gamma * local[i](0);
    for (auto i : tr.kept) za[i](1) -= gamma * local[i](0);
    for (auto i : tr.kept) pre[i] = g_inv * local[i];
    for (const auto& z : pre) via_b.push_back(g * z);
    for (const auto& z : zb) via_a.push_back(g_inv * z);
    residual = std::max(residual, detail::relative_point_residual(zb, via_b, pre));
    residual = std::max(residual, detail::relative_point_residual(za, via_a, zb));
    tr.algebra_residual = std::max(tr.algebra_residual, residual);

    if (tr.dual_family)
      rec.outcomes.push_back(detail::evaluate_family(t, DataSet(xa), base, "replace-A", replaced_a, padding));

    for (const auto& o : rec.outcomes) rec.distance = std::max(rec.distance, o.distance);
    tr.records.push_back(std::move(rec));
  }
  tr.algebra_verified = tr.algebra_residual <= kAlgebraTol;
  detail::finish_trace(tr);
  return tr;
}

// ---------------------------------------------------------------------------
// Translation cluster attack

struct TranslationAttackConfig {
  std::size_t m = 1;
  std::vector<double> radius_grid = default_radius_grid();
  std::optional<UnitDirection> direction;  // default: e_1
  double threshold_factor = kDefaultThresholdFactor;
};

/// Replaces the m points farthest along `direction` (ties by index) with a
/// cluster at T(X) + R·u, point j offset by 10⁻⁶·R·j along a moment-curve
/// direction so the cluster stays in general position.
inline AttackTrace translation_cluster_attack(const LocationEstimator& t, const DataSet& x,
                                              const TranslationAttackConfig& cfg) {
  const std::size_t n = x.size(), k = x.dim();
  if (cfg.m > n) throw ParameterError("translation_cluster_attack: need m <= n");
  if (cfg.radius_grid.empty()) throw ParameterError("translation_cluster_attack: empty radius grid");
  const UnitDirection u = cfg.direction.value_or(UnitDirection(Vector::Unit(static_cast<Eigen::Index>(k), 0)));
  if (u.dim() != k) throw ParameterError("translation_cluster_attack: direction dimension mismatch");

  const EstimateSet base = t(x);
  const Vector theta = base.canonical();
  AttackTrace tr;
  tr.family = "translation-cluster";
  tr.estimator = t.name();
  tr.n = n;
  tr.k = k;
  tr.m = cfg.m;
  tr.grid = cfg.radius_grid;
  tr.divergence_threshold = cfg.threshold_factor * x.diameter();
  tr.direction = u.vec();

  const auto proj = x.project(u.vec());
  IndexList order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return proj[a] > proj[b]; });
  IndexList replaced(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.m));
  std::sort(replaced.begin(), replaced.end());
  tr.moved = replaced;

  std::vector<Vector> curve;
  for (std::size_t j = 1; j <= cfg.m; ++j) {
    Vector c(static_cast<Eigen::Index>(k));
    for (std::size_t d = 0; d < k; ++d) c(static_cast<Eigen::Index>(d)) = std::pow(static_cast<double>(j), static_cast<double>(d));
    curve.push_back(static_cast<double>(j) * c / c.norm());
  }

  for (const double radius : cfg.radius_grid) {
    AttackRecord rec{radius, radius, false, {}, 0.0};
    std::vector<Vector> repl;
    for (std::size_t j = 0; j < cfg.m; ++j) repl.push_back(theta + radius * u.vec() + 1e-6 * radius * curve[j]);
    const DataSet contaminated = x.with_replaced(replaced, repl);
    rec.outcomes.push_back(detail::evaluate_family(t, contaminated, base, "cluster", replaced, 0));
    rec.distance = rec.outcomes.back().distance;
    tr.records.push_back(std::move(rec));
  }
  detail::finish_trace(tr);
  return tr;
}

// ---------------------------------------------------------------------------
// Empirical breakdown value

struct AttackSuite {
  std::vector<double> gamma_grid = default_gamma_grid();
  std::vector<double> radius_grid = default_radius_grid();
  std::size_t facet_budget = 0;  // 0: every admissible facet
  bool complementary_partition = true;
  std::size_t random_translation_directions = 4;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_m;  // default ⌈n/2⌉
};

/// Outcome for one replacement count. "survived" only means that no attack
/// in the suite succeeded.
struct BreakdownCertificate {
  std::size_t m = 0;
  std::size_t n = 0;
  bool broken = false;
  std::optional<AttackTrace> witness;
  std::vector<std::string> attack_families_tried;
  std::vector<std::string> skipped;  // configurations that could not run, with reason
  double max_distance = 0.0;

  const char* status() const { return broken ? "broken" : "survived"; }
};

struct FsbvResult {
  std::optional<Fraction> fraction;  // smallest broken m over n
  std::vector<BreakdownCertificate> certificates;
  std::string marker;  // set when no tested m broke
  double divergence_threshold = 0.0;
};

inline std::vector<UnitDirection> suite_translation_directions(std::size_t k, const AttackSuite& suite) {
  std::vector<UnitDirection> dirs;
  for (std::size_t j = 0; j < k; ++j) {
    const Vector e = Vector::Unit(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
    dirs.emplace_back(e);
    dirs.emplace_back(-e);
  }
  std::mt19937_64 rng(suite.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < suite.random_translation_directions && k > 1; ++i) {
    Vector v(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) v(static_cast<Eigen::Index>(j)) = gauss(rng);
    dirs.push_back(UnitDirection::normalized(v));
  }
  return dirs;
}

/// Runs the attack suite for m = 1, 2, ... and reports the smallest m at
/// which some attack carried T farther than threshold_factor × diam(X).
inline FsbvResult empirical_fsbv(const LocationEstimator& t, const DataSet& x, const AttackSuite& suite,
                                 double threshold_factor = kDefaultThresholdFactor) {
  if (threshold_factor < 1e3) throw ParameterError("empirical_fsbv: threshold factor must be at least 1e3");
  if (suite.gamma_grid.empty() && suite.radius_grid.empty()) throw ParameterError("empirical_fsbv: empty attack suite");
  const std::size_t n = x.size(), k = x.dim();
  const std::size_t max_m = std::min(n, suite.max_m.value_or((n + 1) / 2));
  FsbvResult result;
  result.divergence_threshold = threshold_factor * x.diameter();

  const auto translation_dirs = suite_translation_directions(k, suite);
  const bool shear_possible = k >= 2 && n > k && !suite.gamma_grid.empty() && check_general_position(x).in_general_position;
  std::vector<Facet> facets;
  std::string shear_skip;
  if (shear_possible) {
    try {
      facets = admissible_facets(x, t(x).canonical());
      if (facets.empty()) shear_skip = "shear: estimate not strictly inside any facet halfspace";
    } catch (const Error& e) {
      shear_skip = std::string("shear: ") + e.what();
    }
  } else if (k >= 2) {
    shear_skip = "shear: data not in general position";
  }
  const std::size_t facet_count =
      suite.facet_budget == 0 ? facets.size() : std::min(facets.size(), suite.facet_budget);
  std::vector<PartitionRule> rules{PartitionRule::largest_projection};
  if (suite.complementary_partition) rules.push_back(PartitionRule::smallest_projection);

  for (std::size_t m = 1; m <= max_m; ++m) {
    BreakdownCertificate cert;
    cert.m = m;
    cert.n = n;
    if (!shear_skip.empty()) cert.skipped.push_back(shear_skip);
    auto consider = [&](AttackTrace tr, std::string label) {
      if (tr.refused_evaluations > 0)
        cert.skipped.push_back(label + ": estimator refused " + std::to_string(tr.refused_evaluations) +
                               " contaminated sets");
      cert.attack_families_tried.push_back(std::move(label));
      cert.max_distance = std::max(cert.max_distance, tr.max_distance);
      if (tr.diverged) {
        cert.broken = true;
        cert.witness = std::move(tr);
      }
      return !cert.broken;
    };

    if (!suite.radius_grid.empty()) {
      for (std::size_t d = 0; d < translation_dirs.size() && !cert.broken; ++d) {
        TranslationAttackConfig cfg{m, suite.radius_grid, translation_dirs[d], threshold_factor};
        consider(translation_cluster_attack(t, x, cfg), "translation-cluster(direction=" + std::to_string(d) + ")");
      }
    }
    if (shear_possible && shear_skip.empty()) {
      for (std::size_t h = 1; h <= k && !cert.broken; ++h) {
        if (m > n - h) continue;
        const auto subsets = binomial(k, h);
        for (std::size_t f = 0; f < facet_count && !cert.broken; ++f)
          for (std::size_t s = 0; s < subsets && !cert.broken; ++s)
            for (const auto rule : rules) {
              if (cert.broken) break;
              ShearAttackConfig cfg{h, m, suite.gamma_grid, rule, f, s, threshold_factor};
              const std::string label = "shear(h=" + std::to_string(h) + ",facet=" + std::to_string(f) +
                                        ",subset=" + std::to_string(s) + ",partition=" + to_string(rule) + ")";
              try {
                consider(shear_attack(t, x, cfg), label);
              } catch (const Error& e) {
                cert.skipped.push_back(label + ": " + e.what());
              }
            }
      }
    }
    const bool broken = cert.broken;
    result.certificates.push_back(std::move(cert));
    if (broken) {
      result.fraction = Fraction{static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
      return result;
    }
  }
  result.marker = "no attack in suite succeeded for m <= " + std::to_string(max_m) + " (>= tested range)";
  return result;
}

// ---------------------------------------------------------------------------
// Projection-median counterexample data

/// n = 2m + 2 points in R^2: (0, ±δ), m points (x_i, x_i + δu_i) with x_i
/// equispaced on [10, 20], and their mirror images (x_i, −(x_i + δu_i)).
/// The noise u_i ~ U[−s, s] is redrawn until the set is in general position.
inline DataSet pm_counterexample(std::size_t m, double delta, double noise_scale, std::uint64_t seed,
                                 std::size_t max_attempts = 1000) {
  if (m < 2) throw ParameterError("pm_counterexample: need m >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("pm_counterexample: need 0 < delta < 1");
  if (!(noise_scale > 0.0)) throw ParameterError("pm_counterexample: need noise_scale > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-noise_scale, noise_scale);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Vector> pts;
    pts.push_back(Eigen::Vector2d(0.0, delta));
    pts.push_back(Eigen::Vector2d(0.0, -delta));
    std::vector<Vector> lower;
    for (std::size_t i = 0; i < m; ++i) {
      const double xi = 10.0 + 10.0 * static_cast<double>(i) / static_cast<double>(m - 1);
      const double yi = xi + delta * noise(rng);
      pts.push_back(Eigen::Vector2d(xi, yi));
      lower.push_back(Eigen::Vector2d(xi, -yi));
    }
    pts.insert(pts.end(), lower.begin(), lower.end());
    DataSet z(std::move(pts));
    if (check_general_position(z).in_general_position) return z;
  }
  throw GeometryError("pm_counterexample: general-position rejection budget exceeded");
}

}  // namespace robloc
