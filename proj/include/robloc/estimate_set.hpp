#pragma once

#include <utility>
#include <vector>

#include "robloc/errors.hpp"
#include "robloc/geometry.hpp"

namespace robloc {

/// Finite nonempty set of location estimates. Members are kept in insertion
/// order with duplicates (max-abs difference ≤ 1e-12) dropped. `canonical`
/// is the single point used downstream; it need not be a member (the
/// coordinatewise median's interval midpoint, for instance).
class EstimateSet {
 public:
  explicit EstimateSet(std::vector<Vector> members) : members_(dedup(std::move(members))) {
    canonical_ = members_.front();
  }

  EstimateSet(std::vector<Vector> members, Vector canonical)
      : members_(dedup(std::move(members))), canonical_(std::move(canonical)) {
    if (canonical_.size() != members_.front().size() || !canonical_.allFinite())
      throw EstimatorError("canonical estimate is invalid");
  }

  const std::vector<Vector>& members() const { return members_; }
  const Vector& canonical() const { return canonical_; }
  std::size_t size() const { return members_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(canonical_.size()); }

 private:
  static std::vector<Vector> dedup(std::vector<Vector> in) {
    if (in.empty()) throw EstimatorError("estimate set must be nonempty");
    const auto k = in.front().size();
    std::vector<Vector> out;
    for (auto& v : in) {
      if (v.size() != k || !v.allFinite()) throw EstimatorError("estimate member is invalid");
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const Vector& w) { return (w - v).cwiseAbs().maxCoeff() <= 1e-12; });
      if (!seen) out.push_back(std::move(v));
    }
    return out;
  }

  std::vector<Vector> members_;
  Vector canonical_;
};

}  // namespace robloc
