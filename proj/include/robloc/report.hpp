#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "json.hpp"

#include "robloc/bounds.hpp"
#include "robloc/breakdown.hpp"
#include "robloc/conditions.hpp"
#include "robloc/estimate_set.hpp"

// JSON views of the library's reports. Objects use nlohmann::json's default
// std::map storage, so keys are emitted sorted.

namespace robloc::report {

using Json = nlohmann::json;

/// FNV-1a 64-bit over the compact dump of `config`, as 16 hex digits.
inline std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json vec(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const EstimateSet& s) {
  Json members = Json::array();
  for (const auto& m : s.members()) members.push_back(vec(m));
  return {{"members", members}, {"canonical", vec(s.canonical())}};
}

inline Json to_json(const Fraction& f) {
  return {{"numerator", f.numerator}, {"denominator", f.denominator}, {"text", f.str()}};
}

inline Json to_json(const BoundTable& b) {
  return {{"translation", to_json(b.translation)},
          {"affine_condition_h", to_json(b.affine_condition_h)},
          {"scatter", to_json(b.scatter)},
          {"projection_median", to_json(b.projection_median)}};
}

inline Json to_json(const AttackTrace& tr) {
  Json distances = Json::array();
  Json records = Json::array();
  for (const auto& r : tr.records) {
    distances.push_back(r.distance);
    Json outcomes = Json::array();
    for (const auto& o : r.outcomes) {
      Json oj{{"family", o.label},
              {"replaced", o.replaced},
              {"identity_padding", o.identity_padding},
              {"estimate", o.estimate ? to_json(*o.estimate) : Json(nullptr)},
              {"distance", o.distance}};
      if (!o.error.empty()) oj["estimator_error"] = o.error;
      outcomes.push_back(std::move(oj));
    }
    records.push_back({{"requested", r.requested_parameter},
                       {"parameter", r.parameter},
                       {"nudged", r.nudged},
                       {"distance", r.distance},
                       {"contaminated", outcomes}});
  }
  Json j{{"estimator", tr.estimator},
         {"family", tr.family},
         {"n", tr.n},
         {"k", tr.k},
         {"h", tr.h},
         {"m", tr.m},
         {"grid", tr.grid},
         {"distances", distances},
         {"records", records},
         {"diverged", tr.diverged},
         {"divergence_threshold", tr.divergence_threshold},
         {"max_distance", tr.max_distance},
         {"refused_evaluations", tr.refused_evaluations},
         {"replaced_B", tr.moved}};
  j["witness_gamma"] = tr.witness_parameter ? Json(*tr.witness_parameter) : Json(nullptr);
  if (tr.family == "shear") {
    j["facet"] = tr.facet;
    j["support_S"] = tr.support;
    j["kept_A"] = tr.kept;
    j["partition"] = to_string(tr.partition);
    j["dual_family"] = tr.dual_family;
    j["algebra_residual"] = tr.algebra_residual;
    j["algebra_verified"] = tr.algebra_verified;
  }
  if (tr.direction) j["direction"] = vec(*tr.direction);
  return j;
}

inline Json to_json(const BreakdownCertificate& c) {
  Json j{{"m", c.m},
         {"n", c.n},
         {"status", c.status()},
         {"attack_families_tried", c.attack_families_tried},
         {"skipped", c.skipped},
         {"max_distance", c.max_distance}};
  j["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
  if (!c.broken) j["note"] = "no attack in suite succeeded (not a proof of robustness)";
  return j;
}

inline Json to_json(const FsbvResult& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  Json j{{"certificates", certs}, {"divergence_threshold", r.divergence_threshold}};
  j["fraction"] = r.fraction ? to_json(*r.fraction) : Json(nullptr);
  j["marker"] = r.fraction ? Json(nullptr) : Json(r.marker);
  return j;
}

inline Json to_json(const ConditionReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes)
    probes.push_back({{"direction", vec(p.direction)}, {"sorted_projections", p.sorted_projections}, {"margin", p.margin}});
  return {{"h", r.h},
          {"probes", probes},
          {"min_margin", r.min_margin},
          {"epsilon", r.epsilon},
          {"holds_empirically", r.holds_empirically},
          {"verdict_kind", "empirical (sampled probes, not a proof)"}};
}

inline Json to_json(const DepthConditionReport& r) {
  return {{"member_depths", r.member_depths},
          {"depth", r.depth},
          {"exact", r.exact},
          {"satisfied", r.satisfied},
          {"implication_checked", r.implication_checked},
          {"implication_holds", r.implication_holds}};
}

inline Json to_json(const EquivarianceReport& r) {
  return {{"class", to_string(r.tested)},
          {"trials", r.trials},
          {"max_discrepancy", r.max_discrepancy},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

}  // namespace robloc::report
