#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "robloc/breakdown.hpp"
#include "robloc/io.hpp"
#include "robloc/report.hpp"

using namespace robloc;

namespace {

DataSet demo() { return load_csv(std::string(ROBLOC_DATA_DIR) + "/demo_k2_n10.csv"); }

DataSet line(std::initializer_list<double> v) { return DataSet::from_values(std::vector<double>(v)); }

// centroid estimator that keeps every dataset it is shown
struct Spy {
  std::shared_ptr<std::vector<DataSet>> seen = std::make_shared<std::vector<DataSet>>();
  LocationEstimator estimator() const {
    auto store = seen;
    return {"spy", Equivariance::affine, [store](const DataSet& x) {
              store->push_back(x);
              return EstimateSet(std::vector<Vector>{x.centroid()});
            }};
  }
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b; }

TranslationAttackConfig replacing(std::size_t m) {
  TranslationAttackConfig cfg;
  cfg.m = m;
  return cfg;
}

}  // namespace

TEST(Bounds, Examples) {
  auto b = theoretical_bounds(10, 2, 2);
  EXPECT_TRUE(b.translation.identical({5, 10}));
  EXPECT_TRUE(b.affine_condition_h.identical({4, 10}));
  EXPECT_TRUE(b.scatter.identical({4, 10}));
  EXPECT_TRUE(b.projection_median.identical({5, 10}));
  EXPECT_EQ(b.affine_condition_h.str(), "4/10");
}

TEST(Bounds, RangeErrors) {
  EXPECT_THROW(theoretical_bounds(2, 2, 1), ParameterError);
  EXPECT_THROW(theoretical_bounds(10, 0, 1), ParameterError);
  EXPECT_THROW(theoretical_bounds(10, 2, 3), ParameterError);
  EXPECT_THROW(theoretical_bounds(10, 2, 0), ParameterError);
}

TEST(Bounds, ConsistencyAcrossTable) {
  for (std::int64_t n = 2; n <= 60; ++n)
    for (std::int64_t k = 1; k < n; ++k)
      for (std::int64_t h = 1; h <= k; ++h) {
        auto b = theoretical_bounds(n, k, h);
        EXPECT_GE(b.affine_condition_h, b.scatter);
        EXPECT_GE(b.translation, b.projection_median);
        EXPECT_GE(b.projection_median, b.scatter);
        EXPECT_EQ(b.affine_condition_h.numerator, floor_div(n - h + 1, 2));
      }
}

TEST(Bounds, FractionOrderingByValue) {
  EXPECT_EQ((Fraction{2, 4}), (Fraction{1, 2}));
  EXPECT_FALSE((Fraction{2, 4}).identical({1, 2}));
  EXPECT_LT((Fraction{1, 3}), (Fraction{1, 2}));
}

TEST(ShearAttack, ZeroGammaLeavesData) {
  auto x = demo();
  ShearAttackConfig cfg;
  cfg.h = 2;
  cfg.gamma_grid = {0.0};
  auto tr = shear_attack(make_estimator("mcd"), x, cfg);
  ASSERT_EQ(tr.records.size(), 1u);
  EXPECT_EQ(tr.records[0].distance, 0.0);
}

TEST(ShearAttack, ContaminationStructure) {
  auto x = demo();
  for (std::size_t h = 1; h <= 2; ++h) {
    Spy spy;
    ShearAttackConfig cfg;
    cfg.h = h;
    cfg.gamma_grid = {1e1, 1e2, 1e3};
    auto tr = shear_attack(spy.estimator(), x, cfg);
    const std::size_t m = (x.size() - h + 1) / 2;
    EXPECT_EQ(tr.m, m);
    EXPECT_EQ(tr.moved.size(), m);
    EXPECT_EQ(tr.support.size(), h);
    EXPECT_EQ(tr.kept.size() + tr.moved.size() + tr.support.size(), x.size());
    for (const auto& rec : tr.records)
      for (const auto& o : rec.outcomes) EXPECT_EQ(o.replaced.size(), m);
    EXPECT_TRUE(tr.algebra_verified);
    EXPECT_LE(tr.algebra_residual, kAlgebraTol);

    // spy saw T(X), then per γ the replace-B set and, if present, the replace-A set
    const auto& seen = *spy.seen;
    const std::size_t per = tr.dual_family ? 2 : 1;
    ASSERT_EQ(seen.size(), 1 + per * cfg.gamma_grid.size());
    Vector origin = Vector::Zero(2);
    for (auto i : tr.support) origin += x[i];
    origin /= static_cast<double>(h);
    for (std::size_t g = 0; g < cfg.gamma_grid.size(); ++g) {
      const double gamma = tr.records[g].parameter;
      const DataSet& xb = seen[1 + per * g];
      std::size_t changed = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const bool moved = std::find(tr.moved.begin(), tr.moved.end(), i) != tr.moved.end();
        if (!moved) {
          EXPECT_EQ(xb[i], x[i]);
          continue;
        }
        ++changed;
        // travel |γ|·|x_1| with x_1 the signed distance from the hyperplane through S
        const double travel = (xb[i] - x[i]).norm();
        const Vector e2 = (xb[i] - x[i]) / travel;
        const Vector e1 = Eigen::Vector2d(e2(1), -e2(0));
        EXPECT_NEAR(travel, gamma * std::abs(e1.dot(x[i] - origin)), 1e-9 * travel);
      }
      EXPECT_EQ(changed, m);
      if (tr.dual_family) {
        // X'' = g_{−γ}(X') as point sets, via the ambient shear map
        const DataSet& xa = seen[2 + per * g];
        const Vector d = xb[tr.moved[0]] - x[tr.moved[0]];
        const Vector e2 = d / d.norm();
        Vector e1 = Eigen::Vector2d(e2(1), -e2(0));
        if (e1.dot(x[tr.moved[0]] - origin) * gamma * e2.dot(d) < 0) e1 = -e1;
        Matrix axes(2, 2);
        axes.col(0) = e1;
        axes.col(1) = e2;
        const auto g_inv = shear_transform(-gamma, OrthonormalBasis(axes, origin));
        for (std::size_t i = 0; i < x.size(); ++i)
          EXPECT_LE((g_inv(xb[i]) - xa[i]).norm(), 1e-9 * std::max(1.0, xb[i].norm()));
      }
    }
  }
}

TEST(ShearAttack, McdDemoDivergesAtFourReplacements) {
  auto x = demo();
  ShearAttackConfig cfg;
  cfg.h = 2;
  auto tr = shear_attack(make_estimator("mcd"), x, cfg);
  EXPECT_EQ(tr.m, 4u);
  EXPECT_EQ(tr.grid.size(), 8u);
  EXPECT_TRUE(tr.diverged);
  ASSERT_TRUE(tr.witness_parameter.has_value());
  EXPECT_GT(tr.max_distance, 1e6 * x.diameter());
  EXPECT_TRUE(tr.algebra_verified);
}

TEST(ShearAttack, RefusedEvaluationsAreRecorded) {
  auto x = demo();
  auto calls = std::make_shared<int>(0);
  // answers on X itself, refuses every contaminated set
  LocationEstimator picky{"picky", Equivariance::affine, [calls](const DataSet& d) {
                            if ((*calls)++ > 0) throw EstimatorError("refused");
                            return EstimateSet(std::vector<Vector>{d.centroid()});
                          }};
  ShearAttackConfig cfg;
  cfg.h = 2;
  cfg.gamma_grid = {10.0, 100.0};
  auto tr = shear_attack(picky, x, cfg);
  EXPECT_EQ(tr.refused_evaluations, 4u);
  EXPECT_FALSE(tr.diverged);
  EXPECT_TRUE(tr.algebra_verified);
  for (const auto& r : tr.records)
    for (const auto& o : r.outcomes) {
      EXPECT_FALSE(o.estimate.has_value());
      EXPECT_EQ(o.error, "refused");
    }
  EXPECT_TRUE(report::to_json(tr)["records"][0]["contaminated"][0]["estimate"].is_null());
}

TEST(ShearAttack, Preconditions) {
  auto x = demo();
  ShearAttackConfig cfg;
  cfg.h = 3;
  EXPECT_THROW(shear_attack(make_estimator("mcd"), x, cfg), ParameterError);
  cfg.h = 2;
  cfg.gamma_grid.clear();
  EXPECT_THROW(shear_attack(make_estimator("mcd"), x, cfg), ParameterError);
  ShearAttackConfig bad_m;
  bad_m.m = 20;
  EXPECT_THROW(shear_attack(make_estimator("mcd"), x, bad_m), ParameterError);
  EXPECT_THROW(shear_attack(make_estimator("cmedian"), line({1, 2, 3}), ShearAttackConfig{}), ParameterError);
}

TEST(TranslationAttack, NoReplacementNoMovement) {
  auto x = line({1.2, 3.7, 2.4, 8.9, 5.1});
  auto tr = translation_cluster_attack(make_estimator("cmedian"), x, replacing(0));
  for (const auto& r : tr.records) EXPECT_EQ(r.distance, 0.0);
}

TEST(TranslationAttack, MedianBreaksAtMajority) {
  auto x = line({1.2, 3.7, 2.4, 8.9, 5.1});
  auto broken = translation_cluster_attack(make_estimator("cmedian"), x, replacing(3));
  EXPECT_TRUE(broken.diverged);
  EXPECT_GT(broken.max_distance, 1e6 * x.diameter());
  auto held = translation_cluster_attack(make_estimator("cmedian"), x, replacing(2));
  EXPECT_FALSE(held.diverged);
  EXPECT_LE(held.max_distance, x.diameter());
  for (const auto& r : held.records) EXPECT_EQ(r.outcomes[0].replaced.size(), 2u);
}

TEST(TranslationAttack, MedianDistanceMonotoneInRadius) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0, 10);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(5 + 2 * (t % 3));
    for (auto& e : v) e = u(rng);
    auto x = DataSet::from_values(v);
    for (std::size_t m = 1; m <= v.size(); ++m) {
      auto tr = translation_cluster_attack(make_estimator("cmedian"), x, replacing(m));
      for (std::size_t i = 1; i < tr.records.size(); ++i) EXPECT_GE(tr.records[i].distance, tr.records[i - 1].distance);
    }
  }
}

TEST(TranslationAttack, RejectsTooManyReplacements) {
  EXPECT_THROW(translation_cluster_attack(make_estimator("cmedian"), line({1, 2, 3}), replacing(4)), ParameterError);
}

TEST(Fsbv, MedianOneDimensional) {
  for (const char* file : {"/demo_1d_n5.csv", "/demo_1d_n9.csv"}) {
    auto x = load_csv(std::string(ROBLOC_DATA_DIR) + file);
    const auto n = static_cast<std::int64_t>(x.size());
    auto r = empirical_fsbv(make_estimator("cmedian"), x, AttackSuite{});
    ASSERT_TRUE(r.fraction.has_value());
    EXPECT_TRUE(r.fraction->identical({(n + 1) / 2, n}));
    EXPECT_TRUE(r.certificates.back().broken);
    EXPECT_TRUE(r.certificates.back().witness.has_value());
  }
}

TEST(Fsbv, SurvivedMarkerWithoutFraction) {
  AttackSuite suite;
  suite.max_m = 1;
  auto r = empirical_fsbv(make_estimator("mcd"), demo(), suite);
  EXPECT_FALSE(r.fraction.has_value());
  EXPECT_NE(r.marker.find("no attack in suite succeeded"), std::string::npos);
  ASSERT_EQ(r.certificates.size(), 1u);
  EXPECT_STREQ(r.certificates[0].status(), "survived");
}

TEST(Fsbv, ThresholdFactorFloor) {
  EXPECT_THROW(empirical_fsbv(make_estimator("cmedian"), line({1, 2, 3}), AttackSuite{}, 10.0), ParameterError);
}

TEST(Fsbv, ReportIsReproducible) {
  AttackSuite suite;
  suite.seed = 5;
  auto a = report::to_json(empirical_fsbv(make_estimator("mcd"), demo(), suite)).dump();
  auto b = report::to_json(empirical_fsbv(make_estimator("mcd"), demo(), suite)).dump();
  EXPECT_EQ(a, b);
}

TEST(PmCounterexample, ShapeAndGeneralPosition) {
  auto z = pm_counterexample(10, 0.01, 0.1, 7);
  EXPECT_EQ(z.size(), 22u);
  EXPECT_TRUE(check_general_position(z).in_general_position);
  EXPECT_EQ(z[0], Vector(Eigen::Vector2d(0, 0.01)));
  EXPECT_EQ(z[1], Vector(Eigen::Vector2d(0, -0.01)));
  EXPECT_EQ(z[2](0), 10.0);
  EXPECT_EQ(z[11](0), 20.0);
}

TEST(PmCounterexample, MirrorSymmetry) {
  auto z = pm_counterexample(6, 0.05, 0.2, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(z[2 + i](0), z[8 + i](0));
    EXPECT_EQ(z[2 + i](1), -z[8 + i](1));
  }
  EXPECT_EQ(z[0](1), -z[1](1));
}

TEST(PmCounterexample, DiagonalProjectionsCollapse) {
  const Vector u = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  for (double delta : {1e-2, 1e-4, 1e-6}) {
    auto z = pm_counterexample(8, delta, 0.5, 11);
    const auto proj = z.project(u);
    std::size_t small = 0;
    for (double p : proj)
      if (std::abs(p) <= delta) ++small;
    EXPECT_EQ(small, 8u + 2u);
  }
}

TEST(PmCounterexample, Errors) {
  EXPECT_THROW(pm_counterexample(1, 0.1, 0.1, 0), ParameterError);
  EXPECT_THROW(pm_counterexample(5, 1.0, 0.1, 0), ParameterError);
  EXPECT_THROW(pm_counterexample(5, 0.0, 0.1, 0), ParameterError);
  EXPECT_THROW(pm_counterexample(5, 0.1, 0.0, 0), ParameterError);
}
