// robloc: command-line runner for estimates, attacks and breakdown certificates.
//
// Exit codes: 0 ok, 2 input, 3 estimator, 4 parameter.

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robloc/report.hpp"
#include "robloc/robloc.hpp"

using namespace robloc;
using report::Json;

namespace {

enum Exit { ok = 0, input = 2, estimator = 3, parameter = 4 };

struct Options {
  std::string data;
  std::string estimator = "mcd";
  std::optional<std::uint64_t> seed;

  // estimator parameters
  std::optional<std::size_t> coverage, trim;
  std::vector<double> weights;
  std::size_t scale_shift = 0;
  std::size_t directions = 2000;
  std::size_t grid_refinements = 30;
  bool timing = false;

  // attacks
  std::string family = "shear";
  std::optional<std::size_t> h, m;
  std::vector<double> gamma_grid = default_gamma_grid();
  std::vector<double> radius_grid = default_radius_grid();
  std::string partition = "largest";
  std::size_t facet = 0, subset = 0;
  std::vector<double> direction;
  double threshold_factor = kDefaultThresholdFactor;
  std::string curve;

  // fsbv
  std::optional<std::size_t> max_m;
  std::size_t facet_budget = 0;
  bool single_partition = false;
  std::size_t translation_directions = 4;

  // bounds
  std::int64_t n = 0, k = 0, bh = 0;

  // depth
  std::vector<double> point;
  std::string mode = "auto";
  bool with_outlyingness = false;

  // condition
  std::size_t probes_per_face = 32;
  bool with_depth = false;

  // metric
  std::vector<double> xs, ys;

  // scenario-pm
  std::size_t pm_m = 10;
  std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  double noise = 0.1;
  std::size_t pm_shift = 1;
};

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::uint64_t require_seed(const Options& o, const std::string& why) {
  if (!o.seed) throw ParameterError("--seed is required (" + why + ")");
  return *o.seed;
}

EstimatorParams estimator_params(const Options& o) {
  EstimatorParams p;
  p.coverage = o.coverage;
  p.trim_count = o.trim;
  p.weights = o.weights;
  p.scale_shift = o.scale_shift;
  p.random_directions = o.directions;
  p.grid_refinements = o.grid_refinements;
  if (estimator_uses_seed(o.estimator)) p.seed = require_seed(o, "estimator '" + o.estimator + "' is randomized");
  return p;
}

LocationEstimator estimator_for(const Options& o) {
  const auto& names = estimator_names();
  if (std::find(names.begin(), names.end(), o.estimator) == names.end())
    throw EstimatorError("unknown estimator '" + o.estimator + "'");
  return make_estimator(o.estimator, estimator_params(o));
}

Json estimator_config(const Options& o) {
  Json c{{"estimator", o.estimator}, {"scale_shift", o.scale_shift}, {"weights", o.weights}};
  c["coverage"] = o.coverage ? Json(*o.coverage) : Json(nullptr);
  c["trim"] = o.trim ? Json(*o.trim) : Json(nullptr);
  if (estimator_uses_seed(o.estimator)) {
    c["directions"] = o.directions;
    if (o.estimator == "pm") c["grid_refinements"] = o.grid_refinements;
  }
  return c;
}

// wraps a result with the seed and a hash of everything that shaped it
Json finish(const std::string& command, Json config, Json body, const Options& o, const DataSet* x) {
  config["command"] = command;
  config["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  if (x) config["data"] = to_csv(*x);
  body["command"] = command;
  body["seed"] = config["seed"];
  body["config_hash"] = report::config_hash(config);
  if (x) {
    body["n"] = x->size();
    body["k"] = x->dim();
  }
  return body;
}

Json cmd_estimate(const Options& o) {
  const DataSet x = load_csv(o.data);
  const auto t = estimator_for(o);
  const auto start = std::chrono::steady_clock::now();
  const EstimateSet est = t(x);
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  Json body{{"estimator", t.name()}, {"equivariance", to_string(t.equivariance())}, {"estimate", report::to_json(est)}};
  if (o.estimator == "mcd") body["objective"] = mcd_exhaustive(x, o.coverage).objective;
  if (o.timing) body["runtime_ms"] = elapsed;
  return finish("estimate", estimator_config(o), body, o, &x);
}

PartitionRule partition_rule(const std::string& s) {
  if (s == "largest") return PartitionRule::largest_projection;
  if (s == "smallest") return PartitionRule::smallest_projection;
  throw ParameterError("--partition must be 'largest' or 'smallest'");
}

void write_curve(const std::string& path, const AttackTrace& tr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  for (const auto& r : tr.records) out << num(r.parameter) << ',' << num(r.distance) << '\n';
}

Json cmd_attack(const Options& o) {
  const DataSet x = load_csv(o.data);
  const auto t = estimator_for(o);
  Json config = estimator_config(o);
  config["family"] = o.family;
  config["threshold_factor"] = o.threshold_factor;
  AttackTrace tr;
  if (o.family == "shear") {
    ShearAttackConfig cfg;
    cfg.h = o.h.value_or(x.dim());
    cfg.m = o.m;
    if (o.m && *o.m > x.size()) throw ParameterError("m exceeds n");
    cfg.gamma_grid = o.gamma_grid;
    cfg.partition = partition_rule(o.partition);
    cfg.facet_choice = o.facet;
    cfg.subset_choice = o.subset;
    cfg.threshold_factor = o.threshold_factor;
    config.update({{"h", cfg.h}, {"grid", cfg.gamma_grid}, {"partition", o.partition}, {"facet", o.facet}, {"subset", o.subset}});
    config["m"] = o.m ? Json(*o.m) : Json(nullptr);
    tr = shear_attack(t, x, cfg);
  } else if (o.family == "translation") {
    TranslationAttackConfig cfg;
    cfg.m = o.m.value_or((x.size() + 1) / 2);
    cfg.radius_grid = o.radius_grid;
    cfg.threshold_factor = o.threshold_factor;
    if (!o.direction.empty())
      cfg.direction = UnitDirection::normalized(Eigen::Map<const Vector>(o.direction.data(), static_cast<Eigen::Index>(o.direction.size())));
    config.update({{"m", cfg.m}, {"grid", cfg.radius_grid}, {"direction", o.direction}});
    tr = translation_cluster_attack(t, x, cfg);
  } else {
    throw ParameterError("--family must be 'shear' or 'translation'");
  }
  if (!o.curve.empty()) write_curve(o.curve, tr);
  return finish("attack", config, report::to_json(tr), o, &x);
}

Json cmd_fsbv(const Options& o) {
  const DataSet x = load_csv(o.data);
  const auto t = estimator_for(o);
  AttackSuite suite;
  suite.gamma_grid = o.gamma_grid;
  suite.radius_grid = o.radius_grid;
  suite.facet_budget = o.facet_budget;
  suite.complementary_partition = !o.single_partition;
  suite.random_translation_directions = o.translation_directions;
  suite.max_m = o.max_m;
  if (x.dim() > 1 && o.translation_directions > 0) suite.seed = require_seed(o, "random translation directions");
  Json config = estimator_config(o);
  config.update({{"gamma_grid", suite.gamma_grid},
                 {"radius_grid", suite.radius_grid},
                 {"facet_budget", suite.facet_budget},
                 {"complementary_partition", suite.complementary_partition},
                 {"translation_directions", suite.random_translation_directions},
                 {"threshold_factor", o.threshold_factor}});
  config["max_m"] = o.max_m ? Json(*o.max_m) : Json(nullptr);
  Json body = report::to_json(empirical_fsbv(t, x, suite, o.threshold_factor));
  body["estimator"] = t.name();
  if (x.size() > x.dim()) {
    const auto n = static_cast<std::int64_t>(x.size()), k = static_cast<std::int64_t>(x.dim());
    body["bounds"] = report::to_json(theoretical_bounds(n, k, k));
  }
  return finish("fsbv", config, body, o, &x);
}

Json cmd_bounds(const Options& o) {
  const auto b = theoretical_bounds(o.n, o.k, o.bh);
  Json config{{"n", o.n}, {"k", o.k}, {"h", o.bh}};
  Json body = report::to_json(b);
  body.update({{"n", o.n}, {"k", o.k}, {"h", o.bh}});
  return finish("bounds", config, body, o, nullptr);
}

Json cmd_depth(const Options& o) {
  const DataSet x = load_csv(o.data);
  if (o.point.size() != x.dim()) throw ParameterError("--point must have one coordinate per column");
  const Vector p = Eigen::Map<const Vector>(o.point.data(), static_cast<Eigen::Index>(o.point.size()));
  DepthMode mode;
  if (o.mode == "exact" || (o.mode == "auto" && x.dim() == 2))
    mode = DepthMode::exact2d;
  else if (o.mode == "sampled" || o.mode == "auto")
    mode = DepthMode::sampled;
  else
    throw ParameterError("--mode must be 'auto', 'exact' or 'sampled'");
  const bool stochastic = mode == DepthMode::sampled || o.with_outlyingness;
  const std::uint64_t seed = stochastic ? require_seed(o, "sampled directions") : 0;
  const DirectionBudget budget(seed, o.directions);
  Json config{{"point", o.point}, {"mode", mode == DepthMode::exact2d ? "exact2d" : "sampled"}, {"outlyingness", o.with_outlyingness}};
  Json body{{"point", o.point},
            {"mode", config["mode"]},
            {"tukey_depth", tukey_depth(p, x, mode, budget)},
            {"depth_kind", mode == DepthMode::exact2d ? "exact" : "upper bound"}};
  if (o.with_outlyingness) {
    config.update({{"scale_shift", o.scale_shift}, {"directions", o.directions}});
    const double out = outlyingness(p, x, o.scale_shift, budget);
    body["outlyingness"] = std::isinf(out) ? Json("inf") : Json(out);
    body["scale_shift"] = o.scale_shift;
  } else if (mode == DepthMode::sampled) {
    config["directions"] = o.directions;
  }
  return finish("depth", config, body, o, &x);
}

Json cmd_condition(const Options& o) {
  const DataSet x = load_csv(o.data);
  const auto t = estimator_for(o);
  const std::size_t h = o.h.value_or(x.dim());
  ConditionOptions copt;
  copt.probes_per_face = o.probes_per_face;
  if (h < x.dim()) copt.seed = require_seed(o, "normal-cone sampling for h < k");
  Json config = estimator_config(o);
  config.update({{"h", h}, {"probes_per_face", o.probes_per_face}, {"depth", o.with_depth}});
  Json body{{"estimator", t.name()}, {"condition", report::to_json(condition_margin(t, x, h, copt))}};
  if (o.with_depth) {
    const std::uint64_t dseed = x.dim() == 2 ? o.seed.value_or(0) : require_seed(o, "sampled depth for k != 2");
    body["depth_condition"] = report::to_json(depth_condition(t, x, DirectionBudget(dseed, o.directions), copt));
  }
  return finish("condition", config, body, o, &x);
}

Json cmd_metric(const Options& o) {
  Json config{{"x", o.xs}, {"y", o.ys}};
  Json body{{"x", o.xs}, {"y", o.ys}, {"distance", sample_distance(o.xs, o.ys)}};
  return finish("metric", config, body, o, nullptr);
}

Json cmd_scenario_pm(const Options& o) {
  const std::uint64_t seed = require_seed(o, "counterexample noise and projection directions");
  for (double d : o.deltas)
    if (!(d > 0.0 && d < 1.0)) throw ParameterError("every delta must lie in (0, 1)");
  EstimatorParams p;
  p.scale_shift = o.pm_shift;
  p.seed = seed;
  p.random_directions = o.directions;
  p.grid_refinements = o.grid_refinements;
  const auto pm = make_estimator("pm", p);
  Json rows = Json::array();
  for (double d : o.deltas) {
    const DataSet z = pm_counterexample(o.pm_m, d, o.noise, seed);
    const EstimateSet est = pm(z);
    const double out0 = outlyingness(Vector::Zero(2), z, o.pm_shift, DirectionBudget(seed, o.directions));
    rows.push_back({{"delta", d},
                    {"pm", report::to_json(est)},
                    {"pm_norm", est.canonical().norm()},
                    {"out_origin", std::isinf(out0) ? Json("inf") : Json(out0)},
                    {"condition_margin", condition_margin(pm, z, 2).min_margin}});
  }
  Json config{{"m", o.pm_m}, {"deltas", o.deltas}, {"noise_scale", o.noise}, {"scale_shift", o.pm_shift},
              {"directions", o.directions}, {"grid_refinements", o.grid_refinements}};
  Json body{{"m", o.pm_m}, {"n", 2 * o.pm_m + 2}, {"noise_scale", o.noise}, {"scale_shift", o.pm_shift}, {"rows", rows}};
  return finish("scenario-pm", config, body, o, nullptr);
}

void add_estimator_options(CLI::App* c, Options& o) {
  c->add_option("data", o.data, "CSV dataset, one point per row")->required();
  c->add_option("-e,--estimator", o.estimator, "cmedian | mcd | tmean | pm | wmean");
  c->add_option("--coverage", o.coverage, "MCD subset size");
  c->add_option("--trim", o.trim, "points trimmed by the trimmed mean");
  c->add_option("--weights", o.weights, "weighted-mean weights")->delimiter(',');
  c->add_option("--scale-shift", o.scale_shift, "MAD order shift for tmean/pm");
  c->add_option("--directions", o.directions, "random projection directions");
  c->add_option("--grid-refinements", o.grid_refinements, "projection-median grid passes");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Robust location estimators and breakdown experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "seed for every randomized step");

  auto* est = app.add_subcommand("estimate", "evaluate an estimator on a dataset");
  add_estimator_options(est, o);
  est->add_flag("--timing", o.timing, "include wall-clock runtime (output no longer byte-stable)");

  auto* atk = app.add_subcommand("attack", "run one contamination family");
  add_estimator_options(atk, o);
  atk->add_option("--family", o.family, "shear | translation");
  atk->add_option("--tied", o.h, "points kept on the hyperplane (shear)");
  atk->add_option("-m,--m", o.m, "replacement count");
  atk->add_option("--gamma-grid", o.gamma_grid, "shear parameters")->delimiter(',');
  atk->add_option("--radius-grid", o.radius_grid, "translation radii")->delimiter(',');
  atk->add_option("--partition", o.partition, "largest | smallest");
  atk->add_option("--facet", o.facet, "admissible facet rank");
  atk->add_option("--subset", o.subset, "h-subset rank within the facet");
  atk->add_option("--direction", o.direction, "translation direction")->delimiter(',');
  atk->add_option("--threshold-factor", o.threshold_factor, "divergence threshold in data diameters");
  atk->add_option("--emit-curve", o.curve, "write parameter,distance rows to this CSV");

  auto* fsbv = app.add_subcommand("fsbv", "certify an empirical breakdown value");
  add_estimator_options(fsbv, o);
  fsbv->add_option("--max-m", o.max_m, "largest replacement count tried");
  fsbv->add_option("--facet-budget", o.facet_budget, "facets tried per h (0: all)");
  fsbv->add_flag("--single-partition", o.single_partition, "skip the complementary partition rule");
  fsbv->add_option("--translation-directions", o.translation_directions, "extra random translation directions");
  fsbv->add_option("--gamma-grid", o.gamma_grid, "shear parameters")->delimiter(',');
  fsbv->add_option("--radius-grid", o.radius_grid, "translation radii")->delimiter(',');
  fsbv->add_option("--threshold-factor", o.threshold_factor, "divergence threshold in data diameters");

  auto* bnd = app.add_subcommand("bounds", "theoretical breakdown bounds");
  bnd->add_option("n", o.n, "sample size")->required();
  bnd->add_option("k", o.k, "dimension")->required();
  bnd->add_option("tied", o.bh, "points tied in the boundary condition")->required();

  auto* dep = app.add_subcommand("depth", "Tukey depth and outlyingness of a point");
  dep->add_option("data", o.data)->required();
  dep->add_option("--point", o.point, "query point")->delimiter(',')->required();
  dep->add_option("--mode", o.mode, "auto | exact | sampled");
  dep->add_flag("--outlyingness", o.with_outlyingness, "also report projection outlyingness");
  dep->add_option("--scale-shift", o.scale_shift, "MAD order shift");
  dep->add_option("--directions", o.directions, "random directions");

  auto* cond = app.add_subcommand("condition", "boundary condition margins");
  add_estimator_options(cond, o);
  cond->add_option("--tied", o.h, "tied points (default k)");
  cond->add_option("--probes-per-face", o.probes_per_face, "sampled directions per face for h < k");
  cond->add_flag("--depth", o.with_depth, "also check the depth condition");

  auto* met = app.add_subcommand("metric", "distance between two univariate samples");
  met->add_option("--x", o.xs)->delimiter(',')->required();
  met->add_option("--y", o.ys)->delimiter(',')->required();

  auto* pm = app.add_subcommand("scenario-pm", "projection-median counterexample sweep");
  pm->add_option("-m,--m", o.pm_m, "points per arm");
  pm->add_option("--deltas", o.deltas)->delimiter(',');
  pm->add_option("--noise", o.noise, "noise scale");
  pm->add_option("--scale-shift", o.pm_shift, "MAD order shift");
  pm->add_option("--directions", o.directions, "random directions");
  pm->add_option("--grid-refinements", o.grid_refinements, "grid passes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Exit::parameter;
  }

  try {
    Json out;
    if (*est) out = cmd_estimate(o);
    else if (*atk) out = cmd_attack(o);
    else if (*fsbv) out = cmd_fsbv(o);
    else if (*bnd) out = cmd_bounds(o);
    else if (*dep) out = cmd_depth(o);
    else if (*cond) out = cmd_condition(o);
    else if (*met) out = cmd_metric(o);
    else out = cmd_scenario_pm(o);
    std::cout << out.dump(2) << '\n';
    return Exit::ok;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return Exit::input;
  } catch (const GeometryError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return Exit::input;
  } catch (const EstimatorError& e) {
    std::cerr << "estimator error: " << e.what() << '\n';
    return Exit::estimator;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return Exit::parameter;
  }
}
