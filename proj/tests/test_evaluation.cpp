#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spcv/csv.hpp"
#include "spcv/errors.hpp"
#include "spcv/evaluation.hpp"
#include "spcv/rng.hpp"

using namespace spcv;

namespace {

GridSpec grid_of(int side) {
  GridSpec grid;
  grid.side_cells = side;
  return grid;
}

ForestConfig quick_forest(uint64_t seed) {
  ForestConfig config;
  config.n_trees = 20;
  config.min_node_size = 5;
  config.mtry = 2;
  config.seed = seed;
  return config;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Sweep small enough to run in a blink but touching four methods.
SweepConfig micro_sweep(uint64_t master_seed, int n_landscapes) {
  SweepConfig c;
  c.n_landscapes = n_landscapes;
  c.grid = grid_of(6);
  c.forest = quick_forest(0);
  c.forest.n_trees = 10;
  c.master_seed = master_seed;
  c.include_ideal = true;
  c.grids.include_resubstitution = true;
  c.grids.vfold_v = {2};
  c.grids.block_sizes = {0.25};
  c.grids.blocked_blockings = {BlockingMethod::Random};
  c.grids.blocked_v = {0};
  c.grids.blocked_buffers = {0.0};
  c.grids.blo3_buffers = {0.0};
  return c;
}

std::vector<std::string> file_lines(const std::string& path) {
  std::string text = read_text_file(path);
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

TEST_CASE("rmse closed forms") {
  CHECK(rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(rmse({0.0, 0.0}, {0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rmse({0.0, 0.0, 0.0}, {1.0, -1.0, 0.0}) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(rmse({}, {}), ParamError);
  CHECK_THROWS_AS(rmse({1.0}, {1.0, 2.0}), ParamError);
}

TEST_CASE("feature extraction picks the named columns") {
  Landscape land;
  land.grid = grid_of(2);
  for (int k = 1; k <= 13; ++k) {
    land.field(k) = {k + 0.1, k + 0.2, k + 0.3, k + 0.4};
  }
  land.y = {0, 0, 0, 0};

  FeatureMatrix X = features_for(land, {"X2", "X13", "X1"});
  REQUIRE(X.size() == 3);
  CHECK(X[0] == land.field(2));
  CHECK(X[1] == land.field(13));
  CHECK(X[2] == land.field(1));

  CHECK_THROWS_AS(features_for(land, {"X0"}), ParamError);
  CHECK_THROWS_AS(features_for(land, {"X14"}), ParamError);
  CHECK_THROWS_AS(features_for(land, {"y"}), ParamError);
  CHECK_THROWS_AS(features_for(land, {"X1a"}), ParamError);
  CHECK_THROWS_AS(features_for(land, {"X"}), ParamError);
}

TEST_CASE("target range summarizes the value distribution") {
  std::vector<double> values(100);
  for (int i = 0; i < 100; ++i) values[i] = i + 1.0;
  TargetRange t = target_range_from(values);
  CHECK(t.p05 == doctest::Approx(5.95).epsilon(1e-12));
  CHECK(t.p95 == doctest::Approx(95.05).epsilon(1e-12));
  CHECK(t.mean == doctest::Approx(50.5).epsilon(1e-12));
  CHECK(t.sd == doctest::Approx(std::sqrt(83325.0 / 99.0)).epsilon(1e-12));
  CHECK(t.source_values == 100);

  TargetRange single = target_range_from({2.5});
  CHECK(single.p05 == 2.5);
  CHECK(single.p95 == 2.5);
  CHECK(single.sd == 0.0);
  CHECK_THROWS_AS(target_range_from({}), ParamError);

  Rng rng(5);
  std::vector<double> noise(40);
  for (double& v : noise) v = rng.normal();
  TargetRange nt = target_range_from(noise);
  CHECK(nt.p05 <= nt.mean);
  CHECK(nt.mean <= nt.p95);
}

TEST_CASE("success rate honors inclusive bounds") {
  TargetRange t;
  t.p05 = 0.2;
  t.p95 = 0.8;
  CHECK(success_rate({0.2, 0.5, 0.8}, t) == 1.0);
  CHECK(success_rate({0.1, 0.9}, t) == 0.0);
  CHECK(success_rate({0.5, 1.5}, t) == 0.5);
  CHECK_THROWS_AS(success_rate({}, t), ParamError);
}

TEST_CASE("cross validation scores every fold of the plan") {
  GridSpec grid = grid_of(8);
  Landscape land = simulate_landscape(grid, 31415);
  ForestConfig config = quick_forest(777);

  SUBCASE("resubstitution gives one in-sample result") {
    auto results = cross_validate(land, resubstitution_plan(64), config, 9);
    REQUIRE(results.size() == 1);
    CHECK(results[0].method == Method::Resubstitution);
    CHECK(results[0].landscape_id == 9);
    CHECK(results[0].fold_id == 0);
    CHECK(results[0].n_assessment == 64);
    CHECK(results[0].n_analysis == 64);
    CHECK(results[0].rmse > 0.0);
    CHECK(std::isfinite(results[0].rmse));
  }

  SUBCASE("vfold results carry per-fold bookkeeping") {
    ResamplingPlan plan = vfold(64, 4, 11);
    auto results = cross_validate(land, plan, config);
    REQUIRE(results.size() == 4);
    for (int f = 0; f < 4; ++f) {
      CHECK(results[f].fold_id == f);
      CHECK(results[f].n_assessment == 16);
      CHECK(results[f].n_analysis == 48);
      CHECK(results[f].rmse > 0.0);
    }
    // held-out error normally exceeds the in-sample error
    auto resub = cross_validate(land, resubstitution_plan(64), config);
    CHECK(landscape_estimate(results) > resub[0].rmse);
  }

  SUBCASE("repeat runs are bit-identical") {
    ResamplingPlan plan = vfold(64, 4, 11);
    auto a = cross_validate(land, plan, config);
    auto b = cross_validate(land, plan, config);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].rmse == b[i].rmse);
  }

  SUBCASE("a plan written to disk evaluates identically") {
    auto dir = fresh_dir("spcv_eval_plan");
    ResamplingPlan plan =
        block_cv(cell_centers(grid), 0.25, 0, BlockingMethod::Random, 0.1, 99);
    std::string path = (dir / "plan.csv").string();
    write_plan_csv(plan, path);
    ResamplingPlan back = read_plan_csv(path);
    auto a = cross_validate(land, plan, config);
    auto b = cross_validate(land, back, config);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].rmse == b[i].rmse);
    std::filesystem::remove_all(dir);
  }

  SUBCASE("plan size must match the landscape") {
    CHECK_THROWS_AS(cross_validate(land, resubstitution_plan(9), config), ParamError);
  }
}

TEST_CASE("the ideal distribution pools all ordered landscape pairs") {
  GridSpec grid = grid_of(8);
  std::vector<Landscape> lands;
  for (int l = 0; l < 3; ++l) lands.push_back(simulate_landscape(grid, 5000 + l));
  ForestConfig config = quick_forest(2);

  IdealDistribution ideal = ideal_rmse_distribution(lands, config);
  CHECK(ideal.values.size() == 6);
  for (double v : ideal.values) CHECK(v > 0.0);
  CHECK(ideal.target.source_values == 6);
  CHECK(ideal.target.p05 <= ideal.target.mean);
  CHECK(ideal.target.mean <= ideal.target.p95);

  IdealDistribution again = ideal_rmse_distribution(lands, config);
  CHECK(again.values == ideal.values);

  CHECK_THROWS_AS(ideal_rmse_distribution({lands[0]}, config), ParamError);
  std::vector<Landscape> mixed = {lands[0], simulate_landscape(grid_of(6), 1)};
  CHECK_THROWS_AS(ideal_rmse_distribution(mixed, config), ParamError);
}

TEST_CASE("landscape estimate averages fold RMSEs") {
  std::vector<RunResult> results(3);
  results[0].rmse = 0.2;
  results[1].rmse = 0.4;
  results[2].rmse = 0.9;
  CHECK(landscape_estimate(results) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(landscape_estimate({}), ParamError);
}

TEST_CASE("parameter signatures are stable text") {
  PlanParams p;
  CHECK(param_signature(Method::Resubstitution, p) == "-");

  p.v = 10;
  CHECK(param_signature(Method::VFold, p) == "v=10");

  PlanParams b;
  b.block_size = 1.0 / 9;
  b.blocking = BlockingMethod::Random;
  b.v = 0;
  b.buffer = 0.24;
  CHECK(param_signature(Method::Blocked, b) == "bs=1/9,bm=random,v=lobo,buf=0.24");
  b.v = 5;
  b.block_size = 0.5;
  b.blocking = BlockingMethod::SystematicSnake;
  b.buffer = 0.0;
  CHECK(param_signature(Method::Blocked, b) == "bs=1/2,bm=snake,v=5,buf=0.00");

  PlanParams c;
  c.v = 10;
  c.cluster = ClusterFunction::KMeans;
  c.buffer = 0.15;
  CHECK(param_signature(Method::Clustered, c) == "v=10,cf=kmeans,buf=0.15");

  PlanParams blo;
  blo.buffer = 0.0;
  CHECK(param_signature(Method::BLO3, blo) == "buf=0.00");

  PlanParams lodo;
  lodo.radius = 0.06;
  lodo.buffer = 0.12;
  CHECK(param_signature(Method::LODO, lodo) == "rad=0.06,buf=0.12");
}

TEST_CASE("combo enumeration follows the declared order") {
  SweepConfig desk = desk_profile(1);
  auto combos = enumerate_combos(desk.grids);
  REQUIRE(combos.size() == 31);
  CHECK(combos[0].first == Method::Resubstitution);
  CHECK(combos[1].first == Method::VFold);
  CHECK(combos[1].second.v == 2);
  CHECK(combos[4].second.v == 20);
  CHECK(combos[5].first == Method::Blocked);
  CHECK(combos[5].second.block_size == doctest::Approx(1.0 / 25).epsilon(1e-15));
  CHECK(combos[5].second.buffer == 0.0);
  CHECK(combos[6].second.buffer == 0.09);
  CHECK(combos[14].first == Method::Clustered);
  CHECK(combos[22].first == Method::BLO3);
  CHECK(combos[27].first == Method::LODO);
  CHECK(combos[30].second.radius == 0.15);
  CHECK(combos[30].second.buffer == 0.12);

  auto full = enumerate_combos(full_profile(1).grids);
  CHECK(full.size() == 319);
}

TEST_CASE("planned iteration counts at the full profile") {
  auto plan = plan_iterations(full_profile(7));
  REQUIRE(plan.size() == 6);
  CHECK(plan[0] == std::pair<std::string, long>{"resubstitution", 100});
  CHECK(plan[1] == std::pair<std::string, long>{"vfold", 400});
  CHECK(plan[2] == std::pair<std::string, long>{"blocked", 8800});
  CHECK(plan[3] == std::pair<std::string, long>{"clustered", 8800});
  CHECK(plan[4] == std::pair<std::string, long>{"blo3", 1700});
  CHECK(plan[5] == std::pair<std::string, long>{"lodo", 12100});

  auto desk = plan_iterations(desk_profile(7));
  REQUIRE(desk.size() == 6);
  CHECK(desk[0].second == 20);
  CHECK(desk[1].second == 80);
  CHECK(desk[2].second == 180);
  CHECK(desk[3].second == 160);
  CHECK(desk[4].second == 100);
  CHECK(desk[5].second == 80);
}

TEST_CASE("seed derivations are deterministic and well separated") {
  CHECK(landscape_seed(1, 0) == landscape_seed(1, 0));
  CHECK(landscape_seed(1, 0) != landscape_seed(1, 1));
  CHECK(landscape_seed(1, 0) != landscape_seed(2, 0));

  PlanParams a;
  a.buffer = 0.0;
  PlanParams b;
  b.buffer = 0.12;
  CHECK(cell_seed(1, Method::BLO3, a, 0) == cell_seed(1, Method::BLO3, a, 0));
  CHECK(cell_seed(1, Method::BLO3, a, 0) != cell_seed(1, Method::BLO3, b, 0));
  CHECK(cell_seed(1, Method::BLO3, a, 0) != cell_seed(1, Method::BLO3, a, 1));
  CHECK(cell_seed(1, Method::BLO3, a, 0) != cell_seed(1, Method::LODO, a, 0));
}

TEST_CASE("make_plan labels the plan as requested") {
  auto centers = cell_centers(grid_of(5));
  PlanParams p;
  ResamplingPlan resub = make_plan(Method::Resubstitution, p, centers, 3);
  CHECK(resub.method == Method::Resubstitution);
  CHECK(resub.folds.size() == 1);

  // a zero-radius request under the lodo label keeps the lodo label
  PlanParams lodo;
  lodo.radius = 0.0;
  lodo.buffer = 0.0;
  ResamplingPlan plan = make_plan(Method::LODO, lodo, centers, 3);
  CHECK(plan.method == Method::LODO);
  CHECK(plan.folds.size() == 25);

  PlanParams vf;
  vf.v = 5;
  ResamplingPlan v = make_plan(Method::VFold, vf, centers, 3);
  CHECK(v.method == Method::VFold);
  CHECK(v.seed == 3);
  CHECK(v.folds.size() == 5);
}

TEST_CASE("the sweep store executes, resumes, and aggregates") {
  SweepConfig config = micro_sweep(20240817, 2);
  auto dir = fresh_dir("spcv_sweep_a");
  std::string out = dir.string();

  SweepOutcome first = run_sweep(config, out);
  CHECK(first.executed_cells == 8);
  CHECK(first.skipped_cells == 0);
  CHECK(first.failed_cells == 0);

  auto raw = file_lines(out + "/raw_results.csv");
  REQUIRE(!raw.empty());
  CHECK(raw[0] ==
        "method,v,block_size,blocking_method,cluster_function,buffer,radius,landscape_id,"
        "fold_id,rmse,n_assessment,n_analysis");
  // per landscape: 1 resubstitution + 2 vfold + 4 blocked + 36 blo3 folds
  CHECK(raw.size() == 1 + 2 * (1 + 2 + 4 + 36));

  auto summary = file_lines(out + "/summary.csv");
  REQUIRE(summary.size() == 6);  // header, ideal, four combos
  CHECK(summary[0] == "method,param_signature,mean_rmse,sd_rmse,pct_in_target,n_iterations");
  CHECK(split_csv_line(summary[1])[0] == "ideal");
  CHECK(split_csv_line(summary[1])[5] == "2");  // n*(n-1) pooled values
  CHECK(split_csv_line(summary[2])[0] == "resubstitution");
  CHECK(split_csv_line(summary[3])[0] == "vfold");
  CHECK(split_csv_line(summary[4])[0] == "blocked");
  CHECK(split_csv_line(summary[5])[0] == "blo3");
  for (int i = 2; i < 6; ++i) CHECK(split_csv_line(summary[i])[5] == "2");

  auto target = file_lines(out + "/target_range.csv");
  REQUIRE(target.size() == 2);
  CHECK(target[0] == "p05,p95,mean,sd,source_values");

  auto failures = file_lines(out + "/failures.csv");
  REQUIRE(failures.size() == 1);
  CHECK(failures[0] == "method,param_signature,landscape_id,reason");

  SUBCASE("a second run skips everything and leaves identical bytes") {
    std::string raw_before = read_text_file(out + "/raw_results.csv");
    std::string summary_before = read_text_file(out + "/summary.csv");
    SweepOutcome second = run_sweep(config, out);
    CHECK(second.executed_cells == 0);
    CHECK(second.skipped_cells == 8);
    CHECK(second.failed_cells == 0);
    CHECK(read_text_file(out + "/raw_results.csv") == raw_before);
    CHECK(read_text_file(out + "/summary.csv") == summary_before);
  }

  SUBCASE("worker count does not change the store") {
    auto dir4 = fresh_dir("spcv_sweep_jobs");
    run_sweep(config, dir4.string(), 4);
    CHECK(read_text_file(dir4.string() + "/raw_results.csv") ==
          read_text_file(out + "/raw_results.csv"));
    CHECK(read_text_file(dir4.string() + "/summary.csv") ==
          read_text_file(out + "/summary.csv"));
    CHECK(read_text_file(dir4.string() + "/target_range.csv") ==
          read_text_file(out + "/target_range.csv"));
    std::filesystem::remove_all(dir4);
  }

  SUBCASE("an interrupted sweep resumes into the same bytes") {
    auto dir_inc = fresh_dir("spcv_sweep_inc");
    SweepConfig half = config;
    half.n_landscapes = 1;
    run_sweep(half, dir_inc.string());
    SweepOutcome resumed = run_sweep(config, dir_inc.string());
    CHECK(resumed.executed_cells == 4);
    CHECK(resumed.skipped_cells == 4);
    CHECK(read_text_file(dir_inc.string() + "/raw_results.csv") ==
          read_text_file(out + "/raw_results.csv"));
    CHECK(read_text_file(dir_inc.string() + "/summary.csv") ==
          read_text_file(out + "/summary.csv"));
    std::filesystem::remove_all(dir_inc);
  }

  SUBCASE("summary statistics recompute from the raw rows") {
    std::map<std::string, std::map<int, std::vector<double>>> by_combo;
    for (size_t i = 1; i < raw.size(); ++i) {
      auto f = split_csv_line(raw[i]);
      REQUIRE(f.size() == 12);
      RunResult r;
      r.method = method_from_string(f[0]);
      if (!f[1].empty()) r.params.v = std::stoi(f[1]);
      if (!f[2].empty()) r.params.block_size = std::stod(f[2]);
      if (!f[3].empty()) r.params.blocking = blocking_from_string(f[3]);
      if (!f[5].empty()) r.params.buffer = std::stod(f[5]);
      if (!f[6].empty()) r.params.radius = std::stod(f[6]);
      std::string key = f[0] + "," + param_signature(r.method, r.params);
      by_combo[key][std::stoi(f[7])].push_back(std::stod(f[9]));
    }
    for (size_t i = 2; i < summary.size(); ++i) {
      auto f = split_csv_line(summary[i]);
      std::string key = f[0] + "," + f[1];
      REQUIRE(by_combo.count(key));
      std::vector<double> estimates;
      for (auto& [lid, rmses] : by_combo[key]) {
        double s = 0.0;
        for (double v : rmses) s += v;
        estimates.push_back(s / rmses.size());
      }
      double mean = 0.0;
      for (double e : estimates) mean += e;
      mean /= estimates.size();
      double ss = 0.0;
      for (double e : estimates) ss += (e - mean) * (e - mean);
      double sd = estimates.size() > 1 ? std::sqrt(ss / (estimates.size() - 1)) : 0.0;
      CHECK(std::stod(f[2]) == doctest::Approx(mean).epsilon(1e-12));
      CHECK(std::stod(f[3]) == doctest::Approx(sd).epsilon(1e-12).scale(1.0));

      auto tf = split_csv_line(target[1]);
      double p05 = std::stod(tf[0]), p95 = std::stod(tf[1]);
      int inside = 0;
      for (double e : estimates) {
        if (e >= p05 && e <= p95) ++inside;
      }
      CHECK(std::stod(f[4]) ==
            doctest::Approx(100.0 * inside / estimates.size()).epsilon(1e-12).scale(1.0));
    }
  }

  std::filesystem::remove_all(dir);
}

TEST_CASE("infeasible cells are recorded as failures not crashes") {
  SweepConfig config = micro_sweep(7, 2);
  config.include_ideal = false;
  config.grids.include_resubstitution = false;
  config.grids.vfold_v.clear();
  config.grids.block_sizes.clear();
  config.grids.blocked_buffers.clear();
  config.grids.blo3_buffers = {1.5};  // wider than the grid diameter

  auto dir = fresh_dir("spcv_sweep_fail");
  SweepOutcome outcome = run_sweep(config, dir.string());
  CHECK(outcome.executed_cells == 0);
  CHECK(outcome.failed_cells == 2);

  auto failures = file_lines(dir.string() + "/failures.csv");
  REQUIRE(failures.size() == 3);
  for (int i = 1; i <= 2; ++i) {
    auto f = split_csv_line(failures[i]);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == "blo3");
    CHECK(f[1] == "buf=1.50");
    CHECK(!f[3].empty());
  }

  // failed cells are not retried
  SweepOutcome again = run_sweep(config, dir.string());
  CHECK(again.executed_cells == 0);
  CHECK(again.skipped_cells == 2);
  CHECK(again.failed_cells == 2);

  // no summary rows materialize for an all-failed combo
  auto summary = file_lines(dir.string() + "/summary.csv");
  CHECK(summary.size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("an empty sweep writes headers and nothing else") {
  SweepConfig config = micro_sweep(3, 0);
  auto dir = fresh_dir("spcv_sweep_empty");
  SweepOutcome outcome = run_sweep(config, dir.string());
  CHECK(outcome.executed_cells == 0);
  CHECK(outcome.skipped_cells == 0);
  CHECK(outcome.failed_cells == 0);
  CHECK(file_lines(dir.string() + "/raw_results.csv").size() == 1);
  CHECK(file_lines(dir.string() + "/summary.csv").size() == 1);
  CHECK(file_lines(dir.string() + "/failures.csv").size() == 1);
  CHECK(!std::filesystem::exists(dir.string() + "/target_range.csv"));
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(run_sweep(config, dir.string(), 0), ParamError);
}
