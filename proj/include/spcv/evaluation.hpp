#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spcv/forest.hpp"
#include "spcv/grid.hpp"
#include "spcv/landscape.hpp"
#include "spcv/resampling.hpp"

namespace spcv {

double rmse(const std::vector<double>& y, const std::vector<double>& y_hat);

// Extracts named predictor columns ("X1".."X13") from a landscape, column-major.
FeatureMatrix features_for(const Landscape& land, const std::vector<std::string>& names);

struct RunResult {
  Method method = Method::Resubstitution;
  PlanParams params;
  int landscape_id = 0;
  int fold_id = 0;
  double rmse = 0.0;
  int n_assessment = 0;
  int n_analysis = 0;
};

struct TargetRange {
  double p05 = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  long source_values = 0;
};

TargetRange target_range_from(const std::vector<double>& values);

struct IdealDistribution {
  TargetRange target;
  std::vector<double> values;  // all n*(n-1) cross-landscape RMSEs
};

// Per fold: fit on the analysis rows, predict the assessment rows, record RMSE.
// Fold f uses forest seed substream_seed(config.seed, f).
std::vector<RunResult> cross_validate(const Landscape& land, const ResamplingPlan& plan,
                                      const ForestConfig& config, int landscape_id = 0);

// One forest per landscape (seed substream_seed(config.seed, landscape index)),
// scored against every other landscape; the pooled values define the target range.
IdealDistribution ideal_rmse_distribution(const std::vector<Landscape>& landscapes,
                                          const ForestConfig& config);

// CV estimate for one landscape: unweighted mean of its fold RMSEs.
double landscape_estimate(const std::vector<RunResult>& fold_results);

// Fraction of estimates inside [target.p05, target.p95].
double success_rate(const std::vector<double>& estimates, const TargetRange& target);

// ---- sweep harness ----

struct MethodGrid {
  bool include_resubstitution = false;
  std::vector<int> vfold_v;
  std::vector<double> block_sizes;
  std::vector<BlockingMethod> blocked_blockings;
  std::vector<int> blocked_v;  // 0 = leave-one-block-out
  std::vector<double> blocked_buffers;
  std::vector<int> clustered_v;
  std::vector<ClusterFunction> cluster_functions;
  std::vector<double> clustered_buffers;
  std::vector<double> blo3_buffers;
  std::vector<double> lodo_radii;
  std::vector<double> lodo_buffers;
};

struct SweepConfig {
  int n_landscapes = 100;
  GridSpec grid;
  ForestConfig forest;
  MethodGrid grids;
  uint64_t master_seed = 1;
  bool include_ideal = true;
};

// The benchmark protocol at full size: 100 landscapes on a 50x50
// grid, 500 trees, the complete parameter grids.
SweepConfig full_profile(uint64_t master_seed);

// Workstation-sized variant: 25x25 grid, 20 landscapes, 100 trees, thinned
// parameter grids chosen to preserve every comparison the acceptance gate
// checks.
SweepConfig desk_profile(uint64_t master_seed);

// Stable text identity of one parameter combination, e.g. "v=10,cf=kmeans,buf=0.15".
std::string param_signature(Method method, const PlanParams& params);

// All (method, params) combinations of the grids in canonical order.
std::vector<std::pair<Method, PlanParams>> enumerate_combos(const MethodGrid& grids);

// Planned iteration counts per method (combos x landscapes), canonical order.
std::vector<std::pair<std::string, long>> plan_iterations(const SweepConfig& config);

uint64_t landscape_seed(uint64_t master, int landscape_id);
uint64_t cell_seed(uint64_t master, Method method, const PlanParams& params, int landscape_id);

// Builds the plan for one sweep cell; also backs the resample command.
ResamplingPlan make_plan(Method method, const PlanParams& params, const std::vector<Point>& centers,
                         uint64_t seed, const DistanceMatrix* dm = nullptr);

struct SweepOutcome {
  long executed_cells = 0;
  long skipped_cells = 0;  // found complete in the store
  long failed_cells = 0;   // recorded in failures.csv (includes prior runs)
};

// Executes every (method x params x landscape) cell into out_dir:
//   raw_results.csv   method,v,block_size,blocking_method,cluster_function,buffer,radius,
//                     landscape_id,fold_id,rmse,n_assessment,n_analysis
//   summary.csv       method,param_signature,mean_rmse,sd_rmse,pct_in_target,n_iterations
//   failures.csv      method,param_signature,landscape_id,reason
//   target_range.csv  p05,p95,mean,sd,source_values
// Cells already present in the store are skipped; each cell's rows are appended
// in a single write and the store is rewritten in canonical order at the end,
// so the final files are byte-identical for any worker count or interruption
// pattern. Worker threads only ever pick up whole cells.
SweepOutcome run_sweep(const SweepConfig& config, const std::string& out_dir, int jobs = 1,
                       bool verbose = false);

}  // namespace spcv
