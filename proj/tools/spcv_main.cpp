#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spcv/csv.hpp"
#include "spcv/errors.hpp"
#include "spcv/evaluation.hpp"
#include "spcv/landscape.hpp"
#include "spcv/resampling.hpp"
#include "spcv/rng.hpp"
#include "spcv/variogram.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParam = 3;
constexpr int kExitIo = 4;

struct Settings {
  std::string config_path;
  std::string profile;  // "", "full", "desk"
  uint64_t seed = 1;
  bool seed_from_flag = false;
  int jobs = 0;  // 0 = unset
  std::string out;
};

struct ResampleArgs {
  std::string landscape_path;
  std::string method;
  int v = 0;
  double block_size = 0.0;
  std::string blocking = "random";
  std::string cluster = "kmeans";
  double buffer = 0.0;
  double radius = 0.0;
};

struct EvaluateArgs {
  std::string landscape_path;
  std::string plan_path;
  int trees = 0;  // 0 = profile default
  std::string variogram_out;
};

struct ReportArgs {
  std::string results;
  int top = 0;
};

struct SweepArgs {
  bool dry_run = false;
};

struct SimulateArgs {
  int n_landscapes = -1;  // -1 = profile default
  int side_cells = -1;
};

void add_shared(CLI::App* sub, Settings& s) {
  sub->add_option("--config", s.config_path, "flat key=value configuration file");
  sub->add_option("--seed", s.seed, "master seed; every random draw derives from it");
  sub->add_option("--jobs", s.jobs, "worker threads for sweep cells");
  sub->add_option("--profile", s.profile, "named scale: full or desk")
      ->check(CLI::IsMember({"full", "desk"}));
  sub->add_option("--out", s.out, "output file or directory");
}

// Profile defaults, then config file keys, then flags.
spcv::SweepConfig resolve_config(const Settings& s, int& jobs_out) {
  std::string profile = s.profile;
  std::map<std::string, std::string> kv;
  if (!s.config_path.empty()) {
    std::string text = spcv::read_text_file(s.config_path);
    static const std::set<std::string> known = {"profile",       "n_landscapes", "side_cells",
                                               "n_trees",       "min_node_size", "mtry",
                                               "master_seed",   "jobs"};
    size_t start = 0;
    int line_no = 0;
    while (start <= text.size()) {
      size_t nl = text.find('\n', start);
      std::string line = text.substr(start, nl == std::string::npos ? nl : nl - start);
      start = nl == std::string::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      auto trim = [](std::string& t) {
        t.erase(0, t.find_first_not_of(" \t\r"));
        t.erase(t.find_last_not_of(" \t\r") + 1);
      };
      trim(line);
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw spcv::ConfigError(s.config_path + ":" + std::to_string(line_no) +
                                ": expected key=value");
      }
      std::string key = line.substr(0, eq), value = line.substr(eq + 1);
      trim(key);
      trim(value);
      if (!known.count(key)) {
        throw spcv::ConfigError(s.config_path + ": unknown key '" + key + "'");
      }
      kv[key] = value;
    }
    if (profile.empty() && kv.count("profile")) {
      profile = kv["profile"];
      if (profile != "full" && profile != "desk") {
        throw spcv::ConfigError("profile must be 'full' or 'desk', got '" + profile + "'");
      }
    }
  }
  if (profile.empty()) profile = "desk";

  uint64_t master = s.seed;
  auto parse_u64 = [&](const std::string& key) {
    try {
      return static_cast<uint64_t>(std::stoull(kv[key]));
    } catch (const std::exception&) {
      throw spcv::ConfigError("bad value for '" + key + "': " + kv[key]);
    }
  };
  auto parse_int = [&](const std::string& key, int lo) {
    long long v;
    try {
      v = std::stoll(kv[key]);
    } catch (const std::exception&) {
      throw spcv::ConfigError("bad value for '" + key + "': " + kv[key]);
    }
    if (v < lo) throw spcv::ConfigError("'" + key + "' must be at least " + std::to_string(lo));
    return static_cast<int>(v);
  };
  if (!s.seed_from_flag && kv.count("master_seed")) master = parse_u64("master_seed");

  spcv::SweepConfig config =
      profile == "full" ? spcv::full_profile(master) : spcv::desk_profile(master);
  if (kv.count("n_landscapes")) config.n_landscapes = parse_int("n_landscapes", 0);
  if (kv.count("side_cells")) config.grid.side_cells = parse_int("side_cells", 1);
  if (kv.count("n_trees")) config.forest.n_trees = parse_int("n_trees", 1);
  if (kv.count("min_node_size")) config.forest.min_node_size = parse_int("min_node_size", 1);
  if (kv.count("mtry")) config.forest.mtry = parse_int("mtry", 1);

  jobs_out = 1;
  if (kv.count("jobs")) jobs_out = parse_int("jobs", 1);
  if (s.jobs > 0) jobs_out = s.jobs;
  return config;
}

void require_out(const Settings& s) {
  if (s.out.empty()) throw spcv::ConfigError("--out is required for this command");
}

void check_distance(const char* name, double v) {
  if (!(v >= 0.0) || v > std::sqrt(2.0)) {
    throw spcv::ParamError(std::string(name) + " must lie in [0, sqrt(2)], got " +
                           spcv::fmt_double(v));
  }
}

int cmd_simulate(const Settings& s, const SimulateArgs& a) {
  int jobs = 1;
  spcv::SweepConfig config = resolve_config(s, jobs);
  if (a.n_landscapes >= 0) config.n_landscapes = a.n_landscapes;
  if (a.side_cells > 0) config.grid.side_cells = a.side_cells;
  require_out(s);
  std::filesystem::create_directories(s.out);

  std::string manifest = "landscape_id,seed,file\n";
  for (int l = 0; l < config.n_landscapes; ++l) {
    uint64_t seed = spcv::landscape_seed(config.master_seed, l);
    spcv::Landscape land = spcv::simulate_landscape(config.grid, seed);
    char name[64];
    std::snprintf(name, sizeof(name), "landscape_%03d.csv", l);
    spcv::write_landscape_csv(land, s.out + "/" + name);
    manifest += std::to_string(l) + "," + std::to_string(seed) + "," + name + "\n";
  }
  spcv::write_text_file(s.out + "/manifest.csv", manifest);
  std::printf("wrote %d landscape(s) and manifest.csv to %s\n", config.n_landscapes,
              s.out.c_str());
  return kExitOk;
}

int cmd_resample(const Settings& s, const ResampleArgs& a) {
  int jobs = 1;
  spcv::SweepConfig config = resolve_config(s, jobs);
  require_out(s);
  check_distance("buffer", a.buffer);
  check_distance("radius", a.radius);

  spcv::Landscape land = spcv::read_landscape_csv(a.landscape_path);
  spcv::Method method = spcv::method_from_string(a.method);
  spcv::PlanParams params;
  params.v = a.v;
  params.block_size = a.block_size;
  params.blocking = spcv::blocking_from_string(a.blocking);
  params.cluster = spcv::cluster_from_string(a.cluster);
  params.buffer = a.buffer;
  params.radius = a.radius;

  std::vector<spcv::Point> centers = spcv::cell_centers(land.grid);
  std::unique_ptr<spcv::DistanceMatrix> dm;
  if (method == spcv::Method::BLO3 || method == spcv::Method::LODO) {
    dm = std::make_unique<spcv::DistanceMatrix>(centers);
  }
  spcv::ResamplingPlan plan =
      spcv::make_plan(method, params, centers,
                      spcv::substream_seed(config.master_seed, spcv::hash_label("plan")), dm.get());
  spcv::write_plan_csv(plan, s.out);
  std::printf("%s plan with %zu fold(s) -> %s\n", spcv::to_string(method).c_str(),
              plan.folds.size(), s.out.c_str());
  return kExitOk;
}

int cmd_evaluate(const Settings& s, const EvaluateArgs& a) {
  int jobs = 1;
  spcv::SweepConfig config = resolve_config(s, jobs);
  if (a.plan_path.empty() && a.variogram_out.empty()) {
    throw spcv::ConfigError("evaluate needs --plan and/or --variogram-out");
  }
  spcv::Landscape land = spcv::read_landscape_csv(a.landscape_path);

  if (!a.variogram_out.empty()) {
    std::vector<spcv::Point> centers = spcv::cell_centers(land.grid);
    spcv::EmpiricalVariogram ev = spcv::empirical_variogram(centers, land.y);
    spcv::VariogramFit fit = spcv::fit_variogram_model(ev);
    std::string bins = "bin,mean_lag,gamma,pairs\n";
    for (size_t b = 0; b < ev.bins.size(); ++b) {
      bins += std::to_string(b) + "," + spcv::fmt_double(ev.bins[b].mean_lag) + "," +
              spcv::fmt_double(ev.bins[b].gamma) + "," + std::to_string(ev.bins[b].pairs) + "\n";
    }
    spcv::write_text_file(a.variogram_out + "_bins.csv", bins);
    spcv::write_text_file(
        a.variogram_out + "_fit.csv",
        "family,nugget,psill,scale,range,wsse\n" + spcv::to_string(fit.family) + "," +
            spcv::fmt_double(fit.nugget) + "," + spcv::fmt_double(fit.psill) + "," +
            spcv::fmt_double(fit.scale) + "," + spcv::fmt_double(fit.effective_range) + "," +
            spcv::fmt_double(fit.wsse) + "\n");
    std::printf("variogram: %s fit, effective range %.4f%s\n", spcv::to_string(fit.family).c_str(),
                fit.effective_range, fit.near_nugget ? " (near-nugget)" : "");
  }

  if (!a.plan_path.empty()) {
    spcv::ResamplingPlan plan = spcv::read_plan_csv(a.plan_path);
    spcv::ForestConfig fc = config.forest;
    if (a.trees > 0) fc.n_trees = a.trees;
    fc.seed = spcv::substream_seed(config.master_seed, spcv::hash_label("forest"));
    std::vector<spcv::RunResult> results = spcv::cross_validate(land, plan, fc, 0);
    double estimate = spcv::landscape_estimate(results);
    if (!s.out.empty()) {
      std::string csv =
          "method,v,block_size,blocking_method,cluster_function,buffer,radius,landscape_id,"
          "fold_id,rmse,n_assessment,n_analysis\n";
      for (const spcv::RunResult& r : results) {
        // reuse the sweep's raw schema: method + applicable params + scores
        bool uses_v = r.method == spcv::Method::VFold || r.method == spcv::Method::Clustered ||
                      (r.method == spcv::Method::Blocked && r.params.v > 0);
        bool uses_buffer = r.method != spcv::Method::Resubstitution &&
                           r.method != spcv::Method::VFold;
        csv += spcv::to_string(r.method) + ",";
        csv += (uses_v ? std::to_string(r.params.v) : "") + ",";
        csv += (r.method == spcv::Method::Blocked ? spcv::fmt_double(r.params.block_size) : "") +
               ",";
        csv += (r.method == spcv::Method::Blocked ? spcv::to_string(r.params.blocking) : "") + ",";
        csv +=
            (r.method == spcv::Method::Clustered ? spcv::to_string(r.params.cluster) : "") + ",";
        csv += (uses_buffer ? spcv::fmt_double(r.params.buffer) : "") + ",";
        csv += (r.method == spcv::Method::LODO ? spcv::fmt_double(r.params.radius) : "") + ",";
        csv += std::to_string(r.landscape_id) + "," + std::to_string(r.fold_id) + "," +
               spcv::fmt_double(r.rmse) + "," + std::to_string(r.n_assessment) + "," +
               std::to_string(r.n_analysis) + "\n";
      }
      spcv::write_text_file(s.out, csv);
    }
    std::printf("%s: mean fold RMSE %.4f over %zu fold(s)\n",
                spcv::to_string(plan.method).c_str(), estimate, results.size());
  }
  return kExitOk;
}

int cmd_sweep(const Settings& s, const SweepArgs& a) {
  int jobs = 1;
  spcv::SweepConfig config = resolve_config(s, jobs);
  for (const auto& [label, count] : spcv::plan_iterations(config)) {
    std::printf("%s: %ld\n", label.c_str(), count);
  }
  if (a.dry_run) return kExitOk;
  require_out(s);
  spcv::SweepOutcome outcome = spcv::run_sweep(config, s.out, jobs, true);
  std::printf("executed %ld cell(s), skipped %ld already present, %ld failure(s) recorded\n",
              outcome.executed_cells, outcome.skipped_cells, outcome.failed_cells);
  return kExitOk;
}

struct SummaryRow {
  std::string method, signature, pct;
  double mean = 0.0, sd = 0.0;
  long n = 0;
};

int cmd_report(const ReportArgs& a) {
  std::string path = a.results;
  if (std::filesystem::is_directory(path)) path += "/summary.csv";
  std::string text = spcv::read_text_file(path);

  std::vector<SummaryRow> rows;
  size_t start = 0;
  bool first = true;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    std::string line = text.substr(start, nl == std::string::npos ? nl : nl - start);
    start = nl == std::string::npos ? text.size() : nl + 1;
    if (line.empty()) continue;
    std::vector<std::string> f = spcv::split_csv_line(line);
    if (first) {
      if (line != "method,param_signature,mean_rmse,sd_rmse,pct_in_target,n_iterations") {
        throw spcv::IoError(path + ": not a summary file");
      }
      first = false;
      continue;
    }
    if (f.size() != 6) throw spcv::IoError(path + ": malformed summary row");
    SummaryRow row;
    row.method = f[0];
    row.signature = f[1];
    row.mean = std::stod(f[2]);
    row.sd = std::stod(f[3]);
    row.pct = f[4];
    row.n = std::stol(f[5]);
    rows.push_back(row);
  }
  if (rows.empty()) {
    std::printf("no results\n");
    return kExitOk;
  }

  bool have_target = std::all_of(rows.begin(), rows.end(),
                                 [](const SummaryRow& r) { return !r.pct.empty(); });
  if (!have_target) {
    std::fprintf(stderr, "warning: no target-range data; RMSE columns only\n");
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    double pa = a.pct.empty() ? -1.0 : std::stod(a.pct);
    double pb = b.pct.empty() ? -1.0 : std::stod(b.pct);
    return pa > pb;
  });

  auto print_rows = [&](const std::vector<SummaryRow>& rs) {
    std::printf("%-16s %-28s %16s %12s %6s\n", "method", "params", "mean (sd) RMSE", "% in target",
                "n");
    for (const SummaryRow& r : rs) {
      char mean_sd[64];
      std::snprintf(mean_sd, sizeof(mean_sd), "%.3f (%.3f)", r.mean, r.sd);
      std::printf("%-16s %-28s %16s %12s %6ld\n", r.method.c_str(), r.signature.c_str(), mean_sd,
                  r.pct.empty() ? "-" : r.pct.substr(0, 6).c_str(), r.n);
    }
  };
  print_rows(rows);

  if (a.top > 0) {
    std::printf("\ntop %d per method by %% in target:\n", a.top);
    std::vector<SummaryRow> best;
    std::map<std::string, int> taken;
    for (const SummaryRow& r : rows) {  // rows already sorted descending
      if (taken[r.method]++ < a.top) best.push_back(r);
    }
    print_rows(best);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial cross-validation benchmark harness"};
  app.require_subcommand(1);

  Settings s;
  SimulateArgs sim_args;
  ResampleArgs res_args;
  EvaluateArgs eval_args;
  SweepArgs sweep_args;
  ReportArgs rep_args;

  CLI::App* sim = app.add_subcommand("simulate", "simulate landscapes to CSV");
  add_shared(sim, s);
  sim->add_option("--n-landscapes", sim_args.n_landscapes, "how many landscapes");
  sim->add_option("--side-cells", sim_args.side_cells, "grid side length in cells");

  CLI::App* res = app.add_subcommand("resample", "build one resampling plan");
  add_shared(res, s);
  res->add_option("--landscape", res_args.landscape_path, "landscape CSV")->required();
  res->add_option("--method", res_args.method,
                  "resubstitution|vfold|blocked|clustered|blo3|lodo")
      ->required();
  res->add_option("--v", res_args.v, "fold or cluster count (blocked: 0 = one fold per block)");
  res->add_option("--block-size", res_args.block_size, "block area fraction (1/2 or 1/k^2)");
  res->add_option("--blocking-method", res_args.blocking, "random|continuous|snake");
  res->add_option("--cluster-function", res_args.cluster, "kmeans|hierarchical");
  res->add_option("--buffer", res_args.buffer, "exclusion buffer distance");
  res->add_option("--radius", res_args.radius, "inclusion radius (lodo)");

  CLI::App* ev = app.add_subcommand("evaluate", "cross-validate a plan and/or fit a variogram");
  add_shared(ev, s);
  ev->add_option("--landscape", eval_args.landscape_path, "landscape CSV")->required();
  ev->add_option("--plan", eval_args.plan_path, "plan CSV to evaluate");
  ev->add_option("--trees", eval_args.trees, "override forest size");
  ev->add_option("--variogram-out", eval_args.variogram_out,
                 "prefix for variogram _bins.csv/_fit.csv of the target variable");

  CLI::App* sw = app.add_subcommand("sweep", "run the full method-by-parameter sweep");
  add_shared(sw, s);
  sw->add_flag("--dry-run", sweep_args.dry_run, "print planned iteration counts and stop");

  CLI::App* rep = app.add_subcommand("report", "summarize a sweep result store");
  add_shared(rep, s);
  rep->add_option("--results", rep_args.results, "sweep output directory or summary.csv")
      ->required();
  rep->add_option("--top", rep_args.top, "also show the best rows per method");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  CLI::App* parsed = app.get_subcommands().front();
  s.seed_from_flag = parsed->count("--seed") > 0;

  try {
    if (sim->parsed()) return cmd_simulate(s, sim_args);
    if (res->parsed()) return cmd_resample(s, res_args);
    if (ev->parsed()) return cmd_evaluate(s, eval_args);
    if (sw->parsed()) return cmd_sweep(s, sweep_args);
    if (rep->parsed()) return cmd_report(rep_args);
  } catch (const spcv::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const spcv::ParamError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return kExitParam;
  } catch (const spcv::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitConfig;
}
