#include "spcv/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <thread>
#include <tuple>

#include "spcv/csv.hpp"
#include "spcv/errors.hpp"
#include "spcv/rng.hpp"

namespace spcv {

double rmse(const std::vector<double>& y, const std::vector<double>& y_hat) {
  if (y.empty()) throw ParamError("rmse: empty vectors");
  if (y.size() != y_hat.size()) throw ParamError("rmse: length mismatch");
  double ss = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    double d = y[i] - y_hat[i];
    ss += d * d;
  }
  return std::sqrt(ss / y.size());
}

FeatureMatrix features_for(const Landscape& land, const std::vector<std::string>& names) {
  FeatureMatrix out;
  out.reserve(names.size());
  for (const std::string& name : names) {
    if (name.size() < 2 || name[0] != 'X') {
      throw ParamError("features_for: unknown predictor '" + name + "'");
    }
    int k = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) k = -1;
      if (k < 0) break;
      k = k * 10 + (name[i] - '0');
    }
    if (k < 1 || k > 13) throw ParamError("features_for: unknown predictor '" + name + "'");
    out.push_back(land.field(k));
  }
  return out;
}

TargetRange target_range_from(const std::vector<double>& values) {
  if (values.empty()) throw ParamError("target_range_from: no values");
  TargetRange t;
  t.p05 = quantile_linear(values, 0.05);
  t.p95 = quantile_linear(values, 0.95);
  double sum = 0.0;
  for (double v : values) sum += v;
  t.mean = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - t.mean) * (v - t.mean);
  t.sd = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
  t.source_values = static_cast<long>(values.size());
  return t;
}

namespace {

void gather_rows(const FeatureMatrix& all, const std::vector<int>& rows, FeatureMatrix& out) {
  out.resize(all.size());
  for (size_t f = 0; f < all.size(); ++f) {
    out[f].resize(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out[f][i] = all[f][rows[i]];
  }
}

}  // namespace

std::vector<RunResult> cross_validate(const Landscape& land, const ResamplingPlan& plan,
                                      const ForestConfig& config, int landscape_id) {
  if (plan.n_observations != land.grid.n_cells()) {
    throw ParamError("cross_validate: plan size does not match the landscape");
  }
  FeatureMatrix all = features_for(land, config.features);

  std::vector<RunResult> out;
  out.reserve(plan.folds.size());
  FeatureMatrix train_x, test_x;
  std::vector<double> train_y, test_y;
  for (size_t f = 0; f < plan.folds.size(); ++f) {
    const Fold& fold = plan.folds[f];
    if (fold.analysis.empty() || fold.assessment.empty()) {
      throw ParamError("cross_validate: fold " + std::to_string(f) +
                       " has an empty analysis or assessment set");
    }
    gather_rows(all, fold.analysis, train_x);
    gather_rows(all, fold.assessment, test_x);
    train_y.resize(fold.analysis.size());
    for (size_t i = 0; i < fold.analysis.size(); ++i) train_y[i] = land.y[fold.analysis[i]];
    test_y.resize(fold.assessment.size());
    for (size_t i = 0; i < fold.assessment.size(); ++i) test_y[i] = land.y[fold.assessment[i]];

    ForestConfig fc = config;
    fc.seed = substream_seed(config.seed, static_cast<uint64_t>(f));
    RegressionForest forest = fit_forest(train_x, train_y, fc);
    std::vector<double> pred = predict(forest, test_x);

    RunResult r;
    r.method = plan.method;
    r.params = plan.params;
    r.landscape_id = landscape_id;
    r.fold_id = static_cast<int>(f);
    r.rmse = rmse(test_y, pred);
    r.n_assessment = static_cast<int>(fold.assessment.size());
    r.n_analysis = static_cast<int>(fold.analysis.size());
    out.push_back(r);
  }
  return out;
}

IdealDistribution ideal_rmse_distribution(const std::vector<Landscape>& landscapes,
                                          const ForestConfig& config) {
  size_t n = landscapes.size();
  if (n < 2) throw ParamError("ideal_rmse_distribution: need at least 2 landscapes");
  for (const Landscape& land : landscapes) {
    if (land.grid.n_cells() != landscapes[0].grid.n_cells()) {
      throw ParamError("ideal_rmse_distribution: landscapes differ in size");
    }
  }

  std::vector<FeatureMatrix> features(n);
  for (size_t i = 0; i < n; ++i) features[i] = features_for(landscapes[i], config.features);

  IdealDistribution out;
  out.values.reserve(n * (n - 1));
  for (size_t l = 0; l < n; ++l) {
    ForestConfig fc = config;
    fc.seed = substream_seed(config.seed, static_cast<uint64_t>(l));
    RegressionForest forest = fit_forest(features[l], landscapes[l].y, fc);
    for (size_t m = 0; m < n; ++m) {
      if (m == l) continue;
      std::vector<double> pred = predict(forest, features[m]);
      out.values.push_back(rmse(landscapes[m].y, pred));
    }
  }
  out.target = target_range_from(out.values);
  return out;
}

double landscape_estimate(const std::vector<RunResult>& fold_results) {
  if (fold_results.empty()) throw ParamError("landscape_estimate: no fold results");
  double sum = 0.0;
  for (const RunResult& r : fold_results) sum += r.rmse;
  return sum / fold_results.size();
}

double success_rate(const std::vector<double>& estimates, const TargetRange& target) {
  if (estimates.empty()) throw ParamError("success_rate: no estimates");
  long inside = 0;
  for (double e : estimates) {
    if (e >= target.p05 && e <= target.p95) ++inside;
  }
  return static_cast<double>(inside) / estimates.size();
}

// ---- profiles ----

namespace {

std::vector<double> percent_grid(int from, int to, int step) {
  std::vector<double> out;
  for (int i = from; i <= to; i += step) out.push_back(i / 100.0);
  return out;
}

}  // namespace

SweepConfig full_profile(uint64_t master_seed) {
  SweepConfig c;
  c.n_landscapes = 100;
  c.grid.side_cells = 50;
  c.forest = ForestConfig{};  // 500 trees
  c.master_seed = master_seed;
  c.include_ideal = true;

  MethodGrid& g = c.grids;
  g.include_resubstitution = true;
  g.vfold_v = {2, 5, 10, 20};
  g.block_sizes = {1.0 / 100, 1.0 / 64, 1.0 / 36, 1.0 / 25, 1.0 / 16, 1.0 / 9, 1.0 / 4, 1.0 / 2};
  g.blocked_blockings = {BlockingMethod::Random};
  g.blocked_v = {0};  // leave-one-block-out
  g.blocked_buffers = percent_grid(0, 30, 3);
  g.clustered_v = {2, 5, 10, 20};
  g.cluster_functions = {ClusterFunction::KMeans, ClusterFunction::Hierarchical};
  g.clustered_buffers = percent_grid(0, 30, 3);
  g.blo3_buffers = percent_grid(0, 48, 3);
  g.lodo_radii = percent_grid(0, 30, 3);
  g.lodo_buffers = percent_grid(0, 30, 3);
  return c;
}

SweepConfig desk_profile(uint64_t master_seed) {
  SweepConfig c;
  c.n_landscapes = 20;
  c.grid.side_cells = 25;
  c.forest = ForestConfig{};
  c.forest.n_trees = 100;
  c.master_seed = master_seed;
  c.include_ideal = true;

  MethodGrid& g = c.grids;
  g.include_resubstitution = true;
  g.vfold_v = {2, 5, 10, 20};
  g.block_sizes = {1.0 / 25, 1.0 / 9, 1.0 / 4};
  g.blocked_blockings = {BlockingMethod::Random};
  g.blocked_v = {0};
  g.blocked_buffers = {0.0, 0.09, 0.18};
  g.clustered_v = {5, 10};
  g.cluster_functions = {ClusterFunction::KMeans, ClusterFunction::Hierarchical};
  g.clustered_buffers = {0.0, 0.15};
  g.blo3_buffers = {0.0, 0.12, 0.24, 0.36, 0.48};
  g.lodo_radii = {0.06, 0.15};
  g.lodo_buffers = {0.0, 0.12};
  return c;
}

// ---- signatures and enumeration ----

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string block_size_text(double bs) {
  if (bs <= 0.0) throw ParamError("block size must be positive");
  return "1/" + std::to_string(static_cast<long>(std::llround(1.0 / bs)));
}

}  // namespace

std::string param_signature(Method method, const PlanParams& p) {
  switch (method) {
    case Method::Resubstitution: return "-";
    case Method::VFold: return "v=" + std::to_string(p.v);
    case Method::Blocked:
      return "bs=" + block_size_text(p.block_size) + ",bm=" + to_string(p.blocking) +
             ",v=" + (p.v == 0 ? std::string("lobo") : std::to_string(p.v)) +
             ",buf=" + fixed2(p.buffer);
    case Method::Clustered:
      return "v=" + std::to_string(p.v) + ",cf=" + to_string(p.cluster) +
             ",buf=" + fixed2(p.buffer);
    case Method::BLO3: return "buf=" + fixed2(p.buffer);
    case Method::LODO: return "rad=" + fixed2(p.radius) + ",buf=" + fixed2(p.buffer);
  }
  throw ParamError("param_signature: unknown method");
}

std::vector<std::pair<Method, PlanParams>> enumerate_combos(const MethodGrid& g) {
  std::vector<std::pair<Method, PlanParams>> out;
  if (g.include_resubstitution) out.emplace_back(Method::Resubstitution, PlanParams{});
  for (int v : g.vfold_v) {
    PlanParams p;
    p.v = v;
    out.emplace_back(Method::VFold, p);
  }
  for (double bs : g.block_sizes) {
    for (BlockingMethod bm : g.blocked_blockings) {
      for (int v : g.blocked_v) {
        for (double buf : g.blocked_buffers) {
          PlanParams p;
          p.block_size = bs;
          p.blocking = bm;
          p.v = v;
          p.buffer = buf;
          out.emplace_back(Method::Blocked, p);
        }
      }
    }
  }
  for (int v : g.clustered_v) {
    for (ClusterFunction cf : g.cluster_functions) {
      for (double buf : g.clustered_buffers) {
        PlanParams p;
        p.v = v;
        p.cluster = cf;
        p.buffer = buf;
        out.emplace_back(Method::Clustered, p);
      }
    }
  }
  for (double buf : g.blo3_buffers) {
    PlanParams p;
    p.buffer = buf;
    out.emplace_back(Method::BLO3, p);
  }
  for (double rad : g.lodo_radii) {
    for (double buf : g.lodo_buffers) {
      PlanParams p;
      p.radius = rad;
      p.buffer = buf;
      out.emplace_back(Method::LODO, p);
    }
  }
  return out;
}

std::vector<std::pair<std::string, long>> plan_iterations(const SweepConfig& config) {
  std::map<Method, long> combos;
  for (const auto& [method, params] : enumerate_combos(config.grids)) ++combos[method];
  std::vector<std::pair<std::string, long>> out;
  for (const auto& [method, count] : combos) {
    out.emplace_back(to_string(method), count * static_cast<long>(config.n_landscapes));
  }
  return out;
}

uint64_t landscape_seed(uint64_t master, int landscape_id) {
  return substream_seed(substream_seed(master, hash_label("landscape")),
                        static_cast<uint64_t>(landscape_id));
}

uint64_t cell_seed(uint64_t master, Method method, const PlanParams& params, int landscape_id) {
  uint64_t combo = hash_label(to_string(method) + "|" + param_signature(method, params));
  return substream_seed(substream_seed(master, combo), static_cast<uint64_t>(landscape_id));
}

ResamplingPlan make_plan(Method method, const PlanParams& params, const std::vector<Point>& centers,
                         uint64_t seed, const DistanceMatrix* dm) {
  int n = static_cast<int>(centers.size());
  ResamplingPlan plan;
  switch (method) {
    case Method::Resubstitution: plan = resubstitution_plan(n); break;
    case Method::VFold: plan = vfold(n, params.v, seed); break;
    case Method::Blocked:
      plan = block_cv(centers, params.block_size, params.v, params.blocking, params.buffer, seed);
      break;
    case Method::Clustered:
      plan = cluster_cv(centers, params.v, params.cluster, params.buffer, seed);
      break;
    case Method::BLO3: plan = buffered_vfold(centers, 0.0, params.buffer, dm); break;
    case Method::LODO: plan = buffered_vfold(centers, params.radius, params.buffer, dm); break;
    default: throw ParamError("make_plan: unknown method");
  }
  plan.method = method;  // radius 0 would otherwise label a lodo request blo3
  plan.params = params;
  plan.seed = seed;
  return plan;
}

// ---- sweep store ----

namespace {

using CellKey = std::tuple<int, std::string, int>;  // method order, signature, landscape

const char* kRawHeader =
    "method,v,block_size,blocking_method,cluster_function,buffer,radius,landscape_id,fold_id,"
    "rmse,n_assessment,n_analysis";
const char* kSummaryHeader = "method,param_signature,mean_rmse,sd_rmse,pct_in_target,n_iterations";
const char* kFailureHeader = "method,param_signature,landscape_id,reason";
const char* kTargetHeader = "p05,p95,mean,sd,source_values";

std::string raw_row(const RunResult& r) {
  const Method m = r.method;
  const PlanParams& p = r.params;
  bool uses_v = m == Method::VFold || m == Method::Clustered || (m == Method::Blocked && p.v > 0);
  bool uses_buffer = m == Method::Blocked || m == Method::Clustered || m == Method::BLO3 ||
                     m == Method::LODO;
  std::string out = to_string(m);
  out += ',';
  if (uses_v) out += std::to_string(p.v);
  out += ',';
  if (m == Method::Blocked) out += fmt_double(p.block_size);
  out += ',';
  if (m == Method::Blocked) out += to_string(p.blocking);
  out += ',';
  if (m == Method::Clustered) out += to_string(p.cluster);
  out += ',';
  if (uses_buffer) out += fmt_double(p.buffer);
  out += ',';
  if (m == Method::LODO) out += fmt_double(p.radius);
  out += ',';
  out += std::to_string(r.landscape_id);
  out += ',';
  out += std::to_string(r.fold_id);
  out += ',';
  out += fmt_double(r.rmse);
  out += ',';
  out += std::to_string(r.n_assessment);
  out += ',';
  out += std::to_string(r.n_analysis);
  return out;
}

RunResult parse_raw_row(const std::vector<std::string>& f) {
  if (f.size() != 12) throw IoError("raw results row has wrong field count");
  RunResult r;
  r.method = method_from_string(f[0]);
  if (!f[1].empty()) r.params.v = std::stoi(f[1]);
  if (!f[2].empty()) r.params.block_size = std::stod(f[2]);
  if (!f[3].empty()) r.params.blocking = blocking_from_string(f[3]);
  if (!f[4].empty()) r.params.cluster = cluster_from_string(f[4]);
  if (!f[5].empty()) r.params.buffer = std::stod(f[5]);
  if (!f[6].empty()) r.params.radius = std::stod(f[6]);
  r.landscape_id = std::stoi(f[7]);
  r.fold_id = std::stoi(f[8]);
  r.rmse = std::stod(f[9]);
  r.n_assessment = std::stoi(f[10]);
  r.n_analysis = std::stoi(f[11]);
  return r;
}

CellKey key_of(Method m, const std::string& signature, int landscape_id) {
  return {static_cast<int>(m), signature, landscape_id};
}

// Complete lines of a possibly absent file; a trailing fragment without a
// newline (interrupted append) is dropped.
std::vector<std::string> read_store_lines(const std::string& path, const char* header) {
  std::vector<std::string> lines;
  if (!std::filesystem::exists(path)) return lines;
  std::string content = read_text_file(path);
  size_t start = 0;
  while (true) {
    size_t nl = content.find('\n', start);
    if (nl == std::string::npos) break;
    std::string line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  if (!lines.empty() && lines.front() != header) {
    throw IoError(path + ": unrecognized schema; refusing to resume into it");
  }
  if (!lines.empty()) lines.erase(lines.begin());
  return lines;
}

void replace_file(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  write_text_file(tmp, content);
  std::filesystem::rename(tmp, path);
}

std::string csv_escape_reason(const std::string& reason) {
  std::string out;
  for (char c : reason) out += (c == ',' || c == '\n' || c == '\r') ? ';' : c;
  return out;
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& config, const std::string& out_dir, int jobs,
                       bool verbose) {
  if (jobs < 1) throw ParamError("run_sweep: jobs must be at least 1");
  std::filesystem::create_directories(out_dir);
  const std::string raw_path = out_dir + "/raw_results.csv";
  const std::string summary_path = out_dir + "/summary.csv";
  const std::string fail_path = out_dir + "/failures.csv";
  const std::string target_path = out_dir + "/target_range.csv";

  // load whatever a previous run left behind
  std::map<CellKey, std::vector<RunResult>> results;
  for (const std::string& line : read_store_lines(raw_path, kRawHeader)) {
    RunResult r = parse_raw_row(split_csv_line(line));
    results[key_of(r.method, param_signature(r.method, r.params), r.landscape_id)].push_back(r);
  }
  std::map<CellKey, std::string> failures;
  for (const std::string& line : read_store_lines(fail_path, kFailureHeader)) {
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() < 4) throw IoError("failure manifest row has wrong field count");
    Method m = method_from_string(f[0]);
    failures[key_of(m, f[1], std::stoi(f[2]))] = f[3];
  }

  SweepOutcome outcome;
  outcome.failed_cells = static_cast<long>(failures.size());

  auto combos = enumerate_combos(config.grids);
  std::vector<std::string> signatures(combos.size());
  for (size_t i = 0; i < combos.size(); ++i) {
    signatures[i] = param_signature(combos[i].first, combos[i].second);
  }

  std::vector<Landscape> landscapes(config.n_landscapes);
  for (int l = 0; l < config.n_landscapes; ++l) {
    landscapes[l] = simulate_landscape(config.grid, landscape_seed(config.master_seed, l));
  }
  std::vector<Point> centers = cell_centers(config.grid);

  bool any_pointwise = !config.grids.blo3_buffers.empty() || !config.grids.lodo_radii.empty();
  std::unique_ptr<DistanceMatrix> dm;
  if (any_pointwise && !centers.empty()) dm = std::make_unique<DistanceMatrix>(centers);

  std::ofstream raw_log, fail_log;
  auto open_append = [](std::ofstream& stream, const std::string& path, const char* header) {
    bool fresh = !std::filesystem::exists(path);
    stream.open(path, std::ios::app);
    if (!stream) throw IoError("cannot open " + path + " for append");
    if (fresh) stream << header << '\n';
  };
  open_append(raw_log, raw_path, kRawHeader);
  open_append(fail_log, fail_path, kFailureHeader);

  struct CellOut {
    bool failed = false;
    std::string reason;
    std::vector<RunResult> rows;
  };

  for (int lid = 0; lid < config.n_landscapes; ++lid) {
    std::vector<size_t> pending;
    for (size_t ci = 0; ci < combos.size(); ++ci) {
      CellKey key = key_of(combos[ci].first, signatures[ci], lid);
      if (results.count(key) || failures.count(key)) {
        ++outcome.skipped_cells;
      } else {
        pending.push_back(ci);
      }
    }
    if (pending.empty()) continue;
    const Landscape& land = landscapes[lid];

    std::vector<CellOut> outs(pending.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      while (true) {
        size_t slot = next.fetch_add(1);
        if (slot >= pending.size()) return;
        const auto& [method, params] = combos[pending[slot]];
        CellOut& out = outs[slot];
        try {
          uint64_t seed = cell_seed(config.master_seed, method, params, lid);
          ResamplingPlan plan =
              make_plan(method, params, centers, substream_seed(seed, hash_label("plan")),
                        dm.get());
          ForestConfig fc = config.forest;
          fc.seed = substream_seed(seed, hash_label("forest"));
          out.rows = cross_validate(land, plan, fc, lid);
        } catch (const ParamError& e) {
          out.failed = true;
          out.reason = e.what();
        }
      }
    };
    if (jobs <= 1 || pending.size() <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      size_t n_threads = std::min<size_t>(jobs, pending.size());
      for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }

    for (size_t slot = 0; slot < pending.size(); ++slot) {
      size_t ci = pending[slot];
      CellKey key = key_of(combos[ci].first, signatures[ci], lid);
      if (outs[slot].failed) {
        failures[key] = csv_escape_reason(outs[slot].reason);
        fail_log << to_string(combos[ci].first) << ',' << csv_field(signatures[ci]) << ',' << lid
                 << ',' << failures[key] << '\n';
        fail_log.flush();
        ++outcome.failed_cells;
      } else {
        std::string block;
        for (const RunResult& r : outs[slot].rows) {
          block += raw_row(r);
          block += '\n';
        }
        raw_log << block;
        raw_log.flush();
        results[key] = std::move(outs[slot].rows);
        ++outcome.executed_cells;
      }
    }
    if (verbose) {
      std::fprintf(stderr, "landscape %d/%d: %zu cells\n", lid + 1, config.n_landscapes,
                   pending.size());
    }
  }
  raw_log.close();
  fail_log.close();

  bool have_ideal = config.include_ideal && config.n_landscapes >= 2;
  IdealDistribution ideal;
  if (have_ideal) {
    ForestConfig fc = config.forest;
    fc.seed = substream_seed(config.master_seed, hash_label("ideal"));
    ideal = ideal_rmse_distribution(landscapes, fc);
  }

  // canonical rewrite: the log order depends on scheduling, the store must not
  std::string raw_out = std::string(kRawHeader) + '\n';
  for (auto& [key, rows] : results) {
    std::sort(rows.begin(), rows.end(),
              [](const RunResult& a, const RunResult& b) { return a.fold_id < b.fold_id; });
    for (const RunResult& r : rows) {
      raw_out += raw_row(r);
      raw_out += '\n';
    }
  }
  replace_file(raw_path, raw_out);

  std::string fail_out = std::string(kFailureHeader) + '\n';
  for (const auto& [key, reason] : failures) {
    const auto& [method_order, signature, lid] = key;
    fail_out += to_string(static_cast<Method>(method_order)) + "," + csv_field(signature) + "," +
                std::to_string(lid) + "," + reason + '\n';
  }
  replace_file(fail_path, fail_out);

  std::string summary = std::string(kSummaryHeader) + '\n';
  if (have_ideal) {
    summary += "ideal,-," + fmt_double(ideal.target.mean) + ',' + fmt_double(ideal.target.sd) +
               ',' + fmt_double(100.0 * success_rate(ideal.values, ideal.target)) + ',' +
               std::to_string(ideal.values.size()) + '\n';
  }
  for (size_t ci = 0; ci < combos.size(); ++ci) {
    std::vector<double> estimates;
    for (int lid = 0; lid < config.n_landscapes; ++lid) {
      auto it = results.find(key_of(combos[ci].first, signatures[ci], lid));
      if (it != results.end()) estimates.push_back(landscape_estimate(it->second));
    }
    if (estimates.empty()) continue;
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= estimates.size();
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    double sd = estimates.size() > 1 ? std::sqrt(ss / (estimates.size() - 1)) : 0.0;
    summary += to_string(combos[ci].first) + ',' + csv_field(signatures[ci]) + ',' +
               fmt_double(mean) + ',' + fmt_double(sd) + ',';
    if (have_ideal) summary += fmt_double(100.0 * success_rate(estimates, ideal.target));
    summary += ',' + std::to_string(estimates.size()) + '\n';
  }
  replace_file(summary_path, summary);

  if (have_ideal) {
    replace_file(target_path, std::string(kTargetHeader) + '\n' + fmt_double(ideal.target.p05) +
                                  ',' + fmt_double(ideal.target.p95) + ',' +
                                  fmt_double(ideal.target.mean) + ',' +
                                  fmt_double(ideal.target.sd) + ',' +
                                  std::to_string(ideal.target.source_values) + '\n');
  }
  return outcome;
}

}  // namespace spcv
