#include "spcv/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "spcv/clustering.hpp"
#include "spcv/csv.hpp"
#include "spcv/errors.hpp"
#include "spcv/rng.hpp"

namespace spcv {

std::string to_string(Method m) {
  switch (m) {
    case Method::Resubstitution: return "resubstitution";
    case Method::VFold: return "vfold";
    case Method::Blocked: return "blocked";
    case Method::Clustered: return "clustered";
    case Method::BLO3: return "blo3";
    case Method::LODO: return "lodo";
  }
  return "?";
}

std::string to_string(BlockingMethod m) {
  switch (m) {
    case BlockingMethod::Random: return "random";
    case BlockingMethod::SystematicContinuous: return "continuous";
    case BlockingMethod::SystematicSnake: return "snake";
  }
  return "?";
}

std::string to_string(ClusterFunction f) {
  return f == ClusterFunction::KMeans ? "kmeans" : "hierarchical";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::Resubstitution, Method::VFold, Method::Blocked, Method::Clustered,
                   Method::BLO3, Method::LODO}) {
    if (to_string(m) == s) return m;
  }
  throw ParamError("unknown method: " + s);
}

BlockingMethod blocking_from_string(const std::string& s) {
  for (BlockingMethod m : {BlockingMethod::Random, BlockingMethod::SystematicContinuous,
                           BlockingMethod::SystematicSnake}) {
    if (to_string(m) == s) return m;
  }
  throw ParamError("unknown blocking method: " + s);
}

ClusterFunction cluster_from_string(const std::string& s) {
  for (ClusterFunction f : {ClusterFunction::KMeans, ClusterFunction::Hierarchical}) {
    if (to_string(f) == s) return f;
  }
  throw ParamError("unknown cluster function: " + s);
}

DistanceMatrix::DistanceMatrix(const std::vector<Point>& pts)
    : n_(static_cast<int>(pts.size())), d_(static_cast<size_t>(n_) * n_) {
  for (int i = 0; i < n_; ++i) {
    d_[static_cast<size_t>(i) * n_ + i] = 0.0;
    for (int j = i + 1; j < n_; ++j) {
      double v = dist(pts[i], pts[j]);
      d_[static_cast<size_t>(i) * n_ + j] = v;
      d_[static_cast<size_t>(j) * n_ + i] = v;
    }
  }
}

namespace {

void sort_fold(Fold& fold) {
  std::sort(fold.assessment.begin(), fold.assessment.end());
  std::sort(fold.analysis.begin(), fold.analysis.end());
  std::sort(fold.buffered_out.begin(), fold.buffered_out.end());
}

// Builds folds from a label per observation (labels 0..v-1), applies the
// buffer, and validates every fold.
std::vector<Fold> folds_from_labels(const std::vector<int>& labels, int v,
                                    const std::vector<Point>& pts, double buffer,
                                    const char* what) {
  int n = static_cast<int>(labels.size());
  std::vector<Fold> folds(v);
  for (int i = 0; i < n; ++i) folds[labels[i]].assessment.push_back(i);
  for (int f = 0; f < v; ++f) {
    if (folds[f].assessment.empty()) {
      throw ParamError(std::string(what) + ": fold " + std::to_string(f) + " is empty");
    }
    folds[f].analysis.reserve(n - folds[f].assessment.size());
    for (int i = 0; i < n; ++i) {
      if (labels[i] != f) folds[f].analysis.push_back(i);
    }
    if (buffer > 0.0) {
      try {
        folds[f] = apply_exclusion_buffer(folds[f], pts, buffer);
      } catch (const ParamError& e) {
        throw ParamError(std::string(what) + ": fold " + std::to_string(f) + ": " + e.what());
      }
    }
    if (folds[f].analysis.empty()) {
      throw ParamError(std::string(what) + ": fold " + std::to_string(f) +
                       " has an empty analysis set after buffering (buffer too large)");
    }
    sort_fold(folds[f]);
  }
  return folds;
}

}  // namespace

ResamplingPlan resubstitution_plan(int n) {
  if (n < 1) throw ParamError("resubstitution: need at least one observation");
  ResamplingPlan plan;
  plan.method = Method::Resubstitution;
  plan.n_observations = n;
  Fold fold;
  fold.assessment.resize(n);
  std::iota(fold.assessment.begin(), fold.assessment.end(), 0);
  fold.analysis = fold.assessment;
  plan.folds.push_back(std::move(fold));
  return plan;
}

ResamplingPlan vfold(int n, int v, uint64_t seed) {
  if (v < 2 || v > n) throw ParamError("vfold: need 2 <= v <= n");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<int> labels(n);
  int base = n / v, extra = n % v, pos = 0;
  for (int f = 0; f < v; ++f) {
    int take = base + (f < extra ? 1 : 0);
    for (int t = 0; t < take; ++t) labels[order[pos++]] = f;
  }

  ResamplingPlan plan;
  plan.method = Method::VFold;
  plan.params.v = v;
  plan.seed = seed;
  plan.n_observations = n;
  plan.folds = folds_from_labels(labels, v, {}, 0.0, "vfold");
  return plan;
}

ResamplingPlan block_cv(const std::vector<Point>& pts, double block_size, int v,
                        BlockingMethod blocking, double buffer, uint64_t seed) {
  int n = static_cast<int>(pts.size());
  if (n < 1) throw ParamError("block_cv: no observations");
  if (block_size <= 0.0 || block_size > 1.0) throw ParamError("block_cv: block size out of range");

  // valid sizes: 1/2, or 1/k^2 for integer k
  int per_side;
  bool halves = std::abs(block_size - 0.5) < 1e-12;
  if (halves) {
    per_side = 0;
  } else {
    double k = std::sqrt(1.0 / block_size);
    per_side = static_cast<int>(std::lround(k));
    if (per_side < 1 || std::abs(k - per_side) > 1e-9) {
      throw ParamError("block_cv: block size must be 1/2 or 1/k^2 for integer k");
    }
  }

  // block index per observation; block ids enumerate row-major from the
  // bottom row of the block grid
  int n_blocks_total = halves ? 2 : per_side * per_side;
  std::vector<int> block_of(n);
  for (int i = 0; i < n; ++i) {
    if (halves) {
      block_of[i] = pts[i].x < 0.5 ? 0 : 1;
    } else {
      int bx = std::min(static_cast<int>(pts[i].x * per_side), per_side - 1);
      int by = std::min(static_cast<int>(pts[i].y * per_side), per_side - 1);
      block_of[i] = by * per_side + bx;
    }
  }

  // nonempty blocks in enumeration order (snake reverses odd block-grid rows)
  std::vector<char> seen(n_blocks_total, 0);
  for (int b : block_of) seen[b] = 1;
  std::vector<int> blocks;
  for (int b = 0; b < n_blocks_total; ++b) {
    int bb = b;
    if (!halves && blocking == BlockingMethod::SystematicSnake) {
      int by = b / per_side, bx = b % per_side;
      if (by % 2 == 1) bb = by * per_side + (per_side - 1 - bx);
    }
    if (seen[bb]) blocks.push_back(bb);
  }

  if (blocking == BlockingMethod::Random) {
    Rng rng(seed);
    rng.shuffle(blocks);
  }

  int n_blocks = static_cast<int>(blocks.size());
  bool lobo = v == 0 || v == n_blocks;
  int folds_count = lobo ? n_blocks : v;
  if (folds_count > n_blocks) {
    throw ParamError("block_cv: fold count " + std::to_string(v) + " exceeds the " +
                     std::to_string(n_blocks) + " nonempty blocks");
  }
  if (folds_count < 2) {
    throw ParamError("block_cv: need at least two folds (got " + std::to_string(folds_count) +
                     " from " + std::to_string(n_blocks) + " nonempty blocks)");
  }

  // cyclic deal: block at position p goes to fold p mod folds_count
  std::vector<int> fold_of_block(n_blocks_total, -1);
  for (int p = 0; p < n_blocks; ++p) fold_of_block[blocks[p]] = p % folds_count;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = fold_of_block[block_of[i]];

  ResamplingPlan plan;
  plan.method = Method::Blocked;
  plan.params.v = lobo ? 0 : v;
  plan.params.block_size = block_size;
  plan.params.blocking = blocking;
  plan.params.buffer = buffer;
  plan.seed = seed;
  plan.n_observations = n;
  plan.folds = folds_from_labels(labels, folds_count, pts, buffer, "block_cv");
  return plan;
}

ResamplingPlan cluster_cv(const std::vector<Point>& pts, int v, ClusterFunction cluster,
                          double buffer, uint64_t seed) {
  int n = static_cast<int>(pts.size());
  if (v < 2 || v > n) throw ParamError("cluster_cv: need 2 <= v <= n");

  std::vector<int> labels = cluster == ClusterFunction::KMeans ? kmeans_labels(pts, v, seed)
                                                               : ward_labels(pts, v);

  ResamplingPlan plan;
  plan.method = Method::Clustered;
  plan.params.v = v;
  plan.params.cluster = cluster;
  plan.params.buffer = buffer;
  plan.seed = seed;
  plan.n_observations = n;
  plan.folds = folds_from_labels(labels, v, pts, buffer, "cluster_cv");
  return plan;
}

ResamplingPlan buffered_vfold(const std::vector<Point>& pts, double radius, double buffer,
                              const DistanceMatrix* dm) {
  int n = static_cast<int>(pts.size());
  if (n < 2) throw ParamError("buffered_vfold: need at least two observations");
  if (radius < 0.0 || buffer < 0.0) throw ParamError("buffered_vfold: negative distance");

  ResamplingPlan plan;
  plan.method = radius > 0.0 ? Method::LODO : Method::BLO3;
  plan.params.radius = radius;
  plan.params.buffer = buffer;
  plan.n_observations = n;
  plan.folds.reserve(n);

  std::vector<double> drow(n);
  for (int i = 0; i < n; ++i) {
    Fold fold;
    if (dm) {
      for (int j = 0; j < n; ++j) drow[j] = (*dm)(i, j);
    } else {
      for (int j = 0; j < n; ++j) drow[j] = dist(pts[i], pts[j]);
    }
    for (int j = 0; j < n; ++j) {
      if (drow[j] <= radius) fold.assessment.push_back(j);
    }
    for (int j = 0; j < n; ++j) {
      if (drow[j] > radius) fold.analysis.push_back(j);
    }
    if (buffer > 0.0) {
      try {
        fold = apply_exclusion_buffer(fold, pts, buffer, dm);
      } catch (const ParamError& e) {
        throw ParamError("buffered_vfold: observation " + std::to_string(i) + ": " + e.what());
      }
    }
    if (fold.analysis.empty()) {
      throw ParamError("buffered_vfold: observation " + std::to_string(i) +
                       " leaves an empty analysis set (radius " + fmt_double(radius) +
                       ", buffer " + fmt_double(buffer) + ")");
    }
    sort_fold(fold);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

Fold apply_exclusion_buffer(const Fold& fold, const std::vector<Point>& pts, double buffer,
                            const DistanceMatrix* dm) {
  if (buffer < 0.0) throw ParamError("exclusion buffer must be nonnegative");
  Fold out;
  out.assessment = fold.assessment;
  out.buffered_out = fold.buffered_out;
  if (buffer == 0.0) {
    out.analysis = fold.analysis;
    return out;
  }
  for (int k : fold.analysis) {
    bool excluded = false;
    for (int a : fold.assessment) {
      double d = dm ? (*dm)(k, a) : dist(pts[k], pts[a]);
      if (d <= buffer) {
        excluded = true;
        break;
      }
    }
    (excluded ? out.buffered_out : out.analysis).push_back(k);
  }
  if (out.analysis.empty() && !fold.analysis.empty()) {
    throw ParamError("exclusion buffer " + fmt_double(buffer) + " empties the analysis set");
  }
  return out;
}

void write_plan_csv(const ResamplingPlan& plan, const std::string& path) {
  std::ostringstream out;
  // comment preamble keeps the construction parameters so a re-imported plan
  // is indistinguishable from the original
  out << "# method=" << to_string(plan.method) << " v=" << plan.params.v
      << " block_size=" << fmt_double(plan.params.block_size)
      << " blocking=" << to_string(plan.params.blocking)
      << " cluster=" << to_string(plan.params.cluster)
      << " buffer=" << fmt_double(plan.params.buffer)
      << " radius=" << fmt_double(plan.params.radius) << " seed=" << plan.seed
      << " n=" << plan.n_observations << '\n';
  out << "fold_id,cell_id,role\n";
  for (size_t f = 0; f < plan.folds.size(); ++f) {
    const Fold& fold = plan.folds[f];
    struct Row {
      int cell;
      const char* role;
    };
    std::vector<Row> rows;
    rows.reserve(fold.assessment.size() + fold.analysis.size() + fold.buffered_out.size());
    for (int c : fold.analysis) rows.push_back({c, "analysis"});
    for (int c : fold.assessment) rows.push_back({c, "assessment"});
    for (int c : fold.buffered_out) rows.push_back({c, "buffered"});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.cell != b.cell) return a.cell < b.cell;
      return std::string_view(a.role) < std::string_view(b.role);
    });
    for (const Row& r : rows) out << f << ',' << r.cell << ',' << r.role << '\n';
  }
  write_text_file(path, out.str());
}

ResamplingPlan read_plan_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty plan file: " + path);

  ResamplingPlan plan;
  int stored_n = -1;
  if (!line.empty() && line[0] == '#') {
    std::istringstream meta(line.substr(1));
    std::string token;
    while (meta >> token) {
      size_t eq = token.find('=');
      if (eq == std::string::npos) continue;
      std::string key = token.substr(0, eq), value = token.substr(eq + 1);
      try {
        if (key == "method") plan.method = method_from_string(value);
        else if (key == "v") plan.params.v = std::stoi(value);
        else if (key == "block_size") plan.params.block_size = std::stod(value);
        else if (key == "blocking") plan.params.blocking = blocking_from_string(value);
        else if (key == "cluster") plan.params.cluster = cluster_from_string(value);
        else if (key == "buffer") plan.params.buffer = std::stod(value);
        else if (key == "radius") plan.params.radius = std::stod(value);
        else if (key == "seed") plan.seed = std::stoull(value);
        else if (key == "n") stored_n = std::stoi(value);
      } catch (const std::exception&) {
        throw IoError("malformed plan metadata in " + path + ": " + token);
      }
    }
    if (!std::getline(in, line)) throw IoError("plan file has no header row: " + path);
  }
  if (split_csv_line(line) != std::vector<std::string>{"fold_id", "cell_id", "role"}) {
    throw IoError("unexpected plan header in " + path);
  }
  std::map<int, Fold> folds;
  int max_cell = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parts = split_csv_line(line);
    if (parts.size() != 3) throw IoError("malformed plan row in " + path);
    int f = std::stoi(parts[0]);
    int cell = std::stoi(parts[1]);
    max_cell = std::max(max_cell, cell);
    Fold& fold = folds[f];
    if (parts[2] == "assessment") {
      fold.assessment.push_back(cell);
    } else if (parts[2] == "analysis") {
      fold.analysis.push_back(cell);
    } else if (parts[2] == "buffered") {
      fold.buffered_out.push_back(cell);
    } else {
      throw IoError("unknown role '" + parts[2] + "' in " + path);
    }
  }
  plan.n_observations = stored_n > 0 ? stored_n : max_cell + 1;
  for (auto& [f, fold] : folds) {
    sort_fold(fold);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

}  // namespace spcv
