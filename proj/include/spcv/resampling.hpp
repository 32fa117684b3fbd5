#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spcv/grid.hpp"

namespace spcv {

// One cross-validation fold. The three index sets are pairwise disjoint and
// together cover every observation; buffered_out holds observations excluded
// from both sides by the exclusion buffer.
struct Fold {
  std::vector<int> assessment;
  std::vector<int> analysis;
  std::vector<int> buffered_out;
};

enum class Method { Resubstitution, VFold, Blocked, Clustered, BLO3, LODO };
enum class BlockingMethod { Random, SystematicContinuous, SystematicSnake };
enum class ClusterFunction { KMeans, Hierarchical };

std::string to_string(Method m);
std::string to_string(BlockingMethod m);
std::string to_string(ClusterFunction f);
Method method_from_string(const std::string& s);
BlockingMethod blocking_from_string(const std::string& s);
ClusterFunction cluster_from_string(const std::string& s);

// Parameter record attached to a plan; fields are meaningful only for the
// methods that use them.
struct PlanParams {
  int v = 0;  // fold/cluster count; 0 means leave-one-block-out for Blocked
  double block_size = 0.0;
  BlockingMethod blocking = BlockingMethod::Random;
  ClusterFunction cluster = ClusterFunction::KMeans;
  double buffer = 0.0;
  double radius = 0.0;
};

struct ResamplingPlan {
  Method method = Method::Resubstitution;
  PlanParams params;
  uint64_t seed = 0;
  int n_observations = 0;
  std::vector<Fold> folds;
};

// Pairwise-distance lookup shared across many plans on the same coordinates;
// optional everywhere it appears (callers without one pay the direct cost).
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const std::vector<Point>& pts);
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<double> d_;
};

// Single fold whose assessment and analysis sets are both the full index set.
ResamplingPlan resubstitution_plan(int n);

// Random partition into v folds with sizes differing by at most one.
ResamplingPlan vfold(int n, int v, uint64_t seed);

// Regular-grid blocks assigned to folds. block_size is the area fraction of
// one block: 1/2 gives left/right halves, 1/k^2 gives a k-by-k tiling. v = 0
// requests leave-one-block-out. Blocks are enumerated row-major from the
// bottom row (snake reverses odd rows), shuffled first for Random, then dealt
// cyclically into folds.
ResamplingPlan block_cv(const std::vector<Point>& pts, double block_size, int v,
                        BlockingMethod blocking, double buffer, uint64_t seed);

// Spatial clusters, one fold per cluster (leave-one-cluster-out).
ResamplingPlan cluster_cv(const std::vector<Point>& pts, int v, ClusterFunction cluster,
                          double buffer, uint64_t seed);

// One fold per observation: assessment is the closed disc of the inclusion
// radius around it, then the exclusion buffer is applied. radius = 0 is BLO3,
// radius > 0 is LODO.
ResamplingPlan buffered_vfold(const std::vector<Point>& pts, double radius, double buffer,
                              const DistanceMatrix* dm = nullptr);

// Moves every analysis observation within the closed buffer distance of any
// assessment observation into buffered_out. Distances are point-to-point.
Fold apply_exclusion_buffer(const Fold& fold, const std::vector<Point>& pts, double buffer,
                            const DistanceMatrix* dm = nullptr);

// CSV schema: fold_id,cell_id,role with role in {assessment, analysis,
// buffered}; rows sorted by (fold_id, cell_id, role).
void write_plan_csv(const ResamplingPlan& plan, const std::string& path);
ResamplingPlan read_plan_csv(const std::string& path);

}  // namespace spcv
