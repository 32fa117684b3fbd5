#pragma once

#include <cstdint>
#include <vector>

#include "spcv/grid.hpp"

namespace spcv {

// Seeded k-means++ initialization followed by Lloyd iterations until centroid
// movement falls below 1e-10 or 100 iterations elapse. Nearest-centroid ties
// break toward the lowest cluster index. Labels are 0..k-1.
std::vector<int> kmeans_labels(const std::vector<Point>& pts, int k, uint64_t seed);

// Agglomerative merge history under Ward's criterion (Lance-Williams update on
// squared Euclidean distances). merges[m] = {a, b} joins the clusters created
// at steps a and b, where steps 0..n-1 are the singletons and step n+m is the
// merge's own id. Ties break on the smallest (a, b) pair. Deterministic.
struct Dendrogram {
  int n_points = 0;
  std::vector<std::pair<int, int>> merges;
};

Dendrogram ward_dendrogram(const std::vector<Point>& pts);

// Cuts the dendrogram into k clusters. Labels are assigned in order of each
// cluster's smallest member index, so the result is canonical.
std::vector<int> cut_dendrogram(const Dendrogram& dendro, int k);

std::vector<int> ward_labels(const std::vector<Point>& pts, int k);

}  // namespace spcv
