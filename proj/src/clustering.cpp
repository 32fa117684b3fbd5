#include "spcv/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "spcv/errors.hpp"
#include "spcv/rng.hpp"

namespace spcv {

namespace {

double sqdist(Point a, Point b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::vector<int> kmeans_labels(const std::vector<Point>& pts, int k, uint64_t seed) {
  int n = static_cast<int>(pts.size());
  if (k < 1 || k > n) throw ParamError("kmeans: cluster count out of range");

  Rng rng(seed);
  std::vector<Point> centroids;
  centroids.reserve(k);

  // k-means++ seeding
  centroids.push_back(pts[rng.uniform_int(n)]);
  std::vector<double> min_sq(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const Point& ctr : centroids) best = std::min(best, sqdist(pts[i], ctr));
      min_sq[i] = best;
      total += best;
    }
    if (total == 0.0) {
      centroids.push_back(pts[rng.uniform_int(n)]);
      continue;
    }
    double target = rng.uniform() * total;
    double acc = 0.0;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      acc += min_sq[i];
      if (acc >= target) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(pts[chosen]);
  }

  std::vector<int> labels(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        double d = sqdist(pts[i], centroids[c]);
        if (d < best) {  // ties keep the lowest cluster index
          best = d;
          arg = c;
        }
      }
      labels[i] = arg;
    }

    std::vector<double> sx(k, 0.0), sy(k, 0.0);
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) {
      sx[labels[i]] += pts[i].x;
      sy[labels[i]] += pts[i].y;
      ++count[labels[i]];
    }
    double moved = 0.0;
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;  // empty cluster keeps its centroid
      Point next{sx[c] / count[c], sy[c] / count[c]};
      moved = std::max(moved, dist(next, centroids[c]));
      centroids[c] = next;
    }
    if (moved < 1e-10) break;
  }
  return labels;
}

Dendrogram ward_dendrogram(const std::vector<Point>& pts) {
  int n = static_cast<int>(pts.size());
  Dendrogram dendro;
  dendro.n_points = n;
  if (n < 2) return dendro;

  // Ward distances via Lance-Williams on squared Euclidean. Slot j dies into
  // slot i on merge; creation ids record the merge history.
  std::vector<double> d(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = sqdist(pts[i], pts[j]);
      d[static_cast<size_t>(i) * n + j] = v;
      d[static_cast<size_t>(j) * n + i] = v;
    }
  }

  std::vector<char> active(n, 1);
  std::vector<int> size(n, 1), id(n);
  std::iota(id.begin(), id.end(), 0);

  struct Neighbor {
    double dist;
    int slot;
  };
  auto row = [&](int i, int j) -> double& { return d[static_cast<size_t>(i) * n + j]; };

  auto better = [&](double dist_a, int ida1, int ida2, double dist_b, int idb1, int idb2) {
    if (dist_a != dist_b) return dist_a < dist_b;
    int alo = std::min(ida1, ida2), ahi = std::max(ida1, ida2);
    int blo = std::min(idb1, idb2), bhi = std::max(idb1, idb2);
    if (alo != blo) return alo < blo;
    return ahi < bhi;
  };

  auto nearest = [&](int i) {
    Neighbor best{std::numeric_limits<double>::max(), -1};
    for (int j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (best.slot < 0 || better(row(i, j), id[i], id[j], best.dist, id[i], id[best.slot])) {
        best = {row(i, j), j};
      }
    }
    return best;
  };

  std::vector<Neighbor> nn(n);
  for (int i = 0; i < n; ++i) nn[i] = nearest(i);

  int next_id = n;
  for (int step = 0; step < n - 1; ++step) {
    int bi = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[i] || nn[i].slot < 0) continue;
      if (bi < 0 || better(nn[i].dist, id[i], id[nn[i].slot], nn[bi].dist, id[bi], id[nn[bi].slot])) {
        bi = i;
      }
    }
    int bj = nn[bi].slot;
    int lo_id = std::min(id[bi], id[bj]), hi_id = std::max(id[bi], id[bj]);
    dendro.merges.emplace_back(lo_id, hi_id);

    // merge bj into bi
    int ni = size[bi], nj = size[bj];
    double dij = row(bi, bj);
    active[bj] = 0;
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi) continue;
      double v = ((ni + size[k]) * row(bi, k) + (nj + size[k]) * row(bj, k) - size[k] * dij) /
                 static_cast<double>(ni + nj + size[k]);
      row(bi, k) = v;
      row(k, bi) = v;
    }
    size[bi] = ni + nj;
    id[bi] = next_id++;

    nn[bi] = nearest(bi);
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi) continue;
      if (nn[k].slot == bi || nn[k].slot == bj) {
        nn[k] = nearest(k);
      } else if (better(row(k, bi), id[k], id[bi], nn[k].dist, id[k], id[nn[k].slot])) {
        nn[k] = {row(k, bi), bi};
      }
    }
  }
  return dendro;
}

std::vector<int> cut_dendrogram(const Dendrogram& dendro, int k) {
  int n = dendro.n_points;
  if (k < 1 || k > n) throw ParamError("dendrogram cut: cluster count out of range");

  std::vector<int> parent(n + dendro.merges.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int m = 0; m < n - k; ++m) {
    auto [a, b] = dendro.merges[m];
    int merged = n + m;
    parent[find(a)] = merged;
    parent[find(b)] = merged;
  }

  std::vector<int> root_label(parent.size(), -1);
  std::vector<int> labels(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  return labels;
}

std::vector<int> ward_labels(const std::vector<Point>& pts, int k) {
  return cut_dendrogram(ward_dendrogram(pts), k);
}

}  // namespace spcv
