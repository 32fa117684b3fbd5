#include "spcv/gaussian_field.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "spcv/rng.hpp"

namespace spcv {

namespace {

struct FactorKey {
  CovFamily family;
  double scale;
  int side;
  bool operator<(const FactorKey& o) const {
    if (family != o.family) return family < o.family;
    if (scale != o.scale) return scale < o.scale;
    return side < o.side;
  }
};

std::mutex cache_mutex;
std::map<FactorKey, std::shared_ptr<const Eigen::MatrixXd>> factor_cache;

// Lower Cholesky factor of the unit-variance covariance matrix. Variance only
// scales the factor (L of sigma^2*C equals sigma*L of C), so one factor serves
// every sill with the same family and scale.
std::shared_ptr<const Eigen::MatrixXd> unit_factor(const GridSpec& grid,
                                                   const CovarianceSpec& cov) {
  FactorKey key{cov.family, cov.scale, grid.side_cells};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = factor_cache.find(key);
    if (it != factor_cache.end()) return it->second;
  }

  int n = grid.n_cells();
  std::vector<Point> pts = cell_centers(grid);
  CovarianceSpec unit{cov.family, 1.0, cov.scale};
  Eigen::MatrixXd C(n, n);
  for (int i = 0; i < n; ++i) {
    C(i, i) = 1.0 + 1e-10;
    for (int j = i + 1; j < n; ++j) {
      double c = covariance(unit, dist(pts[i], pts[j]));
      C(i, j) = c;
      C(j, i) = c;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("covariance matrix not positive definite after jitter (family=" +
                             to_string(cov.family) + ", scale=" + std::to_string(cov.scale) +
                             ", side=" + std::to_string(grid.side_cells) + ")");
  }
  auto L = std::make_shared<Eigen::MatrixXd>(llt.matrixL());

  std::lock_guard<std::mutex> lock(cache_mutex);
  auto [it, inserted] = factor_cache.emplace(key, std::move(L));
  return it->second;
}

}  // namespace

std::vector<double> sample_gaussian_field(const GridSpec& grid, const CovarianceSpec& cov,
                                          uint64_t seed) {
  if (cov.scale <= 0.0) throw std::invalid_argument("covariance scale must be positive");
  if (cov.variance < 0.0) throw std::invalid_argument("covariance variance must be nonnegative");

  int n = grid.n_cells();
  Rng rng(seed);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();

  if (cov.variance == 0.0) return std::vector<double>(n, 0.0);

  auto L = unit_factor(grid, cov);
  Eigen::VectorXd field = std::sqrt(cov.variance) * (*L * z);
  return std::vector<double>(field.data(), field.data() + n);
}

void clear_factor_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  factor_cache.clear();
}

}  // namespace spcv
