#pragma once

#include <cstdint>
#include <vector>

#include "spcv/covariance.hpp"
#include "spcv/grid.hpp"

namespace spcv {

// One realization of a zero-mean Gaussian random field over the grid's cell
// centers, with Cov(z_i, z_j) given by the spec applied to Euclidean distance.
// Deterministic for a fixed seed. Throws std::runtime_error if the covariance
// matrix is not positive definite after jitter.
std::vector<double> sample_gaussian_field(const GridSpec& grid, const CovarianceSpec& cov,
                                          uint64_t seed);

// Cholesky factors are cached per (family, scale, grid side) at unit variance;
// this drops them (e.g. between sweeps at different resolutions).
void clear_factor_cache();

}  // namespace spcv
