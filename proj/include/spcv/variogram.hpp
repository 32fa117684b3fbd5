#pragma once

#include <string>
#include <vector>

#include "spcv/grid.hpp"

namespace spcv {

struct VariogramBin {
  double mean_lag = 0.0;
  double gamma = 0.0;  // Matheron semivariance
  long pairs = 0;
};

struct EmpiricalVariogram {
  std::vector<VariogramBin> bins;  // nonempty bins, increasing mean_lag
};

enum class VariogramFamily { Spherical, Exponential, Gaussian };

std::string to_string(VariogramFamily family);

struct VariogramFit {
  VariogramFamily family = VariogramFamily::Spherical;
  double nugget = 0.0;
  double psill = 0.0;
  double scale = 0.0;
  double effective_range = 0.0;  // Spherical: scale, Exponential: 3*scale, Gaussian: sqrt(3)*scale
  double wsse = 0.0;
  bool near_nugget = false;  // negligible partial sill or scale pinned at its lower bound
};

// Model semivariance at lag h (gamma = nugget + psill * shape(h/scale)).
double model_semivariance(VariogramFamily family, double nugget, double psill, double scale,
                          double h);

// Half the maximum pairwise distance; the conventional cutoff.
double default_max_lag(const std::vector<Point>& coords);

// Matheron estimator over equal-width bins up to max_lag (pairs beyond are ignored).
// Pass max_lag <= 0 to use default_max_lag. Empty bins are dropped; no surviving
// bins at all is an estimation error.
EmpiricalVariogram empirical_variogram(const std::vector<Point>& coords,
                                       const std::vector<double>& values, int n_bins = 15,
                                       double max_lag = 0.0);

// Weighted least squares (weights N/h^2) over the three candidate families, each fitted
// by a scale-grid search with a golden-section polish and a linear solve for nugget and
// partial sill at every scale. Returns the family with the lowest weighted SSE.
VariogramFit fit_variogram_model(const EmpiricalVariogram& ev);

}  // namespace spcv
