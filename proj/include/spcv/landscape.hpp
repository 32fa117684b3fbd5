#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spcv/grid.hpp"

namespace spcv {

// A simulated landscape: thirteen predictor fields plus the target, one value
// per grid cell. X[k-1] holds variable Xk.
struct Landscape {
  GridSpec grid;
  std::array<std::vector<double>, 13> X;
  std::vector<double> y;
  uint64_t seed = 0;

  const std::vector<double>& field(int k) const { return X[k - 1]; }
  std::vector<double>& field(int k) { return X[k - 1]; }
};

// Linear interpolation between order statistics (R's default, type 7).
double quantile_linear(std::vector<double> values, double p);

// Bell transform used by X12/X13: exp(-x^2/4) / sqrt(2*pi).
double bell_transform(double x);

// Fills X4, X5, X11, X12, X13 from the raw fields X1-X3, X6-X10.
// Throws ParamError if any cell has X3 exactly zero (X11 would divide by zero).
void derive_predictors(Landscape& land);

// Builds y: base sum X1+X5+X6+X12+X13, capped by the limiting ratio X11
// wherever that ratio is positive.
void compute_target(Landscape& land);

// Samples the eight raw fields from per-variable substreams of seed, derives
// the rest, computes y. Pure function of (grid, seed).
Landscape simulate_landscape(const GridSpec& grid, uint64_t seed);

// CSV schema: cell_id,row,col,cx,cy,X1,...,X13,y — one row per cell, values
// printed so they round-trip exactly.
void write_landscape_csv(const Landscape& land, const std::string& path);
Landscape read_landscape_csv(const std::string& path);

}  // namespace spcv
