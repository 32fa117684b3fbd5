#include "spcv/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spcv/covariance.hpp"
#include "spcv/csv.hpp"
#include "spcv/errors.hpp"
#include "spcv/gaussian_field.hpp"
#include "spcv/rng.hpp"

namespace spcv {

namespace {

struct RawFieldSpec {
  int index;  // 1-based variable number
  CovarianceSpec cov;
};

const RawFieldSpec kRawFields[] = {
    {1, {CovFamily::Exponential, 0.1, 0.1}},
    {2, {CovFamily::Exponential, 0.3, 0.1}},
    {3, {CovFamily::Gaussian, 0.1, 0.3}},
    {6, {CovFamily::Exponential, 0.1, 0.1}},
    {7, {CovFamily::Exponential, 0.1, 0.1}},
    {8, {CovFamily::Exponential, 0.1, 0.1}},
    {9, {CovFamily::Gaussian, 0.1, 0.3}},
    {10, {CovFamily::Gaussian, 0.1, 0.3}},
};

}  // namespace

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw ParamError("quantile of empty vector");
  std::sort(values.begin(), values.end());
  double h = (values.size() - 1) * p;
  size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

double bell_transform(double x) {
  return std::exp(-x * x / 4.0) / std::sqrt(2.0 * std::numbers::pi);
}

void derive_predictors(Landscape& land) {
  int n = land.grid.n_cells();
  const auto& x1 = land.field(1);
  const auto& x2 = land.field(2);
  const auto& x3 = land.field(3);

  auto& x11 = land.field(11);
  x11.resize(n);
  for (int i = 0; i < n; ++i) {
    if (x3[i] == 0.0) {
      throw ParamError("X3 is exactly zero at cell " + std::to_string(i) +
                       "; X11 = X2/X3 is undefined");
    }
    x11[i] = x2[i] / x3[i];
  }

  double cutoff = quantile_linear(x11, 0.95);
  auto& x4 = land.field(4);
  x4.resize(n);
  for (int i = 0; i < n; ++i) x4[i] = x11[i] > cutoff ? 0.0 : 1.0;

  auto& x5 = land.field(5);
  x5.resize(n);
  for (int i = 0; i < n; ++i) x5[i] = x1[i] + x2[i] + x3[i] + x2[i] * x3[i];

  auto& x12 = land.field(12);
  auto& x13 = land.field(13);
  x12.resize(n);
  x13.resize(n);
  for (int i = 0; i < n; ++i) {
    x12[i] = bell_transform(x3[i]);
    x13[i] = bell_transform(x2[i]);
  }
}

void compute_target(Landscape& land) {
  int n = land.grid.n_cells();
  const auto& x1 = land.field(1);
  const auto& x5 = land.field(5);
  const auto& x6 = land.field(6);
  const auto& x11 = land.field(11);
  const auto& x12 = land.field(12);
  const auto& x13 = land.field(13);

  land.y.resize(n);
  for (int i = 0; i < n; ++i) {
    double base = x1[i] + x5[i] + x6[i] + x12[i] + x13[i];
    // The ratio caps the base sum only where it is a meaningful (positive)
    // limit; a negative resource ratio limits nothing.
    land.y[i] = (x11[i] > 0.0 && base >= x11[i]) ? x11[i] : base;
  }
}

Landscape simulate_landscape(const GridSpec& grid, uint64_t seed) {
  Landscape land;
  land.grid = grid;
  land.seed = seed;
  for (const auto& rf : kRawFields) {
    uint64_t sub = substream_seed(seed, hash_label("X" + std::to_string(rf.index)));
    land.field(rf.index) = sample_gaussian_field(grid, rf.cov, sub);
  }
  derive_predictors(land);
  compute_target(land);
  return land;
}

void write_landscape_csv(const Landscape& land, const std::string& path) {
  std::ostringstream out;
  out << "cell_id,row,col,cx,cy";
  for (int k = 1; k <= 13; ++k) out << ",X" << k;
  out << ",y\n";
  for (int i = 0; i < land.grid.n_cells(); ++i) {
    Point c = land.grid.center(i);
    out << i << ',' << land.grid.row_of(i) << ',' << land.grid.col_of(i) << ','
        << fmt_double(c.x) << ',' << fmt_double(c.y);
    for (int k = 1; k <= 13; ++k) out << ',' << fmt_double(land.field(k)[i]);
    out << ',' << fmt_double(land.y[i]) << '\n';
  }
  write_text_file(path, out.str());
}

Landscape read_landscape_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty landscape file: " + path);
  auto header = split_csv_line(line);
  if (header.size() != 19 || header[0] != "cell_id" || header[18] != "y") {
    throw IoError("unexpected landscape header in " + path);
  }

  Landscape land;
  std::vector<std::array<double, 19>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parts = split_csv_line(line);
    if (parts.size() != 19) throw IoError("malformed landscape row in " + path);
    std::array<double, 19> row;
    for (size_t j = 0; j < 19; ++j) row[j] = std::stod(parts[j]);
    rows.push_back(row);
  }

  int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows.size()))));
  if (side * side != static_cast<int>(rows.size())) {
    throw IoError("landscape is not a square grid: " + path);
  }
  land.grid.side_cells = side;
  for (int k = 1; k <= 13; ++k) land.field(k).resize(rows.size());
  land.y.resize(rows.size());
  for (const auto& row : rows) {
    int id = static_cast<int>(row[0]);
    if (id < 0 || id >= static_cast<int>(rows.size())) {
      throw IoError("cell_id out of range in " + path);
    }
    for (int k = 1; k <= 13; ++k) land.field(k)[id] = row[4 + k];
    land.y[id] = row[18];
  }
  return land;
}

}  // namespace spcv
