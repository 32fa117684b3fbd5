#include "spcv/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spcv/errors.hpp"

namespace spcv {

std::string to_string(VariogramFamily family) {
  switch (family) {
    case VariogramFamily::Spherical: return "spherical";
    case VariogramFamily::Exponential: return "exponential";
    case VariogramFamily::Gaussian: return "gaussian";
  }
  throw ParamError("unknown variogram family");
}

namespace {

double shape(VariogramFamily family, double u) {
  switch (family) {
    case VariogramFamily::Spherical:
      if (u >= 1.0) return 1.0;
      return 1.5 * u - 0.5 * u * u * u;
    case VariogramFamily::Exponential: return 1.0 - std::exp(-u);
    case VariogramFamily::Gaussian: return 1.0 - std::exp(-u * u);
  }
  return 0.0;
}

double effective_range_of(VariogramFamily family, double scale) {
  switch (family) {
    case VariogramFamily::Spherical: return scale;
    case VariogramFamily::Exponential: return 3.0 * scale;
    case VariogramFamily::Gaussian: return std::sqrt(3.0) * scale;
  }
  return scale;
}

struct FitPoint {
  double h, gamma, w;
};

struct LinearFit {
  double nugget = 0.0, psill = 0.0, wsse = 0.0;
};

// Best (nugget, psill) for a fixed family and scale, honouring nugget in [0, sill_cap]
// and psill >= 0.
LinearFit solve_at_scale(const std::vector<FitPoint>& pts, VariogramFamily family, double scale,
                         double sill_cap) {
  double sw = 0.0, swg = 0.0, swgg = 0.0, swy = 0.0, swgy = 0.0;
  for (const FitPoint& p : pts) {
    double g = shape(family, p.h / scale);
    sw += p.w;
    swg += p.w * g;
    swgg += p.w * g * g;
    swy += p.w * p.gamma;
    swgy += p.w * g * p.gamma;
  }

  LinearFit fit;
  double det = sw * swgg - swg * swg;
  if (std::abs(det) > 1e-14 * std::max(1.0, sw * swgg)) {
    fit.nugget = (swy * swgg - swg * swgy) / det;
    fit.psill = (sw * swgy - swg * swy) / det;
  } else {
    fit.nugget = sw > 0.0 ? swy / sw : 0.0;
    fit.psill = 0.0;
  }

  if (fit.nugget < 0.0) {
    fit.nugget = 0.0;
    fit.psill = swgg > 0.0 ? swgy / swgg : 0.0;
  }
  if (fit.psill < 0.0) {
    fit.psill = 0.0;
    fit.nugget = sw > 0.0 ? swy / sw : 0.0;
  }
  if (fit.nugget > sill_cap) {
    fit.nugget = sill_cap;
    fit.psill = swgg > 0.0 ? (swgy - sill_cap * swg) / swgg : 0.0;
    if (fit.psill < 0.0) fit.psill = 0.0;
  }
  if (fit.nugget < 0.0) fit.nugget = 0.0;

  fit.wsse = 0.0;
  for (const FitPoint& p : pts) {
    double g = shape(family, p.h / scale);
    double r = p.gamma - fit.nugget - fit.psill * g;
    fit.wsse += p.w * r * r;
  }
  return fit;
}

}  // namespace

double model_semivariance(VariogramFamily family, double nugget, double psill, double scale,
                          double h) {
  if (scale <= 0.0) throw ParamError("model_semivariance: scale must be positive");
  if (h <= 0.0) return 0.0;
  return nugget + psill * shape(family, h / scale);
}

double default_max_lag(const std::vector<Point>& coords) {
  double max_d = 0.0;
  for (size_t i = 0; i < coords.size(); ++i) {
    for (size_t j = i + 1; j < coords.size(); ++j) {
      max_d = std::max(max_d, dist(coords[i], coords[j]));
    }
  }
  return max_d / 2.0;
}

EmpiricalVariogram empirical_variogram(const std::vector<Point>& coords,
                                       const std::vector<double>& values, int n_bins,
                                       double max_lag) {
  size_t n = coords.size();
  if (n < 2) throw ParamError("empirical_variogram: need at least 2 observations");
  if (values.size() != n) throw ParamError("empirical_variogram: coords/values length mismatch");
  if (n_bins < 1) throw ParamError("empirical_variogram: n_bins must be positive");
  if (max_lag <= 0.0) max_lag = default_max_lag(coords);
  if (max_lag <= 0.0) throw ParamError("empirical_variogram: max_lag must be positive");

  double width = max_lag / n_bins;
  std::vector<double> sum_sq(n_bins, 0.0), sum_lag(n_bins, 0.0);
  std::vector<long> count(n_bins, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double d = dist(coords[i], coords[j]);
      if (d > max_lag) continue;
      int b = std::min(static_cast<int>(d / width), n_bins - 1);
      double diff = values[i] - values[j];
      sum_sq[b] += diff * diff;
      sum_lag[b] += d;
      ++count[b];
    }
  }

  EmpiricalVariogram ev;
  for (int b = 0; b < n_bins; ++b) {
    if (count[b] == 0) continue;
    ev.bins.push_back({sum_lag[b] / count[b], sum_sq[b] / (2.0 * count[b]), count[b]});
  }
  if (ev.bins.empty()) {
    throw ParamError("empirical_variogram: no nonempty bins");
  }
  return ev;
}

VariogramFit fit_variogram_model(const EmpiricalVariogram& ev) {
  std::vector<FitPoint> pts;
  double sill_cap = 0.0;
  for (const VariogramBin& b : ev.bins) {
    if (b.mean_lag <= 0.0) continue;  // zero-lag bins carry no weight under N/h^2
    pts.push_back({b.mean_lag, b.gamma, b.pairs / (b.mean_lag * b.mean_lag)});
    sill_cap = std::max(sill_cap, b.gamma);
  }
  if (pts.size() < 2) throw ParamError("fit_variogram_model: need at least 2 positive-lag bins");

  double lo = pts.front().h, hi = 2.0 * pts.back().h;
  for (const FitPoint& p : pts) {
    lo = std::min(lo, p.h);
    hi = std::max(hi, 2.0 * p.h);
  }
  if (!(hi > lo)) hi = lo * 2.0;

  const VariogramFamily families[] = {VariogramFamily::Spherical, VariogramFamily::Exponential,
                                      VariogramFamily::Gaussian};
  VariogramFit best;
  best.wsse = std::numeric_limits<double>::infinity();
  bool have_fit = false;

  for (VariogramFamily family : families) {
    // coarse log-spaced grid over scale
    const int kGrid = 200;
    double best_scale = lo, best_wsse = std::numeric_limits<double>::infinity();
    int best_idx = 0;
    double ratio = hi / lo;
    for (int i = 0; i < kGrid; ++i) {
      double s = lo * std::pow(ratio, static_cast<double>(i) / (kGrid - 1));
      LinearFit f = solve_at_scale(pts, family, s, sill_cap);
      if (f.wsse < best_wsse) {
        best_wsse = f.wsse;
        best_scale = s;
        best_idx = i;
      }
    }

    // golden-section polish between the grid neighbours of the winner
    double a = lo * std::pow(ratio, static_cast<double>(std::max(0, best_idx - 1)) / (kGrid - 1));
    double b =
        lo * std::pow(ratio, static_cast<double>(std::min(kGrid - 1, best_idx + 1)) / (kGrid - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = solve_at_scale(pts, family, x1, sill_cap).wsse;
    double f2 = solve_at_scale(pts, family, x2, sill_cap).wsse;
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = solve_at_scale(pts, family, x1, sill_cap).wsse;
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = solve_at_scale(pts, family, x2, sill_cap).wsse;
      }
    }
    double polished = (a + b) / 2.0;
    LinearFit pf = solve_at_scale(pts, family, polished, sill_cap);
    if (pf.wsse < best_wsse) {
      best_wsse = pf.wsse;
      best_scale = polished;
    }

    if (!std::isfinite(best_wsse)) continue;
    if (!have_fit || best_wsse < best.wsse) {
      LinearFit f = solve_at_scale(pts, family, best_scale, sill_cap);
      best.family = family;
      best.nugget = f.nugget;
      best.psill = f.psill;
      best.scale = best_scale;
      best.effective_range = effective_range_of(family, best_scale);
      best.wsse = f.wsse;
      have_fit = true;
    }
  }

  if (!have_fit) throw ParamError("fit_variogram_model: optimizer failed on every family");

  double total_sill = best.nugget + best.psill;
  best.near_nugget =
      total_sill <= 0.0 || best.psill <= 0.05 * total_sill || best.scale <= lo * 1.0001;
  return best;
}

}  // namespace spcv
