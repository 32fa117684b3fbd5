#pragma once

#include <string>

namespace spcv {

enum class CovFamily { Exponential, Gaussian };

struct CovarianceSpec {
  CovFamily family = CovFamily::Exponential;
  double variance = 1.0;  // sill, C(0)
  double scale = 1.0;     // distance parameter, same units as coordinates
};

double covariance(const CovarianceSpec& spec, double h);

std::string to_string(CovFamily family);

}  // namespace spcv
