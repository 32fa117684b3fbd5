#include "spcv/covariance.hpp"

#include <cmath>

namespace spcv {

double covariance(const CovarianceSpec& spec, double h) {
  double r = h / spec.scale;
  switch (spec.family) {
    case CovFamily::Exponential:
      return spec.variance * std::exp(-r);
    case CovFamily::Gaussian:
      return spec.variance * std::exp(-r * r);
  }
  return 0.0;
}

std::string to_string(CovFamily family) {
  return family == CovFamily::Exponential ? "exponential" : "gaussian";
}

}  // namespace spcv
