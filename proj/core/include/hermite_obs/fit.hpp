#pragma once

#include <string>
#include <vector>

namespace hermite_obs {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root-mean-square residual
  double r2 = 1;
  std::size_t points = 0;
};

// Least-squares y ≈ slope x + intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ModelFit {
  std::string model;
  LinearFit fit;
};

}  // namespace hermite_obs
