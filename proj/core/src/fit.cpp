#include "hermite_obs/fit.hpp"

#include <cmath>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractViolation("fit needs matching x and y");
  if (x.size() < 2) throw DomainError("fit needs at least two points");
  const double m = static_cast<double>(x.size());
  CompensatedSum<double> sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / m, my = sy.value() / m;
  CompensatedSum<double> sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  LinearFit f;
  f.points = x.size();
  f.slope = sxx.value() > 0 ? sxy.value() / sxx.value() : 0;
  f.intercept = my - f.slope * mx;
  CompensatedSum<double> ss;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    ss.add(r * r);
  }
  f.residual = std::sqrt(ss.value() / m);
  f.r2 = syy.value() > 0 ? 1 - ss.value() / syy.value() : 1;
  return f;
}

}  // namespace hermite_obs
