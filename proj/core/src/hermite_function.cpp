#include "hermite_obs/hermite_function.hpp"

namespace hermite_obs {

double eval_hermite_1d(int k, double x) {
  if (k < 0) throw DomainError("Hermite degree must be non-negative");
  return hermite_values<double>(k, x).back();
}

}  // namespace hermite_obs
