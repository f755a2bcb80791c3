#pragma once

#include <vector>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

// phi_0(x), ..., phi_K(x) by the normalized recurrence
//   phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1},
// carried with a running exponent so neither the Gaussian seed nor large k
// underflow before the weight is applied.
template <class R>
std::vector<R> hermite_values(int K, const R& x) {
  std::vector<R> out(static_cast<std::size_t>(K) + 1);
  const R seed_log = -x * x / 2 - log_r(pi_r<R>()) / 4;
  R prev(0), cur(1);
  R scale_log = seed_log;
  const R big(1e100);
  const R log_big = log_r(big);
  for (int k = 0; k <= K; ++k) {
    out[static_cast<std::size_t>(k)] = cur * exp_r(scale_log);
    if (k == K) break;
    R next = x * sqrt_r(R(2) / R(k + 1)) * cur - sqrt_r(R(k) / R(k + 1)) * prev;
    prev = cur;
    cur = next;
    if (abs_r(cur) > big) {
      cur /= big;
      prev /= big;
      scale_log += log_big;
    }
  }
  return out;
}

// phi_k'(x) from neighbouring values: (sqrt(k) phi_{k-1} - sqrt(k+1) phi_{k+1}) / sqrt(2).
// `values` must hold phi_0..phi_{k+1}.
template <class R>
R hermite_derivative(const std::vector<R>& values, int k) {
  R left = k > 0 ? sqrt_r(R(k)) * values[static_cast<std::size_t>(k - 1)] : R(0);
  R right = sqrt_r(R(k + 1)) * values[static_cast<std::size_t>(k + 1)];
  return (left - right) / sqrt_r(R(2));
}

double eval_hermite_1d(int k, double x);

}  // namespace hermite_obs
