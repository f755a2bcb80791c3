#pragma once

#include <vector>

#include "hermite_obs/hermite_function.hpp"

namespace hermite_obs {

// Matrix primitive of phi_j phi_k for degrees 0..K:
//   ∫_a^b phi_j phi_k = P(b)_{jk} - P(a)_{jk}.
// Off the diagonal P_{jk} = (phi_j phi_k' - phi_j' phi_k) / (2(j-k)); on it
// P_{kk} = erf(x)/2 - sum_{m=1}^k phi_m phi_{m-1} / sqrt(2m).
template <class R>
Mat<R> hermite_primitive(int K, const R& x) {
  const auto v = hermite_values<R>(K + 1, x);
  std::vector<R> d(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) d[static_cast<std::size_t>(k)] = hermite_derivative(v, k);
  Mat<R> P(K + 1, K + 1);
  R diag = erf_r(x) / 2;
  for (int k = 0; k <= K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (k > 0) diag -= v[ku] * v[ku - 1] / sqrt_r(R(2 * k));
    P(k, k) = diag;
    for (int j = 0; j < k; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      R w = (v[ju] * d[ku] - d[ju] * v[ku]) / R(2 * (j - k));
      P(j, k) = w;
      P(k, j) = w;
    }
  }
  return P;
}

}  // namespace hermite_obs
