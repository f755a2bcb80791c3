#pragma once

#include <cmath>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

namespace detail {

template <class S>
double magnitude(const S& v) {
  if constexpr (std::is_same_v<S, mp_real>)
    return to_double(abs_r(v));
  else
    return std::abs(v);
}

template <class S>
double log_unit_roundoff() {
  using Real = typename Eigen::NumTraits<S>::Real;
  if constexpr (std::is_same_v<Real, mp_real>)
    return -static_cast<double>(mp_real::default_precision()) * std::log2(10.0) * std::log(2.0);
  else
    return std::log(std::numeric_limits<double>::epsilon() / 2);
}

}  // namespace detail

template <class S>
double norm1(const Mat<S>& A) {
  double best = 0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    double col = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) col += detail::magnitude(A(i, j));
    best = std::max(best, col);
  }
  return best;
}

// Diagonal Padé approximant after scaling ||A/2^s||_1 <= 1/2, then s squarings.
// The degree is the smallest q whose truncation bound at ||X|| = 1/2 falls below
// the working unit roundoff, so the same routine serves double and mp_real.
template <class S>
Mat<S> expm(const Mat<S>& A) {
  const Eigen::Index m = A.rows();
  if (m == 0) return A;
  const double nrm = norm1(A);
  int s = 0;
  if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  Mat<S> X = A;
  if (s > 0) X /= S(std::ldexp(1.0, s));

  const double log_u = detail::log_unit_roundoff<S>();
  int q = 1;
  for (; q < 200; ++q) {
    // 2^{3-2q} (q!)^2 / ((2q)! (2q+1)!)
    double lb = (3.0 - 2 * q) * std::log(2.0) + 2 * std::lgamma(q + 1.0) - std::lgamma(2 * q + 1.0) -
                std::lgamma(2 * q + 2.0);
    if (lb < log_u) break;
  }

  Mat<S> num = Mat<S>::Identity(m, m), den = Mat<S>::Identity(m, m);
  Mat<S> power = Mat<S>::Identity(m, m);
  S c = S(1);
  for (int k = 1; k <= q; ++k) {
    c = c * S(q - k + 1) / S((2 * q - k + 1) * k);
    power = power * X;
    num += c * power;
    if (k % 2) den -= c * power;
    else den += c * power;
  }
  Mat<S> E = den.partialPivLu().solve(num);
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

// e^{-tA}, split into m equal steps when t ||A|| exceeds 50.
template <class S>
Mat<S> propagator(const Mat<S>& A, double t) {
  const double tn = t * norm1(A);
  const long steps = tn > 50 ? static_cast<long>(std::ceil(tn / 50)) : 1;
  using Real = typename Eigen::NumTraits<S>::Real;
  Mat<S> step = expm<S>(Mat<S>(-A * S(Real(t) / Real(steps))));
  Mat<S> out = Mat<S>::Identity(A.rows(), A.cols());
  for (long e = steps; e > 0; e >>= 1) {
    if (e & 1) out = out * step;
    if (e > 1) step = step * step;
  }
  return out;
}

}  // namespace hermite_obs
