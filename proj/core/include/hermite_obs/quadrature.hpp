#pragma once

#include <functional>
#include <vector>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

template <class R>
struct QuadratureRule {
  std::vector<R> nodes;
  std::vector<R> weights;
};

// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the Legendre
// recurrence, nodes on [-1, 1].
template <class R>
QuadratureRule<R> gauss_legendre(int m) {
  if (m < 1) throw DomainError("Gauss-Legendre order must be positive");
  Mat<R> J = Mat<R>::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    R b = R(k) / sqrt_r(R(4 * k * k - 1));
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat<R>> es(J);
  QuadratureRule<R> q;
  for (int i = 0; i < m; ++i) {
    q.nodes.push_back(es.eigenvalues()(i));
    R v = es.eigenvectors()(0, i);
    q.weights.push_back(2 * v * v);
  }
  return q;
}

// Physicists' Gauss-Hermite rule for weight e^{-x^2}.
QuadratureRule<double> gauss_hermite(int m);

struct AdaptiveResult {
  double value;
  double abs_error;
  int order;
  int panels;
};

// Adaptive bisection with fixed-order Gauss-Legendre panels; a panel is
// accepted when the one-level refinement changes it by less than its share
// of the tolerance.  The reported error sums the accepted panel differences.
AdaptiveResult adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                       int order = 20, int max_depth = 40);

}  // namespace hermite_obs
