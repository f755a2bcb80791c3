#include "hermite_obs/quadrature.hpp"

#include <cmath>

namespace hermite_obs {

QuadratureRule<double> gauss_hermite(int m) {
  if (m < 1) throw DomainError("Gauss-Hermite order must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    double b = std::sqrt(k / 2.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule<double> q;
  for (int i = 0; i < m; ++i) {
    q.nodes.push_back(es.eigenvalues()(i));
    double v = es.eigenvectors()(0, i);
    q.weights.push_back(std::sqrt(M_PI) * v * v);
  }
  return q;
}

namespace {

struct PanelIntegrator {
  const std::function<double(double)>& f;
  QuadratureRule<double> rule;

  double panel(double a, double b) const {
    double h = (b - a) / 2, c = (a + b) / 2;
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s.add(rule.weights[i] * f(c + h * rule.nodes[i]));
    return h * s.value();
  }

  void run(double a, double b, double whole, double tol, int depth, CompensatedSum<double>& value,
           double& err, int& panels) const {
    double m = (a + b) / 2;
    double left = panel(a, m), right = panel(m, b);
    double diff = std::abs(left + right - whole);
    if (diff <= tol || depth == 0) {
      value.add(left + right);
      err += diff;
      panels += 2;
      return;
    }
    run(a, m, left, tol / 2, depth - 1, value, err, panels);
    run(m, b, right, tol / 2, depth - 1, value, err, panels);
  }
};

}  // namespace

AdaptiveResult adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                       int order, int max_depth) {
  if (a == b) return {0.0, 0.0, order, 0};
  PanelIntegrator pi{f, gauss_legendre<double>(order)};
  CompensatedSum<double> value;
  double err = 0;
  int panels = 0;
  pi.run(a, b, pi.panel(a, b), abs_tol, max_depth, value, err, panels);
  return {value.value(), err, order, panels};
}

}  // namespace hermite_obs
