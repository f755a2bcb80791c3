#include "hermite_obs/chebyshev.hpp"

#include <cmath>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

double chebyshev_value(ChebyshevKind kind, int d, double x) {
  if (d < 0) throw DomainError("Chebyshev degree must be non-negative");
  double prev = 1.0;
  double cur = kind == ChebyshevKind::first ? x : 2 * x;
  if (d == 0) return prev;
  for (int k = 1; k < d; ++k) {
    double next = 2 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double remez_F(int n, double t) {
  if (n < 1) throw DomainError("dimension must be positive");
  if (!(t > 0 && t <= 1)) throw DomainError("Remez ratio must lie in (0, 1]");
  double r = std::pow(1 - t, 1.0 / n);
  return (1 + r) / (1 - r);
}

double remez_bound(int n, int d, double t, bool complex_variant) {
  if (!(t > 0 && t <= 1)) throw DomainError("Remez ratio t = |E|/|K| must lie in (0, 1]");
  if (d < 0) throw DomainError("polynomial degree must be non-negative");
  double F = remez_F(n, t);
  if (complex_variant) return std::pow(2.0, 2 * d + 1) * std::pow(F, d);
  return chebyshev_value(ChebyshevKind::first, d, F);
}

double log_remez_ball_bound(int n, int d, double rho) {
  if (!(rho > 0 && rho <= 1)) throw DomainError("ball density ratio must lie in (0, 1]");
  if (d < 0) throw DomainError("polynomial degree must be non-negative");
  return (2 * d + 1) * std::log(2.0) - 0.5 * std::log(3.0) + 0.5 * std::log(4 / rho) + d * std::log(remez_F(n, rho / 4));
}

double remez_ball_bound(int n, int d, double rho) { return std::exp(log_remez_ball_bound(n, d, rho)); }

double kovrijkine_interval_bound(double C, double E_measure, double M) {
  if (!(M >= 1)) throw DomainError("Kovrijkine lemma requires M >= 1");
  if (!(E_measure > 0)) throw DomainError("|E| must be positive");
  if (!(C > 1)) throw DomainError("Kovrijkine constant must exceed 1");
  return std::pow(C / E_measure, std::log(M) / std::log(2.0));
}

}  // namespace hermite_obs
