#pragma once

namespace hermite_obs {

enum class ChebyshevKind { first, second };

// T_d or U_d by the recurrence P_{d+1} = 2x P_d - P_{d-1}.
double chebyshev_value(ChebyshevKind kind, int d, double x);

// F(t) = (1 + (1-t)^{1/n}) / (1 - (1-t)^{1/n}), decreasing on (0, 1].
double remez_F(int n, double t);

// Real polynomials: T_d(F(t)).  Complex polynomials: 2^{2d+1} F(t)^d.
double remez_bound(int n, int d, double t, bool complex_variant = false);

// (2^{2d+1}/sqrt(3)) sqrt(4/rho) F(rho/4)^d, and its logarithm.
double remez_ball_bound(int n, int d, double rho);
double log_remez_ball_bound(int n, int d, double rho);

// (C/|E|)^{ln M / ln 2}.
double kovrijkine_interval_bound(double C, double E_measure, double M);

}  // namespace hermite_obs
