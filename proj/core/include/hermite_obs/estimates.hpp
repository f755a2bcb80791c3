#pragma once

#include <utility>
#include <vector>

#include "hermite_obs/expansion.hpp"

namespace hermite_obs {

struct BernsteinResult {
  double lhs;
  double rhs;
  double log_rhs;
  bool pass;
};

// lhs = ||∂^β f|| exactly through derivative ladders;
// rhs = e^{e/(2δ^2)} (2δ)^{|β|} |β|! e^{sqrt(N)/δ} ||f||.
BernsteinResult bernstein_check(const HermiteExpansion& f, double delta, const MultiIndex& beta);

// ||e^{δ|x|^2} g|| by the series sum_k δ^k |x|^{2k} g / k!, each term exact in
// coefficient space.  The tail after K terms is bounded termwise by
//   2^{M/2} binom(k+n-1, n-1) (16nδ)^k ||g||,  M = cutoff of g.
struct WeightedNorm {
  double value;
  double remainder;
  int terms;
  bool certified;
};
WeightedNorm weighted_norm(const HermiteExpansion& g, double delta, double rel_tol = 1e-8, int max_terms = 400);

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

struct WeightedResult {
  double lhs_x;
  double lhs_xi;
  double rhs;
  double remainder;
  Verdict verdict;
};

// lhs_x = ||e^{δ|x|^2} ∂^β f||, lhs_xi = ||e^{δ|D|^2} x^β f|| (through the
// Hermite-Fourier symmetry), rhs = 2^n/(1-32nδ) 2^{N/2} 2^{3|β|/2} sqrt(|β|!) ||f||.
WeightedResult weighted_check(const HermiteExpansion& f, double delta, const MultiIndex& beta);

struct TailBound {
  double exact;
  double bound;
};

// ∫_{|x|>=a} phi_k^2 by adaptive quadrature against
// (2^{k+1}/(k! sqrt(pi))) a^{2k-1} e^{-a^2}; requires a >= sqrt(2k+1).
TailBound hermite_tail_bound(int k, double a);

struct TailConstants {
  int n;
  double c_n;
  std::vector<std::pair<int, double>> certificate;  // (N, right side at a = c_n sqrt(N+1))
  int worst_N;
};

// Right side of the E_N tail estimate at radius a:
// (2^n n^{3/2}/sqrt(pi)) (e^{-a^2/(2n)}/a) 8^N.
double tail_estimate_rhs(int n, int N, double a);

// Smallest c >= sqrt(2n ln 8) with tail_estimate_rhs(n, N, c sqrt(N+1)) <= 1/4
// for every N.  Cached per n.
const TailConstants& tail_constant_cn(int n);

}  // namespace hermite_obs
