#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hermite_obs/expansion.hpp"
#include "hermite_obs/fit.hpp"
#include "hermite_obs/symbol.hpp"

namespace hermite_obs {

// A_{βα} = <Φ_β, q^w Φ_α> on E_N.
struct GalerkinOperator {
  int n = 1;
  int N = 0;
  Eigen::MatrixXcd A;
  QuadraticSymbol symbol;

  std::size_t size() const { return static_cast<std::size_t>(A.rows()); }
  bool is_real() const { return A.imag().isZero(0.0); }
  // Smallest eigenvalue of the Hermitian part (A + A*)/2.
  double accretivity_margin() const;
};

template <class R>
struct ComplexParts {
  Mat<R> re;
  Mat<R> im;
};

// Exact Galerkin matrix in working precision R, as real and imaginary parts.
template <class R>
ComplexParts<R> weyl_quantize_parts(const QuadraticSymbol& q, int N);

GalerkinOperator weyl_quantize(const QuadraticSymbol& q, int N);

struct EvolveResult {
  HermiteExpansion f;
  double norm_ratio = 1;  // ||f(t)|| / ||f0||
  bool contraction_violation = false;
};

EvolveResult evolve(const GalerkinOperator& A, const HermiteExpansion& f0, double t);

// ||e^{-tA_N} f0 - π_N e^{-tA_{2N}} f0|| / ||f0||.
double galerkin_convergence(const QuadraticSymbol& q, const HermiteExpansion& f0, double t);

struct DissipationPoint {
  double t = 0;
  int k = 0;
  double ratio = 0;        // sup_f ||(1-π_k) e^{-tA} f|| / ||f||, by SVD
  double probe_ratio = 0;  // best of the random probes, never above ratio
};

struct DissipationSlice {
  double t = 0;
  LinearFit fit;  // log ratio against k
  double rate = 0;  // -slope
};

struct DissipationReport {
  std::vector<DissipationPoint> points;
  std::vector<DissipationSlice> slices;
  int k0 = 0;
  double C0 = 0;  // fitted from rate ≈ t^{2k0+1}/C0 on t <= t0
  double t0 = 0;  // largest grid time up to which the rate keeps growing
  LinearFit exponent_fit;  // log rate against log t on t <= t0
  bool guess_consistent = true;  // rate >= min(t,t0)^{2k0+1}/C0_guess on the grid
  std::optional<double> harmonic_error;  // max |ratio - e^{-(2k+2+n)t}| for the harmonic symbol
};

DissipationReport dissipation_check(const GalerkinOperator& A, int k0, double C0_guess, const std::vector<double>& t_grid,
                                    const std::vector<int>& k_grid, int probes = 20, std::uint64_t seed = 1);

}  // namespace hermite_obs
