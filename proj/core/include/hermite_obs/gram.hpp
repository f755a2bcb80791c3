#pragma once

#include <memory>

#include "hermite_obs/multi_index.hpp"
#include "hermite_obs/region.hpp"

namespace hermite_obs {

// G_{αβ} = ∫_ω Φ_α Φ_β on E_N, assembled from the matrix primitive of the
// one-dimensional products, so each box contributes a tensor product of
// endpoint differences.
template <class R>
Mat<R> assemble_gram(const Region& omega, const IndexSet& index);

struct GramOperator {
  int n = 1;
  int N = 0;
  Eigen::MatrixXd matrix;
  double entry_error = 0;       // rounding at double precision plus truncation
  double truncation_error = 0;  // mass of Φ_α outside the truncation ball, worst α
  std::shared_ptr<const Region> region;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
  // Entry error when assembled with machine epsilon `eps`.
  double entry_error_at(double eps) const;
};

// Refuses truncated regions whose radius is below truncate_radius(N, n, min_safety).
GramOperator gram_matrix(std::shared_ptr<const Region> omega, int N, double min_safety = 1.5);
GramOperator gram_matrix(const Region& omega, int N, double min_safety = 1.5);

struct PrecisionPolicy {
  unsigned start_bits = 53;  // 53 starts in double
  unsigned extended_bits = default_precision_bits();
  unsigned max_bits = 4096;
};

struct SpectralConstant {
  double C = 1;
  double log_C = 0;
  double lambda_min = 1;
  double log_lambda_min = 0;
  double lambda_max = 1;
  unsigned precision_bits = 53;
  bool singular = false;       // indistinguishable from singular at max precision
  double C_lower_bound = 1;    // meaningful when singular
};

// C_N = λ_min(G)^{-1/2}, escalating precision until
//   λ_min > 1e3 · eps · λ_max · size  and  λ_min > size · entry_error.
SpectralConstant spectral_constant(const GramOperator& G, const PrecisionPolicy& policy = {});

}  // namespace hermite_obs
