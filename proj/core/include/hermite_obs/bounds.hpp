#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hermite_obs/region.hpp"

namespace hermite_obs {

struct OpenBallHypothesis {
  std::vector<double> x0;
  double r;
};
struct DensityHypothesis {
  double delta;  // |ω ∩ B(0,R)| >= δ |B(0,R)| ...
  double R0;     // ... for every R >= R0
};
struct ThickHypothesis {
  double L;
  double gamma;
};

struct BoundParams {
  int n = 1;
  std::variant<OpenBallHypothesis, DensityHypothesis, ThickHypothesis> hypothesis;
  double c_n = 0;  // 0 means tail_constant_cn(n)
  double C_sobolev = 10;
  double C_kov = 300;

  void validate() const;
  double tail_constant() const;
  std::string variant_name() const;  // "i", "ii" or "iii"
};

struct BoundValue {
  double log_value = 0;
  bool applicable = true;
  std::string variant;
  double value() const;
};

// Explicit constants of the three spectral-inequality proofs, in log form:
//  (i)   (2/√3) e^{(|x0|+r)^2/2} sqrt(1 + ρ^{n-1} 2^{12N+n+4}/(3 r^{2N+n}) (ρ - r/2)^{2N+1}),
//        ρ = c_n sqrt(N+1) + |x0|, valid when c_n sqrt(N+1) > 2|x0| + r;
//  (ii)  sqrt(2^{4N+6}/(9δ)) F(δ/4)^N e^{c_n^2 (N+1)/2}, valid when c_n sqrt(N+1) >= R0;
//  (iii) √2 (2/√γ) [(4L)^{n/2} C̃_n(1/(δ_n L)) e^{δ_n L √N}]^{log2(2 C_kov n^{n/2} |S^{n-1}| / γ)}.
BoundValue theoretical_bound(const BoundParams& p, int N);

// δ_n = 2 sqrt(2^{11} n^3 (2^n + 1)).
double delta_n(int n);
// log C̃_n(δ) = log C_sobolev + e/(2δ^2) + ½ log Σ_{|β|<=n} (32δ^2(2^n+1))^{|β|} (|β|!)^2.
double log_C_tilde(int n, double delta, double C_sobolev);
double sphere_area(int n);

// Hypothesis class implied by a region's generator, when it has one.
std::optional<BoundParams> default_bound_params(const Region& omega);

}  // namespace hermite_obs
