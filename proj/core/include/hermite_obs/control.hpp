#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hermite_obs/fit.hpp"
#include "hermite_obs/galerkin.hpp"
#include "hermite_obs/gram.hpp"

namespace hermite_obs {

// f' = -A f + Πω u on E_N; observation and control both act through Πω.
struct ControlProblem {
  GalerkinOperator A;
  GramOperator omega;
  double T = 1;
  int panels = 4;                // initial composite-Gauss panel count
  double stagnation_tol = 1e-8;  // relative change at which panel doubling stops
  unsigned precision_bits = 53;  // 53 starts in double
  unsigned max_bits = 4096;

  void validate() const;
};

struct ObservabilityReport {
  double T = 0;
  double C_T = 0;
  double log_C_T = 0;
  HermiteExpansion extremal{1, 0};  // g0 attaining C_T, unit norm
  std::string method = "generalized-eigen";
  unsigned precision_bits = 53;
  int panels = 0;
  bool ceiling = false;  // W singular at max precision: C_T is a lower bound
  double W_condition = 0;
  double probe_max = 0;  // best Rayleigh quotient among 20 random probes
};

ObservabilityReport observability_constant(const ControlProblem& p, std::uint64_t seed = 1);

struct StageLog {
  int stage = 0;
  int k = 0;
  double start = 0;
  double active = 0;   // duration of the controlled half
  double passive = 0;  // duration of the free half
  double cost = 0;
  double energy_after = 0;       // ||f|| / ||f0|| at the end of the stage
  double energy_before_passive = 0;  // ||f|| entering the free half
  double high_before_passive = 0;    // ||(1-π_k) f|| entering the free half
  double high_after_passive = 0;
  double decay_bound = 0;  // ||(1-π_k) e^{-τA}||, the measured dissipation factor
  double gramian_condition = 0;
  unsigned precision_bits = 53;
};

struct ControlResult {
  std::vector<double> times;
  std::vector<HermiteExpansion> u;
  double cost = 0;
  double residual = 0;  // ||f(T)|| / ||f0||
  double gramian_condition = 0;
  unsigned precision_bits = 53;
  int panels = 0;
  bool partial = false;
  int aborted_stage = -1;
  std::vector<StageLog> stages;
};

// Minimal-norm control from the reachability Gramian.
ControlResult hum_control(const ControlProblem& p, const HermiteExpansion& f0);

struct StaircaseOptions {
  double K0 = 2;
  double a = 0.5;
  double b = 1;
  int m = 1;  // 2 k0 + 1
  double target = 1e-6;
  int max_stages = 32;
};

// Dyadic intervals T_j = T 2^{-j-1}; steer π_{k_j} f to zero on the first
// half, evolve freely on the second, k_j = ⌈K0 2^{j a/(b-a)}⌉.
ControlResult lr_staircase(const ControlProblem& p, const HermiteExpansion& f0, const StaircaseOptions& opt = {});

struct BlowupRow {
  double T = 0;
  double C_T = 0;
  double log_C_T = 0;
  unsigned precision_bits = 53;
  std::string method;
  bool ceiling = false;
};

struct BlowupReport {
  int k0 = 0;
  std::vector<BlowupRow> rows;
  LinearFit fit;        // log C_T against T^{-(2k0+1)}
  LinearFit fit_inv_T;  // against T^{-1}
  LinearFit fit_inv_T3;  // against T^{-3}
  std::string preferred;  // "T^-1" or "T^-3", lower residual
  std::vector<double> excluded;  // horizons that hit the precision ceiling
};

BlowupReport cost_blowup_study(const ControlProblem& tmpl, const std::vector<double>& T_list, int k0);

}  // namespace hermite_obs
