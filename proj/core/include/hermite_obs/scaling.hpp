#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hermite_obs/bounds.hpp"
#include "hermite_obs/fit.hpp"
#include "hermite_obs/gram.hpp"

namespace hermite_obs {

struct ScalingRow {
  int N;
  std::size_t dim;
  SpectralConstant constant;
  std::optional<BoundValue> bound;
  bool violation = false;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  std::vector<ModelFit> fits;  // log C_N against sqrt(N), N, N ln N
  std::string best_model;
  LinearFit power;             // log log C_N against log N; slope is p
  bool power_defined = false;
  int violations = 0;
  std::vector<int> singular_N;
  std::optional<BoundParams> bound_params;
};

// Builds the Gram operator for every N (the region must be truncated for the
// largest N), measures C_N, compares against the bound of the region's
// hypothesis class and fits the growth models.
ScalingReport scaling_study(std::shared_ptr<const Region> omega, const std::vector<int>& N_list,
                            const PrecisionPolicy& policy = {}, std::optional<BoundParams> params = std::nullopt);

}  // namespace hermite_obs
