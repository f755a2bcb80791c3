#include "hermite_obs/scaling.hpp"

#include <cmath>

namespace hermite_obs {

ScalingReport scaling_study(std::shared_ptr<const Region> omega, const std::vector<int>& N_list,
                            const PrecisionPolicy& policy, std::optional<BoundParams> params) {
  for (std::size_t i = 1; i < N_list.size(); ++i)
    if (N_list[i] <= N_list[i - 1]) throw ContractViolation("N list must be strictly increasing");
  ScalingReport rep;
  rep.bound_params = params ? params : default_bound_params(*omega);
  for (int N : N_list) {
    GramOperator G = gram_matrix(omega, N);
    ScalingRow row{N, G.size(), spectral_constant(G, policy), std::nullopt, false};
    if (rep.bound_params) {
      row.bound = theoretical_bound(*rep.bound_params, N);
      double measured = row.constant.singular ? std::log(row.constant.C_lower_bound) : row.constant.log_C;
      row.violation = row.bound->applicable && measured > row.bound->log_value;
      if (row.violation) ++rep.violations;
    }
    if (row.constant.singular) rep.singular_N.push_back(N);
    rep.rows.push_back(std::move(row));
  }
  std::vector<double> y, xs, xn, xnl, lx, ly;
  for (const auto& r : rep.rows) {
    if (r.constant.singular) continue;
    double N = r.N;
    y.push_back(r.constant.log_C);
    xs.push_back(std::sqrt(N));
    xn.push_back(N);
    xnl.push_back(N * std::log(std::max(N, 1.0)));
    if (r.constant.log_C > 1e-12 && N > 0) {
      lx.push_back(std::log(N));
      ly.push_back(std::log(r.constant.log_C));
    }
  }
  if (y.size() >= 2) {
    rep.fits = {{"sqrt_N", fit_line(xs, y)}, {"N", fit_line(xn, y)}, {"N_log_N", fit_line(xnl, y)}};
    const ModelFit* best = &rep.fits[0];
    for (const auto& f : rep.fits)
      if (f.fit.residual < best->fit.residual) best = &f;
    rep.best_model = best->model;
  }
  if (lx.size() >= 2) {
    rep.power = fit_line(lx, ly);
    rep.power_defined = true;
  }
  return rep;
}

}  // namespace hermite_obs
