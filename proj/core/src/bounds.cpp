#include "hermite_obs/bounds.hpp"

#include <cmath>

#include "hermite_obs/chebyshev.hpp"
#include "hermite_obs/estimates.hpp"
#include "hermite_obs/multi_index.hpp"

namespace hermite_obs {

void BoundParams::validate() const {
  if (n < 1) throw DomainError("dimension must be positive");
  if (const auto* b = std::get_if<OpenBallHypothesis>(&hypothesis)) {
    if (!(b->r > 0)) throw DomainError("ball radius r must be positive");
    if (static_cast<int>(b->x0.size()) != n) throw DomainError("ball centre dimension mismatch");
  } else if (const auto* d = std::get_if<DensityHypothesis>(&hypothesis)) {
    if (!(d->delta > 0 && d->delta <= 1)) throw DomainError("density fraction must lie in (0, 1]");
    if (!(d->R0 >= 0)) throw DomainError("density radius R0 must be non-negative");
  } else {
    const auto& t = std::get<ThickHypothesis>(hypothesis);
    if (!(t.gamma > 0 && t.gamma <= 1)) throw DomainError("thickness fraction must lie in (0, 1]");
    if (!(t.L > 0)) throw DomainError("thickness scale must be positive");
  }
  if (!(C_sobolev > 0) || !(C_kov > 1)) throw DomainError("auxiliary constants must be positive (C_kov > 1)");
}

double BoundParams::tail_constant() const { return c_n > 0 ? c_n : tail_constant_cn(n).c_n; }

std::string BoundParams::variant_name() const {
  switch (hypothesis.index()) {
    case 0: return "i";
    case 1: return "ii";
    default: return "iii";
  }
}

double BoundValue::value() const { return std::exp(log_value); }

double delta_n(int n) { return 2 * std::sqrt(std::pow(2.0, 11) * n * n * n * (std::pow(2.0, n) + 1)); }

double sphere_area(int n) { return 2 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0); }

double log_C_tilde(int n, double delta, double C_sobolev) {
  const double q = 32 * delta * delta * (std::pow(2.0, n) + 1);
  double log_sum = -INFINITY;
  for (int k = 0; k <= n; ++k) {
    // binom(k+n-1, n-1) multi-indices of order k.
    double term = std::log(static_cast<double>(binomial(k + n - 1, n - 1))) + k * std::log(q) + 2 * std::lgamma(k + 1.0);
    log_sum = log_add_exp(log_sum, term);
  }
  return std::log(C_sobolev) + std::exp(1.0) / (2 * delta * delta) + 0.5 * log_sum;
}

namespace {

double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

}  // namespace

BoundValue theoretical_bound(const BoundParams& p, int N) {
  p.validate();
  if (N < 0) throw DomainError("cutoff must be non-negative");
  const int n = p.n;
  const double cn = p.tail_constant();
  const double a = cn * std::sqrt(N + 1.0);
  const double ln2 = std::log(2.0);
  BoundValue out;
  out.variant = p.variant_name();
  if (const auto* b = std::get_if<OpenBallHypothesis>(&p.hypothesis)) {
    double nx = 0;
    for (double v : b->x0) nx += v * v;
    nx = std::sqrt(nx);
    const double r = b->r;
    const double rho = a + nx;
    out.applicable = a > 2 * nx + r;
    double t = (n - 1) * std::log(rho) + (12.0 * N + n + 4) * ln2 - std::log(3.0) - (2.0 * N + n) * std::log(r) +
               (2.0 * N + 1) * std::log(rho - r / 2);
    out.log_value = std::log(2 / std::sqrt(3.0)) + (nx + r) * (nx + r) / 2 + 0.5 * softplus(t);
  } else if (const auto* d = std::get_if<DensityHypothesis>(&p.hypothesis)) {
    out.applicable = a >= d->R0;
    out.log_value = 0.5 * ((4.0 * N + 6) * ln2 - std::log(9 * d->delta)) + N * std::log(remez_F(n, d->delta / 4)) +
                    cn * cn * (N + 1) / 2;
  } else {
    const auto& t = std::get<ThickHypothesis>(p.hypothesis);
    const double dn = delta_n(n);
    const double expo = std::log(2 * p.C_kov * std::pow(n, n / 2.0) * sphere_area(n) / t.gamma) / ln2;
    const double inner = 0.5 * n * std::log(4 * t.L) + log_C_tilde(n, 1 / (dn * t.L), p.C_sobolev) + dn * t.L * std::sqrt(static_cast<double>(N));
    out.log_value = 0.5 * ln2 + std::log(2 / std::sqrt(t.gamma)) + expo * inner;
  }
  return out;
}

std::optional<BoundParams> default_bound_params(const Region& omega) {
  BoundParams p;
  p.n = omega.n();
  const auto& g = omega.generator();
  switch (g.kind) {
    case GeneratorKind::periodic_thick:
      p.hypothesis = ThickHypothesis{g.L, g.gamma};
      return p;
    case GeneratorKind::half_space:
      // {x_j > c} with c <= 0 holds half of every ball about the origin.
      if (g.c <= 0) {
        p.hypothesis = DensityHypothesis{0.5, 0};
        return p;
      }
      // In 1D (R - c)/(2R) >= 1/4 once R >= 2c.
      if (p.n != 1) return std::nullopt;
      p.hypothesis = DensityHypothesis{0.25, 2 * g.c};
      return p;
    case GeneratorKind::whole_space:
      p.hypothesis = DensityHypothesis{1.0, 0};
      return p;
    case GeneratorKind::ball_complement:
      // |ω ∩ B(0,R)|/|B(0,R)| = 1 - R0/R >= ½ once R >= 2 R0 (n = 1).
      p.hypothesis = DensityHypothesis{0.5, 2 * g.R0};
      return p;
    case GeneratorKind::explicit_boxes: {
      if (omega.boxes().empty()) return std::nullopt;
      // Inscribed ball of the widest box.
      double best = -1;
      std::vector<double> centre;
      for (const auto& b : omega.boxes()) {
        double r = INFINITY;
        for (int j = 0; j < b.dim(); ++j) r = std::min(r, (b.hi[j] - b.lo[j]) / 2);
        if (r > best) {
          best = r;
          centre.clear();
          for (int j = 0; j < b.dim(); ++j) centre.push_back((b.hi[j] + b.lo[j]) / 2);
        }
      }
      if (!(best > 0)) return std::nullopt;
      p.hypothesis = OpenBallHypothesis{centre, best};
      return p;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace hermite_obs
