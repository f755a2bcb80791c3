#include "hermite_obs/estimates.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "hermite_obs/hermite_function.hpp"
#include "hermite_obs/quadrature.hpp"

namespace hermite_obs {

namespace {

HermiteExpansion apply_along(const HermiteExpansion& f, LadderKind kind, const MultiIndex& beta) {
  HermiteExpansion g = f;
  for (int j = 0; j < beta.dim(); ++j)
    for (int r = 0; r < beta[j]; ++r) g = apply_ladder(LadderMap::make(kind, j, g.cutoff()), g);
  return g;
}

double log_factorial(int k) { return std::lgamma(k + 1.0); }

}  // namespace

BernsteinResult bernstein_check(const HermiteExpansion& f, double delta, const MultiIndex& beta) {
  if (!(delta > 0 && delta <= 1)) throw DomainError("Bernstein check needs delta in (0, 1]");
  if (beta.dim() != f.n()) throw ContractViolation("multi-index dimension differs from the expansion");
  const double nf = f.norm();
  if (nf == 0) throw ContractViolation("Bernstein check needs a nonzero expansion");
  const int b = beta.order();
  const double lhs = apply_along(f, LadderKind::derivative, beta).norm();
  const double log_rhs = std::exp(1.0) / (2 * delta * delta) + b * std::log(2 * delta) + log_factorial(b) +
                         std::sqrt(static_cast<double>(f.cutoff())) / delta + std::log(nf);
  return {lhs, std::exp(log_rhs), log_rhs, std::log(lhs) <= log_rhs};
}

WeightedNorm weighted_norm(const HermiteExpansion& g, double delta, double rel_tol, int max_terms) {
  const int n = g.n();
  if (!(delta > 0 && delta < 1.0 / (32 * n))) throw DomainError("weighted norm needs 0 < delta < 1/(32n)");
  const double q = 32 * n * delta;
  const double gn = g.norm();
  if (gn == 0) return {0, 0, 0, true};
  const double lead = (g.cutoff() / 2.0 + n - 1) * std::log(2.0) + std::log(gn) - std::log1p(-q);
  HermiteExpansion term = g;
  HermiteExpansion sum = g;
  for (int k = 1; k <= max_terms; ++k) {
    HermiteExpansion sq(term.n(), term.cutoff() + 2);
    for (int j = 0; j < n; ++j) {
      auto once = apply_ladder(LadderMap::make(LadderKind::position, j, term.cutoff()), term);
      sq = sq + apply_ladder(LadderMap::make(LadderKind::position, j, once.cutoff()), once);
    }
    term = sq * cplx(delta / k);
    sum = sum.with_cutoff(term.cutoff()) + term;
    // Bound on sum_{k' > k} of the level-k' series terms.
    double log_tail = lead + (k + 1) * std::log(q);
    double tail = std::exp(log_tail);
    double value = sum.norm();
    if (tail <= rel_tol * value) return {value, tail, k + 1, true};
  }
  double value = sum.norm();
  return {value, std::exp(lead + (max_terms + 1) * std::log(q)), max_terms + 1, false};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "";
}

WeightedResult weighted_check(const HermiteExpansion& f, double delta, const MultiIndex& beta) {
  const int n = f.n();
  if (!(delta > 0 && delta < 1.0 / (32 * n))) throw DomainError("weighted check needs 0 < delta < 1/(32n)");
  if (beta.dim() != n) throw ContractViolation("multi-index dimension differs from the expansion");
  const int b = beta.order();
  const auto wx = weighted_norm(apply_along(f, LadderKind::derivative, beta), delta);
  const auto wxi = weighted_norm(fourier_unitary(apply_along(f, LadderKind::position, beta)), delta);
  const double rhs = std::pow(2.0, n) / (1 - 32 * n * delta) * std::pow(2.0, f.cutoff() / 2.0) *
                     std::pow(2.0, 1.5 * b) * std::exp(0.5 * log_factorial(b)) * f.norm();
  const double rem = wx.remainder + wxi.remainder;
  Verdict v;
  if (!wx.certified || !wxi.certified)
    v = Verdict::inconclusive;
  else if (wx.value + wxi.value + rem <= rhs)
    v = Verdict::pass;
  else if (wx.value + wxi.value - rem > rhs)
    v = Verdict::fail;
  else
    v = Verdict::inconclusive;
  return {wx.value, wxi.value, rhs, rem, v};
}

TailBound hermite_tail_bound(int k, double a) {
  if (k < 0) throw DomainError("Hermite degree must be non-negative");
  if (!(a >= std::sqrt(2.0 * k + 1))) throw DomainError("tail bound requires a >= sqrt(2k+1)");
  // φ_k^2 < e^{-(x^2 - (2k+1))} past the turning point, so 40 units beyond a
  // leaves nothing representable.
  auto r = adaptive_gauss_legendre(
      [k](double x) {
        double p = eval_hermite_1d(k, x);
        return p * p;
      },
      a, a + 40, 0.5e-14);
  double bound = std::exp((k + 1) * std::log(2.0) - log_factorial(k) - 0.5 * std::log(M_PI) +
                          (2 * k - 1) * std::log(a) - a * a);
  return {2 * r.value, bound};
}

double tail_estimate_rhs(int n, int N, double a) {
  double lg = n * std::log(2.0) + 1.5 * std::log(static_cast<double>(n)) - 0.5 * std::log(M_PI) - a * a / (2.0 * n) -
              std::log(a) + N * std::log(8.0);
  return std::exp(lg);
}

namespace {

TailConstants compute_tail_constant(int n) {
  const double c_min = std::sqrt(2.0 * n * std::log(8.0));
  // With c^2 >= 2n ln 8 the N-dependence exp(N(ln 8 - c^2/(2n)))/sqrt(N+1)
  // is nonincreasing, so N = 0 is the binding case; a = c sqrt(N+1) >=
  // sqrt(n(2N+1)) holds for every N because c^2 >= 2n.
  auto rhs0 = [n](double c) { return tail_estimate_rhs(n, 0, c); };
  double c = c_min;
  if (rhs0(c_min) > 0.25) {
    double lo = c_min, hi = c_min;
    while (rhs0(hi) > 0.25) hi *= 1.5;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (rhs0(mid) > 0.25 ? lo : hi) = mid;
    }
    c = hi;
  }
  TailConstants t{n, c, {}, 0};
  double worst = -1;
  for (int N = 0; N <= 128; ++N) {
    double v = tail_estimate_rhs(n, N, c * std::sqrt(N + 1.0));
    t.certificate.emplace_back(N, v);
    if (v > worst) {
      worst = v;
      t.worst_N = N;
    }
  }
  return t;
}

}  // namespace

const TailConstants& tail_constant_cn(int n) {
  if (n < 1) throw DomainError("dimension must be positive");
  static std::mutex mu;
  static std::map<int, TailConstants> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_tail_constant(n)).first;
  return it->second;
}

}  // namespace hermite_obs
