#include "hermite_obs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "hermite_obs/bounds.hpp"
#include "hermite_obs/chebyshev.hpp"
#include "hermite_obs/control.hpp"
#include "hermite_obs/estimates.hpp"
#include "hermite_obs/expansion.hpp"
#include "hermite_obs/galerkin.hpp"
#include "hermite_obs/gram.hpp"
#include "hermite_obs/hermite_function.hpp"
#include "hermite_obs/matrix_exp.hpp"
#include "hermite_obs/primitive.hpp"
#include "hermite_obs/quadrature.hpp"
#include "hermite_obs/region.hpp"
#include "hermite_obs/symbol.hpp"

namespace hermite_obs {

nlohmann::json VerdictRecord::to_json() const {
  nlohmann::json j = {{"suite", suite},   {"module", module},           {"trials", trials},
                      {"failures", failures}, {"inconclusive", inconclusive}, {"seed", seed}};
  j["worst_margin"] = std::isfinite(worst_margin) ? nlohmann::json(worst_margin) : nlohmann::json(nullptr);
  return j;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& suite, std::uint64_t trial) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : suite) h = (h ^ c) * 1099511628211ULL;
  std::uint64_t z = master ^ (h + 0x9e3779b97f4a7c15ULL * (trial + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

using Rng = std::mt19937_64;
constexpr double kInconclusive = std::numeric_limits<double>::quiet_NaN();

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

HermiteExpansion random_expansion(Rng& rng, int n, int N) {
  auto idx = index_set(n, N);
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(static_cast<Eigen::Index>(idx->size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = cplx(g(rng), g(rng));
  c /= c.norm();
  return HermiteExpansion(idx, c);
}

MultiIndex random_multiindex(Rng& rng, int n, int max_order) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  int order = uniform_int(rng, 0, max_order);
  for (int r = 0; r < order; ++r) ++e[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
  return MultiIndex(e);
}

HermiteExpansion ladder(LadderKind k, int axis, const HermiteExpansion& f) {
  return apply_ladder(LadderMap::make(k, axis, f.cutoff()), f);
}

// Random disjoint intervals inside [lo, hi].
std::vector<Box> random_intervals(Rng& rng, double lo, double hi, int count) {
  std::vector<double> cuts;
  for (int i = 0; i < 2 * count; ++i) cuts.push_back(uniform(rng, lo, hi));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Box> boxes;
  for (int i = 0; i < count; ++i) {
    double a = cuts[static_cast<std::size_t>(2 * i)], b = cuts[static_cast<std::size_t>(2 * i + 1)];
    if (b - a > 1e-3) boxes.push_back(Box{{a}, {b}});
  }
  if (boxes.empty()) boxes.push_back(Box{{lo}, {hi}});
  return boxes;
}

// Accretive random symbol: Re Q = R R^T of random rank, Im Q random symmetric.
QuadraticSymbol random_symbol(Rng& rng, int n, bool accretive) {
  std::normal_distribution<double> g;
  const int m = 2 * n;
  Eigen::MatrixXd Rm(m, m), S(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Rm(i, j) = g(rng);
      S(i, j) = g(rng);
    }
  const int rank = uniform_int(rng, 0, m);
  Eigen::MatrixXd Re = Rm.leftCols(rank) * Rm.leftCols(rank).transpose();
  if (!accretive) Re = 0.5 * (Rm + Rm.transpose());
  Eigen::MatrixXd Im = 0.5 * (S + S.transpose());
  Eigen::MatrixXcd Q = Re.cast<cplx>() + cplx(0, 1) * Im.cast<cplx>();
  return QuadraticSymbol(n, Q, "random");
}

// ----------------------------------------------------------- hermite_core

double parseval_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int N = uniform_int(rng, 0, n == 1 ? 15 : n == 2 ? 12 : 8);
  const auto f = random_expansion(rng, n, N);
  const auto gh = gauss_hermite(N + 1);
  const auto m = gh.nodes.size();
  std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
  CompensatedSum<double> sum;
  std::vector<double> x(static_cast<std::size_t>(n));
  while (true) {
    double w = 1, r2 = 0;
    for (int j = 0; j < n; ++j) {
      const auto p = pos[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(j)] = gh.nodes[p];
      w *= gh.weights[p];
      r2 += gh.nodes[p] * gh.nodes[p];
    }
    sum.add(w * std::exp(r2) * std::norm(f.eval(x)));
    int j = 0;
    while (j < n && ++pos[static_cast<std::size_t>(j)] == m) pos[static_cast<std::size_t>(j++)] = 0;
    if (j == n) break;
  }
  return 1e-10 - std::abs(sum.value() - f.norm() * f.norm());
}

double ladder_adjoint_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int N = uniform_int(rng, 0, 10);
  const int axis = uniform_int(rng, 0, n - 1);
  const auto f = random_expansion(rng, n, N);
  const auto g = random_expansion(rng, n, N + 1);
  cplx lhs = ladder(LadderKind::raise, axis, f).inner(g);
  cplx rhs = f.with_cutoff(N + 1).inner(ladder(LadderKind::lower, axis, g));
  return 1e-13 - std::abs(lhs - rhs);
}

double commutator_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int N = uniform_int(rng, 0, 10);
  const int axis = uniform_int(rng, 0, n - 1);
  const auto f = random_expansion(rng, n, N);
  auto lr = ladder(LadderKind::lower, axis, ladder(LadderKind::raise, axis, f)).with_cutoff(N);
  auto rl = ladder(LadderKind::raise, axis, ladder(LadderKind::lower, axis, f)).with_cutoff(N);
  return 1e-12 - (lr - rl - f).norm();
}

double harmonic_diagonal_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int N = uniform_int(rng, 0, 10);
  const auto f = random_expansion(rng, n, N);
  HermiteExpansion h(n, N);
  for (int j = 0; j < n; ++j) {
    auto xx = ladder(LadderKind::position, j, ladder(LadderKind::position, j, f));
    auto dd = ladder(LadderKind::derivative, j, ladder(LadderKind::derivative, j, f));
    h = h + (xx - dd).with_cutoff(N);
  }
  Eigen::VectorXcd expect = f.coeffs();
  for (std::size_t i = 0; i < f.size(); ++i)
    expect(static_cast<Eigen::Index>(i)) *= 2.0 * f.index().order_of(i) + n;
  return 1e-12 * (2.0 * N + n) - (h.coeffs() - expect).norm();
}

double recurrence_direct_trial(Rng& rng) {
  const int k = uniform_int(rng, 0, 60);
  const double turn = std::sqrt(2.0 * k + 1);
  const double x = uniform(rng, -(turn + 3), turn + 3);
  const double rec = eval_hermite_1d(k, x);
  PrecisionScope scope(256);
  const mp_real X(x);
  mp_real H = 0, fact_k = 1;
  for (int i = 2; i <= k; ++i) fact_k *= i;
  for (int m = 0; 2 * m <= k; ++m) {
    mp_real term = fact_k;
    for (int i = 2; i <= m; ++i) term /= i;
    for (int i = 2; i <= k - 2 * m; ++i) term /= i;
    term *= pow(2 * X, k - 2 * m);
    H += (m % 2 ? -term : term);
  }
  const mp_real phi = H * exp(-X * X / 2) / sqrt(pow(mp_real(2), k) * fact_k * sqrt(pi_r<mp_real>()));
  const double direct = to_double(phi);
  // Relative accuracy, measured against the envelope near the nodes of φ_k.
  const double scale = std::max(std::abs(direct), 1e-2 * std::exp(-std::max(0.0, x * x - turn * turn) / 2));
  return 1e-12 - std::abs(rec - direct) / scale;
}

// ---------------------------------------------------------------- regions

double wronskian_trial(Rng& rng) {
  Region omega(1, random_intervals(rng, -6, 6, uniform_int(rng, 1, 4)));
  int j = uniform_int(rng, 0, 20), k = uniform_int(rng, 0, 20);
  if (j == k) k = (k + 1) % 21;
  const auto acc = integrate_pair(omega, j, k);
  double ref = 0;
  for (const auto& b : omega.boxes())
    ref += adaptive_gauss_legendre([&](double x) {
             auto v = hermite_values<double>(std::max(j, k), x);
             return v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k)];
           }, b.lo[0], b.hi[0], 1e-15, 20).value;
  return 1e-11 - std::abs(acc.value - ref);
}

double additivity_trial(Rng& rng) {
  const double a = uniform(rng, -6, 0), b = uniform(rng, 0.5, 6), c = uniform(rng, a + 0.1, b - 0.1);
  const int j = uniform_int(rng, 0, 15), k = uniform_int(rng, 0, 15);
  Region whole(1, {Box{{a}, {b}}}), left(1, {Box{{a}, {c}}}), right(1, {Box{{c}, {b}}});
  const double s = integrate_pair(left, j, k).value + integrate_pair(right, j, k).value;
  return 1e-12 - std::abs(integrate_pair(whole, j, k).value - s);
}

double tensorization_trial(Rng& rng) {
  std::vector<double> lo{uniform(rng, -3, 0), uniform(rng, -3, 0)};
  std::vector<double> hi{lo[0] + uniform(rng, 0.3, 3), lo[1] + uniform(rng, 0.3, 3)};
  Region box(2, {Box{lo, hi}});
  const int N = 4;
  auto idx = index_set(2, N);
  Mat<double> G = assemble_gram<double>(box, *idx);
  const auto a = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(idx->size()) - 1));
  const auto b = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(idx->size()) - 1));
  const auto gl = gauss_legendre<double>(40);
  double ref = 0;
  for (std::size_t p = 0; p < gl.nodes.size(); ++p)
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double x = lo[0] + (hi[0] - lo[0]) * (gl.nodes[p] + 1) / 2;
      const double y = lo[1] + (hi[1] - lo[1]) * (gl.nodes[q] + 1) / 2;
      const double w = gl.weights[p] * gl.weights[q] * (hi[0] - lo[0]) * (hi[1] - lo[1]) / 4;
      std::vector<double> pt{x, y};
      ref += w * HermiteExpansion::basis(N, (*idx)[a]).eval(pt).real() *
             HermiteExpansion::basis(N, (*idx)[b]).eval(pt).real();
    }
  return 1e-10 - std::abs(G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - ref);
}

double honesty_trial(Rng& rng) {
  Region omega(1, random_intervals(rng, -6, 6, uniform_int(rng, 1, 3)));
  const int j = uniform_int(rng, 0, 20);
  const int k = uniform_int(rng, 0, 2) == 0 ? j : uniform_int(rng, 0, 20);
  const auto acc = integrate_pair(omega, j, k);
  double ref = 0;
  for (const auto& b : omega.boxes())
    ref += adaptive_gauss_legendre([&](double x) {
             auto v = hermite_values<double>(std::max(j, k), x);
             return v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k)];
           }, b.lo[0], b.hi[0], 1e-14, 40, 30).value;
  return acc.abs_error_bound + 1e-14 - std::abs(acc.value - ref);
}

// ---------------------------------------------------------- gram_spectral

double lambda_min_of(const Region& omega, int N) {
  return spectral_constant(gram_matrix(omega, N)).lambda_min;
}

double region_monotone_trial(Rng& rng) {
  const int N = uniform_int(rng, 1, 10);
  const double R = truncate_radius(N, 1, 2.0);
  const double g1 = uniform(rng, 0.2, 0.9), g2 = uniform(rng, g1, 1.0);
  const double l1 = lambda_min_of(Region::make_periodic_thick(1, 1.0, g1, R), N);
  const double l2 = lambda_min_of(Region::make_periodic_thick(1, 1.0, g2, R), N);
  return l2 - l1 + 1e-12;
}

double cutoff_monotone_trial(Rng& rng) {
  const int N = uniform_int(rng, 1, 12);
  const double R = truncate_radius(N + 1, 1, 2.0);
  const auto omega = Region::make_periodic_thick(1, uniform(rng, 0.5, 2.0), uniform(rng, 0.2, 0.9), R);
  const double c1 = spectral_constant(gram_matrix(omega, N)).C;
  const double c2 = spectral_constant(gram_matrix(omega, N + 1)).C;
  return (c2 - c1) / c1 + 1e-9;
}

double whole_space_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 0, 6);
  const auto omega = Region::make_whole_space(n, truncate_radius(N, n, 2.0));
  return 1e-9 - std::abs(spectral_constant(gram_matrix(omega, N)).C - 1);
}

double bound_dominance_trial(Rng& rng) {
  const int N = uniform_int(rng, 1, 12);
  const double R = truncate_radius(N, 1, 2.0);
  Region omega = Region::make_empty(1);
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      omega = Region::make_periodic_thick(1, 1.0, uniform(rng, 0.2, 1.0), R);
      break;
    case 1:
      omega = Region::make_half_space(1, 0, 0.0, R);
      break;
    default:
      omega = Region::make_cube({0.0}, 1.0);
  }
  const auto params = default_bound_params(omega);
  if (!params) return kInconclusive;
  const auto bound = theoretical_bound(*params, N);
  if (!bound.applicable) return 0.0;
  return bound.log_value - spectral_constant(gram_matrix(omega, N)).log_C;
}

double rayleigh_trial(Rng& rng) {
  const int N = uniform_int(rng, 1, 10);
  const auto omega = Region::make_periodic_thick(1, 1.0, uniform(rng, 0.2, 0.9), truncate_radius(N, 1, 2.0));
  const auto G = gram_matrix(omega, N);
  const double C = spectral_constant(G).C;
  double worst = 0;
  for (int p = 0; p < 50; ++p) {
    const auto f = random_expansion(rng, 1, N);
    const double inside = (f.coeffs().adjoint() * G.matrix.cast<cplx>() * f.coeffs())(0, 0).real();
    worst = std::max(worst, f.norm() * f.norm() / inside);
  }
  return (C * C * (1 + 1e-9) - worst) / (C * C);
}

// --------------------------------------------------------- poly_estimates

double chebyshev_trial(Rng& rng) {
  const int d = uniform_int(rng, 0, 30);
  const double x = uniform(rng, -1.5, 1.5);
  PrecisionScope scope(128);
  mp_real sum = 0;
  if (d == 0) {
    sum = 1;
  } else {
    const mp_real X(x);
    for (int k = 0; 2 * k <= d; ++k) {
      mp_real term = 1;
      for (int i = 2; i <= d - k - 1; ++i) term *= i;
      for (int i = 2; i <= k; ++i) term /= i;
      for (int i = 2; i <= d - 2 * k; ++i) term /= i;
      term *= pow(2 * X, d - 2 * k);
      sum += (k % 2 ? -term : term);
    }
    sum *= mp_real(d) / 2;
  }
  const double ref = to_double(sum);
  return 1e-9 - std::abs(chebyshev_value(ChebyshevKind::first, d, x) - ref) / std::max(1.0, std::abs(ref));
}

double remez_trial(Rng& rng) {
  const int d = uniform_int(rng, 0, 8);
  std::vector<double> coef(static_cast<std::size_t>(d) + 1);
  for (auto& c : coef) c = uniform(rng, -1, 1);
  auto P = [&](double x) {
    double v = 0;
    for (int k = d; k >= 0; --k) v = v * x + coef[static_cast<std::size_t>(k)];
    return v;
  };
  std::vector<Box> E;
  double measure = 0;
  while (measure < 0.2) {
    E = random_intervals(rng, -1, 1, uniform_int(rng, 1, 4));
    measure = 0;
    for (const auto& b : E) measure += b.volume();
  }
  double supK = 0, supE = 0;
  for (int i = 0; i < 10000; ++i) supK = std::max(supK, std::abs(P(-1 + 2.0 * i / 9999)));
  for (const auto& b : E) {
    const int pts = std::max(2, static_cast<int>(10000 * b.volume() / measure));
    for (int i = 0; i < pts; ++i) supE = std::max(supE, std::abs(P(b.lo[0] + (b.hi[0] - b.lo[0]) * i / (pts - 1))));
  }
  if (supK == 0) return 0.0;
  return std::log(remez_bound(1, d, measure / 2) * supE) - std::log(supK);
}

double remez_ball_trial(Rng& rng) {
  const int d = uniform_int(rng, 0, 6);
  const double R = uniform(rng, 0.5, 5);
  std::vector<cplx> coef(static_cast<std::size_t>(d) + 1);
  for (auto& c : coef) c = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  auto P = [&](double x) {
    cplx v = 0;
    for (int k = d; k >= 0; --k) v = v * x + coef[static_cast<std::size_t>(k)];
    return v;
  };
  const auto gl = gauss_legendre<double>(8);
  auto l2 = [&](double a, double b) {
    double s = 0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q)
      s += gl.weights[q] * (b - a) / 2 * std::norm(P(a + (b - a) * (gl.nodes[q] + 1) / 2));
    return s;
  };
  const auto omega = random_intervals(rng, -R, R, uniform_int(rng, 1, 3));
  double inside = 0, measure = 0;
  for (const auto& b : omega) {
    inside += l2(b.lo[0], b.hi[0]);
    measure += b.volume();
  }
  const double ratio = std::sqrt(l2(-R, R) / inside);
  return log_remez_ball_bound(1, d, measure / (2 * R)) - std::log(ratio);
}

double kovrijkine_trial(Rng& rng) {
  const double a = uniform(rng, 1e-3, 1.0);
  const int level = uniform_int(rng, 1, 6);
  const int cells = 1 << level;
  std::vector<int> chosen;
  while (chosen.empty())
    for (int c = 0; c < cells; ++c)
      if (uniform_int(rng, 0, 3) == 0) chosen.push_back(c);
  double supE = 0;
  for (int c : chosen)
    for (int i = 0; i <= 64; ++i) supE = std::max(supE, std::abs(std::cos(a * (c + i / 64.0) / cells)));
  double supI = 0;
  for (int i = 0; i <= 4096; ++i) supI = std::max(supI, std::abs(std::cos(a * i / 4096.0)));
  const double M = std::cosh(4 * a);
  const double E = static_cast<double>(chosen.size()) / cells;
  return std::log(kovrijkine_interval_bound(300.0, E, M) * supE) - std::log(supI);
}

double bernstein_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 0, 20);
  const double deltas[] = {0.25, 0.5, 1.0};
  const auto f = random_expansion(rng, n, N);
  const auto r = bernstein_check(f, deltas[uniform_int(rng, 0, 2)], random_multiindex(rng, n, 3));
  return r.log_rhs - std::log(r.lhs);
}

double weighted_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 0, n == 1 ? 12 : 8);
  const double delta = uniform(rng, 0.02, 0.5) / (32 * n);
  const auto f = random_expansion(rng, n, N);
  const auto r = weighted_check(f, delta, random_multiindex(rng, n, 2));
  if (r.verdict == Verdict::inconclusive) return kInconclusive;
  return std::log(r.rhs) - std::log(r.lhs_x + r.lhs_xi);
}

double tail_mass_trial(Rng& rng) {
  const int k = uniform_int(rng, 0, 20);
  const double a = std::sqrt(2.0 * k + 1) + uniform(rng, 0, 5);
  const auto t = hermite_tail_bound(k, a);
  return std::log(t.bound) - std::log(t.exact);
}

double tail_energy_trial(Rng& rng) {
  const int N = uniform_int(rng, 0, 30);
  const auto f = random_expansion(rng, 1, N);
  const double a = tail_constant_cn(1).c_n * std::sqrt(N + 1.0);
  Mat<double> G = hermite_primitive<double>(N, a) - hermite_primitive<double>(N, -a);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(N + 1, N + 1) - G;
  const double tail = (f.coeffs().adjoint() * out.cast<cplx>() * f.coeffs())(0, 0).real();
  return 0.25 - tail / (f.norm() * f.norm());
}

// ---------------------------------------------------------- quadratic_ops

double hamilton_trial(Rng& rng) {
  const auto q = random_symbol(rng, uniform_int(rng, 1, 3), false);
  return 1e-12 * std::max(1.0, q.Q.norm()) - hamilton_map(q).identity_defect(q);
}

double projector_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.cols() != B.cols()) return INFINITY;
  if (A.cols() == 0) return 0;
  return (A * A.transpose() - B * B.transpose()).norm();
}

double singular_scaling_trial(Rng& rng) {
  QuadraticSymbol q;
  switch (uniform_int(rng, 0, 3)) {
    case 0:
      q = QuadraticSymbol::kramers_fokker_planck(uniform(rng, -2, 2));
      break;
    case 1:
      q = QuadraticSymbol::free_laplacian(uniform_int(rng, 1, 3));
      break;
    default:
      q = random_symbol(rng, uniform_int(rng, 1, 3), true);
  }
  const double c = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  const auto S1 = singular_space(hamilton_map(q));
  const auto S2 = singular_space(hamilton_map(q.scaled(c)));
  if (S1.tolerance_sensitive || S2.tolerance_sensitive) return kInconclusive;
  if (S1.k0 != S2.k0) return -1.0;
  return 1e-8 - projector_distance(S1.basis, S2.basis);
}

double weyl_linearity_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 0, 6);
  const auto q1 = random_symbol(rng, n, false), q2 = random_symbol(rng, n, false);
  const Eigen::MatrixXcd A = weyl_quantize(q1 + q2, N).A, B = weyl_quantize(q1, N).A + weyl_quantize(q2, N).A;
  return 1e-13 * std::max(1.0, A.cwiseAbs().maxCoeff()) - (A - B).cwiseAbs().maxCoeff();
}

double adjoint_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 0, 6);
  const auto q = random_symbol(rng, n, false);
  const auto A = weyl_quantize(q, N).A, B = weyl_quantize(q.conjugate(), N).A;
  return 1e-13 * std::max(1.0, A.cwiseAbs().maxCoeff()) - (B - A.adjoint()).cwiseAbs().maxCoeff();
}

double semigroup_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 1, n == 1 ? 10 : 6);
  const auto A = weyl_quantize(random_symbol(rng, n, true), N);
  const auto f = random_expansion(rng, n, N);
  const double s = uniform(rng, 0, 1), t = uniform(rng, 0, 1);
  const auto whole = evolve(A, f, s + t).f;
  const auto split = evolve(A, evolve(A, f, t).f, s).f;
  return 1e-9 - (whole - split).norm() / f.norm();
}

double accretivity_trial(Rng& rng) {
  const int n = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 0, n == 1 ? 12 : 8);
  return weyl_quantize(random_symbol(rng, n, true), N).accretivity_margin() + 1e-10;
}

// ---------------------------------------------------------------- control

ControlProblem harmonic_problem(int N, const Region& omega, double T) {
  ControlProblem p;
  p.A = weyl_quantize(QuadraticSymbol::harmonic(omega.n()), N);
  p.omega = gram_matrix(omega, N);
  p.T = T;
  return p;
}

double duality_trial(Rng& rng) {
  const int N = uniform_int(rng, 0, 8);
  const double T = uniform(rng, 0.5, 2);
  const auto p = harmonic_problem(N, Region::make_whole_space(1, truncate_radius(N, 1, 2.0)), T);
  const auto f0 = random_expansion(rng, 1, N);
  const auto r = hum_control(p, f0);
  double expect = 0;
  for (int k = 0; k <= N; ++k) {
    const double lam = 2.0 * k + 1;
    expect += std::norm(f0.coeffs()(k)) * 2 * lam * std::exp(-2 * lam * T) / (-std::expm1(-2 * lam * T));
  }
  return 1e-6 - std::abs(r.cost - expect) / expect;
}

double omega_monotone_trial(Rng& rng) {
  const int N = uniform_int(rng, 2, 6);
  const double R = truncate_radius(N, 1, 2.0);
  const double g1 = uniform(rng, 0.3, 0.8), g2 = uniform(rng, g1, 1.0);
  const auto p1 = harmonic_problem(N, Region::make_periodic_thick(1, 1.0, g1, R), 1.0);
  const auto p2 = harmonic_problem(N, Region::make_periodic_thick(1, 1.0, g2, R), 1.0);
  const auto f0 = random_expansion(rng, 1, N);
  const double c1 = hum_control(p1, f0).cost, c2 = hum_control(p2, f0).cost;
  const double o1 = observability_constant(p1).C_T, o2 = observability_constant(p2).C_T;
  return std::min((c1 - c2) / c1 + 1e-8, (o1 - o2) / o1 + 1e-8);
}

double horizon_monotone_trial(Rng& rng) {
  const int N = uniform_int(rng, 2, 8);
  const double R = truncate_radius(N, 1, 2.0);
  auto p = harmonic_problem(N, Region::make_periodic_thick(1, 1.0, uniform(rng, 0.3, 0.9), R), 1.0);
  const double T1 = uniform(rng, 0.2, 1.0), T2 = T1 * uniform(rng, 1.1, 2.0);
  p.T = T1;
  const double c1 = observability_constant(p).C_T;
  p.T = T2;
  const double c2 = observability_constant(p).C_T;
  return (c1 - c2) / c1 + 1e-8;
}

double staircase_trial(Rng& rng) {
  const int N = uniform_int(rng, 4, 10);
  const auto p = harmonic_problem(N, Region::make_periodic_thick(1, 1.0, uniform(rng, 0.4, 0.9), truncate_radius(N, 1, 2.0)), 1.0);
  const auto r = lr_staircase(p, random_expansion(rng, 1, N));
  double worst = INFINITY;
  for (const auto& s : r.stages)
    if (s.decay_bound > 0) worst = std::min(worst, 10 * s.decay_bound * s.energy_before_passive + 1e-14 - s.high_after_passive);
  return std::isfinite(worst) ? worst : 0.0;
}

struct Suite {
  SuiteInfo info;
  std::function<double(Rng&)> trial;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {{"parseval", "hermite_core", 60}, parseval_trial},
      {{"ladder_adjoint", "hermite_core", 200}, ladder_adjoint_trial},
      {{"commutator", "hermite_core", 200}, commutator_trial},
      {{"harmonic_diagonal", "hermite_core", 100}, harmonic_diagonal_trial},
      {{"recurrence_direct", "hermite_core", 500}, recurrence_direct_trial},
      {{"wronskian_exactness", "regions", 100}, wronskian_trial},
      {{"additivity", "regions", 100}, additivity_trial},
      {{"tensorization", "regions", 30}, tensorization_trial},
      {{"account_honesty", "regions", 100}, honesty_trial},
      {{"region_monotonicity", "gram_spectral", 30}, region_monotone_trial},
      {{"cutoff_monotonicity", "gram_spectral", 30}, cutoff_monotone_trial},
      {{"whole_space", "gram_spectral", 10}, whole_space_trial},
      {{"bound_dominance", "gram_spectral", 30}, bound_dominance_trial},
      {{"rayleigh", "gram_spectral", 20}, rayleigh_trial},
      {{"chebyshev_sum", "poly_estimates", 500}, chebyshev_trial},
      {{"remez", "poly_estimates", 500}, remez_trial},
      {{"remez_ball", "poly_estimates", 500}, remez_ball_trial},
      {{"kovrijkine", "poly_estimates", 500}, kovrijkine_trial},
      {{"bernstein", "poly_estimates", 500}, bernstein_trial},
      {{"weighted", "poly_estimates", 500}, weighted_trial},
      {{"tail_mass", "poly_estimates", 500}, tail_mass_trial},
      {{"tail_energy", "poly_estimates", 500}, tail_energy_trial},
      {{"hamilton_identity", "quadratic_ops", 200}, hamilton_trial},
      {{"singular_scaling", "quadratic_ops", 100}, singular_scaling_trial},
      {{"weyl_linearity", "quadratic_ops", 100}, weyl_linearity_trial},
      {{"adjoint_consistency", "quadratic_ops", 100}, adjoint_trial},
      {{"semigroup", "quadratic_ops", 50}, semigroup_trial},
      {{"accretivity", "quadratic_ops", 50}, accretivity_trial},
      {{"hum_duality", "control", 10}, duality_trial},
      {{"omega_monotonicity", "control", 5}, omega_monotone_trial},
      {{"horizon_monotonicity", "control", 5}, horizon_monotone_trial},
      {{"staircase_dissipation", "control", 3}, staircase_trial},
  };
  return all;
}

}  // namespace

const std::vector<SuiteInfo>& verify_suites() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const auto& s : suites()) v.push_back(s.info);
    return v;
  }();
  return infos;
}

std::vector<VerdictRecord> run_verify(const std::string& selector, std::uint64_t seed, double trial_scale) {
  std::vector<VerdictRecord> out;
  for (const auto& s : suites()) {
    if (selector != "all" && selector != s.info.module && selector != s.info.name) continue;
    VerdictRecord rec;
    rec.suite = s.info.name;
    rec.module = s.info.module;
    rec.seed = seed;
    rec.worst_margin = INFINITY;
    const int trials = std::max(1, static_cast<int>(std::lround(s.info.trials * trial_scale)));
    for (int i = 0; i < trials; ++i) {
      Rng rng(derive_seed(seed, s.info.name, static_cast<std::uint64_t>(i)));
      double margin;
      try {
        margin = s.trial(rng);
      } catch (const std::exception&) {
        margin = -INFINITY;
      }
      ++rec.trials;
      if (std::isnan(margin)) {
        ++rec.inconclusive;
        continue;
      }
      if (margin < 0) ++rec.failures;
      rec.worst_margin = std::min(rec.worst_margin, margin);
    }
    out.push_back(rec);
  }
  if (out.empty()) throw ContractViolation("unknown verify suite '" + selector + "'");
  return out;
}

}  // namespace hermite_obs
