#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <hermite_obs/control.hpp>
#include <hermite_obs/gram.hpp>

using namespace hermite_obs;

namespace {

ControlProblem problem(const QuadraticSymbol& q, const Region& omega, int N, double T) {
  ControlProblem p;
  p.A = weyl_quantize(q, N);
  p.omega = gram_matrix(omega, N);
  p.T = T;
  return p;
}

Region line(int N) { return Region::make_whole_space(1, truncate_radius(N, 1, 2.0)); }
Region thick(int N, double gamma) { return Region::make_periodic_thick(1, 1.0, gamma, truncate_radius(N, 1, 2.0)); }

// Scalar mode λ observed on [0, T]: |e^{-λT}|² / ∫_0^T e^{-2λt} dt.
double mode_constant(double lambda, double T) { return 2 * lambda / std::expm1(2 * lambda * T); }

HermiteExpansion random_f(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  HermiteExpansion f(1, N);
  Eigen::VectorXcd c(N + 1);
  for (int i = 0; i <= N; ++i) c[i] = cplx(g(rng), g(rng));
  return HermiteExpansion(f.index_ptr(), c / c.norm());
}

}  // namespace

TEST(Observability, WholeLineClosedForm) {
  const int N = 8;
  for (double T : {0.25, 1.0, 2.0}) {
    auto r = observability_constant(problem(QuadraticSymbol::harmonic(1), line(N), N, T));
    double want = 0;
    for (int k = 0; k <= N; ++k) want = std::max(want, mode_constant(2 * k + 1, T));
    EXPECT_NEAR(r.C_T, want, 1e-6 * want) << T;
    EXPECT_FALSE(r.ceiling);
  }
}

TEST(Observability, NonincreasingInHorizon) {
  const int N = 10;
  double prev = INFINITY;
  for (double T : {0.5, 1.0, 2.0, 4.0}) {
    auto r = observability_constant(problem(QuadraticSymbol::harmonic(1), thick(N, 0.5), N, T));
    EXPECT_LE(r.C_T, prev * (1 + 1e-8));
    prev = r.C_T;
  }
}

TEST(Observability, ThickSetAboveProbe) {
  const int N = 12;
  auto r = observability_constant(problem(QuadraticSymbol::harmonic(1), thick(N, 0.5), N, 1.0));
  EXPECT_TRUE(std::isfinite(r.C_T));
  EXPECT_GE(r.C_T, r.probe_max * (1 - 1e-10));
  EXPECT_GE(r.C_T, std::exp(-2.0 * (2 * N + 1)));
}

TEST(Hum, ZeroDatum) {
  auto p = problem(QuadraticSymbol::harmonic(1), thick(6, 0.5), 6, 1.0);
  auto r = hum_control(p, HermiteExpansion(1, 6));
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Hum, WholeLineCostPerMode) {
  const int N = 8;
  auto f0 = random_f(N, 4);
  auto r = hum_control(problem(QuadraticSymbol::harmonic(1), line(N), N, 1.0), f0);
  double want = 0;
  for (int k = 0; k <= N; ++k) want += std::norm(f0.coeffs()[k]) * mode_constant(2 * k + 1, 1.0);
  EXPECT_NEAR(r.cost, want, 1e-6 * want);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(Hum, GroundStateResidual) {
  auto r = hum_control(problem(QuadraticSymbol::harmonic(1), line(8), 8, 1.0), HermiteExpansion::basis(8, MultiIndex({0})));
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_NEAR(r.cost, mode_constant(1, 1), 1e-8);
}

TEST(Hum, ThickSetExtendedPrecision) {
  auto p = problem(QuadraticSymbol::harmonic(1), thick(20, 0.6), 20, 1.0);
  p.precision_bits = 256;
  auto r = hum_control(p, random_f(20, 8));
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_GE(r.precision_bits, 256u);
}

TEST(Staircase, SingleModeOneStage) {
  auto p = problem(QuadraticSymbol::harmonic(1), line(6), 6, 1.0);
  StaircaseOptions opt;
  opt.K0 = 1;
  opt.target = 1e-10;
  auto r = lr_staircase(p, HermiteExpansion::basis(6, MultiIndex({0})), opt);
  EXPECT_LE(r.residual, 1e-10);
  ASSERT_FALSE(r.stages.empty());
  EXPECT_LE(r.stages[0].energy_after, 1e-10);
}

TEST(Staircase, GeometricDecayOnThickSet) {
  auto p = problem(QuadraticSymbol::harmonic(1), thick(24, 0.5), 24, 1.0);
  StaircaseOptions opt;
  opt.target = 1e-6;
  auto r = lr_staircase(p, random_f(24, 12), opt);
  EXPECT_LE(r.residual, 1e-4);
  ASSERT_GE(r.stages.size(), 2u);
  for (std::size_t j = 1; j < r.stages.size(); ++j) EXPECT_LT(r.stages[j].energy_after, r.stages[j - 1].energy_after);
}

TEST(Staircase, CostComparableToHum) {
  auto p = problem(QuadraticSymbol::harmonic(1), thick(16, 0.5), 16, 1.0);
  auto f0 = random_f(16, 3);
  auto h = hum_control(p, f0);
  auto s = lr_staircase(p, f0);
  EXPECT_LE(s.cost, 100 * h.cost);
  EXPECT_GE(s.cost, h.cost / 100);
}

TEST(Blowup, HarmonicThickFitsInverseT) {
  // A sparse thick set (L=3, γ=0.3) keeps C_T in the exponential regime down to T=1/8 at N=16.
  auto p = problem(QuadraticSymbol::harmonic(1), Region::make_periodic_thick(1, 3.0, 0.3, truncate_radius(16, 1, 2.0)), 16, 1.0);
  auto rep = cost_blowup_study(p, {1.0, 0.5, 0.25, 0.125}, 0);
  EXPECT_GE(rep.fit.r2, 0.9);
  EXPECT_GT(rep.fit.slope, 0.0);
}

TEST(Blowup, WholeLineGrowsLinearly) {
  // Closed form: C_T → 2λ_min/(2λ_min T) ~ 1/T, so log C_T is far from linear in 1/T.
  const int N = 8;
  auto p = problem(QuadraticSymbol::harmonic(1), line(N), N, 1.0);
  auto rep = cost_blowup_study(p, {1.0, 0.5, 0.25, 0.125}, 0);
  for (const auto& row : rep.rows) EXPECT_NEAR(row.C_T, mode_constant(1, row.T), 1e-6 * row.C_T);
  EXPECT_LT(rep.rows.back().C_T, 2 * (2 * N + 1) / rep.rows.back().T);
}
