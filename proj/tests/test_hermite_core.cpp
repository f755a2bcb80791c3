#include <gtest/gtest.h>

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <hermite_obs/expansion.hpp>
#include <hermite_obs/hermite_function.hpp>
#include <hermite_obs/multi_index.hpp>

using namespace hermite_obs;

namespace {

const double kPiQuarter = std::pow(M_PI, -0.25);

HermiteExpansion mode(int N, std::vector<int> alpha, cplx c = 1.0) {
  return HermiteExpansion::basis(N, MultiIndex(std::move(alpha))) * c;
}

}  // namespace

TEST(MultiIndex, OneDimensionalGrading) {
  auto v = enumerate_multiindices(1, 3);
  ASSERT_EQ(v.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(v[static_cast<std::size_t>(k)].entries, std::vector<int>{k});
}

TEST(MultiIndex, CountsMatchBinomial) {
  EXPECT_EQ(enumerate_multiindices(2, 3).size(), 10u);
  auto z = enumerate_multiindices(3, 0);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].entries, (std::vector<int>{0, 0, 0}));
  for (int n = 1; n <= 3; ++n)
    for (int N = 0; N <= 8; ++N) EXPECT_EQ(IndexSet(n, N).size(), binomial(N + n, n));
}

TEST(MultiIndex, GradedOrderPutsFirstAxisFirst) {
  auto v = enumerate_multiindices(2, 1);
  EXPECT_EQ(v[1].entries, (std::vector<int>{1, 0}));
  EXPECT_EQ(v[2].entries, (std::vector<int>{0, 1}));
}

TEST(HermiteFunction, ClosedForms) {
  EXPECT_NEAR(eval_hermite_1d(0, 0.0), 0.7511255444, 1e-10);
  EXPECT_NEAR(eval_hermite_1d(1, 1.0), 0.6442883651, 1e-10);
  EXPECT_NEAR(eval_hermite_1d(0, 0.0), kPiQuarter, 1e-15);
}

TEST(HermiteFunction, DegreeFiveAgainstExplicitPolynomial) {
  using F = boost::multiprecision::cpp_bin_float_50;
  const F x("2.3");
  // H_5 = 32x^5 - 160x^3 + 120x, normalization (2^5 5! sqrt(pi))^{-1/2}
  const F H5 = 32 * pow(x, 5) - 160 * pow(x, 3) + 120 * x;
  const F norm = sqrt(F(32 * 120) * sqrt(boost::math::constants::pi<F>()));
  const double ref = static_cast<double>(H5 / norm * exp(-x * x / 2));
  EXPECT_NEAR(eval_hermite_1d(5, 2.3), ref, 1e-14 * std::abs(ref) + 1e-16);
}

TEST(HermiteFunction, LargeDegreeStaysFinite) {
  const double v = eval_hermite_1d(2000, 30.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(std::abs(v), 1.0);
}

TEST(Expansion, PointEvaluation) {
  EXPECT_NEAR(mode(0, {0}).eval(std::vector<double>{0.0}).real(), 0.7511255444, 1e-10);
  const double expect = eval_hermite_1d(1, 1.0) * eval_hermite_1d(0, 0.0);
  EXPECT_NEAR(expect, 0.48394, 1e-5);
  EXPECT_NEAR(std::abs(mode(1, {1, 0}).eval(std::vector<double>{1.0, 0.0}) - expect), 0.0, 1e-14);
  auto f = mode(1, {0}, 2.0) + mode(1, {1}, cplx(0, 1));
  const cplx want = 2.0 * eval_hermite_1d(0, 1.0) + cplx(0, 1) * eval_hermite_1d(1, 1.0);
  EXPECT_NEAR(std::abs(f.eval(std::vector<double>{1.0}) - want), 0.0, 1e-14);
}

TEST(Expansion, ParsevalAgainstGaussHermiteQuadrature) {
  // Oracle: midpoint rule on [-12, 12], spectrally accurate for Gaussian decay.
  HermiteExpansion f(1, 6);
  Eigen::VectorXcd c(7);
  c << cplx(1, 0), cplx(0, 2), cplx(-1, 1), cplx(0.5, 0), cplx(0, 0), cplx(0.25, -0.5), cplx(3, 0);
  f = HermiteExpansion(f.index_ptr(), c);
  double sum = 0;
  for (int i = 0; i < 4000; ++i) {
    const double x = -12 + 24.0 * (i + 0.5) / 4000;
    sum += std::norm(f.eval(std::vector<double>{x})) * 24.0 / 4000;
  }
  EXPECT_NEAR(sum, c.squaredNorm(), 1e-10);
}

TEST(Ladder, RaiseAndLower) {
  auto up = apply_ladder(LadderMap::make(LadderKind::raise, 0, 2), mode(2, {2}));
  EXPECT_NEAR(std::abs(up.coeff(MultiIndex({3})) - std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(up.norm(), std::sqrt(3.0), 1e-15);
  auto down = apply_ladder(LadderMap::make(LadderKind::lower, 0, 2), mode(2, {0}));
  EXPECT_EQ(down.norm(), 0.0);
}

TEST(Ladder, HarmonicEigenRelation) {
  const int N = 12;
  for (int k = 0; k <= 8; ++k) {
    auto f = mode(N, {k});
    auto x1 = apply_ladder(LadderMap::make(LadderKind::position, 0, N), f);
    auto x2 = apply_ladder(LadderMap::make(LadderKind::position, 0, N + 1), x1);
    auto d1 = apply_ladder(LadderMap::make(LadderKind::derivative, 0, N), f);
    auto d2 = apply_ladder(LadderMap::make(LadderKind::derivative, 0, N + 1), d1);
    // -d^2 + x^2
    auto h = x2 - d2;
    auto want = mode(N + 2, {k}, 2.0 * k + 1);
    EXPECT_LT((h - want).norm(), 1e-12) << "k=" << k;
  }
}

TEST(Ladder, CommutatorIsIdentity) {
  const int N = 10;
  HermiteExpansion f(2, N);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(f.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cplx(std::sin(1.0 + i), std::cos(2.0 * i));
  auto g = HermiteExpansion(f.index_ptr(), c);
  for (int axis = 0; axis < 2; ++axis) {
    auto lr = apply_ladder(LadderMap::make(LadderKind::lower, axis, N + 1),
                           apply_ladder(LadderMap::make(LadderKind::raise, axis, N), g));
    auto rl = apply_ladder(LadderMap::make(LadderKind::raise, axis, N),
                           apply_ladder(LadderMap::make(LadderKind::lower, axis, N), g));
    EXPECT_LT((lr.with_cutoff(N + 1) - rl.with_cutoff(N + 1) - g.with_cutoff(N + 1)).norm(), 1e-12);
  }
}

TEST(Projection, Examples) {
  auto f = mode(4, {0}) + mode(4, {1}, 3.0);
  EXPECT_LT((project_energy(f, 4, ProjectionMode::cumulative) - f).norm(), 1e-15);
  auto p1 = project_energy(f, 1, ProjectionMode::single);
  EXPECT_LT((p1 - mode(4, {1}, 3.0)).norm(), 1e-15);
  EXPECT_EQ(project_energy(mode(2, {1, 1}), 0, ProjectionMode::cumulative).norm(), 0.0);
}

TEST(Expansion, JsonRoundTrip) {
  auto f = mode(3, {1, 2}, cplx(0.5, -2));
  auto g = HermiteExpansion::from_json(f.to_json());
  EXPECT_EQ(g.cutoff(), 3);
  EXPECT_EQ((g - f).norm(), 0.0);
}
