#include <gtest/gtest.h>

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <hermite_obs/bounds.hpp>
#include <hermite_obs/chebyshev.hpp>
#include <hermite_obs/estimates.hpp>
#include <hermite_obs/gram.hpp>
#include <hermite_obs/scaling.hpp>

using namespace hermite_obs;

namespace {
const double kOff = 1 / std::sqrt(2 * M_PI);
}

TEST(Gram, WholeSpaceIsIdentity) {
  auto G = gram_matrix(Region::make_whole_space(2, truncate_radius(3, 2, 3.0)), 3);
  EXPECT_LT((G.matrix - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Gram, HalfLineTwoByTwo) {
  auto G = gram_matrix(Region::make_half_space(1, 0, 0.0, 40.0), 1);
  Eigen::Matrix2d want;
  want << 0.5, kOff, kOff, 0.5;
  EXPECT_LT((G.matrix - want).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Gram, EmptyRegionIsZero) {
  auto G = gram_matrix(Region::make_empty(1), 5);
  EXPECT_EQ(G.matrix.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Spectral, IdentityGivesOne) {
  auto c = spectral_constant(gram_matrix(Region::make_whole_space(1, 40.0), 4));
  EXPECT_NEAR(c.C, 1.0, 1e-10);
}

TEST(Spectral, HalfLineClosedForm) {
  auto c = spectral_constant(gram_matrix(Region::make_half_space(1, 0, 0.0, 40.0), 1));
  EXPECT_NEAR(c.lambda_min, 0.5 - kOff, 1e-12);
  EXPECT_NEAR(c.C, 1 / std::sqrt(0.5 - kOff), 1e-8);
}

TEST(Spectral, SymmetricSetEvenSubspace) {
  // ω = [0.3, 2] ∪ [-2, -0.3]: symmetric, so even and odd modes decouple.
  Region w(1, {Box{{-2.0}, {-0.3}}, Box{{0.3}, {2.0}}});
  const int N = 4;
  auto G = gram_matrix(w, N);
  for (int j = 0; j <= N; ++j)
    for (int k = 0; k <= N; ++k)
      if ((j + k) % 2) EXPECT_NEAR(G.matrix(j, k), 0.0, 1e-14);
  // Brute-force oracle: even block eigenvalues, inverse square root of the smallest.
  Eigen::Matrix3d E;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) E(a, b) = G.matrix(2 * a, 2 * b);
  Eigen::Matrix2d O;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) O(a, b) = G.matrix(2 * a + 1, 2 * b + 1);
  const double lmin = std::min(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(E).eigenvalues()(0),
                               Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(O).eigenvalues()(0));
  EXPECT_NEAR(spectral_constant(G).lambda_min, lmin, 1e-12);
}

TEST(Spectral, ExtendedPrecisionAgreesWithDouble) {
  auto G = gram_matrix(Region::make_half_space(1, 0, 0.0, truncate_radius(6, 1, 2.0)), 6);
  PrecisionPolicy d;
  PrecisionPolicy mp;
  mp.start_bits = 256;
  auto a = spectral_constant(G, d), b = spectral_constant(G, mp);
  EXPECT_NEAR(a.log_C, b.log_C, 1e-6);
  EXPECT_GE(b.precision_bits, 256u);
}

TEST(Bounds, ThickExponentAffineInSqrtN) {
  BoundParams p;
  p.n = 1;
  p.hypothesis = ThickHypothesis{1.0, 1.0};
  const double diff = theoretical_bound(p, 16).log_value - theoretical_bound(p, 4).log_value;
  const double d1 = 2 * std::sqrt(2048.0 * 3);
  // |S^0| = 2, n^{n/2} = 1: exponent log2(2 C_kov 2 / gamma).
  EXPECT_NEAR(diff, d1 * (4 - 2) * std::log2(4 * 300.0), 1e-8 * std::abs(diff));
}

TEST(Bounds, DensityAtZeroCutoff) {
  BoundParams p;
  p.n = 1;
  p.hypothesis = DensityHypothesis{1.0, 0.0};
  const double cn = tail_constant_cn(1).c_n;
  EXPECT_NEAR(theoretical_bound(p, 0).value(), std::sqrt(64.0 / 9) * std::exp(cn * cn / 2), 1e-10);
}

TEST(Bounds, OpenBallAgainstDirectEvaluation) {
  using F = boost::multiprecision::cpp_bin_float_50;
  BoundParams p;
  p.n = 1;
  p.hypothesis = OpenBallHypothesis{{0.0}, 1.0};
  const F cn = tail_constant_cn(1).c_n;
  for (int N : {1, 4, 16}) {
    const F rho = cn * sqrt(F(N + 1));
    ASSERT_GT(rho, 1);
    // (2/sqrt3) e^{r^2/2} sqrt(1 + 2^{12N+5} (rho - 1/2)^{2N+1} / 3) with n = 1, r = 1, x0 = 0.
    const F inner = 1 + pow(F(2), 12 * N + 5) * pow(rho - F(0.5), 2 * N + 1) / 3;
    const F want = log(2 / sqrt(F(3))) + F(0.5) + log(inner) / 2;
    EXPECT_NEAR(theoretical_bound(p, N).log_value, static_cast<double>(want), 1e-10 * static_cast<double>(want));
  }
}

TEST(Scaling, WholeSpaceIsFlat) {
  auto omega = std::make_shared<const Region>(Region::make_whole_space(1, truncate_radius(16, 1, 2.0)));
  auto rep = scaling_study(omega, {4, 8, 12, 16});
  for (const auto& r : rep.rows) EXPECT_NEAR(r.constant.C, 1.0, 1e-9);
}

TEST(Scaling, HalfLineFastGrowthBelowBound) {
  std::vector<int> Ns{4, 8, 16, 24, 32, 48, 64};
  auto omega = std::make_shared<const Region>(Region::make_half_space(1, 0, 0.0, truncate_radius(64, 1, 2.0)));
  auto rep = scaling_study(omega, Ns);
  ASSERT_TRUE(rep.power_defined);
  EXPECT_GT(rep.power.slope, 0.7);
  EXPECT_EQ(rep.violations, 0);
}
