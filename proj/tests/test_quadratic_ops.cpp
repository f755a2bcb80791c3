#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <hermite_obs/galerkin.hpp>
#include <hermite_obs/symbol.hpp>

using namespace hermite_obs;

namespace {

const cplx I(0, 1);

QuadraticSymbol symbol_1d(cplx xx, cplx xxi, cplx xixi, const std::string& name) {
  Eigen::MatrixXcd Q(2, 2);
  Q << xx, xxi, xxi, xixi;
  return QuadraticSymbol(1, Q, name);
}

}  // namespace

TEST(HamiltonMap, HarmonicOneDimensional) {
  auto q = QuadraticSymbol::harmonic(1);
  auto H = hamilton_map(q);
  Eigen::Matrix2d want;
  want << 0, 1, -1, 0;
  EXPECT_LT((H.F - want.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-15);
  // Oracle: sigma(X, F Y) equals the polarized symbol on basis pairs.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Eigen::VectorXcd X = Eigen::VectorXcd::Unit(2, a), Y = Eigen::VectorXcd::Unit(2, b);
      Eigen::VectorXcd FY = H.F * Y;
      EXPECT_NEAR(std::abs(symplectic_form(X, FY) - q.polarized(X, Y)), 0.0, 1e-15);
    }
}

TEST(HamiltonMap, RealSymbolHasRealMap) {
  EXPECT_EQ(hamilton_map(QuadraticSymbol::harmonic(3)).im().cwiseAbs().maxCoeff(), 0.0);
}

TEST(HamiltonMap, Linear) {
  auto a = QuadraticSymbol::kramers_fokker_planck(0.7), b = QuadraticSymbol::harmonic(2);
  EXPECT_LT((hamilton_map(a + b).F - hamilton_map(a).F - hamilton_map(b).F).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SingularSpace, Harmonic) {
  auto S = singular_space(hamilton_map(QuadraticSymbol::harmonic(2)));
  EXPECT_EQ(S.dim(), 0);
  EXPECT_EQ(S.k0, 0);
}

TEST(SingularSpace, KramersFokkerPlanckExact) {
  auto H = hamilton_map(QuadraticSymbol::kramers_fokker_planck(1.0));
  auto X = singular_space_exact(H);
  EXPECT_EQ(X.dim, 0);
  EXPECT_EQ(X.k0, 1);
  ASSERT_GE(X.kernel_dims.size(), 2u);
  EXPECT_EQ(X.kernel_dims[0], 2);  // Ker Re F = {(x, 0, ξ, 0)}
  auto S = singular_space(H);
  EXPECT_EQ(S.dim(), 0);
  EXPECT_EQ(S.k0, 1);
  EXPECT_FALSE(S.tolerance_sensitive);
}

TEST(SingularSpace, FreeLaplacian) {
  auto S = singular_space(hamilton_map(QuadraticSymbol::free_laplacian(1)));
  ASSERT_EQ(S.dim(), 1);
  EXPECT_EQ(S.k0, -1);
  EXPECT_NEAR(std::abs(S.basis(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(S.basis(1, 0), 0.0, 1e-12);
}

TEST(SingularSpace, ScalingInvariance) {
  for (double c : {1e-3, 0.5, 7.0, 1e3}) {
    auto S = singular_space(hamilton_map(QuadraticSymbol::kramers_fokker_planck(1.0).scaled(c)));
    EXPECT_EQ(S.dim(), 0);
    EXPECT_EQ(S.k0, 1);
    auto F = singular_space(hamilton_map(QuadraticSymbol::free_laplacian(2).scaled(c)));
    EXPECT_EQ(F.dim(), 2);
  }
}

TEST(Weyl, HarmonicIsDiagonal) {
  auto A = weyl_quantize(QuadraticSymbol::harmonic(2), 5);
  const auto& idx = *index_set(2, 5);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double want = i == j ? 2.0 * idx[i].order() + 2 : 0.0;
      EXPECT_NEAR(std::abs(A.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - want), 0.0, 1e-13);
    }
}

TEST(Weyl, PositionMomentumProduct) {
  // q = xξ, so Q_{xξ} = Q_{ξx} = 1/2.
  auto A = weyl_quantize(symbol_1d(0, 0.5, 0, "xxi"), 6);
  EXPECT_NEAR(std::abs(A.A(2, 0) - I * std::sqrt(2.0) / 2.0), 0.0, 1e-14);
  // Oracle: (i/2)(a+² − a−²) entrywise.
  for (int r = 0; r <= 6; ++r)
    for (int c = 0; c <= 6; ++c) {
      cplx want = 0;
      if (r == c + 2) want = I / 2.0 * std::sqrt(double(c + 1) * (c + 2));
      if (c == r + 2) want = -I / 2.0 * std::sqrt(double(r + 1) * (r + 2));
      EXPECT_NEAR(std::abs(A.A(r, c) - want), 0.0, 1e-13) << r << "," << c;
    }
}

TEST(Weyl, PositionSquared) {
  auto A = weyl_quantize(symbol_1d(1, 0, 0, "x2"), 4);
  EXPECT_NEAR(A.A(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(A.A(2, 0).real(), std::sqrt(2.0) / 2, 1e-14);
  EXPECT_NEAR(std::abs(A.A(1, 0)), 0.0, 1e-15);
}

TEST(Weyl, KramersFokkerPlanckIsRealAndAccretive) {
  auto A = weyl_quantize(QuadraticSymbol::kramers_fokker_planck(1.0), 10);
  EXPECT_TRUE(A.is_real());
  EXPECT_GE(A.accretivity_margin(), -1e-12);
}

TEST(Evolve, HarmonicGroundState) {
  auto A = weyl_quantize(QuadraticSymbol::harmonic(1), 6);
  auto f0 = HermiteExpansion::basis(6, MultiIndex({0}));
  auto r = evolve(A, f0, 0.5);
  EXPECT_NEAR(std::abs(r.f.coeff(MultiIndex({0})) - std::exp(-0.5)), 0.0, 1e-14);
  EXPECT_NEAR(r.norm_ratio, 0.6065307, 1e-7);
  auto z = evolve(A, f0, 0.0);
  EXPECT_LT((z.f - f0).norm(), 1e-15);
}

TEST(Evolve, KramersFokkerPlanckContracts) {
  auto A = weyl_quantize(QuadraticSymbol::kramers_fokker_planck(1.0), 16);
  HermiteExpansion f(2, 16);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(f.size()));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cplx(g(rng), g(rng));
  f = HermiteExpansion(f.index_ptr(), c);
  double prev = f.norm();
  for (double t = 0.1; t <= 2.0; t += 0.1) {
    auto r = evolve(A, f, t);
    EXPECT_LE(r.f.norm(), prev * (1 + 1e-12));
    EXPECT_FALSE(r.contraction_violation);
    prev = r.f.norm();
  }
}

TEST(Dissipation, HarmonicMatchesSpectrum) {
  auto A = weyl_quantize(QuadraticSymbol::harmonic(1), 20);
  auto rep = dissipation_check(A, 0, 1.0, {0.0, 0.2, 0.5, 1.0}, {0, 2, 5, 8});
  for (const auto& p : rep.points) EXPECT_NEAR(p.ratio, std::exp(-(2 * p.k + 3) * p.t), 1e-10);
  ASSERT_TRUE(rep.harmonic_error.has_value());
  EXPECT_LT(*rep.harmonic_error, 1e-10);
}

TEST(Dissipation, KramersFokkerPlanckLinearInK) {
  auto A = weyl_quantize(QuadraticSymbol::kramers_fokker_planck(1.0), 18);
  auto rep = dissipation_check(A, 1, 1.0, {0.5}, {1, 2, 3, 4, 5, 6});
  ASSERT_EQ(rep.slices.size(), 1u);
  EXPECT_LT(rep.slices[0].fit.slope, 0.0);
  EXPECT_GE(rep.slices[0].fit.r2, 0.9);
}

TEST(Symbol, JsonRoundTrip) {
  auto q = QuadraticSymbol::kramers_fokker_planck(0.3);
  auto p = QuadraticSymbol::from_json(q.to_json());
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ((p.Q - q.Q).cwiseAbs().maxCoeff(), 0.0);
}
