// Acceptance run: one PASS/FAIL line per criterion.  argv[1] is the CLI binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <hermite_obs/bounds.hpp>
#include <hermite_obs/control.hpp>
#include <hermite_obs/estimates.hpp>
#include <hermite_obs/expansion.hpp>
#include <hermite_obs/galerkin.hpp>
#include <hermite_obs/gram.hpp>
#include <hermite_obs/hermite_function.hpp>
#include <hermite_obs/quadrature.hpp>
#include <hermite_obs/scaling.hpp>
#include <hermite_obs/symbol.hpp>
#include <hermite_obs/verify.hpp>

using namespace hermite_obs;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

HermiteExpansion random_f(int n, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  HermiteExpansion f(n, N);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(f.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cplx(g(rng), g(rng));
  return HermiteExpansion(f.index_ptr(), c / c.norm());
}

HermiteExpansion ladder(LadderKind k, int axis, const HermiteExpansion& f) {
  return apply_ladder(LadderMap::make(k, axis, f.cutoff()), f);
}

// 1. Orthonormality and ladder algebra.
void criterion1(Outcome& v) {
  // 1D inner products from a 60-node Gauss-Hermite rule (exact for degree < 120).
  auto gh = gauss_hermite(60);
  const int K = 10;
  Eigen::MatrixXd P(K + 1, K + 1);
  for (int j = 0; j <= K; ++j)
    for (int k = 0; k <= K; ++k) {
      double s = 0;
      for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        const double x = gh.nodes[i];
        s += gh.weights[i] * eval_hermite_1d(j, x) * eval_hermite_1d(k, x) * std::exp(x * x);
      }
      P(j, k) = s;
    }
  double worst = 0;
  for (int n = 1; n <= 3; ++n) {
    IndexSet idx(n, K);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) {
        double p = 1;
        for (int j = 0; j < n; ++j) p *= P(idx[a][j], idx[b][j]);
        worst = std::max(worst, std::abs(p - (a == b ? 1.0 : 0.0)));
      }
  }
  v.require(worst <= 1e-10, "orthonormality");
  double comm = 0, eig = 0;
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      auto f = random_f(n, 10, rng);
      for (int axis = 0; axis < n; ++axis) {
        auto lr = ladder(LadderKind::lower, axis, ladder(LadderKind::raise, axis, f));
        auto rl = ladder(LadderKind::raise, axis, ladder(LadderKind::lower, axis, f));
        comm = std::max(comm, (lr.with_cutoff(11) - rl.with_cutoff(11) - f.with_cutoff(11)).norm());
      }
    }
  for (int k = 0; k <= 10; ++k) {
    auto f = HermiteExpansion::basis(10, MultiIndex({k}));
    auto x2 = ladder(LadderKind::position, 0, ladder(LadderKind::position, 0, f));
    auto d2 = ladder(LadderKind::derivative, 0, ladder(LadderKind::derivative, 0, f));
    eig = std::max(eig, (x2 - d2 - HermiteExpansion::basis(12, MultiIndex({k})) * cplx(2.0 * k + 1)).norm());
  }
  v.require(comm <= 1e-12, "commutator");
  v.require(eig <= 1e-12, "harmonic eigen-relation");
  v.detail << "max |<Φa,Φb> - δ| = " << fmt(worst) << ", commutator defect " << fmt(comm) << ", eigen defect " << fmt(eig);
}

// 2. Half-line Gram exactness.
void criterion2(Outcome& v) {
  const double off = 1 / std::sqrt(2 * M_PI);
  auto G = gram_matrix(Region::make_half_space(1, 0, 0.0, truncate_radius(1, 1, 2.0)), 1);
  Eigen::Matrix2d want;
  want << 0.5, off, off, 0.5;
  const double gerr = (G.matrix - want).cwiseAbs().maxCoeff();
  auto c = spectral_constant(G);
  const double Cwant = 1 / std::sqrt(0.5 - off);
  v.require(gerr <= 1e-10, "Gram entries");
  v.require(std::abs(c.C - Cwant) <= 1e-8, "C_1");
  v.detail << "Gram error " << fmt(gerr) << ", C_1 = " << c.C << " vs " << Cwant;
}

// 3. Measured constant below the theoretical bound.
void criterion3(Outcome& v) {
  std::vector<int> Ns;
  for (int N = 4; N <= 64; ++N) Ns.push_back(N);
  const double R = truncate_radius(64, 1, 2.0);
  struct Case {
    std::string name;
    Region region;
  };
  std::vector<Case> cases{{"ball", Region::make_cube({0.0}, 1.0)},
                          {"halfline", Region::make_half_space(1, 0, 0.0, R)},
                          {"thick 0.3", Region::make_periodic_thick(1, 1.0, 0.3, R)},
                          {"thick 0.5", Region::make_periodic_thick(1, 1.0, 0.5, R)},
                          {"thick 0.8", Region::make_periodic_thick(1, 1.0, 0.8, R)}};
  int total = 0, ceilings = 0;
  for (const auto& c : cases) {
    auto omega = std::make_shared<const Region>(c.region);
    auto params = default_bound_params(*omega);
    if (!params) {
      v.require(false, c.name + " has no bound hypothesis");
      continue;
    }
    auto rep = scaling_study(omega, Ns, {}, params);
    total += rep.violations;
    ceilings += static_cast<int>(rep.singular_N.size());
    int inapplicable = 0;
    for (const auto& r : rep.rows)
      if (r.bound && !r.bound->applicable) ++inapplicable;
    v.require(rep.violations == 0, c.name + " bound violated");
    v.require(rep.singular_N.empty(), c.name + " hit the precision ceiling");
    v.detail << c.name << " (" << params->variant_name() << "): " << rep.violations << " violations, max log C = "
             << fmt(rep.rows.back().constant.log_C) << ", log bound = " << fmt(rep.rows.back().bound->log_value);
    if (inapplicable) v.detail << ", " << inapplicable << " cutoffs outside the hypothesis range";
    v.detail << "; ";
  }
  v.detail << "total violations " << total << ", ceilings " << ceilings;
}

// 4. Thick-set scaling selects sqrt(N); half-line exponent.
void criterion4(Outcome& v) {
  const std::vector<int> Ns{9, 16, 25, 36, 49, 64};
  const double R = truncate_radius(64, 1, 2.0);
  for (double gamma : {0.3, 0.5, 0.8}) {
    auto omega = std::make_shared<const Region>(Region::make_periodic_thick(1, 1.0, gamma, R));
    auto rep = scaling_study(omega, Ns);
    v.require(rep.best_model == "sqrt_N", "gamma " + fmt(gamma) + " best model " + rep.best_model);
    v.detail << "gamma " << gamma << ": best " << rep.best_model << " (rms";
    for (const auto& f : rep.fits) v.detail << " " << f.model << "=" << fmt(f.fit.residual);
    v.detail << "); ";
  }
  auto half = std::make_shared<const Region>(Region::make_half_space(1, 0, 0.0, R));
  auto rep = scaling_study(half, Ns);
  v.require(rep.power_defined && rep.power.slope >= 0.7, "half-line exponent");
  v.detail << "half-line p = " << fmt(rep.power.slope);
}

// 5. Estimate suites.
void criterion5(Outcome& v) {
  auto recs = run_verify("poly_estimates", 2024);
  for (const auto& r : recs) {
    v.require(r.trials >= 500, r.suite + " has fewer than 500 trials");
    v.require(r.failures == 0, r.suite + " failed");
    v.detail << r.suite << " " << r.trials << "/" << r.failures << "f/" << r.inconclusive << "i; ";
  }
  v.require(recs.size() >= 8, "suite count");
}

// 6. Singular spaces.
void criterion6(Outcome& v) {
  auto h = singular_space(hamilton_map(QuadraticSymbol::harmonic(1)));
  v.require(h.dim() == 0 && h.k0 == 0, "harmonic");
  auto kx = singular_space_exact(hamilton_map(QuadraticSymbol::kramers_fokker_planck(1.0)));
  v.require(kx.dim == 0 && kx.k0 == 1, "KFP exact");
  auto kn = singular_space(hamilton_map(QuadraticSymbol::kramers_fokker_planck(1.0)));
  v.require(kn.dim() == 0 && kn.k0 == 1, "KFP numeric");
  auto fr = singular_space(hamilton_map(QuadraticSymbol::free_laplacian(1)));
  v.require(fr.dim() > 0, "free Laplacian");
  bool invariant = true;
  for (double c : {1e-3, 0.1, 10.0, 1e3}) {
    auto s = singular_space(hamilton_map(QuadraticSymbol::free_laplacian(2).scaled(c)));
    auto base = singular_space(hamilton_map(QuadraticSymbol::free_laplacian(2)));
    Eigen::MatrixXd P1 = s.basis * s.basis.transpose(), P0 = base.basis * base.basis.transpose();
    invariant = invariant && s.dim() == base.dim() && (P1 - P0).norm() < 1e-10;
    auto k = singular_space(hamilton_map(QuadraticSymbol::kramers_fokker_planck(1.0).scaled(c)));
    invariant = invariant && k.dim() == 0 && k.k0 == 1;
  }
  v.require(invariant, "scaling invariance");
  v.detail << "harmonic dim " << h.dim() << " k0 " << h.k0 << "; KFP exact dim " << kx.dim << " k0 " << kx.k0
           << "; free dim " << fr.dim() << "; scaling invariant " << (invariant ? "yes" : "no");
}

// 7. Dissipation.
void criterion7(Outcome& v) {
  double herr = 0;
  for (int n = 1; n <= 2; ++n) {
    auto A = weyl_quantize(QuadraticSymbol::harmonic(n), 16);
    auto rep = dissipation_check(A, 0, 1.0, {0.1, 0.5, 1.0, 2.0}, {0, 2, 4, 8});
    for (const auto& p : rep.points) herr = std::max(herr, std::abs(p.ratio - std::exp(-(2.0 * p.k + 2 + n) * p.t)));
  }
  v.require(herr <= 1e-9, "harmonic decay");
  auto A = weyl_quantize(QuadraticSymbol::kramers_fokker_planck(1.0), 18);
  auto rep = dissipation_check(A, 1, 1.0, {0.5, 1.0}, {1, 2, 3, 4, 5, 6});
  double worst_r2 = 1;
  for (const auto& s : rep.slices) {
    worst_r2 = std::min(worst_r2, s.fit.r2);
    v.require(s.fit.slope < 0, "KFP slope sign");
  }
  v.require(worst_r2 >= 0.9, "KFP linearity");
  v.detail << "harmonic max error " << fmt(herr) << "; KFP N=18 k<=6 worst R^2 " << fmt(worst_r2);
}

// 8. Control.
void criterion8(Outcome& v) {
  std::mt19937_64 rng(8);
  {
    const int N = 8;
    ControlProblem p;
    p.A = weyl_quantize(QuadraticSymbol::harmonic(1), N);
    p.omega = gram_matrix(Region::make_whole_space(1, truncate_radius(N, 1, 2.0)), N);
    auto f0 = random_f(1, N, rng);
    auto r = hum_control(p, f0);
    double want = 0;
    for (int k = 0; k <= N; ++k) want += std::norm(f0.coeffs()[k]) * 2 * (2 * k + 1) / std::expm1(2 * (2 * k + 1) * p.T);
    const double rel = std::abs(r.cost - want) / want;
    v.require(rel <= 1e-6, "whole-line cost");
    v.detail << "whole line cost rel error " << fmt(rel) << "; ";
  }
  const int N = 20;
  ControlProblem p;
  p.A = weyl_quantize(QuadraticSymbol::harmonic(1), N);
  p.omega = gram_matrix(Region::make_periodic_thick(1, 1.0, 0.6, truncate_radius(N, 1, 2.0)), N);
  p.precision_bits = 256;
  auto f0 = random_f(1, N, rng);
  auto h = hum_control(p, f0);
  v.require(h.residual <= 1e-6, "thick HUM residual");
  v.detail << "thick HUM residual " << fmt(h.residual) << " at " << h.precision_bits << " bits; ";
  auto s = lr_staircase(p, f0);
  v.require(s.residual <= 1e-4, "staircase residual");
  bool geometric = s.stages.size() >= 2;
  double worst_ratio = 0;
  for (std::size_t j = 1; j < s.stages.size(); ++j) {
    const double q = s.stages[j].energy_after / s.stages[j - 1].energy_after;
    worst_ratio = std::max(worst_ratio, q);
  }
  geometric = geometric && worst_ratio < 1;
  v.require(geometric, "staircase stage decay");
  v.detail << "staircase residual " << fmt(s.residual) << " over " << s.stages.size() << " stages, worst stage ratio "
           << fmt(worst_ratio);
}

// 9. Cost blowup.
void criterion9(Outcome& v) {
  const std::vector<double> Ts{1.0, 0.5, 0.25, 0.125};
  {
    const int N = 16;
    ControlProblem p;
    p.A = weyl_quantize(QuadraticSymbol::harmonic(1), N);
    p.omega = gram_matrix(Region::make_periodic_thick(1, 3.0, 0.3, truncate_radius(N, 1, 2.0)), N);
    auto rep = cost_blowup_study(p, Ts, 0);
    v.require(rep.fit.r2 >= 0.9, "harmonic R^2");
    v.require(rep.excluded.empty(), "harmonic horizons excluded");
    v.detail << "harmonic (L=3, gamma=0.3, N=16): R^2 " << fmt(rep.fit.r2) << ", slope " << fmt(rep.fit.slope) << "; ";
  }
  const int N = 12;
  ControlProblem p;
  p.A = weyl_quantize(QuadraticSymbol::kramers_fokker_planck(1.0), N);
  const double R = truncate_radius(N, 2, 2.0);
  // Control acts on x only: thick in x, all velocities.
  std::vector<Box> boxes;
  const auto strips = Region::make_periodic_thick(1, 1.0, 0.5, R);
  for (const auto& b : strips.boxes()) boxes.push_back(Box{{b.lo[0], -R}, {b.hi[0], R}});
  p.omega = gram_matrix(Region(2, boxes, {}, R), N);
  auto rep = cost_blowup_study(p, Ts, 1);
  v.require(rep.preferred == "T^-3", "KFP model selection");
  v.detail << "KFP (N=12): rms T^-1 " << fmt(rep.fit_inv_T.residual) << ", rms T^-3 " << fmt(rep.fit_inv_T3.residual)
           << ", preferred " << rep.preferred;
}

// 10. Determinism of the verify report.
void criterion10(Outcome& v, const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("hermite_obs_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string bytes[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / "verify.json";
    const std::string cmd = cli + " verify --seed 7 --out " + out.string() + " 2>/dev/null";
    const int st = std::system(cmd.c_str());
    v.require(WIFEXITED(st) && WEXITSTATUS(st) == 0, "verify run " + std::to_string(i) + " exit status");
    std::ifstream in(out, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    bytes[i] = os.str();
  }
  fs::remove_all(dir);
  v.require(!bytes[0].empty() && bytes[0] == bytes[1], "byte-identical reports");
  v.detail << "report size " << bytes[0].size() << " bytes, identical " << (bytes[0] == bytes[1] ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to hermite-obs>\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"orthonormality and ladder algebra", criterion1},
      {"half-line Gram exactness", criterion2},
      {"bound dominance", criterion3},
      {"thick-set scaling shape", criterion4},
      {"estimate suites", criterion5},
      {"singular spaces", criterion6},
      {"dissipation", criterion7},
      {"control", criterion8},
      {"cost blowup", criterion9},
      {"determinism", [&](Outcome& v) { criterion10(v, cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failed;
    std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << v.detail.str() << " (" << fmt(secs) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
