#include "hermite_obs/galerkin.hpp"

#include <random>

#include "hermite_obs/matrix_exp.hpp"

namespace hermite_obs {

namespace {

template <class R>
struct SparseColumn {
  std::vector<std::pair<std::size_t, R>> terms;
};

// Column tables of a_{j,+} and a_{j,-} on E_{N+2}; at most one entry per column.
template <class R>
struct LadderTables {
  std::vector<std::vector<std::optional<std::pair<std::size_t, R>>>> raise, lower;

  LadderTables(const IndexSet& big) {
    const int n = big.n();
    raise.assign(static_cast<std::size_t>(n), std::vector<std::optional<std::pair<std::size_t, R>>>(big.size()));
    lower = raise;
    for (int j = 0; j < n; ++j) {
      for (const auto& e : ladder_entries(big, big, j, true))
        raise[static_cast<std::size_t>(j)][e.col] = std::make_pair(e.row, sqrt_r(R(e.weight)));
      for (const auto& e : ladder_entries(big, big, j, false))
        lower[static_cast<std::size_t>(j)][e.col] = std::make_pair(e.row, sqrt_r(R(e.weight)));
    }
  }

  // x_j = (a_+ + a_-)/√2 for position axes; D_j = i (a_+ - a_-)/√2, with the i
  // carried separately by the caller.
  SparseColumn<R> apply(int var, int n, const SparseColumn<R>& v, const R& inv_sqrt2) const {
    const bool momentum = var >= n;
    const auto axis = static_cast<std::size_t>(momentum ? var - n : var);
    SparseColumn<R> out;
    for (const auto& [col, val] : v.terms) {
      if (const auto& r = raise[axis][col]) out.terms.emplace_back(r->first, val * r->second * inv_sqrt2);
      if (const auto& l = lower[axis][col]) {
        R w = val * l->second * inv_sqrt2;
        out.terms.emplace_back(l->first, momentum ? R(-w) : w);
      }
    }
    return out;
  }
};

}  // namespace

template <class R>
ComplexParts<R> weyl_quantize_parts(const QuadraticSymbol& q, int N) {
  if (N < 0) throw DomainError("cutoff must be nonnegative");
  q.validate();
  const int n = q.n;
  auto small = index_set(n, N);
  auto big = index_set(n, N + 2);
  LadderTables<R> tables(*big);
  const R inv_sqrt2 = R(1) / sqrt_r(R(2));
  const auto s = static_cast<Eigen::Index>(small->size());
  ComplexParts<R> out{Mat<R>::Zero(s, s), Mat<R>::Zero(s, s)};

  for (int r = 0; r < 2 * n; ++r) {
    for (int c = r; c < 2 * n; ++c) {
      cplx coef = q.Q(r, c);
      if (coef == cplx(0, 0)) continue;
      // Σ Q_rs O_r O_s over the symmetric pair: Q_rr O_r^2, or Q_rs (O_r O_s + O_s O_r).
      const int imag_units = (r >= n) + (c >= n);
      cplx phase = imag_units == 0 ? cplx(1, 0) : imag_units == 1 ? cplx(0, 1) : cplx(-1, 0);
      cplx w = coef * phase;
      const R wre = R(w.real()), wim = R(w.imag());
      for (Eigen::Index col = 0; col < s; ++col) {
        SparseColumn<R> e;
        e.terms.emplace_back(static_cast<std::size_t>(col), R(1));
        std::vector<SparseColumn<R>> products;
        products.push_back(tables.apply(r, n, tables.apply(c, n, e, inv_sqrt2), inv_sqrt2));
        if (c != r) products.push_back(tables.apply(c, n, tables.apply(r, n, e, inv_sqrt2), inv_sqrt2));
        for (const auto& p : products)
          for (const auto& [row, val] : p.terms) {
            if (row >= small->size()) continue;
            const auto i = static_cast<Eigen::Index>(row);
            if (w.real() != 0) out.re(i, col) += wre * val;
            if (w.imag() != 0) out.im(i, col) += wim * val;
          }
      }
    }
  }
  return out;
}

template ComplexParts<double> weyl_quantize_parts<double>(const QuadraticSymbol&, int);
template ComplexParts<mp_real> weyl_quantize_parts<mp_real>(const QuadraticSymbol&, int);

GalerkinOperator weyl_quantize(const QuadraticSymbol& q, int N) {
  auto parts = weyl_quantize_parts<double>(q, N);
  GalerkinOperator G;
  G.n = q.n;
  G.N = N;
  G.A = parts.re.cast<cplx>() + cplx(0, 1) * parts.im.cast<cplx>();
  G.symbol = q;
  return G;
}

double GalerkinOperator::accretivity_margin() const {
  Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

EvolveResult evolve(const GalerkinOperator& A, const HermiteExpansion& f0, double t) {
  if (!(t >= 0)) throw DomainError("evolution time must be nonnegative");
  if (f0.cutoff() != A.N || f0.n() != A.n) throw ContractViolation("initial datum and operator live on different E_N");
  Eigen::VectorXcd c = t == 0 ? f0.coeffs() : Eigen::VectorXcd(propagator<cplx>(A.A, t) * f0.coeffs());
  EvolveResult out{HermiteExpansion(f0.index_ptr(), c), 1.0, false};
  const double n0 = f0.norm();
  out.norm_ratio = n0 > 0 ? c.norm() / n0 : 0.0;
  if (A.symbol.accretive() && c.norm() > n0 * (1 + 1e-8)) out.contraction_violation = true;
  return out;
}

double galerkin_convergence(const QuadraticSymbol& q, const HermiteExpansion& f0, double t) {
  const int N = f0.cutoff();
  auto coarse = evolve(weyl_quantize(q, N), f0, t).f;
  auto fine = evolve(weyl_quantize(q, 2 * N), f0.with_cutoff(2 * N), t).f.with_cutoff(N);
  const double n0 = f0.norm();
  return n0 > 0 ? (coarse - fine).norm() / n0 : 0.0;
}

DissipationReport dissipation_check(const GalerkinOperator& A, int k0, double C0_guess, const std::vector<double>& t_grid,
                                    const std::vector<int>& k_grid, int probes, std::uint64_t seed) {
  if (k0 < 0) throw ContractViolation("dissipation check needs a finite k0");
  DissipationReport rep;
  rep.k0 = k0;
  const auto& index = *index_set(A.n, A.N);
  const auto s = static_cast<Eigen::Index>(index.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd P(s, probes);
  for (Eigen::Index i = 0; i < s; ++i)
    for (int p = 0; p < probes; ++p) P(i, p) = cplx(gauss(rng), gauss(rng));

  const bool harmonic = A.symbol.Q.isApprox(Eigen::MatrixXcd::Identity(2 * A.n, 2 * A.n), 0.0);
  double harmonic_err = 0;

  for (double t : t_grid) {
    if (!(t >= 0)) throw DomainError("dissipation times must be nonnegative");
    Eigen::MatrixXcd E = t == 0 ? Eigen::MatrixXcd::Identity(s, s) : propagator<cplx>(A.A, t);
    std::vector<double> ks, logs;
    for (int k : k_grid) {
      if (k < 0 || k >= A.N) throw ContractViolation("dissipation level must lie in [0, N)");
      const auto keep = static_cast<Eigen::Index>(index.prefix_size(k));
      Eigen::MatrixXcd high = E.bottomRows(s - keep);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(high);
      DissipationPoint pt{t, k, svd.singularValues()(0), 0};
      Eigen::MatrixXcd img = high * P;
      for (int p = 0; p < probes; ++p) pt.probe_ratio = std::max(pt.probe_ratio, img.col(p).norm() / P.col(p).norm());
      rep.points.push_back(pt);
      if (harmonic) harmonic_err = std::max(harmonic_err, std::abs(pt.ratio - std::exp(-(2.0 * k + 2 + A.n) * t)));
      if (pt.ratio > 1e-300) {
        ks.push_back(k);
        logs.push_back(std::log(pt.ratio));
      }
    }
    if (ks.size() >= 2) {
      DissipationSlice sl{t, fit_line(ks, logs), 0};
      sl.rate = -sl.fit.slope;
      rep.slices.push_back(sl);
    }
  }
  if (harmonic) rep.harmonic_error = harmonic_err;

  std::vector<DissipationSlice> pos;
  for (const auto& sl : rep.slices)
    if (sl.t > 0 && sl.rate > 0) pos.push_back(sl);
  if (!pos.empty()) {
    std::size_t last = 0;
    while (last + 1 < pos.size() && pos[last + 1].rate >= pos[last].rate) ++last;
    rep.t0 = pos[last].t;
    const double m = 2.0 * k0 + 1;
    std::vector<double> lt, lr;
    double acc = 0;
    for (std::size_t i = 0; i <= last; ++i) {
      lt.push_back(std::log(pos[i].t));
      lr.push_back(std::log(pos[i].rate));
      acc += m * lt.back() - lr.back();
    }
    rep.C0 = std::exp(acc / static_cast<double>(last + 1));
    if (lt.size() >= 2) rep.exponent_fit = fit_line(lt, lr);
    for (const auto& sl : pos)
      if (sl.rate < std::pow(std::min(sl.t, rep.t0), m) / C0_guess) rep.guess_consistent = false;
  }
  return rep;
}

}  // namespace hermite_obs
