#include "hermite_obs/control.hpp"

#include <algorithm>
#include <random>

#include "hermite_obs/matrix_exp.hpp"
#include "hermite_obs/quadrature.hpp"

namespace hermite_obs {

void ControlProblem::validate() const {
  if (!(T > 0)) throw DomainError("control horizon must be positive");
  if (A.n != omega.n || A.N != omega.N) throw ContractViolation("operator and Πω live on different E_N");
  if (A.size() != omega.size()) throw ContractViolation("operator and Πω sizes differ");
  if (panels < 1) throw DomainError("panel count must be positive");
  if (!(stagnation_tol > 0)) throw DomainError("stagnation tolerance must be positive");
}

namespace {

double log_eps_for(unsigned bits) { return -static_cast<double>(bits) * std::log(2.0); }

template <class R>
double log_d(const R& x) {
  if constexpr (std::is_same_v<R, double>)
    return std::log(x);
  else
    return to_double(log_r(x));
}

// Complex systems become real ones on [Re; Im]; real systems act on the real
// and imaginary parts as two separate columns.
template <class R>
struct RealSystem {
  Mat<R> A;
  Mat<R> B;
  bool embedded = false;
  Eigen::Index s = 0;  // complex dimension of E_N

  Eigen::Index dim() const { return A.rows(); }

  Mat<R> embed(const Eigen::VectorXcd& c) const {
    if (embedded) {
      Mat<R> X(2 * s, 1);
      for (Eigen::Index i = 0; i < s; ++i) {
        X(i, 0) = R(c(i).real());
        X(s + i, 0) = R(c(i).imag());
      }
      return X;
    }
    Mat<R> X(s, 2);
    for (Eigen::Index i = 0; i < s; ++i) {
      X(i, 0) = R(c(i).real());
      X(i, 1) = R(c(i).imag());
    }
    return X;
  }

  Eigen::VectorXcd unembed(const Mat<R>& X) const {
    Eigen::VectorXcd c(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      if (embedded)
        c(i) = cplx(to_double(X(i, 0)), to_double(X(s + i, 0)));
      else
        c(i) = cplx(to_double(X(i, 0)), X.cols() > 1 ? to_double(X(i, 1)) : 0.0);
    }
    return c;
  }

  // Positions of E_k inside the system coordinates.
  std::vector<Eigen::Index> prefix(std::size_t sk) const {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < sk; ++i) idx.push_back(static_cast<Eigen::Index>(i));
    if (embedded)
      for (std::size_t i = 0; i < sk; ++i) idx.push_back(s + static_cast<Eigen::Index>(i));
    return idx;
  }
};

template <class R>
RealSystem<R> build_system(const ControlProblem& p) {
  Mat<R> Are, Aim, B;
  if constexpr (std::is_same_v<R, double>) {
    Are = p.A.A.real();
    Aim = p.A.A.imag();
    B = p.omega.matrix;
  } else {
    auto parts = weyl_quantize_parts<R>(p.A.symbol, p.A.N);
    Are = parts.re;
    Aim = parts.im;
    if (p.omega.region)
      B = assemble_gram<R>(*p.omega.region, *index_set(p.omega.n, p.omega.N));
    else
      B = p.omega.matrix.cast<R>();
  }
  RealSystem<R> sys;
  sys.s = Are.rows();
  sys.embedded = !p.A.is_real();
  if (!sys.embedded) {
    sys.A = Are;
    sys.B = B;
    return sys;
  }
  const auto s = sys.s;
  sys.A = Mat<R>::Zero(2 * s, 2 * s);
  sys.A.topLeftCorner(s, s) = Are;
  sys.A.topRightCorner(s, s) = -Aim;
  sys.A.bottomLeftCorner(s, s) = Aim;
  sys.A.bottomRightCorner(s, s) = Are;
  sys.B = Mat<R>::Zero(2 * s, 2 * s);
  sys.B.topLeftCorner(s, s) = B;
  sys.B.bottomRightCorner(s, s) = B;
  return sys;
}

// Visits the composite 8-point Gauss nodes s of [0, T] with M panels, passing
// (s, weight, e^{-sA}).
template <class R, class F>
void for_each_node(const Mat<R>& A, double T, int M, F&& visit) {
  static thread_local std::vector<std::pair<unsigned, QuadratureRule<R>>> cache;
  const unsigned digits = std::is_same_v<R, double> ? 0u : static_cast<unsigned>(mp_real::default_precision());
  const QuadratureRule<R>* rule = nullptr;
  for (const auto& [d, r] : cache)
    if (d == digits) rule = &r;
  if (!rule) {
    cache.emplace_back(digits, gauss_legendre<R>(8));
    rule = &cache.back().second;
  }
  const R h = R(T) / R(M);
  std::vector<Mat<R>> Enode;
  std::vector<R> offset, weight;
  for (std::size_t q = 0; q < rule->nodes.size(); ++q) {
    offset.push_back(h * (rule->nodes[q] + R(1)) / R(2));
    weight.push_back(h * rule->weights[q] / R(2));
    Enode.push_back(expm<R>(Mat<R>(-A * offset.back())));
  }
  const Mat<R> Estep = expm<R>(Mat<R>(-A * h));
  Mat<R> Phi = Mat<R>::Identity(A.rows(), A.cols());
  for (int i = 0; i < M; ++i) {
    for (std::size_t q = 0; q < Enode.size(); ++q) {
      Mat<R> P = Enode[q] * Phi;
      visit(R(i) * h + offset[q], weight[q], P);
    }
    Phi = Estep * Phi;
  }
}

template <class R>
Mat<R> gramian(const Mat<R>& A, const Mat<R>& B, double T, int M) {
  Mat<R> W = Mat<R>::Zero(A.rows(), A.cols());
  for_each_node<R>(A, T, M, [&](const R&, const R& w, const Mat<R>& P) { W += w * (P * B * P.transpose()); });
  return W;
}

int starting_panels(const ControlProblem& p, double T, double normA) {
  return std::max(p.panels, static_cast<int>(std::ceil(T * normA)));
}

constexpr int kMaxDoublings = 10;

template <class R>
struct Refined {
  Mat<R> W;
  int panels = 0;
};

// Doubles the panel count until the Frobenius change is below tol relative.
template <class R>
Refined<R> refined_gramian(const Mat<R>& A, const Mat<R>& B, double T, int M, double tol) {
  Mat<R> W = gramian<R>(A, B, T, M);
  for (int it = 0; it < kMaxDoublings; ++it) {
    Mat<R> W2 = gramian<R>(A, B, T, 2 * M);
    M *= 2;
    const double change = to_double(R((W2 - W).norm())), scale = to_double(R(W2.norm()));
    W = std::move(W2);
    if (change <= tol * scale) break;
  }
  return {W, M};
}

template <class R>
struct SymEig {
  double lmin = 0, lmax = 0, log_lmin = -INFINITY;
};

template <class R>
SymEig<R> extremes(const Mat<R>& W) {
  Eigen::SelfAdjointEigenSolver<Mat<R>> es(W, Eigen::EigenvaluesOnly);
  SymEig<R> e;
  const R& lo = es.eigenvalues()(0);
  e.lmin = to_double(lo);
  e.lmax = to_double(R(es.eigenvalues()(W.rows() - 1)));
  e.log_lmin = lo > 0 ? log_d<R>(lo) : -INFINITY;
  return e;
}

bool resolved(const SymEig<double>& e, double size, double log_eps) {
  return e.lmax > 0 && e.log_lmin > std::log(1e3 * size * e.lmax) + log_eps;
}
template <class R>
bool resolved(const SymEig<R>& e, double size, double log_eps) {
  return e.lmax > 0 && e.log_lmin > std::log(1e3 * size * e.lmax) + log_eps;
}

// ---------------------------------------------------------------- observability

struct ObsAttempt {
  bool ok = false;
  ObservabilityReport rep;
};

template <class R>
ObsAttempt observe(const ControlProblem& p, unsigned bits, std::uint64_t seed) {
  const RealSystem<R> sys = build_system<R>(p);
  const double size = static_cast<double>(sys.dim());
  const double log_eps = log_eps_for(bits);
  const Mat<R> E = propagator<R>(sys.A, p.T);
  const Mat<R> K = E * E.transpose();
  int M = starting_panels(p, p.T, norm1(sys.A));

  ObsAttempt out;
  auto& rep = out.rep;
  rep.T = p.T;
  rep.precision_bits = bits;
  double prev = NAN;
  Mat<R> W;
  for (int it = 0; it <= kMaxDoublings; ++it, M *= 2) {
    W = gramian<R>(sys.A, sys.B, p.T, M);
    SymEig<R> e = extremes<R>(W);
    rep.panels = M;
    rep.W_condition = e.lmin > 0 ? e.lmax / e.lmin : INFINITY;
    if (!resolved(e, size, log_eps)) {
      // Regularized pencil: W + δI dominates W, so its top eigenvalue bounds C_T from below.
      const R delta = R(1e3 * size * e.lmax) * exp_r(R(log_eps));
      W += delta * Mat<R>::Identity(W.rows(), W.cols());
      out.ok = false;
      rep.ceiling = true;
      break;
    }
    Eigen::LLT<Mat<R>> llt(W);
    Mat<R> Linv_K = llt.matrixL().solve(K);
    Mat<R> S = llt.matrixL().solve(Mat<R>(Linv_K.transpose()));
    Eigen::SelfAdjointEigenSolver<Mat<R>> es(S, Eigen::EigenvaluesOnly);
    const double C = to_double(R(es.eigenvalues()(S.rows() - 1)));
    out.ok = true;
    rep.ceiling = false;
    if (std::isfinite(prev) && std::abs(C - prev) <= p.stagnation_tol * std::abs(C)) break;
    prev = C;
  }

  Eigen::LLT<Mat<R>> llt(W);
  Mat<R> Linv_K = llt.matrixL().solve(K);
  Mat<R> S = llt.matrixL().solve(Mat<R>(Linv_K.transpose()));
  S = (S + S.transpose()) / R(2);
  Eigen::SelfAdjointEigenSolver<Mat<R>> es(S);
  const Eigen::Index top = S.rows() - 1;
  const R lam = es.eigenvalues()(top);
  rep.C_T = to_double(lam);
  rep.log_C_T = lam > 0 ? log_d<R>(lam) : -INFINITY;
  Mat<R> v = es.eigenvectors().col(top);
  Mat<R> g = llt.matrixU().solve(v);
  g /= R(g.norm());
  if (sys.embedded) {
    rep.extremal = HermiteExpansion(index_set(p.A.n, p.A.N), sys.unembed(g));
  } else {
    Mat<R> g2(g.rows(), 2);
    g2.col(0) = g;
    g2.col(1).setZero();
    rep.extremal = HermiteExpansion(index_set(p.A.n, p.A.N), sys.unembed(g2));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 20; ++k) {
    Mat<R> x(sys.dim(), 1);
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = R(gauss(rng));
    const R num = (x.transpose() * K * x)(0, 0), den = (x.transpose() * W * x)(0, 0);
    if (den > 0) rep.probe_max = std::max(rep.probe_max, to_double(R(num / den)));
  }
  return out;
}

// --------------------------------------------------------------------- HUM

struct HumAttempt {
  bool ok = false;
  ControlResult res;
};

template <class R>
HumAttempt hum(const ControlProblem& p, const HermiteExpansion& f0, unsigned bits) {
  const RealSystem<R> sys = build_system<R>(p);
  const double size = static_cast<double>(sys.dim());
  const Mat<R> B2 = sys.B * sys.B;
  const Mat<R> E = propagator<R>(sys.A, p.T);
  auto Wc = refined_gramian<R>(sys.A, B2, p.T, starting_panels(p, p.T, norm1(sys.A)), p.stagnation_tol);
  SymEig<R> e = extremes<R>(Wc.W);

  HumAttempt out;
  auto& res = out.res;
  res.precision_bits = bits;
  res.panels = Wc.panels;
  res.gramian_condition = e.lmin > 0 ? e.lmax / e.lmin : INFINITY;
  out.ok = resolved(e, size, log_eps_for(bits));
  res.partial = !out.ok;

  const Mat<R> X0 = sys.embed(f0.coeffs());
  const Mat<R> rhs = -(E * X0);
  Mat<R> lambda;
  Eigen::LLT<Mat<R>> llt(Wc.W);
  if (llt.info() == Eigen::Success)
    lambda = llt.solve(rhs);
  else
    lambda = Wc.W.completeOrthogonalDecomposition().solve(rhs);

  Mat<R> fT = E * X0;
  R cost = R(0);
  std::vector<std::pair<double, Eigen::VectorXcd>> traj;
  for_each_node<R>(sys.A, p.T, Wc.panels, [&](const R& s, const R& w, const Mat<R>& P) {
    Mat<R> U = sys.B * (P.transpose() * lambda);
    fT += w * (P * (sys.B * U));
    cost += w * U.squaredNorm();
    traj.emplace_back(p.T - to_double(s), sys.unembed(U));
  });
  std::sort(traj.begin(), traj.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  auto idx = index_set(p.A.n, p.A.N);
  for (auto& [t, u] : traj) {
    res.times.push_back(t);
    res.u.emplace_back(idx, u);
  }
  res.cost = to_double(cost);
  const double n0 = to_double(R(X0.norm()));
  res.residual = n0 > 0 ? to_double(R(fT.norm())) / n0 : 0.0;
  return out;
}

// --------------------------------------------------------------- staircase

struct StageAttempt {
  bool ok = false;
  StageLog log;
  Eigen::MatrixXd state;  // after active and passive halves, system coordinates
  std::vector<std::pair<double, Eigen::VectorXcd>> traj;
};

template <class R>
StageAttempt run_stage(const ControlProblem& p, const Eigen::MatrixXd& state, std::size_t sk, double tau_a, double tau_p,
                       double start, unsigned bits) {
  const RealSystem<R> sys = build_system<R>(p);
  const auto keep = sys.prefix(sk);
  std::vector<Eigen::Index> drop;
  for (Eigen::Index i = 0; i < sys.dim(); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) drop.push_back(i);
  const Mat<R> Ak = sys.A(keep, keep);
  const Mat<R> Bk = sys.B(keep, keep);
  const Mat<R> Bcols = sys.B(Eigen::placeholders::all, keep);
  Mat<R> X = state.cast<R>();

  StageAttempt out;
  out.log.precision_bits = bits;
  auto Wc = refined_gramian<R>(Ak, Mat<R>(Bk * Bk), tau_a, starting_panels(p, tau_a, norm1(sys.A)), p.stagnation_tol);
  SymEig<R> e = extremes<R>(Wc.W);
  out.log.gramian_condition = e.lmin > 0 ? e.lmax / e.lmin : INFINITY;
  if (!resolved(e, static_cast<double>(keep.size()), log_eps_for(bits))) return out;

  const Mat<R> Xk = X(keep, Eigen::placeholders::all);
  const Mat<R> rhs = -(propagator<R>(Ak, tau_a) * Xk);
  const Mat<R> lambda = Eigen::LLT<Mat<R>>(Wc.W).solve(rhs);

  std::vector<std::pair<R, Mat<R>>> controls;  // (s, B_k e^{-s A_k^T} λ) with s = τ_a - t
  R cost = R(0);
  for_each_node<R>(Ak, tau_a, Wc.panels, [&](const R& s, const R& w, const Mat<R>& P) {
    Mat<R> U = Bk * (P.transpose() * lambda);
    cost += w * U.squaredNorm();
    controls.emplace_back(s, U);
  });
  std::size_t q = 0;
  Mat<R> forced = Mat<R>::Zero(X.rows(), X.cols());
  for_each_node<R>(sys.A, tau_a, Wc.panels, [&](const R&, const R& w, const Mat<R>& P) {
    forced += w * (P * (Bcols * controls[q].second));
    ++q;
  });
  X = propagator<R>(sys.A, tau_a) * X + forced;

  for (auto& [s, U] : controls) {
    Mat<R> full = Mat<R>::Zero(sys.dim(), U.cols());
    full(keep, Eigen::placeholders::all) = U;
    out.traj.emplace_back(start + tau_a - to_double(s), sys.unembed(full));
  }

  auto high_norm = [&](const Mat<R>& Y) {
    return drop.empty() ? 0.0 : to_double(R(Mat<R>(Y(drop, Eigen::placeholders::all)).norm()));
  };
  out.log.high_before_passive = high_norm(X);
  out.log.energy_before_passive = to_double(R(X.norm()));
  const Mat<R> Ep = propagator<R>(sys.A, tau_p);
  X = Ep * X;
  out.log.high_after_passive = high_norm(X);
  if (!drop.empty()) {
    Eigen::MatrixXd H(static_cast<Eigen::Index>(drop.size()), sys.dim());
    for (Eigen::Index i = 0; i < H.rows(); ++i)
      for (Eigen::Index j = 0; j < H.cols(); ++j) H(i, j) = to_double(R(Ep(drop[static_cast<std::size_t>(i)], j)));
    out.log.decay_bound = Eigen::JacobiSVD<Eigen::MatrixXd>(H).singularValues()(0);
  }
  out.log.cost = to_double(cost);
  out.state.resize(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) out.state(i, j) = to_double(X(i, j));
  out.ok = true;
  return out;
}

template <class Attempt, class Fn>
Attempt escalate(const ControlProblem& p, Fn&& run) {
  if (p.precision_bits <= 53) {
    Attempt a = run.template operator()<double>(53u);
    if (a.ok) return a;
  }
  unsigned bits = std::max(p.precision_bits > 53 ? p.precision_bits : default_precision_bits(), 64u);
  while (true) {
    PrecisionScope scope(bits);
    Attempt a = run.template operator()<mp_real>(bits);
    if (a.ok || bits >= p.max_bits) return a;
    bits = std::min(bits * 2, p.max_bits);
  }
}

}  // namespace

ObservabilityReport observability_constant(const ControlProblem& p, std::uint64_t seed) {
  p.validate();
  auto a = escalate<ObsAttempt>(p, [&]<class R>(unsigned bits) { return observe<R>(p, bits, seed); });
  return a.rep;
}

ControlResult hum_control(const ControlProblem& p, const HermiteExpansion& f0) {
  p.validate();
  if (f0.n() != p.A.n || f0.cutoff() != p.A.N) throw ContractViolation("initial datum lives on a different E_N");
  if (f0.norm() == 0) {
    ControlResult r;
    r.precision_bits = p.precision_bits;
    r.times = {0.0, p.T};
    r.u = {HermiteExpansion(p.A.n, p.A.N), HermiteExpansion(p.A.n, p.A.N)};
    return r;
  }
  return escalate<HumAttempt>(p, [&]<class R>(unsigned bits) { return hum<R>(p, f0, bits); }).res;
}

ControlResult lr_staircase(const ControlProblem& p, const HermiteExpansion& f0, const StaircaseOptions& opt) {
  p.validate();
  if (f0.n() != p.A.n || f0.cutoff() != p.A.N) throw ContractViolation("initial datum lives on a different E_N");
  if (!(opt.a > 0 && opt.b > opt.a)) throw DomainError("staircase exponents need 0 < a < b");
  if (!(opt.K0 > 0)) throw DomainError("K0 must be positive");
  if (!(opt.target > 0)) throw DomainError("target residual must be positive");

  const RealSystem<double> sys = build_system<double>(p);
  const auto& index = *index_set(p.A.n, p.A.N);
  Eigen::MatrixXd X = sys.embed(f0.coeffs());
  const double n0 = X.norm();
  ControlResult res;
  res.precision_bits = p.precision_bits;
  if (n0 == 0) return res;

  double start = 0;
  std::vector<std::pair<double, Eigen::VectorXcd>> traj;
  for (int j = 0; j < opt.max_stages; ++j) {
    const double Tj = p.T * std::ldexp(1.0, -j - 1);
    const double kj = std::ceil(opt.K0 * std::pow(2.0, j * opt.a / (opt.b - opt.a)));
    const int k = static_cast<int>(std::min<double>(p.A.N, kj));
    const std::size_t sk = index.prefix_size(k);
    auto st = escalate<StageAttempt>(p, [&]<class R>(unsigned bits) {
      return run_stage<R>(p, X, sk, Tj / 2, Tj / 2, start, bits);
    });
    if (!st.ok) {
      res.partial = true;
      res.aborted_stage = j;
      break;
    }
    X = st.state;
    st.log.stage = j;
    st.log.k = k;
    st.log.start = start;
    st.log.active = Tj / 2;
    st.log.passive = Tj / 2;
    st.log.energy_after = X.norm() / n0;
    res.cost += st.log.cost;
    res.gramian_condition = std::max(res.gramian_condition, st.log.gramian_condition);
    res.precision_bits = std::max(res.precision_bits, st.log.precision_bits);
    res.stages.push_back(st.log);
    traj.insert(traj.end(), st.traj.begin(), st.traj.end());
    start += Tj;
    if (st.log.energy_after < opt.target) break;
  }
  if (p.T - start > 0) X = propagator<double>(sys.A, p.T - start) * X;
  res.residual = X.norm() / n0;
  std::sort(traj.begin(), traj.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  auto idx = index_set(p.A.n, p.A.N);
  for (auto& [t, u] : traj) {
    res.times.push_back(t);
    res.u.emplace_back(idx, u);
  }
  return res;
}

BlowupReport cost_blowup_study(const ControlProblem& tmpl, const std::vector<double>& T_list, int k0) {
  if (T_list.empty()) throw ContractViolation("empty horizon list");
  if (k0 < 0) throw ContractViolation("blowup study needs a finite k0");
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    if (!(T_list[i] > 0)) throw ContractViolation("horizons must be positive");
    if (i > 0 && !(T_list[i] < T_list[i - 1])) throw ContractViolation("horizons must be strictly decreasing");
  }
  BlowupReport rep;
  rep.k0 = k0;
  std::vector<double> x, x1, x3, y;
  const double m = 2.0 * k0 + 1;
  for (double T : T_list) {
    ControlProblem p = tmpl;
    p.T = T;
    auto o = observability_constant(p);
    rep.rows.push_back({T, o.C_T, o.log_C_T, o.precision_bits, o.method, o.ceiling});
    if (o.ceiling) {
      rep.excluded.push_back(T);
      continue;
    }
    x.push_back(std::pow(T, -m));
    x1.push_back(1 / T);
    x3.push_back(std::pow(T, -3.0));
    y.push_back(o.log_C_T);
  }
  if (y.size() >= 2) {
    rep.fit = fit_line(x, y);
    rep.fit_inv_T = fit_line(x1, y);
    rep.fit_inv_T3 = fit_line(x3, y);
    rep.preferred = rep.fit_inv_T3.residual < rep.fit_inv_T.residual ? "T^-3" : "T^-1";
  }
  return rep;
}

}  // namespace hermite_obs
