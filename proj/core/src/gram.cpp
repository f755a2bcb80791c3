#include "hermite_obs/gram.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "hermite_obs/primitive.hpp"

namespace hermite_obs {

template <class R>
Mat<R> assemble_gram(const Region& omega, const IndexSet& index) {
  if (omega.n() != index.n()) throw ContractViolation("region and index set dimensions differ");
  const int n = index.n(), K = index.cutoff();
  const auto s = static_cast<Eigen::Index>(index.size());
  Mat<R> G = Mat<R>::Zero(s, s);
  std::map<double, Mat<R>> primitive;
  auto P = [&](double x) -> const Mat<R>& {
    auto it = primitive.find(x);
    if (it == primitive.end()) it = primitive.emplace(x, hermite_primitive<R>(K, R(x))).first;
    return it->second;
  };
  if (n == 1) {
    for (const auto& b : omega.boxes()) G += P(b.hi[0]) - P(b.lo[0]);
    return G;
  }
  std::vector<Mat<R>> D(static_cast<std::size_t>(n));
  for (const auto& b : omega.boxes()) {
    for (int j = 0; j < n; ++j) D[static_cast<std::size_t>(j)] = P(b.hi[j]) - P(b.lo[j]);
    for (Eigen::Index a = 0; a < s; ++a) {
      const auto& al = index[static_cast<std::size_t>(a)];
      for (Eigen::Index c = 0; c <= a; ++c) {
        const auto& be = index[static_cast<std::size_t>(c)];
        R v = D[0](al[0], be[0]);
        for (int j = 1; j < n; ++j) v *= D[static_cast<std::size_t>(j)](al[j], be[j]);
        G(a, c) += v;
      }
    }
  }
  for (Eigen::Index a = 0; a < s; ++a)
    for (Eigen::Index c = 0; c < a; ++c) G(c, a) = G(a, c);
  return G;
}

template Mat<double> assemble_gram<double>(const Region&, const IndexSet&);
template Mat<mp_real> assemble_gram<mp_real>(const Region&, const IndexSet&);

double GramOperator::entry_error_at(double eps) const {
  const double boxes = region ? static_cast<double>(region->boxes().size()) : 0.0;
  return 16 * eps * boxes * n * (N + 2) + truncation_error;
}

namespace {

double truncation_mass(const Region& omega, int N) {
  if (!omega.truncation_radius()) return 0;
  // |x| >= R forces some |x_j| >= R/sqrt(n); the other factors integrate to 1.
  const double a = *omega.truncation_radius() / std::sqrt(static_cast<double>(omega.n()));
  double worst = 0;
  for (int k = 0; k <= N; ++k) worst = std::max(worst, hermite_tail_mass(k, a));
  return omega.n() * worst;
}

}  // namespace

GramOperator gram_matrix(std::shared_ptr<const Region> omega, int N, double min_safety) {
  if (N < 0) throw DomainError("cutoff must be non-negative");
  const int n = omega->n();
  if (auto R = omega->truncation_radius()) {
    double need = truncate_radius(N, n, min_safety);
    if (*R < need * (1 - 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "truncation radius " << *R << " is below the required " << need << " for N=" << N << ", n=" << n;
      throw ContractViolation(os.str());
    }
  }
  GramOperator G;
  G.n = n;
  G.N = N;
  G.region = omega;
  G.matrix = assemble_gram<double>(*omega, *index_set(n, N));
  G.truncation_error = truncation_mass(*omega, N);
  G.entry_error = G.entry_error_at(std::numeric_limits<double>::epsilon());
  return G;
}

GramOperator gram_matrix(const Region& omega, int N, double min_safety) {
  return gram_matrix(std::make_shared<const Region>(omega), N, min_safety);
}

namespace {

struct Extremes {
  double lmin, lmax, log_lmin;
};

Extremes eig_double(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(M.rows() - 1);
  return {lmin, lmax, lmin > 0 ? std::log(lmin) : -INFINITY};
}

Extremes eig_mp(const Mat<mp_real>& M) {
  Eigen::SelfAdjointEigenSolver<Mat<mp_real>> es(M, Eigen::EigenvaluesOnly);
  const mp_real& lmin = es.eigenvalues()(0);
  double log_lmin = lmin > 0 ? to_double(log(lmin)) : -INFINITY;
  return {to_double(lmin), to_double(es.eigenvalues()(M.rows() - 1)), log_lmin};
}

SpectralConstant finish(const Extremes& e, unsigned bits) {
  SpectralConstant sc;
  sc.lambda_min = e.lmin;
  sc.log_lambda_min = e.log_lmin;
  sc.lambda_max = e.lmax;
  sc.log_C = -0.5 * e.log_lmin;
  sc.C = std::exp(sc.log_C);
  sc.C_lower_bound = sc.C;
  sc.precision_bits = bits;
  return sc;
}

SpectralConstant singular(const Extremes& e, unsigned bits, double floor) {
  SpectralConstant sc = finish(e, bits);
  sc.singular = true;
  sc.C_lower_bound = 1 / std::sqrt(std::max(e.lmin, 0.0) + floor);
  if (!(e.lmin > 0)) {
    sc.C = INFINITY;
    sc.log_C = INFINITY;
  }
  return sc;
}

}  // namespace

SpectralConstant spectral_constant(const GramOperator& G, const PrecisionPolicy& policy) {
  const double size = static_cast<double>(G.size());
  if (G.size() == 0) throw ContractViolation("empty Gram operator");
  const double trunc_floor = size * G.truncation_error;
  const double log_trunc_floor = trunc_floor > 0 ? std::log(trunc_floor) : -INFINITY;
  // Rounding noise of the eigen-solve relative to λ_max.
  auto rounding_ok = [&](const Extremes& e, double log_eps) {
    return e.lmax > 0 && e.log_lmin > std::log(1e3 * size * e.lmax) + log_eps;
  };
  auto entries_ok = [&](const Extremes& e, double entry_err) {
    return entry_err <= 0 || e.log_lmin > std::log(size * entry_err);
  };
  if (policy.start_bits <= 53) {
    const double eps = std::numeric_limits<double>::epsilon();
    Extremes e = eig_double(G.matrix);
    if (rounding_ok(e, std::log(eps)) && entries_ok(e, G.entry_error)) return finish(e, 53);
    if (rounding_ok(e, std::log(eps)) && e.log_lmin <= log_trunc_floor) return singular(e, 53, trunc_floor);
  }
  if (!G.region) throw ContractViolation("extended precision needs the Gram operator's region");
  unsigned bits = std::max(policy.start_bits > 53 ? policy.start_bits : policy.extended_bits, 64u);
  Extremes last{0, 0, -INFINITY};
  double last_err = 0;
  while (true) {
    PrecisionScope scope(bits);
    const double log_eps = -static_cast<double>(bits) * std::log(2.0);
    Mat<mp_real> M = assemble_gram<mp_real>(*G.region, *index_set(G.n, G.N));
    last = eig_mp(M);
    last_err = G.entry_error_at(std::exp(log_eps));
    if (rounding_ok(last, log_eps) && entries_ok(last, last_err)) return finish(last, bits);
    // Rounding is resolved but the truncated mass swamps λ_min: more bits cannot help.
    if (rounding_ok(last, log_eps) && last.log_lmin <= log_trunc_floor) return singular(last, bits, trunc_floor);
    if (bits >= policy.max_bits) break;
    bits = std::min(bits * 2, policy.max_bits);
  }
  return singular(last, bits, size * last_err);
}

}  // namespace hermite_obs
