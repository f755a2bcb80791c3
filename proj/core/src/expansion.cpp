#include "hermite_obs/expansion.hpp"

#include <algorithm>

#include "hermite_obs/hermite_function.hpp"

namespace hermite_obs {

HermiteExpansion::HermiteExpansion(int n, int N)
    : index_(index_set(n, N)), coeffs_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(index_->size()))) {}

HermiteExpansion::HermiteExpansion(std::shared_ptr<const IndexSet> index, Eigen::VectorXcd coeffs)
    : index_(std::move(index)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != index_->size())
    throw ContractViolation("coefficient count does not match the index set");
}

HermiteExpansion HermiteExpansion::basis(int N, const MultiIndex& alpha) {
  HermiteExpansion f(alpha.dim(), N);
  auto pos = f.index().position(alpha);
  if (!pos) throw ContractViolation("basis index exceeds the cutoff");
  f.coeffs_[static_cast<Eigen::Index>(*pos)] = 1.0;
  return f;
}

cplx HermiteExpansion::coeff(const MultiIndex& alpha) const {
  auto pos = index_->position(alpha);
  return pos ? coeffs_[static_cast<Eigen::Index>(*pos)] : cplx(0.0);
}

cplx HermiteExpansion::eval(std::span<const double> x) const {
  const int nn = n();
  if (static_cast<int>(x.size()) != nn) throw ContractViolation("point dimension mismatch");
  std::vector<std::vector<double>> tables;
  tables.reserve(static_cast<std::size_t>(nn));
  for (int j = 0; j < nn; ++j) tables.push_back(hermite_values<double>(cutoff(), x[static_cast<std::size_t>(j)]));
  cplx s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& a = (*index_)[i];
    double p = 1.0;
    for (int j = 0; j < nn; ++j) p *= tables[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[j])];
    s += coeffs_[static_cast<Eigen::Index>(i)] * p;
  }
  return s;
}

cplx HermiteExpansion::inner(const HermiteExpansion& g) const {
  if (g.n() != n() || g.cutoff() != cutoff()) throw ContractViolation("inner product of mismatched expansions");
  return coeffs_.dot(g.coeffs_);
}

HermiteExpansion HermiteExpansion::with_cutoff(int new_cutoff) const {
  if (new_cutoff < 0) throw ContractViolation("negative cutoff");
  auto idx = index_set(n(), new_cutoff);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(idx->size()));
  // Graded order makes E_min a common prefix.
  auto m = static_cast<Eigen::Index>(std::min(idx->size(), size()));
  c.head(m) = coeffs_.head(m);
  return HermiteExpansion(idx, c);
}

HermiteExpansion HermiteExpansion::operator+(const HermiteExpansion& g) const {
  if (g.n() != n() || g.cutoff() != cutoff()) throw ContractViolation("sum of mismatched expansions");
  return HermiteExpansion(index_, coeffs_ + g.coeffs_);
}

HermiteExpansion HermiteExpansion::operator-(const HermiteExpansion& g) const {
  if (g.n() != n() || g.cutoff() != cutoff()) throw ContractViolation("difference of mismatched expansions");
  return HermiteExpansion(index_, coeffs_ - g.coeffs_);
}

HermiteExpansion HermiteExpansion::operator*(cplx s) const { return HermiteExpansion(index_, coeffs_ * s); }

nlohmann::json HermiteExpansion::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (Eigen::Index i = 0; i < coeffs_.size(); ++i) c.push_back({coeffs_[i].real(), coeffs_[i].imag()});
  return {{"n", n()}, {"N", cutoff()}, {"order", "grlex"}, {"coeffs", c}};
}

HermiteExpansion HermiteExpansion::from_json(const nlohmann::json& j) {
  if (j.value("order", std::string("grlex")) != "grlex") throw ContractViolation("unsupported coefficient order");
  HermiteExpansion f(j.at("n").get<int>(), j.at("N").get<int>());
  const auto& c = j.at("coeffs");
  if (c.size() != f.size()) throw ContractViolation("coefficient count does not match binomial(N+n, n)");
  for (std::size_t i = 0; i < c.size(); ++i)
    f.coeffs_[static_cast<Eigen::Index>(i)] = cplx(c[i].at(0).get<double>(), c[i].at(1).get<double>());
  return f;
}

LadderMap LadderMap::make(LadderKind kind, int axis, int source_cutoff) {
  int target = kind == LadderKind::lower ? source_cutoff : source_cutoff + 1;
  return {kind, axis, source_cutoff, target};
}

std::vector<LadderEntry> ladder_entries(const IndexSet& src, const IndexSet& dst, int axis, bool raise) {
  if (src.n() != dst.n() || axis < 0 || axis >= src.n()) throw ContractViolation("ladder axis out of range");
  std::vector<LadderEntry> out;
  out.reserve(src.size());
  for (std::size_t col = 0; col < src.size(); ++col) {
    std::vector<int> beta = src[col].entries;
    int& b = beta[static_cast<std::size_t>(axis)];
    long w;
    if (raise) {
      w = b + 1;
      b += 1;
    } else {
      if (b == 0) continue;
      w = b;
      b -= 1;
    }
    if (auto row = dst.position(beta)) out.push_back({*row, col, w});
  }
  return out;
}

namespace {

Eigen::VectorXcd ladder_apply(const IndexSet& src, const IndexSet& dst, int axis, bool raise,
                              const Eigen::VectorXcd& c) {
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dst.size()));
  for (const auto& e : ladder_entries(src, dst, axis, raise))
    d[static_cast<Eigen::Index>(e.row)] += std::sqrt(static_cast<double>(e.weight)) * c[static_cast<Eigen::Index>(e.col)];
  return d;
}

}  // namespace

HermiteExpansion apply_ladder(const LadderMap& m, const HermiteExpansion& f) {
  if (f.cutoff() != m.source_cutoff) throw ContractViolation("expansion cutoff differs from the ladder source cutoff");
  if (m.axis < 0 || m.axis >= f.n()) throw ContractViolation("ladder axis out of range");
  if (m.target_cutoff < 0) throw ContractViolation("negative ladder target cutoff");
  auto dst = index_set(f.n(), m.target_cutoff);
  const auto& src = f.index();
  Eigen::VectorXcd out;
  const double r2 = std::sqrt(0.5);
  switch (m.kind) {
    case LadderKind::raise:
      out = ladder_apply(src, *dst, m.axis, true, f.coeffs());
      break;
    case LadderKind::lower:
      out = ladder_apply(src, *dst, m.axis, false, f.coeffs());
      break;
    case LadderKind::position:
      out = r2 * (ladder_apply(src, *dst, m.axis, true, f.coeffs()) + ladder_apply(src, *dst, m.axis, false, f.coeffs()));
      break;
    case LadderKind::derivative:
      out = r2 * (ladder_apply(src, *dst, m.axis, false, f.coeffs()) - ladder_apply(src, *dst, m.axis, true, f.coeffs()));
      break;
  }
  return HermiteExpansion(dst, out);
}

HermiteExpansion project_energy(const HermiteExpansion& f, int k, ProjectionMode mode) {
  if (k < 0) throw DomainError("energy level must be non-negative");
  Eigen::VectorXcd c = f.coeffs();
  for (std::size_t i = 0; i < f.size(); ++i) {
    int o = f.index().order_of(i);
    bool keep = mode == ProjectionMode::single ? o == k : o <= k;
    if (!keep) c[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return HermiteExpansion(f.index_ptr(), c);
}

HermiteExpansion fourier_unitary(const HermiteExpansion& f) {
  static const cplx phase[4] = {cplx(1, 0), cplx(0, -1), cplx(-1, 0), cplx(0, 1)};
  Eigen::VectorXcd c = f.coeffs();
  for (std::size_t i = 0; i < f.size(); ++i) c[static_cast<Eigen::Index>(i)] *= phase[f.index().order_of(i) % 4];
  return HermiteExpansion(f.index_ptr(), c);
}

}  // namespace hermite_obs
