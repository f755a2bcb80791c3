#include "hermite_obs/symbol.hpp"

#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace hermite_obs {

QuadraticSymbol::QuadraticSymbol(int n_, Eigen::MatrixXcd Q_, std::string name_)
    : n(n_), Q(std::move(Q_)), name(std::move(name_)) {
  validate();
}

void QuadraticSymbol::validate() const {
  if (n < 1) throw DomainError("symbol dimension must be positive");
  if (Q.rows() != 2 * n || Q.cols() != 2 * n) throw DomainError("symbol matrix must be 2n x 2n");
  if ((Q - Q.transpose()).norm() > 1e-14 * std::max(1.0, Q.norm())) throw DomainError("symbol matrix must be symmetric");
}

QuadraticSymbol QuadraticSymbol::harmonic(int n) {
  return QuadraticSymbol(n, Eigen::MatrixXcd::Identity(2 * n, 2 * n), "harmonic");
}

QuadraticSymbol QuadraticSymbol::free_laplacian(int n) {
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  Q.bottomRightCorner(n, n).setIdentity();
  return QuadraticSymbol(n, Q, "free");
}

QuadraticSymbol QuadraticSymbol::kramers_fokker_planck(double a) {
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(4, 4);
  Q(3, 3) = 1.0;
  Q(1, 1) = 0.25;
  Q(1, 2) = Q(2, 1) = cplx(0, 0.5);
  Q(0, 3) = Q(3, 0) = cplx(0, -0.5 * a);
  std::ostringstream os;
  os << "kfp:a=" << a;
  return QuadraticSymbol(2, Q, os.str());
}

bool QuadraticSymbol::accretive(double tol) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.real(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

QuadraticSymbol QuadraticSymbol::operator+(const QuadraticSymbol& o) const {
  if (o.n != n) throw ContractViolation("symbol dimensions differ");
  return QuadraticSymbol(n, Q + o.Q, name + "+" + o.name);
}

QuadraticSymbol QuadraticSymbol::scaled(double c) const { return QuadraticSymbol(n, c * Q, name); }

QuadraticSymbol QuadraticSymbol::conjugate() const { return QuadraticSymbol(n, Q.conjugate(), "conj(" + name + ")"); }

nlohmann::json QuadraticSymbol::to_json() const {
  auto rows = [](const Eigen::MatrixXd& M) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      std::vector<double> r(static_cast<std::size_t>(M.cols()));
      for (Eigen::Index j = 0; j < M.cols(); ++j) r[static_cast<std::size_t>(j)] = M(i, j);
      out.push_back(r);
    }
    return out;
  };
  return {{"n", n}, {"name", name}, {"Q_re", rows(Q.real())}, {"Q_im", rows(Q.imag())}};
}

QuadraticSymbol QuadraticSymbol::from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  auto fill = [&](const char* key, bool imag) {
    if (!j.contains(key)) return;
    const auto& m = j.at(key);
    if (m.size() != static_cast<std::size_t>(2 * n)) throw DomainError(std::string(key) + " must have 2n rows");
    for (int r = 0; r < 2 * n; ++r) {
      if (m[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(2 * n))
        throw DomainError(std::string(key) + " must have 2n columns");
      for (int c = 0; c < 2 * n; ++c) {
        double v = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
        Q(r, c) += imag ? cplx(0, v) : cplx(v, 0);
      }
    }
  };
  fill("Q_re", false);
  fill("Q_im", true);
  return QuadraticSymbol(n, Q, j.value("name", std::string("custom")));
}

QuadraticSymbol parse_symbol_spec(const std::string& spec, int n) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  if (kind == "harmonic") return QuadraticSymbol::harmonic(n);
  if (kind == "free") return QuadraticSymbol::free_laplacian(n);
  if (kind == "kfp") {
    double a = 1.0;
    if (colon != std::string::npos) {
      std::string rest = spec.substr(colon + 1);
      if (rest.rfind("a=", 0) != 0) throw DomainError("kfp symbol expects kfp:a=<real>");
      std::size_t used = 0;
      try {
        a = std::stod(rest.substr(2), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != rest.size() - 2) throw DomainError("kfp parameter a is not a number");
    }
    return QuadraticSymbol::kramers_fokker_planck(a);
  }
  throw DomainError("unknown symbol '" + spec + "'");
}

cplx symplectic_form(const Eigen::VectorXcd& X, const Eigen::VectorXcd& Y) {
  const auto n = X.size() / 2;
  return X.tail(n).cwiseProduct(Y.head(n)).sum() - X.head(n).cwiseProduct(Y.tail(n)).sum();
}

HamiltonMap hamilton_map(const QuadraticSymbol& q) {
  q.validate();
  const int n = q.n;
  Eigen::MatrixXcd F(2 * n, 2 * n);
  F.topLeftCorner(n, n) = q.Q.bottomLeftCorner(n, n);
  F.topRightCorner(n, n) = q.Q.bottomRightCorner(n, n);
  F.bottomLeftCorner(n, n) = -q.Q.topLeftCorner(n, n);
  F.bottomRightCorner(n, n) = -q.Q.topRightCorner(n, n);
  return {F};
}

double HamiltonMap::identity_defect(const QuadraticSymbol& q) const {
  const auto m = F.rows();
  double worst = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXcd X = Eigen::VectorXcd::Unit(m, i), Y = Eigen::VectorXcd::Unit(m, j);
      worst = std::max(worst, std::abs(symplectic_form(X, F * Y) - q.polarized(X, Y)));
    }
  return worst;
}

namespace {

struct KernelPass {
  std::vector<int> dims;  // kernel dimension after stacking j = 0..2n-1
  Eigen::MatrixXd kernel;
  bool sensitive = false;
};

KernelPass kernel_pass(const Eigen::MatrixXd& ReF, const Eigen::MatrixXd& ImF, double tol) {
  const auto m = ReF.rows();
  KernelPass out;
  Eigen::MatrixXd stack(0, m);
  Eigen::MatrixXd block = ReF;
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::MatrixXd next(stack.rows() + m, m);
    next << stack, block;
    stack = next;
    block = block * ImF;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double scale = s.size() ? s(0) : 0.0;
    const double thr = tol * std::max(scale, 1e-300);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > thr) ++rank;
      if (s(i) > thr / 10 && s(i) <= thr * 10 && scale > 0) out.sensitive = true;
    }
    if (scale == 0) rank = 0;
    out.dims.push_back(static_cast<int>(m) - rank);
    if (j == m - 1) out.kernel = svd.matrixV().rightCols(m - rank);
  }
  return out;
}

int first_trivial(const std::vector<int>& dims) {
  for (std::size_t j = 0; j < dims.size(); ++j)
    if (dims[j] == 0) return static_cast<int>(j);
  return -1;
}

}  // namespace

SingularSpace singular_space(const HamiltonMap& H, double tol) {
  if (!(tol > 0)) throw DomainError("rank tolerance must be positive");
  const Eigen::MatrixXd ReF = H.re(), ImF = H.im();
  auto main = kernel_pass(ReF, ImF, tol);
  SingularSpace S;
  S.tol = tol;
  S.basis = main.kernel;
  S.k0 = first_trivial(main.dims);
  S.tolerance_sensitive = main.sensitive;
  auto tight = kernel_pass(ReF, ImF, tol / 10), loose = kernel_pass(ReF, ImF, tol * 10);
  S.k0_tight = first_trivial(tight.dims);
  S.k0_loose = first_trivial(loose.dims);
  S.dim_tight = static_cast<int>(tight.kernel.cols());
  S.dim_loose = static_cast<int>(loose.kernel.cols());
  if (S.k0_tight != S.k0_loose || S.dim_tight != S.dim_loose) S.tolerance_sensitive = true;
  return S;
}

namespace {

using rational = boost::multiprecision::cpp_rational;
using RMat = std::vector<std::vector<rational>>;

RMat to_rational(const Eigen::MatrixXd& M) {
  RMat out(static_cast<std::size_t>(M.rows()), std::vector<rational>(static_cast<std::size_t>(M.cols())));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rational(M(i, j));
  return out;
}

RMat multiply(const RMat& A, const RMat& B) {
  const std::size_t r = A.size(), k = B.size(), c = B.empty() ? 0 : B[0].size();
  RMat C(r, std::vector<rational>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (std::size_t j = 0; j < c; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

std::size_t rank_exact(RMat M) {
  if (M.empty()) return 0;
  const std::size_t rows = M.size(), cols = M[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (M[r][c] == 0) continue;
      rational f = M[r][c] / M[rank][c];
      for (std::size_t j = c; j < cols; ++j) M[r][j] -= f * M[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

ExactSingularSpace singular_space_exact(const HamiltonMap& H) {
  const RMat ReF = to_rational(H.re()), ImF = to_rational(H.im());
  const std::size_t m = ReF.size();
  ExactSingularSpace out;
  RMat stack, block = ReF;
  for (std::size_t j = 0; j < m; ++j) {
    stack.insert(stack.end(), block.begin(), block.end());
    block = multiply(block, ImF);
    out.kernel_dims.push_back(static_cast<int>(m - rank_exact(stack)));
  }
  out.k0 = first_trivial(out.kernel_dims);
  out.dim = out.kernel_dims.back();
  return out;
}

}  // namespace hermite_obs
