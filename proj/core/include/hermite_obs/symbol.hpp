#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

// q(X) = X^T Q X with X = (x, ξ), positions first.
struct QuadraticSymbol {
  int n = 1;
  Eigen::MatrixXcd Q;
  std::string name;

  QuadraticSymbol() = default;
  QuadraticSymbol(int n, Eigen::MatrixXcd Q, std::string name = "custom");

  static QuadraticSymbol harmonic(int n);           // |x|^2 + |ξ|^2
  static QuadraticSymbol free_laplacian(int n);     // |ξ|^2
  // η^2 + v^2/4 + i(vξ - a x η) on (x, v; ξ, η).
  static QuadraticSymbol kramers_fokker_planck(double a);

  void validate() const;
  bool accretive(double tol = 1e-12) const;  // Re Q positive semidefinite
  bool is_real() const { return Q.imag().isZero(0.0); }
  cplx eval(const Eigen::VectorXcd& X) const { return (X.transpose() * Q * X).value(); }
  cplx polarized(const Eigen::VectorXcd& X, const Eigen::VectorXcd& Y) const { return (X.transpose() * Q * Y).value(); }
  QuadraticSymbol operator+(const QuadraticSymbol& o) const;
  QuadraticSymbol scaled(double c) const;
  QuadraticSymbol conjugate() const;

  nlohmann::json to_json() const;
  static QuadraticSymbol from_json(const nlohmann::json& j);
};

// "harmonic", "free", "kfp:a=1" (n is taken from the symbol for kfp).
QuadraticSymbol parse_symbol_spec(const std::string& spec, int n);

// σ((x,ξ),(y,η)) = ξ·y - x·η.
cplx symplectic_form(const Eigen::VectorXcd& X, const Eigen::VectorXcd& Y);

struct HamiltonMap {
  Eigen::MatrixXcd F;
  Eigen::MatrixXd re() const { return F.real(); }
  Eigen::MatrixXd im() const { return F.imag(); }
  // max |σ(e_i, F e_j) - q(e_i, e_j)| over canonical pairs.
  double identity_defect(const QuadraticSymbol& q) const;
};

// F = [[Q_ξx, Q_ξξ], [-Q_xx, -Q_xξ]], the unique map with q(X,Y) = σ(X, FY).
HamiltonMap hamilton_map(const QuadraticSymbol& q);

struct SingularSpace {
  Eigen::MatrixXd basis;  // orthonormal columns spanning S
  int k0 = -1;            // -1: the intersection never becomes trivial
  double tol = 1e-10;
  bool tolerance_sensitive = false;
  // Answers at tol/10 and 10 tol, reported when the decision is sensitive.
  int k0_tight = -1, k0_loose = -1;
  int dim_tight = 0, dim_loose = 0;

  int dim() const { return static_cast<int>(basis.cols()); }
};

// Kernels of [Re F; Re F Im F; ...; Re F (Im F)^j] by SVD with rank
// threshold tol · ||stack||.
SingularSpace singular_space(const HamiltonMap& H, double tol = 1e-10);

struct ExactSingularSpace {
  int k0 = -1;
  int dim = 0;
  std::vector<int> kernel_dims;  // dimension of the running intersection per j
};

// Same computation in exact rational arithmetic; every double is a dyadic
// rational, so this is exact for the stored F.
ExactSingularSpace singular_space_exact(const HamiltonMap& H);

}  // namespace hermite_obs
