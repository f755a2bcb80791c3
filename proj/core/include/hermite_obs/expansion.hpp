#pragma once

#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermite_obs/multi_index.hpp"
#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

// f = sum_alpha c_alpha Phi_alpha in E_N, coefficients in graded order.
class HermiteExpansion {
 public:
  HermiteExpansion(int n, int N);
  HermiteExpansion(std::shared_ptr<const IndexSet> index, Eigen::VectorXcd coeffs);

  static HermiteExpansion basis(int N, const MultiIndex& alpha);

  int n() const { return index_->n(); }
  int cutoff() const { return index_->cutoff(); }
  std::size_t size() const { return index_->size(); }
  const IndexSet& index() const { return *index_; }
  std::shared_ptr<const IndexSet> index_ptr() const { return index_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  cplx coeff(const MultiIndex& alpha) const;

  cplx eval(std::span<const double> x) const;
  double norm() const { return coeffs_.norm(); }
  cplx inner(const HermiteExpansion& g) const;  // <f, g>, conjugate-linear in f

  // Truncates (N' < N) or zero-extends (N' > N).
  HermiteExpansion with_cutoff(int new_cutoff) const;

  HermiteExpansion operator+(const HermiteExpansion& g) const;
  HermiteExpansion operator-(const HermiteExpansion& g) const;
  HermiteExpansion operator*(cplx s) const;

  nlohmann::json to_json() const;
  static HermiteExpansion from_json(const nlohmann::json& j);

 private:
  std::shared_ptr<const IndexSet> index_;
  Eigen::VectorXcd coeffs_;
};

enum class LadderKind { raise, lower, position, derivative };

struct LadderMap {
  LadderKind kind;
  int axis;
  int source_cutoff;
  int target_cutoff;

  // Default target: N+1 for raise/position/derivative, N for lower.
  static LadderMap make(LadderKind kind, int axis, int source_cutoff);
};

HermiteExpansion apply_ladder(const LadderMap& m, const HermiteExpansion& f);

// Sparse entries of a_{axis,+} (raise) or a_{axis,-} from E_src into E_dst:
// value = sqrt(weight), kept exact so any precision can rebuild the matrix.
struct LadderEntry {
  std::size_t row;
  std::size_t col;
  long weight;
};
std::vector<LadderEntry> ladder_entries(const IndexSet& src, const IndexSet& dst, int axis, bool raise);

template <class R>
Mat<R> ladder_matrix(const IndexSet& src, const IndexSet& dst, int axis, bool raise) {
  Mat<R> m = Mat<R>::Zero(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  for (const auto& e : ladder_entries(src, dst, axis, raise))
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = sqrt_r(R(e.weight));
  return m;
}

enum class ProjectionMode { single, cumulative };

HermiteExpansion project_energy(const HermiteExpansion& f, int k, ProjectionMode mode);

// Unitary Hermite-Fourier image: coefficient c_alpha -> (-i)^{|alpha|} c_alpha.
HermiteExpansion fourier_unitary(const HermiteExpansion& f);

}  // namespace hermite_obs
