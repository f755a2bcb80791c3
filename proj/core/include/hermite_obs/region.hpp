#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermite_obs/numeric.hpp"

namespace hermite_obs {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  // Volume of the intersection with another box (0 when disjoint).
  double overlap(const Box& other) const;
};

enum class GeneratorKind { explicit_boxes, periodic_thick, half_space, ball_complement, whole_space, custom };

struct Generator {
  GeneratorKind kind = GeneratorKind::explicit_boxes;
  double L = 0;       // periodic_thick scale
  double gamma = 0;   // periodic_thick fraction
  int axis = 0;       // half_space: {x_axis > c}
  double c = 0;
  double R0 = 0;      // ball_complement inner radius
  std::string label;  // custom
};

std::string generator_name(GeneratorKind k);

// omega as a finite union of pairwise disjoint boxes.  Unbounded generators
// are cut at `truncation_radius`: the stored boxes contain omega ∩ B(0, R)
// and everything they miss lies outside B(0, R).  Bounded regions carry no
// truncation radius.
class Region {
 public:
  Region(int n, std::vector<Box> boxes, Generator gen = {}, std::optional<double> truncation_radius = std::nullopt);

  static Region make_periodic_thick(int n, double L, double gamma, double R_trunc);
  static Region make_half_space(int n, int axis, double c, double R_trunc);
  static Region make_whole_space(int n, double R_trunc);
  static Region make_ball_complement(int n, double R0, double R_trunc);
  static Region make_cube(const std::vector<double>& center, double r);
  static Region make_empty(int n);

  int n() const { return n_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  const Generator& generator() const { return gen_; }
  std::optional<double> truncation_radius() const { return trunc_; }
  bool bounded() const { return !trunc_.has_value(); }
  double measure() const;
  bool contains(const std::vector<double>& x) const;
  // Smallest cube [-R, R]^n holding every box.
  double extent() const;

  nlohmann::json to_json() const;
  static Region from_json(const nlohmann::json& j);

 private:
  int n_;
  std::vector<Box> boxes_;
  Generator gen_;
  std::optional<double> trunc_;
};

// Shorthand generator strings, e.g. "periodic:L=1,gamma=0.5", "halfline",
// "halfspace:axis=0,c=0", "whole", "ball_complement:R0=2", "interval:a=-1,b=1",
// "cube:r=1,x0=0".  Unbounded shapes are truncated at R_trunc.
Region parse_region_spec(const std::string& spec, int n, double R_trunc);

// Minimum over translates x on the pitch-L/m lattice, restricted to cubes
// x + [0, L]^n inside the truncation ball (or a neighbourhood of a bounded
// region), of |omega ∩ (x + [0, L]^n)| / L^n.
double thickness_check(const Region& omega, double L, int m);

// |omega ∩ B(0, R)| / |B(0, R)|: exact interval arithmetic in 1D, exact
// rectangle-disk areas in 2D, exact slices integrated adaptively in 3D.
double density_ratio(const Region& omega, double R);

// Certified bracket of the same ratio by dyadic subdivision (n >= 2).
struct DensityBracket {
  double lower;
  double upper;
  int depth;
};
DensityBracket density_bracket(const Region& omega, double R, double tol, int max_depth = 12);

enum class QuadratureMethod { wronskian_exact, primitive_recurrence, panel_gl };
std::string method_name(QuadratureMethod m);

struct QuadratureAccount {
  double value;
  double abs_error_bound;
  QuadratureMethod method;
  int order = 0;
  int panels = 0;
};

// ∫_omega phi_j phi_k for one-dimensional omega.  j != k uses the Wronskian
// identity per interval; j == k uses adaptive Gauss-Legendre panels.  The
// error bound includes the mass omega loses to truncation.
QuadratureAccount integrate_pair(const Region& omega, int j, int k);

// Same integral with the diagonal routed through the closed-form primitive
//   ∫ phi_k^2 = erf(x)/2 - sum_{m=1}^k phi_m phi_{m-1} / sqrt(2m).
QuadratureAccount integrate_pair_primitive(const Region& omega, int j, int k);

// safety * c_n * sqrt(N+1).
double truncate_radius(int N, int n, double safety);

// ∫_{|x| >= a} phi_k^2, summed in the cancellation-free form valid past the
// turning point.
double hermite_tail_mass(int k, double a);

}  // namespace hermite_obs
