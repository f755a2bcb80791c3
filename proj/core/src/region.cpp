#include "hermite_obs/region.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hermite_obs/estimates.hpp"
#include "hermite_obs/hermite_function.hpp"
#include "hermite_obs/primitive.hpp"
#include "hermite_obs/quadrature.hpp"

namespace hermite_obs {

double Box::volume() const {
  double v = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

double Box::overlap(const Box& o) const {
  double v = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    double w = std::min(hi[i], o.hi[i]) - std::max(lo[i], o.lo[i]);
    if (w <= 0) return 0;
    v *= w;
  }
  return v;
}

std::string generator_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::explicit_boxes: return "explicit";
    case GeneratorKind::periodic_thick: return "periodic_thick";
    case GeneratorKind::half_space: return "half_space";
    case GeneratorKind::ball_complement: return "ball_complement";
    case GeneratorKind::whole_space: return "whole_space";
    case GeneratorKind::custom: return "custom";
  }
  return "custom";
}

namespace {

GeneratorKind generator_from_name(const std::string& s) {
  for (auto k : {GeneratorKind::explicit_boxes, GeneratorKind::periodic_thick, GeneratorKind::half_space,
                 GeneratorKind::ball_complement, GeneratorKind::whole_space, GeneratorKind::custom})
    if (generator_name(k) == s) return k;
  throw DomainError("unknown region generator '" + s + "'");
}

// Sorted, with touching intervals fused.
std::vector<Box> merge_intervals(std::vector<Box> boxes) {
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a.lo[0] < b.lo[0]; });
  std::vector<Box> out;
  for (auto& b : boxes) {
    if (b.hi[0] <= b.lo[0]) continue;
    if (!out.empty() && b.lo[0] <= out.back().hi[0]) {
      out.back().hi[0] = std::max(out.back().hi[0], b.hi[0]);
    } else {
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace

Region::Region(int n, std::vector<Box> boxes, Generator gen, std::optional<double> truncation_radius)
    : n_(n), boxes_(std::move(boxes)), gen_(std::move(gen)), trunc_(truncation_radius) {
  if (n_ < 1) throw DomainError("region dimension must be positive");
  for (const auto& b : boxes_) {
    if (b.dim() != n_ || static_cast<int>(b.hi.size()) != n_) throw DomainError("box dimension mismatch");
    for (int i = 0; i < n_; ++i)
      if (!std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]) || b.hi[i] < b.lo[i])
        throw DomainError("box bounds must be finite and ordered");
  }
  if (n_ == 1) boxes_ = merge_intervals(boxes_);
  double smallest = INFINITY;
  for (const auto& b : boxes_) smallest = std::min(smallest, b.volume());
  for (std::size_t i = 0; i < boxes_.size(); ++i)
    for (std::size_t j = i + 1; j < boxes_.size(); ++j)
      if (boxes_[i].overlap(boxes_[j]) > 1e-12 * smallest) throw DomainError("region boxes overlap");
}

Region Region::make_periodic_thick(int n, double L, double gamma, double R) {
  if (!(gamma > 0 && gamma <= 1)) throw DomainError("thickness fraction gamma must lie in (0, 1]");
  if (!(L > 0)) throw DomainError("thickness scale L must be positive");
  if (!(R > 0)) throw DomainError("truncation radius must be positive");
  if (n < 1) throw DomainError("dimension must be positive");
  const double side = std::pow(gamma, 1.0 / n) * L;
  const int lo = static_cast<int>(std::floor(-R / L)) - 1, hi = static_cast<int>(std::ceil(R / L));
  std::vector<Box> boxes;
  std::vector<int> idx(static_cast<std::size_t>(n), lo);
  while (true) {
    double d2 = 0;
    Box b;
    for (int j = 0; j < n; ++j) {
      double a = idx[static_cast<std::size_t>(j)] * L, c = a + L;
      double dj = (a <= 0 && c >= 0) ? 0.0 : std::min(std::abs(a), std::abs(c));
      d2 += dj * dj;
      b.lo.push_back(a);
      b.hi.push_back(a + side);
    }
    if (d2 < R * R) boxes.push_back(std::move(b));
    int j = n - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] > hi) idx[static_cast<std::size_t>(j--)] = lo;
    if (j < 0) break;
  }
  Generator g;
  g.kind = GeneratorKind::periodic_thick;
  g.L = L;
  g.gamma = gamma;
  return Region(n, std::move(boxes), g, R);
}

Region Region::make_half_space(int n, int axis, double c, double R) {
  if (axis < 0 || axis >= n) throw DomainError("half-space axis out of range");
  if (!(R > 0)) throw DomainError("truncation radius must be positive");
  Box b;
  for (int j = 0; j < n; ++j) {
    b.lo.push_back(j == axis ? std::min(c, R) : -R);
    b.hi.push_back(R);
  }
  Generator g;
  g.kind = GeneratorKind::half_space;
  g.axis = axis;
  g.c = c;
  std::vector<Box> boxes;
  if (c < R) boxes.push_back(b);
  return Region(n, boxes, g, R);
}

Region Region::make_whole_space(int n, double R) {
  if (!(R > 0)) throw DomainError("truncation radius must be positive");
  Box b{std::vector<double>(static_cast<std::size_t>(n), -R), std::vector<double>(static_cast<std::size_t>(n), R)};
  Generator g;
  g.kind = GeneratorKind::whole_space;
  return Region(n, {b}, g, R);
}

Region Region::make_ball_complement(int n, double R0, double R) {
  if (n != 1) throw DomainError("ball complements are box-representable only in one dimension");
  if (!(R0 >= 0)) throw DomainError("inner radius must be non-negative");
  Generator g;
  g.kind = GeneratorKind::ball_complement;
  g.R0 = R0;
  std::vector<Box> boxes;
  if (R0 < R) {
    boxes.push_back(Box{{-R}, {-R0}});
    boxes.push_back(Box{{R0}, {R}});
  }
  return Region(1, boxes, g, R);
}

Region Region::make_cube(const std::vector<double>& center, double r) {
  if (!(r > 0)) throw DomainError("cube half-width must be positive");
  Box b;
  for (double c : center) {
    b.lo.push_back(c - r);
    b.hi.push_back(c + r);
  }
  return Region(static_cast<int>(center.size()), {b});
}

Region Region::make_empty(int n) { return Region(n, {}); }

double Region::measure() const {
  CompensatedSum<double> s;
  for (const auto& b : boxes_) s.add(b.volume());
  return s.value();
}

bool Region::contains(const std::vector<double>& x) const {
  for (const auto& b : boxes_) {
    bool in = true;
    for (int j = 0; j < n_ && in; ++j) in = x[static_cast<std::size_t>(j)] >= b.lo[j] && x[static_cast<std::size_t>(j)] <= b.hi[j];
    if (in) return true;
  }
  return false;
}

double Region::extent() const {
  double e = 0;
  for (const auto& b : boxes_)
    for (int j = 0; j < n_; ++j) e = std::max({e, std::abs(b.lo[j]), std::abs(b.hi[j])});
  return e;
}

nlohmann::json Region::to_json() const {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : boxes_) boxes.push_back({b.lo, b.hi});
  nlohmann::json gen = {{"kind", generator_name(gen_.kind)}};
  switch (gen_.kind) {
    case GeneratorKind::periodic_thick:
      gen["L"] = gen_.L;
      gen["gamma"] = gen_.gamma;
      gen["pattern"] = "corner";
      break;
    case GeneratorKind::half_space:
      gen["axis"] = gen_.axis;
      gen["c"] = gen_.c;
      break;
    case GeneratorKind::ball_complement:
      gen["R0"] = gen_.R0;
      break;
    case GeneratorKind::custom:
      gen["label"] = gen_.label;
      break;
    default:
      break;
  }
  nlohmann::json j = {{"n", n_}, {"generator", gen}, {"boxes", boxes}};
  if (trunc_) j["truncation_radius"] = *trunc_;
  return j;
}

Region Region::from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  std::vector<Box> boxes;
  for (const auto& b : j.at("boxes")) boxes.push_back(Box{b.at(0).get<std::vector<double>>(), b.at(1).get<std::vector<double>>()});
  Generator g;
  if (j.contains("generator")) {
    const auto& gj = j.at("generator");
    g.kind = generator_from_name(gj.is_string() ? gj.get<std::string>() : gj.at("kind").get<std::string>());
    if (gj.is_object()) {
      g.L = gj.value("L", 0.0);
      g.gamma = gj.value("gamma", 0.0);
      g.axis = gj.value("axis", 0);
      g.c = gj.value("c", 0.0);
      g.R0 = gj.value("R0", 0.0);
      g.label = gj.value("label", std::string());
    }
  }
  std::optional<double> R;
  if (j.contains("truncation_radius")) R = j.at("truncation_radius").get<double>();
  return Region(n, std::move(boxes), g, R);
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("region parameter '" + item + "' lacks '='");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double num(const std::map<std::string, std::string>& p, const std::string& key, std::optional<double> fallback = {}) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw DomainError("region parameter '" + key + "' is required");
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size()) throw DomainError("region parameter '" + key + "' is not a number");
  return v;
}

}  // namespace

Region parse_region_spec(const std::string& spec, int n, double R) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto p = parse_params(colon == std::string::npos ? std::string() : spec.substr(colon + 1));
  if (kind == "periodic") return Region::make_periodic_thick(n, num(p, "L", 1.0), num(p, "gamma"), R);
  if (kind == "halfline") {
    if (n != 1) throw DomainError("halfline needs n = 1; use halfspace");
    return Region::make_half_space(1, 0, num(p, "c", 0.0), R);
  }
  if (kind == "halfspace") return Region::make_half_space(n, static_cast<int>(num(p, "axis", 0.0)), num(p, "c", 0.0), R);
  if (kind == "whole") return Region::make_whole_space(n, R);
  if (kind == "ball_complement") return Region::make_ball_complement(n, num(p, "R0"), R);
  if (kind == "interval") {
    if (n != 1) throw DomainError("interval needs n = 1");
    double a = num(p, "a"), b = num(p, "b");
    if (!(b > a)) throw DomainError("interval needs a < b");
    return Region(1, {Box{{a}, {b}}});
  }
  if (kind == "cube") return Region::make_cube(std::vector<double>(static_cast<std::size_t>(n), num(p, "x0", 0.0)), num(p, "r"));
  if (kind == "empty") return Region::make_empty(n);
  throw DomainError("unknown region shorthand '" + kind + "'");
}

double thickness_check(const Region& omega, double L, int m) {
  if (!(L > 0) || m < 1) throw DomainError("thickness check needs L > 0 and m >= 1");
  const int n = omega.n();
  const double pitch = L / m;
  const double R = omega.truncation_radius() ? *omega.truncation_radius() : omega.extent() + L;
  const int lo = static_cast<int>(std::floor(-R / pitch)) - 1, hi = static_cast<int>(std::ceil(R / pitch));
  const double cube_vol = std::pow(L, n);
  double worst = INFINITY;
  std::vector<int> idx(static_cast<std::size_t>(n), lo);
  while (true) {
    Box c;
    double far2 = 0, maxabs = 0;
    for (int j = 0; j < n; ++j) {
      double a = idx[static_cast<std::size_t>(j)] * pitch;
      c.lo.push_back(a);
      c.hi.push_back(a + L);
      double f = std::max(std::abs(a), std::abs(a + L));
      far2 += f * f;
      maxabs = std::max(maxabs, f);
    }
    bool admissible = omega.truncation_radius() ? far2 <= R * R * (1 + 1e-12) : maxabs <= R;
    if (admissible) {
      CompensatedSum<double> s;
      for (const auto& b : omega.boxes()) s.add(b.overlap(c));
      worst = std::min(worst, s.value() / cube_vol);
    }
    int j = n - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] > hi) idx[static_cast<std::size_t>(j--)] = lo;
    if (j < 0) break;
  }
  if (!std::isfinite(worst)) throw DomainError("no lattice cube of side L fits inside the truncation ball");
  return worst;
}

namespace {

// ∫ sqrt(R^2 - x^2) dx.
double half_disk_primitive(double x, double R) {
  x = std::clamp(x, -R, R);
  return 0.5 * (x * std::sqrt(std::max(0.0, R * R - x * x)) + R * R * std::asin(x / R));
}

double rect_disk_area(double x0, double x1, double y0, double y1, double R) {
  double a = std::max(x0, -R), b = std::min(x1, R);
  if (!(b > a) || !(y1 > y0)) return 0;
  std::vector<double> cuts = {a, b};
  for (double y : {y0, y1})
    if (std::abs(y) < R) {
      double s = std::sqrt(R * R - y * y);
      for (double c : {-s, s})
        if (c > a && c < b) cuts.push_back(c);
    }
  std::sort(cuts.begin(), cuts.end());
  CompensatedSum<double> area;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double p = cuts[i], q = cuts[i + 1];
    if (!(q > p)) continue;
    double mid = 0.5 * (p + q), s = std::sqrt(std::max(0.0, R * R - mid * mid));
    bool top_is_y1 = y1 < s, bot_is_y0 = y0 > -s;
    double top = top_is_y1 ? y1 : s, bot = bot_is_y0 ? y0 : -s;
    if (top <= bot) continue;
    double S = half_disk_primitive(q, R) - half_disk_primitive(p, R);
    double up = top_is_y1 ? y1 * (q - p) : S;
    double down = bot_is_y0 ? y0 * (q - p) : -S;
    area.add(up - down);
  }
  return area.value();
}

double box_ball_volume(const Box& b, double R) {
  switch (b.dim()) {
    case 1:
      return std::max(0.0, std::min(b.hi[0], R) - std::max(b.lo[0], -R));
    case 2:
      return rect_disk_area(b.lo[0], b.hi[0], b.lo[1], b.hi[1], R);
    case 3: {
      double z0 = std::max(b.lo[2], -R), z1 = std::min(b.hi[2], R);
      if (!(z1 > z0)) return 0;
      auto slice = [&](double z) {
        return rect_disk_area(b.lo[0], b.hi[0], b.lo[1], b.hi[1], std::sqrt(std::max(0.0, R * R - z * z)));
      };
      return adaptive_gauss_legendre(slice, z0, z1, 1e-13 * R * R * R, 12).value;
    }
    default:
      throw DomainError("exact density ratio is implemented for n <= 3");
  }
}

double ball_volume(int n, double R) { return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1) * std::pow(R, n); }

}  // namespace

double density_ratio(const Region& omega, double R) {
  if (!(R > 0)) throw DomainError("density radius must be positive");
  if (omega.truncation_radius() && R > *omega.truncation_radius() * (1 + 1e-12))
    throw DomainError("density radius exceeds the truncation radius");
  CompensatedSum<double> s;
  for (const auto& b : omega.boxes()) s.add(box_ball_volume(b, R));
  return s.value() / ball_volume(omega.n(), R);
}

namespace {

void bracket_cell(const Box& cell, double R, int depth, double& lower, double& upper) {
  const int n = cell.dim();
  double near2 = 0, far2 = 0;
  for (int j = 0; j < n; ++j) {
    double a = cell.lo[j], b = cell.hi[j];
    double nj = (a <= 0 && b >= 0) ? 0.0 : std::min(std::abs(a), std::abs(b));
    double fj = std::max(std::abs(a), std::abs(b));
    near2 += nj * nj;
    far2 += fj * fj;
  }
  if (near2 >= R * R) return;
  double v = cell.volume();
  if (far2 <= R * R) {
    lower += v;
    upper += v;
    return;
  }
  if (depth == 0) {
    upper += v;
    return;
  }
  for (int mask = 0; mask < (1 << n); ++mask) {
    Box child = cell;
    for (int j = 0; j < n; ++j) {
      double mid = 0.5 * (cell.lo[j] + cell.hi[j]);
      if (mask & (1 << j))
        child.lo[j] = mid;
      else
        child.hi[j] = mid;
    }
    bracket_cell(child, R, depth - 1, lower, upper);
  }
}

}  // namespace

DensityBracket density_bracket(const Region& omega, double R, double tol, int max_depth) {
  const double vol = ball_volume(omega.n(), R);
  DensityBracket out{0, 1, 0};
  for (int d = 2; d <= max_depth; ++d) {
    double lo = 0, up = 0;
    for (const auto& b : omega.boxes()) {
      Box clipped = b;
      bool empty = false;
      for (int j = 0; j < b.dim(); ++j) {
        clipped.lo[j] = std::max(b.lo[j], -R);
        clipped.hi[j] = std::min(b.hi[j], R);
        empty = empty || clipped.hi[j] <= clipped.lo[j];
      }
      if (!empty) bracket_cell(clipped, R, d, lo, up);
    }
    out = {lo / vol, up / vol, d};
    if (out.upper - out.lower <= tol) break;
  }
  return out;
}

std::string method_name(QuadratureMethod m) {
  switch (m) {
    case QuadratureMethod::wronskian_exact: return "wronskian_exact";
    case QuadratureMethod::primitive_recurrence: return "primitive_recurrence";
    case QuadratureMethod::panel_gl: return "panel_gl";
  }
  return "";
}

double hermite_tail_mass(int k, double a) {
  a = std::abs(a);
  const auto v = hermite_values<double>(k, a);
  CompensatedSum<double> s;
  s.add(0.5 * std::erfc(a));
  for (int m = 1; m <= k; ++m) s.add(v[static_cast<std::size_t>(m)] * v[static_cast<std::size_t>(m - 1)] / std::sqrt(2.0 * m));
  return 2 * std::max(0.0, s.value());
}

namespace {

void require_1d(const Region& omega) {
  if (omega.n() != 1) throw ContractViolation("integrate_pair needs a one-dimensional region");
}

double truncation_error(const Region& omega, int j, int k) {
  if (!omega.truncation_radius()) return 0;
  double R = *omega.truncation_radius();
  return std::sqrt(hermite_tail_mass(j, R) * hermite_tail_mass(k, R));
}

}  // namespace

QuadratureAccount integrate_pair(const Region& omega, int j, int k) {
  require_1d(omega);
  if (j < 0 || k < 0) throw DomainError("Hermite degrees must be non-negative");
  const double eps = std::numeric_limits<double>::epsilon();
  if (j != k) {
    const int K = std::max(j, k) + 1;
    CompensatedSum<double> s;
    double scale = 0;
    for (const auto& b : omega.boxes()) {
      for (int side = 0; side < 2; ++side) {
        double x = side ? b.hi[0] : b.lo[0];
        auto v = hermite_values<double>(K, x);
        double a1 = v[static_cast<std::size_t>(j)] * hermite_derivative(v, k);
        double a2 = hermite_derivative(v, j) * v[static_cast<std::size_t>(k)];
        double w = (a1 - a2) / (2.0 * (j - k));
        s.add(side ? w : -w);
        scale += (std::abs(a1) + std::abs(a2)) / (2.0 * std::abs(j - k));
      }
    }
    double err = 8 * eps * scale + truncation_error(omega, j, k);
    return {s.value(), err, QuadratureMethod::wronskian_exact};
  }
  const double tol = 1e-13 / std::max<std::size_t>(1, omega.boxes().size());
  CompensatedSum<double> s;
  double err = 0;
  int panels = 0, order = 20;
  for (const auto& b : omega.boxes()) {
    auto r = adaptive_gauss_legendre(
        [k](double x) {
          double p = eval_hermite_1d(k, x);
          return p * p;
        },
        b.lo[0], b.hi[0], tol, order);
    s.add(r.value);
    err += r.abs_error + 4 * eps * std::abs(r.value);
    panels += r.panels;
  }
  return {s.value(), err + truncation_error(omega, j, k), QuadratureMethod::panel_gl, order, panels};
}

QuadratureAccount integrate_pair_primitive(const Region& omega, int j, int k) {
  require_1d(omega);
  if (j < 0 || k < 0) throw DomainError("Hermite degrees must be non-negative");
  const int K = std::max(j, k);
  CompensatedSum<double> s;
  for (const auto& b : omega.boxes()) {
    Mat<double> Pa = hermite_primitive<double>(K, b.lo[0]);
    Mat<double> Pb = hermite_primitive<double>(K, b.hi[0]);
    s.add(Pb(j, k) - Pa(j, k));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  double err = 8 * eps * (K + 2) * static_cast<double>(2 * omega.boxes().size()) + truncation_error(omega, j, k);
  return {s.value(), err, j == k ? QuadratureMethod::primitive_recurrence : QuadratureMethod::wronskian_exact};
}

double truncate_radius(int N, int n, double safety) {
  if (N < 0) throw DomainError("cutoff must be non-negative");
  if (!(safety >= 1)) throw DomainError("safety factor must be at least 1");
  return safety * tail_constant_cn(n).c_n * std::sqrt(N + 1.0);
}

}  // namespace hermite_obs
