#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include <hermite_obs/bounds.hpp>
#include <hermite_obs/chebyshev.hpp>
#include <hermite_obs/control.hpp>
#include <hermite_obs/estimates.hpp>
#include <hermite_obs/expansion.hpp>
#include <hermite_obs/galerkin.hpp>
#include <hermite_obs/gram.hpp>
#include <hermite_obs/hermite_function.hpp>
#include <hermite_obs/multi_index.hpp>
#include <hermite_obs/numeric.hpp>
#include <hermite_obs/quadrature.hpp>
#include <hermite_obs/region.hpp>
#include <hermite_obs/scaling.hpp>
#include <hermite_obs/symbol.hpp>
#include <hermite_obs/verify.hpp>

#include "cli_support.hpp"

namespace ho = hermite_obs;
using nlohmann::json;
using namespace hermite_obs::cli;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Settings {
  int n = 1;
  std::string N = "8";
  std::string region = "whole";
  std::string symbol = "harmonic";
  double safety = 2.0;
  unsigned start_bits = 53;
  unsigned precision_bits = ho::default_precision_bits();
  unsigned max_bits = 4096;
  std::uint64_t seed = 1;
  std::string out, csv, plot_data;
  bool mkdirs = false;
  double C_sobolev = 10, C_kov = 300, c_n = 0;

  std::string x;
  std::string variant;
  std::string x0 = "0";
  double r = 1, delta = 0.5, R0 = 1, L = 1, gamma = 0.5;
  std::string kind = "real";
  int d = 3;
  double t = 0.5, rho = 1, E = 1, M = 2;
  std::string beta = "1";
  int trials = 100;
  bool weighted = false;
  int k = 0;
  double a = -1;
  double tol = 1e-10;
  bool exact = false;
  std::string times = "0.5";
  std::string f0 = "random";
  std::string k_list;
  double C0 = 1;
  bool convergence = false;
  std::string T = "1";
  int panels = 4;
  int k0 = -2;
  std::string method = "hum";
  double K0 = 2, target = 1e-6;
  int max_stages = 32;
  std::string suite = "all";
  double trial_scale = 1.0;
};

struct Outcome {
  json result = json::object();
  std::optional<CsvTable> table;
  std::optional<CsvTable> plot;
  std::string summary;
  int exit = kOk;
};

class Flags {
 public:
  explicit Flags(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& ref, const std::string& help) {
    getters_[name] = [&ref] { return json(ref); };
    return app_->add_option("--" + name, ref, help)->capture_default_str();
  }
  CLI::Option* flag(const std::string& name, bool& ref, const std::string& help) {
    getters_[name] = [&ref] { return json(ref); };
    return app_->add_flag("--" + name, ref, help);
  }
  json resolved() const {
    json j = json::object();
    for (const auto& [k, g] : getters_) j[k] = g();
    return j;
  }

 private:
  CLI::App* app_;
  std::map<std::string, std::function<json()>> getters_;
};

struct Command {
  CLI::App* app;
  std::unique_ptr<Flags> flags;
  std::function<Outcome(const Settings&)> run;
};

std::string join_index(const ho::MultiIndex& a) {
  std::string s;
  for (int j = 0; j < a.dim(); ++j) s += (j ? ";" : "") + std::to_string(a[j]);
  return s;
}

ho::MultiIndex parse_multi_index(const std::string& s, int n) {
  auto v = parse_int_list(s);
  if (static_cast<int>(v.size()) != n) throw ConfigError("multi-index '" + s + "' needs " + std::to_string(n) + " entries");
  for (int e : v)
    if (e < 0) throw ConfigError("multi-index entries must be non-negative");
  return ho::MultiIndex(v);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

ho::QuadraticSymbol make_symbol(const Settings& s) {
  if (!s.symbol.empty() && s.symbol[0] == '@') return ho::QuadraticSymbol::from_json(load_json_file(s.symbol.substr(1)));
  return ho::parse_symbol_spec(s.symbol, s.n);
}

std::shared_ptr<const ho::Region> make_region(const Settings& s, int n, int N_max) {
  if (!s.region.empty() && s.region[0] == '@') {
    auto r = ho::Region::from_json(load_json_file(s.region.substr(1)));
    if (r.n() != n) throw ConfigError("region file has dimension " + std::to_string(r.n()) + ", expected " + std::to_string(n));
    return std::make_shared<const ho::Region>(std::move(r));
  }
  return std::make_shared<const ho::Region>(ho::parse_region_spec(s.region, n, ho::truncate_radius(N_max, n, s.safety)));
}

int single_N(const Settings& s) {
  auto v = parse_int_list(s.N);
  if (v.size() != 1) throw ConfigError("this subcommand takes a single --N");
  if (v[0] < 0) throw ConfigError("--N must be non-negative");
  return v[0];
}

std::vector<int> N_list(const Settings& s) {
  auto v = parse_int_list(s.N);
  for (int N : v)
    if (N < 0) throw ConfigError("--N entries must be non-negative");
  return v;
}

ho::HermiteExpansion random_expansion(int n, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ho::HermiteExpansion f(n, N);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(f.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = ho::cplx(g(rng), g(rng));
  c /= c.norm();
  return ho::HermiteExpansion(f.index_ptr(), c);
}

ho::HermiteExpansion make_f0(const Settings& s, int n, int N) {
  if (s.f0 == "random") {
    std::mt19937_64 rng(s.seed);
    return random_expansion(n, N, rng);
  }
  if (s.f0.rfind("basis:", 0) == 0) return ho::HermiteExpansion::basis(N, parse_multi_index(s.f0.substr(6), n));
  if (!s.f0.empty() && s.f0[0] == '@') {
    auto f = ho::HermiteExpansion::from_json(load_json_file(s.f0.substr(1)));
    if (f.n() != n) throw ConfigError("initial datum has the wrong dimension");
    return f.with_cutoff(N);
  }
  throw ConfigError("--f0 must be 'random', 'basis:i,j,..' or '@file.json'");
}

ho::PrecisionPolicy policy(const Settings& s) {
  ho::PrecisionPolicy p;
  p.start_bits = s.start_bits;
  p.extended_bits = s.precision_bits;
  p.max_bits = s.max_bits;
  return p;
}

json fit_json(const ho::LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"r2", f.r2}, {"points", f.points}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json spectral_json(const ho::SpectralConstant& c) {
  return {{"C_N", c.C},          {"log_C_N", c.log_C},           {"lambda_min", c.lambda_min},
          {"log_lambda_min", c.log_lambda_min}, {"lambda_max", c.lambda_max}, {"precision_bits", c.precision_bits},
          {"singular", c.singular}, {"C_lower_bound", c.C_lower_bound}};
}

int resolve_k0(const Settings& s, const ho::QuadraticSymbol& q) {
  if (s.k0 >= -1) return s.k0;
  return ho::singular_space(ho::hamilton_map(q), s.tol).k0;
}

ho::BoundParams bound_params(const Settings& s, const ho::Region* omega) {
  ho::BoundParams p;
  if (s.variant.empty()) {
    if (!omega) throw ConfigError("give --variant or a region with a default hypothesis");
    auto d = ho::default_bound_params(*omega);
    if (!d) throw ConfigError("region has no default hypothesis; give --variant");
    p = *d;
  } else {
    p.n = s.n;
    if (s.variant == "i") {
      auto x0 = parse_double_list(s.x0);
      if (x0.size() == 1) x0.assign(static_cast<std::size_t>(s.n), x0[0]);
      p.hypothesis = ho::OpenBallHypothesis{x0, s.r};
    } else if (s.variant == "ii") {
      p.hypothesis = ho::DensityHypothesis{s.delta, s.R0};
    } else if (s.variant == "iii") {
      p.hypothesis = ho::ThickHypothesis{s.L, s.gamma};
    } else {
      throw ConfigError("--variant must be i, ii or iii");
    }
  }
  p.C_sobolev = s.C_sobolev;
  p.C_kov = s.C_kov;
  if (s.c_n > 0) p.c_n = s.c_n;
  p.validate();
  return p;
}

ho::ControlProblem control_problem(const Settings& s, const ho::QuadraticSymbol& q, int N) {
  ho::ControlProblem p;
  p.A = ho::weyl_quantize(q, N);
  p.omega = ho::gram_matrix(make_region(s, q.n, N), N);
  p.panels = s.panels;
  p.precision_bits = s.start_bits;
  p.max_bits = s.max_bits;
  return p;
}

// Subcommands.

Outcome run_basis(const Settings& s) {
  const int N = single_N(s);
  auto idx = ho::index_set(s.n, N);
  Outcome o;
  std::optional<std::vector<double>> x;
  if (!s.x.empty()) {
    x = parse_double_list(s.x);
    if (static_cast<int>(x->size()) != s.n) throw ConfigError("--x needs " + std::to_string(s.n) + " coordinates");
  }
  CsvTable t;
  t.header = {"index", "order", "alpha"};
  if (x) t.header.push_back("value");
  json indices = json::array(), values = json::array();
  for (std::size_t i = 0; i < idx->size(); ++i) {
    const auto& a = (*idx)[i];
    indices.push_back(a.entries);
    std::vector<Cell> row{static_cast<long long>(i), static_cast<long long>(a.order()), join_index(a)};
    if (x) {
      double v = 1;
      for (int j = 0; j < s.n; ++j) v *= ho::eval_hermite_1d(a[j], (*x)[static_cast<std::size_t>(j)]);
      values.push_back(v);
      row.emplace_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  o.result = {{"n", s.n}, {"N", N}, {"dim", idx->size()}, {"indices", indices}};
  if (x) o.result["values"] = values;
  o.table = std::move(t);
  o.summary = "basis: n=" + std::to_string(s.n) + " N=" + std::to_string(N) + " dim=" + std::to_string(idx->size());
  return o;
}

Outcome run_gram(const Settings& s) {
  const int N = single_N(s);
  auto G = ho::gram_matrix(make_region(s, s.n, N), N);
  Outcome o;
  o.result = {{"n", s.n},
              {"N", N},
              {"dim", G.size()},
              {"matrix", matrix_json(G.matrix)},
              {"entry_error", G.entry_error},
              {"truncation_error", G.truncation_error},
              {"region", G.region->to_json()}};
  CsvTable t;
  t.header = {"row", "col", "value"};
  for (Eigen::Index i = 0; i < G.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < G.matrix.cols(); ++j)
      t.rows.push_back({static_cast<long long>(i), static_cast<long long>(j), G.matrix(i, j)});
  o.table = std::move(t);
  o.summary = "gram: dim=" + std::to_string(G.size()) + " entry_error=" + std::to_string(G.entry_error);
  return o;
}

Outcome run_constant(const Settings& s) {
  const int N = single_N(s);
  auto G = ho::gram_matrix(make_region(s, s.n, N), N);
  auto c = ho::spectral_constant(G, policy(s));
  Outcome o;
  o.result = spectral_json(c);
  o.result["N"] = N;
  o.result["n"] = s.n;
  o.result["dim"] = G.size();
  CsvTable t;
  t.header = {"N", "dim", "C_measured", "lambda_min", "precision_bits"};
  t.rows.push_back({static_cast<long long>(N), static_cast<long long>(G.size()), c.C, c.lambda_min,
                    static_cast<long long>(c.precision_bits)});
  o.table = std::move(t);
  CsvTable p;
  p.header = {"sqrt_N", "log_C_N"};
  p.rows.push_back({std::sqrt(static_cast<double>(N)), c.log_C});
  o.plot = std::move(p);
  char buf[160];
  std::snprintf(buf, sizeof buf, "constant: C_%d=%.10g lambda_min=%.6g bits=%u%s", N, c.C, c.lambda_min, c.precision_bits,
                c.singular ? " (precision ceiling, C is a lower bound)" : "");
  o.summary = buf;
  if (c.singular) o.exit = kPrecisionCeiling;
  return o;
}

Outcome run_scaling(const Settings& s) {
  auto Ns = N_list(s);
  const int N_max = *std::max_element(Ns.begin(), Ns.end());
  auto omega = make_region(s, s.n, N_max);
  std::optional<ho::BoundParams> params;
  if (!s.variant.empty() || ho::default_bound_params(*omega)) params = bound_params(s, omega.get());
  auto rep = ho::scaling_study(omega, Ns, policy(s), params);
  Outcome o;
  CsvTable t, p;
  t.header = {"N", "dim", "C_measured", "lambda_min", "bound", "bound_variant", "precision_bits"};
  p.header = {"sqrt_N", "log_C_N"};
  json rows = json::array();
  for (const auto& r : rep.rows) {
    const double bound = r.bound ? r.bound->value() : std::nan("");
    t.rows.push_back({static_cast<long long>(r.N), static_cast<long long>(r.dim), r.constant.C, r.constant.lambda_min, bound,
                      r.bound ? r.bound->variant : std::string(), static_cast<long long>(r.constant.precision_bits)});
    p.rows.push_back({std::sqrt(static_cast<double>(r.N)), r.constant.log_C});
    json row = spectral_json(r.constant);
    row["N"] = r.N;
    row["dim"] = r.dim;
    row["violation"] = r.violation;
    if (r.bound) row["bound"] = {{"log_value", r.bound->log_value}, {"applicable", r.bound->applicable}, {"variant", r.bound->variant}};
    rows.push_back(row);
  }
  json fits = json::object();
  for (const auto& f : rep.fits) fits[f.model] = fit_json(f.fit);
  o.result = {{"rows", rows}, {"fits", fits}, {"best_model", rep.best_model}, {"violations", rep.violations},
              {"singular_N", rep.singular_N}};
  if (rep.power_defined) o.result["power"] = fit_json(rep.power);
  o.table = std::move(t);
  o.plot = std::move(p);
  o.summary = "scaling: " + std::to_string(rep.rows.size()) + " cutoffs, best model " + rep.best_model + ", " +
              std::to_string(rep.violations) + " bound violations, " + std::to_string(rep.singular_N.size()) +
              " at precision ceiling";
  if (!rep.singular_N.empty()) o.exit = kPrecisionCeiling;
  return o;
}

Outcome run_bounds(const Settings& s) {
  auto Ns = N_list(s);
  std::shared_ptr<const ho::Region> omega;
  if (s.variant.empty()) omega = make_region(s, s.n, *std::max_element(Ns.begin(), Ns.end()));
  auto p = bound_params(s, omega.get());
  Outcome o;
  CsvTable t;
  t.header = {"N", "variant", "log_bound", "bound", "applicable"};
  json rows = json::array();
  for (int N : Ns) {
    auto b = ho::theoretical_bound(p, N);
    t.rows.push_back({static_cast<long long>(N), b.variant, b.log_value, b.value(), static_cast<long long>(b.applicable)});
    rows.push_back({{"N", N}, {"log_bound", b.log_value}, {"applicable", b.applicable}, {"variant", b.variant}});
  }
  o.result = {{"variant", p.variant_name()}, {"tail_constant", p.tail_constant()}, {"rows", rows}};
  o.table = std::move(t);
  o.summary = "bounds: variant " + p.variant_name() + " at " + std::to_string(Ns.size()) + " cutoffs";
  return o;
}

Outcome run_remez(const Settings& s) {
  if (s.d < 0) throw ConfigError("--d must be non-negative");
  Outcome o;
  double value = 0;
  if (s.kind == "real" || s.kind == "complex") {
    if (!(s.t > 0 && s.t <= 1)) throw ConfigError("--t must lie in (0, 1]");
    value = ho::remez_bound(s.n, s.d, s.t, s.kind == "complex");
    o.result = {{"kind", s.kind}, {"n", s.n}, {"d", s.d}, {"t", s.t}, {"F", ho::remez_F(s.n, s.t)}, {"bound", value}};
  } else if (s.kind == "ball") {
    if (!(s.rho > 0 && s.rho <= 1)) throw ConfigError("--rho must lie in (0, 1]");
    value = ho::remez_ball_bound(s.n, s.d, s.rho);
    o.result = {{"kind", s.kind}, {"n", s.n}, {"d", s.d}, {"rho", s.rho}, {"bound", value},
                {"log_bound", ho::log_remez_ball_bound(s.n, s.d, s.rho)}};
  } else if (s.kind == "kovrijkine") {
    if (!(s.E > 0) || !(s.M >= 1)) throw ConfigError("kovrijkine needs --E > 0 and --M >= 1");
    value = ho::kovrijkine_interval_bound(s.C_kov, s.E, s.M);
    o.result = {{"kind", s.kind}, {"C", s.C_kov}, {"E", s.E}, {"M", s.M}, {"bound", value}};
  } else {
    throw ConfigError("--kind must be real, complex, ball or kovrijkine");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "remez (%s): bound=%.10g", s.kind.c_str(), value);
  o.summary = buf;
  return o;
}

Outcome run_bernstein(const Settings& s) {
  const int N = single_N(s);
  if (s.trials <= 0) throw ConfigError("--trials must be positive");
  if (!(s.delta > 0)) throw ConfigError("--delta must be positive");
  auto beta = parse_multi_index(s.beta, s.n);
  std::mt19937_64 rng(s.seed);
  Outcome o;
  CsvTable t;
  int failures = 0, inconclusive = 0;
  double worst = 0;
  if (s.weighted) {
    if (!(32.0 * s.n * s.delta < 1)) throw ConfigError("weighted estimate needs delta < 1/(32 n)");
    t.header = {"trial", "lhs_x", "lhs_xi", "rhs", "verdict"};
    for (int i = 0; i < s.trials; ++i) {
      auto w = ho::weighted_check(random_expansion(s.n, N, rng), s.delta, beta);
      if (w.verdict == ho::Verdict::fail) ++failures;
      if (w.verdict == ho::Verdict::inconclusive) ++inconclusive;
      worst = std::max(worst, std::max(w.lhs_x, w.lhs_xi) / w.rhs);
      t.rows.push_back({static_cast<long long>(i), w.lhs_x, w.lhs_xi, w.rhs, std::string(ho::verdict_name(w.verdict))});
    }
  } else {
    t.header = {"trial", "lhs", "rhs", "pass"};
    for (int i = 0; i < s.trials; ++i) {
      auto b = ho::bernstein_check(random_expansion(s.n, N, rng), s.delta, beta);
      if (!b.pass) ++failures;
      if (std::isfinite(b.rhs)) worst = std::max(worst, b.lhs / b.rhs);
      t.rows.push_back({static_cast<long long>(i), b.lhs, b.rhs, static_cast<long long>(b.pass)});
    }
  }
  o.result = {{"estimate", s.weighted ? "weighted" : "bernstein"}, {"trials", s.trials}, {"failures", failures},
              {"inconclusive", inconclusive}, {"worst_ratio", worst}};
  o.table = std::move(t);
  o.summary = std::string(s.weighted ? "weighted" : "bernstein") + ": " + std::to_string(failures) + " failures in " +
              std::to_string(s.trials) + " trials";
  return o;
}

Outcome run_tails(const Settings& s) {
  const auto& tc = ho::tail_constant_cn(s.n);
  Outcome o;
  json cert = json::array();
  CsvTable t;
  t.header = {"N", "rhs"};
  for (const auto& [N, v] : tc.certificate) {
    cert.push_back({N, v});
    t.rows.push_back({static_cast<long long>(N), v});
  }
  o.result = {{"n", s.n}, {"c_n", tc.c_n}, {"worst_N", tc.worst_N}, {"certificate", cert}};
  if (s.a >= 0) {
    if (s.k < 0) throw ConfigError("--k must be non-negative");
    auto b = ho::hermite_tail_bound(s.k, s.a);
    o.result["tail"] = {{"k", s.k}, {"a", s.a}, {"exact", b.exact}, {"bound", b.bound}};
  }
  o.table = std::move(t);
  char buf[96];
  std::snprintf(buf, sizeof buf, "tails: c_%d=%.10g (worst N=%d)", s.n, tc.c_n, tc.worst_N);
  o.summary = buf;
  return o;
}

json complex_matrix_json(const Eigen::MatrixXcd& m) { return {{"re", matrix_json(m.real())}, {"im", matrix_json(m.imag())}}; }

Outcome run_symbol(const Settings& s) {
  auto q = make_symbol(s);
  auto H = ho::hamilton_map(q);
  auto S = ho::singular_space(H, s.tol);
  Outcome o;
  o.result = {{"symbol", q.to_json()},
              {"hamilton_map", complex_matrix_json(H.F)},
              {"identity_defect", H.identity_defect(q)},
              {"accretive", q.accretive()},
              {"singular_space",
               {{"basis", matrix_json(S.basis)},
                {"dim", S.dim()},
                {"k0", S.k0},
                {"tol", S.tol},
                {"tolerance_sensitive", S.tolerance_sensitive},
                {"k0_tight", S.k0_tight},
                {"k0_loose", S.k0_loose},
                {"dim_tight", S.dim_tight},
                {"dim_loose", S.dim_loose}}}};
  std::string summary = "symbol " + q.name + ": dim S=" + std::to_string(S.dim()) + " k0=" + std::to_string(S.k0);
  if (s.exact) {
    auto X = ho::singular_space_exact(H);
    o.result["exact"] = {{"k0", X.k0}, {"dim", X.dim}, {"kernel_dims", X.kernel_dims}};
    summary += " (exact: dim=" + std::to_string(X.dim) + " k0=" + std::to_string(X.k0) + ")";
  }
  if (S.tolerance_sensitive) summary += " [tolerance sensitive]";
  o.summary = summary;
  return o;
}

Outcome run_quantize(const Settings& s) {
  auto q = make_symbol(s);
  const int N = single_N(s);
  auto A = ho::weyl_quantize(q, N);
  Outcome o;
  o.result = {{"symbol", q.to_json()}, {"N", N}, {"dim", A.size()}, {"matrix", complex_matrix_json(A.A)},
              {"real", A.is_real()}, {"accretivity_margin", A.accretivity_margin()}};
  CsvTable t;
  t.header = {"row", "col", "re", "im"};
  for (Eigen::Index i = 0; i < A.A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.A.cols(); ++j)
      t.rows.push_back({static_cast<long long>(i), static_cast<long long>(j), A.A(i, j).real(), A.A(i, j).imag()});
  o.table = std::move(t);
  o.summary = "quantize " + q.name + ": dim=" + std::to_string(A.size()) + " accretivity margin " +
              std::to_string(A.accretivity_margin());
  return o;
}

Outcome run_evolve(const Settings& s) {
  auto q = make_symbol(s);
  const int N = single_N(s);
  auto ts = parse_double_list(s.times);
  for (double t : ts)
    if (!(t >= 0)) throw ConfigError("--times must be non-negative");
  auto A = ho::weyl_quantize(q, N);
  auto f0 = make_f0(s, q.n, N);
  Outcome o;
  CsvTable t;
  t.header = {"t", "norm_ratio", "contraction_violation"};
  if (s.convergence) t.header.push_back("galerkin_change");
  json rows = json::array();
  bool violation = false;
  for (double time : ts) {
    auto r = ho::evolve(A, f0, time);
    violation = violation || r.contraction_violation;
    std::vector<Cell> row{time, r.norm_ratio, static_cast<long long>(r.contraction_violation)};
    json jr = {{"t", time}, {"norm_ratio", r.norm_ratio}, {"contraction_violation", r.contraction_violation}};
    if (s.convergence) {
      const double c = ho::galerkin_convergence(q, f0, time);
      row.emplace_back(c);
      jr["galerkin_change"] = c;
    }
    t.rows.push_back(std::move(row));
    rows.push_back(jr);
  }
  o.result = {{"symbol", q.to_json()}, {"N", N}, {"rows", rows}};
  if (!s.k_list.empty()) {
    auto ks = parse_int_list(s.k_list);
    auto rep = ho::dissipation_check(A, std::max(resolve_k0(s, q), 0), s.C0, ts, ks, 20, s.seed);
    json pts = json::array(), slices = json::array();
    for (const auto& p : rep.points) pts.push_back({{"t", p.t}, {"k", p.k}, {"ratio", p.ratio}, {"probe_ratio", p.probe_ratio}});
    for (const auto& sl : rep.slices) slices.push_back({{"t", sl.t}, {"rate", sl.rate}, {"fit", fit_json(sl.fit)}});
    json d = {{"points", pts}, {"slices", slices}, {"k0", rep.k0}, {"C0", rep.C0}, {"t0", rep.t0},
              {"exponent_fit", fit_json(rep.exponent_fit)}, {"guess_consistent", rep.guess_consistent}};
    if (rep.harmonic_error) d["harmonic_error"] = *rep.harmonic_error;
    o.result["dissipation"] = d;
  }
  o.table = std::move(t);
  o.summary = "evolve " + q.name + ": " + std::to_string(ts.size()) + " times" + (violation ? ", contraction violated" : "");
  return o;
}

Outcome run_observability(const Settings& s) {
  auto q = make_symbol(s);
  const int N = single_N(s);
  auto Ts = parse_double_list(s.T);
  for (double T : Ts)
    if (!(T > 0)) throw ConfigError("--T must be positive");
  auto p = control_problem(s, q, N);
  Outcome o;
  CsvTable t, plot;
  t.header = {"T", "C_T", "precision_bits", "method"};
  plot.header = {"inv_T", "log_C_T"};
  json rows = json::array();
  bool ceiling = false;
  const int k0 = resolve_k0(s, q);
  std::sort(Ts.begin(), Ts.end(), std::greater<>());
  Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());
  if (Ts.size() >= 2 && k0 >= 0) {
    auto rep = ho::cost_blowup_study(p, Ts, k0);
    for (const auto& r : rep.rows) {
      ceiling = ceiling || r.ceiling;
      t.rows.push_back({r.T, r.C_T, static_cast<long long>(r.precision_bits), r.method});
      plot.rows.push_back({1.0 / r.T, r.log_C_T});
      rows.push_back({{"T", r.T}, {"C_T", r.C_T}, {"log_C_T", r.log_C_T}, {"precision_bits", r.precision_bits},
                      {"method", r.method}, {"ceiling", r.ceiling}});
    }
    o.result["blowup"] = {{"k0", rep.k0}, {"fit", fit_json(rep.fit)}, {"fit_inv_T", fit_json(rep.fit_inv_T)},
                          {"fit_inv_T3", fit_json(rep.fit_inv_T3)}, {"preferred", rep.preferred}, {"excluded", rep.excluded}};
  } else {
    for (double T : Ts) {
      p.T = T;
      auto r = ho::observability_constant(p, s.seed);
      ceiling = ceiling || r.ceiling;
      t.rows.push_back({r.T, r.C_T, static_cast<long long>(r.precision_bits), r.method});
      plot.rows.push_back({1.0 / r.T, r.log_C_T});
      rows.push_back({{"T", r.T}, {"C_T", r.C_T}, {"log_C_T", r.log_C_T}, {"precision_bits", r.precision_bits},
                      {"method", r.method}, {"ceiling", r.ceiling}, {"panels", r.panels}, {"W_condition", r.W_condition},
                      {"probe_max", r.probe_max}, {"extremal", r.extremal.to_json()}});
    }
  }
  o.result["rows"] = rows;
  o.result["k0"] = k0;
  o.result["N"] = N;
  o.result["symbol"] = q.to_json();
  o.result["region"] = p.omega.region->to_json();
  o.table = std::move(t);
  o.plot = std::move(plot);
  o.summary = "observability " + q.name + ": " + std::to_string(Ts.size()) + " horizons" +
              (ceiling ? ", precision ceiling reached (lower bounds reported)" : "");
  if (ceiling) o.exit = kPrecisionCeiling;
  return o;
}

Outcome run_control(const Settings& s) {
  auto q = make_symbol(s);
  const int N = single_N(s);
  auto Ts = parse_double_list(s.T);
  if (Ts.size() != 1 || !(Ts[0] > 0)) throw ConfigError("control takes one positive --T");
  auto p = control_problem(s, q, N);
  p.T = Ts[0];
  auto f0 = make_f0(s, q.n, N);
  ho::ControlResult r;
  if (s.method == "hum") {
    r = ho::hum_control(p, f0);
  } else if (s.method == "staircase") {
    ho::StaircaseOptions opt;
    opt.K0 = s.K0;
    opt.target = s.target;
    opt.max_stages = s.max_stages;
    opt.m = 2 * std::max(resolve_k0(s, q), 0) + 1;
    r = ho::lr_staircase(p, f0, opt);
  } else {
    throw ConfigError("--method must be hum or staircase");
  }
  Outcome o;
  CsvTable t;
  t.header = {"stage", "k_j", "stage_cost", "energy_after"};
  json stages = json::array();
  if (r.stages.empty()) {
    t.rows.push_back({0LL, static_cast<long long>(N), r.cost, r.residual});
  }
  for (const auto& st : r.stages) {
    t.rows.push_back({static_cast<long long>(st.stage), static_cast<long long>(st.k), st.cost, st.energy_after});
    stages.push_back({{"stage", st.stage}, {"k", st.k}, {"start", st.start}, {"active", st.active}, {"passive", st.passive},
                      {"cost", st.cost}, {"energy_after", st.energy_after},
                      {"energy_before_passive", st.energy_before_passive}, {"high_before_passive", st.high_before_passive},
                      {"high_after_passive", st.high_after_passive}, {"decay_bound", st.decay_bound},
                      {"gramian_condition", st.gramian_condition}, {"precision_bits", st.precision_bits}});
  }
  json u = json::array();
  for (std::size_t i = 0; i < r.times.size(); ++i)
    u.push_back({{"t", r.times[i]}, {"norm", r.u[i].norm()}});
  o.result = {{"method", s.method}, {"T", p.T}, {"N", N}, {"cost", r.cost}, {"residual", r.residual},
              {"gramian_condition", r.gramian_condition}, {"precision_bits", r.precision_bits}, {"panels", r.panels},
              {"partial", r.partial}, {"aborted_stage", r.aborted_stage}, {"stages", stages}, {"control_norms", u},
              {"symbol", q.to_json()}, {"region", p.omega.region->to_json()}};
  o.table = std::move(t);
  char buf[160];
  std::snprintf(buf, sizeof buf, "control (%s): cost=%.10g residual=%.3g bits=%u%s", s.method.c_str(), r.cost, r.residual,
                r.precision_bits, r.partial ? " [partial: precision ceiling]" : "");
  o.summary = buf;
  if (r.partial) o.exit = kPrecisionCeiling;
  return o;
}

Outcome run_verify(const Settings& s) {
  if (!(s.trial_scale > 0)) throw ConfigError("--trial-scale must be positive");
  auto recs = ho::run_verify(s.suite, s.seed, s.trial_scale);
  Outcome o;
  CsvTable t;
  t.header = {"suite", "module", "trials", "failures", "inconclusive", "worst_margin", "seed"};
  json arr = json::array();
  int failures = 0, inconclusive = 0;
  for (const auto& r : recs) {
    failures += r.failures;
    inconclusive += r.inconclusive;
    arr.push_back(r.to_json());
    t.rows.push_back({r.suite, r.module, static_cast<long long>(r.trials), static_cast<long long>(r.failures),
                      static_cast<long long>(r.inconclusive), r.worst_margin, static_cast<long long>(r.seed)});
  }
  o.result = {{"suites", arr}, {"failures", failures}, {"inconclusive", inconclusive}};
  o.table = std::move(t);
  o.summary = "verify: " + std::to_string(recs.size()) + " suites, " + std::to_string(failures) + " failures, " +
              std::to_string(inconclusive) + " inconclusive";
  if (failures > 0) o.exit = kContract;
  return o;
}

// Flag groups.

void output_flags(Flags& f, Settings& s) {
  f.add("out", s.out, "write the JSON report here instead of stdout");
  f.add("csv", s.csv, "write the CSV table here");
  f.flag("mkdirs", s.mkdirs, "create missing output directories");
  f.add("seed", s.seed, "master seed");
}

void dim_flag(Flags& f, Settings& s) { f.add("n", s.n, "space dimension")->check(CLI::Range(1, 3)); }

void region_flags(Flags& f, Settings& s) {
  f.add("region", s.region, "region shorthand (periodic:L=1,gamma=0.5, halfline, halfspace, whole, ball_complement:R0=1, "
                            "interval:a=-1,b=1, cube:r=1, empty) or @file.json");
  f.add("safety", s.safety, "truncation radius safety factor")->check(CLI::PositiveNumber);
}

void precision_flags(Flags& f, Settings& s) {
  f.add("start-bits", s.start_bits, "first precision tried; 53 is double")->check(CLI::Range(53u, 1u << 16));
  f.add("precision-bits", s.precision_bits, "first extended precision")->check(CLI::Range(64u, 1u << 16));
  f.add("max-bits", s.max_bits, "precision ceiling")->check(CLI::Range(64u, 1u << 16));
}

void constant_flags(Flags& f, Settings& s) {
  f.add("C-sobolev", s.C_sobolev, "Sobolev embedding constant")->check(CLI::PositiveNumber);
  f.add("C-kov", s.C_kov, "Kovrijkine constant")->check(CLI::PositiveNumber);
  f.add("c-n", s.c_n, "tail constant, 0 computes it")->check(CLI::NonNegativeNumber);
}

void hypothesis_flags(Flags& f, Settings& s) {
  f.add("variant", s.variant, "bound variant i, ii or iii; empty takes it from the region");
  f.add("x0", s.x0, "ball centre (variant i)");
  f.add("r", s.r, "ball radius (variant i)");
  f.add("delta", s.delta, "density (variant ii)");
  f.add("R0", s.R0, "density radius (variant ii)");
  f.add("L", s.L, "thickness scale (variant iii)");
  f.add("gamma", s.gamma, "thickness fraction (variant iii)");
}

void symbol_flags(Flags& f, Settings& s) {
  f.add("symbol", s.symbol, "harmonic, free, kfp:a=<real> or @file.json");
}

}  // namespace

int main(int argc, char** argv) {
  MergedArgs merged;
  try {
    merged = merge_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  for (const auto& w : merged.warnings) std::cerr << "warning: " << w << "\n";

  CLI::App app{"Hermite-basis observability and control experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON object of flag values; command-line flags win");

  Settings s;
  std::map<std::string, Command> cmds;
  auto make = [&](const std::string& name, const std::string& help, std::function<Outcome(const Settings&)> run) -> Flags& {
    auto* sub = app.add_subcommand(name, help);
    auto& c = cmds[name];
    c.app = sub;
    c.flags = std::make_unique<Flags>(sub);
    c.run = std::move(run);
    output_flags(*c.flags, s);
    return *c.flags;
  };

  {
    auto& f = make("basis", "enumerate the Hermite basis and evaluate it", run_basis);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    f.add("x", s.x, "evaluation point, comma separated");
  }
  {
    auto& f = make("gram", "Gram matrix of a region", run_gram);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    region_flags(f, s);
  }
  {
    auto& f = make("constant", "observability constant C_N of a region", run_constant);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    region_flags(f, s);
    precision_flags(f, s);
    f.add("plot-data", s.plot_data, "write (sqrt N, log C_N) here");
  }
  {
    auto& f = make("scaling", "C_N over a list of cutoffs", run_scaling);
    dim_flag(f, s);
    f.add("N", s.N, "cutoffs: 4:64:4 or 4,8,16");
    region_flags(f, s);
    precision_flags(f, s);
    constant_flags(f, s);
    f.add("variant", s.variant, "bound variant override (i, ii, iii)");
    f.add("plot-data", s.plot_data, "write (sqrt N, log C_N) here");
  }
  {
    auto& f = make("bounds", "theoretical bound on C_N", run_bounds);
    dim_flag(f, s);
    f.add("N", s.N, "cutoffs");
    region_flags(f, s);
    constant_flags(f, s);
    hypothesis_flags(f, s);
  }
  {
    auto& f = make("remez", "Remez, ball and Kovrijkine constants", run_remez);
    dim_flag(f, s);
    f.add("kind", s.kind, "real, complex, ball or kovrijkine");
    f.add("d", s.d, "polynomial degree");
    f.add("t", s.t, "relative measure |E|/|J|");
    f.add("rho", s.rho, "relative ball measure");
    f.add("E", s.E, "measure of E (kovrijkine)");
    f.add("M", s.M, "growth factor M (kovrijkine)");
    f.add("C-kov", s.C_kov, "Kovrijkine constant")->check(CLI::PositiveNumber);
  }
  {
    auto& f = make("bernstein", "randomized Bernstein or weighted estimate checks", run_bernstein);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    f.add("delta", s.delta, "delta");
    f.add("beta", s.beta, "derivative multi-index, comma separated");
    f.add("trials", s.trials, "number of random expansions");
    f.flag("weighted", s.weighted, "check the Gaussian-weighted estimate instead");
  }
  {
    auto& f = make("tails", "tail constant c_n and single-mode tails", run_tails);
    dim_flag(f, s);
    f.add("k", s.k, "Hermite degree for the single-mode tail");
    f.add("a", s.a, "tail threshold; negative skips the single-mode tail");
  }
  {
    auto& f = make("symbol", "Hamilton map and singular space of a quadratic symbol", run_symbol);
    dim_flag(f, s);
    symbol_flags(f, s);
    f.add("tol", s.tol, "rank tolerance")->check(CLI::PositiveNumber);
    f.flag("exact", s.exact, "also compute the singular space in rational arithmetic");
  }
  {
    auto& f = make("quantize", "Galerkin matrix of the Weyl quantization", run_quantize);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    symbol_flags(f, s);
  }
  {
    auto& f = make("evolve", "semigroup evolution and dissipation", run_evolve);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    symbol_flags(f, s);
    f.add("times", s.times, "evaluation times, comma separated");
    f.add("f0", s.f0, "initial datum: random, basis:i,j or @file.json");
    f.add("k", s.k_list, "energy levels for the dissipation check (list)");
    f.add("C0", s.C0, "guess for the dissipation constant")->check(CLI::PositiveNumber);
    f.add("k0", s.k0, "singular-space index; -2 derives it from the symbol");
    f.add("tol", s.tol, "rank tolerance for k0")->check(CLI::PositiveNumber);
    f.flag("convergence", s.convergence, "compare each evolution against cutoff 2N");
  }
  {
    auto& f = make("observability", "final-state observability constant C_T", run_observability);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    symbol_flags(f, s);
    region_flags(f, s);
    f.add("T", s.T, "horizons, comma separated; two or more fit the blowup");
    f.add("panels", s.panels, "initial quadrature panels")->check(CLI::PositiveNumber);
    f.add("k0", s.k0, "singular-space index; -2 derives it from the symbol");
    f.add("tol", s.tol, "rank tolerance for k0")->check(CLI::PositiveNumber);
    precision_flags(f, s);
    f.add("plot-data", s.plot_data, "write (1/T, log C_T) here");
  }
  {
    auto& f = make("control", "HUM or staircase null control", run_control);
    dim_flag(f, s);
    f.add("N", s.N, "cutoff");
    symbol_flags(f, s);
    region_flags(f, s);
    f.add("T", s.T, "horizon");
    f.add("f0", s.f0, "initial datum: random, basis:i,j or @file.json");
    f.add("method", s.method, "hum or staircase");
    f.add("K0", s.K0, "first staircase level")->check(CLI::PositiveNumber);
    f.add("target", s.target, "staircase energy target")->check(CLI::PositiveNumber);
    f.add("max-stages", s.max_stages, "staircase stage limit")->check(CLI::PositiveNumber);
    f.add("panels", s.panels, "initial quadrature panels")->check(CLI::PositiveNumber);
    f.add("k0", s.k0, "singular-space index; -2 derives it from the symbol");
    f.add("tol", s.tol, "rank tolerance for k0")->check(CLI::PositiveNumber);
    precision_flags(f, s);
  }
  {
    auto& f = make("verify", "run the property suites", run_verify);
    f.add("suite", s.suite, "all, a module name or a suite name");
    f.add("trial-scale", s.trial_scale, "multiplier on every suite's trial count");
  }

  try {
    std::vector<std::string> rev(merged.args.rbegin(), merged.args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Command& cmd = cmds.at(name);

  Outcome o;
  try {
    if (s.max_bits < s.precision_bits) throw ConfigError("--max-bits must be at least --precision-bits");
    o = cmd.run(s);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ho::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ho::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  const json config = cmd.flags->resolved();
  const double c_n = s.c_n > 0 ? s.c_n : ho::tail_constant_cn(s.n).c_n;
  json bundle = {{"command", name},
                 {"config", config},
                 {"result", o.result},
                 {"summary", o.summary},
                 {"provenance",
                  {{"version", kVersion},
                   {"config_hash", hex64(fnv1a(name + "\n" + config.dump()))},
                   {"seed", s.seed},
                   {"defaults", {{"C_sobolev", s.C_sobolev}, {"C_kov", s.C_kov}, {"c_n", c_n}}}}}};
  if (!merged.warnings.empty()) bundle["warnings"] = merged.warnings;

  try {
    const std::string text = bundle.dump(2) + "\n";
    if (!s.csv.empty() && o.table) write_file(s.csv, o.table->render(), s.mkdirs);
    if (!s.plot_data.empty() && o.plot) write_file(s.plot_data, o.plot->render(), s.mkdirs);
    if (s.out.empty()) {
      std::cout << text;
    } else {
      write_file(s.out, text, s.mkdirs);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  }
  std::cerr << o.summary << "\n";
  return o.exit;
}
