#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace hermite_obs {
using mp_real = boost::multiprecision::mpfr_float;
}

namespace Eigen {
template <>
struct NumTraits<hermite_obs::mp_real> : GenericNumTraits<hermite_obs::mp_real> {
  using Real = hermite_obs::mp_real;
  using NonInteger = hermite_obs::mp_real;
  using Literal = hermite_obs::mp_real;
  using Nested = hermite_obs::mp_real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 10,
    MulCost = 20
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return (std::numeric_limits<Real>::lowest)(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
};
}  // namespace Eigen

#include <Eigen/Dense>

namespace hermite_obs {

template <class R>
using Mat = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;
template <class R>
using Vec = Eigen::Matrix<R, Eigen::Dynamic, 1>;
using cplx = std::complex<double>;

// Raised when a caller breaks an operation's precondition (CLI exit code 2).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised for parameters outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Default working precision for extended arithmetic, in mantissa bits.
// HERMITE_OBS_PRECISION_BITS overrides the built-in 256.
unsigned default_precision_bits();

unsigned digits10_for_bits(unsigned bits);

// Sets the global mpfr_float precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits_;
};

inline double to_double(double x) { return x; }
inline double to_double(const mp_real& x) { return x.convert_to<double>(); }

template <class R>
R pi_r() {
  if constexpr (std::is_same_v<R, double>) {
    return M_PI;
  } else {
    return boost::math::constants::pi<R>();
  }
}

template <class R>
R erf_r(const R& x) {
  using std::erf;
  using boost::multiprecision::erf;
  return erf(x);
}

template <class R>
R sqrt_r(const R& x) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  return sqrt(x);
}

template <class R>
R exp_r(const R& x) {
  using std::exp;
  using boost::multiprecision::exp;
  return exp(x);
}

template <class R>
R log_r(const R& x) {
  using std::log;
  using boost::multiprecision::log;
  return log(x);
}

template <class R>
R abs_r(const R& x) {
  using std::abs;
  using boost::multiprecision::abs;
  return abs(x);
}

template <class R>
R epsilon_r() {
  return std::numeric_limits<R>::epsilon();
}

// Neumaier compensated summation; order of add() calls fixes the result.
template <class R>
class CompensatedSum {
 public:
  void add(const R& v) {
    R t = sum_ + v;
    if (abs_r(sum_) >= abs_r(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  R value() const { return sum_ + comp_; }

 private:
  R sum_ = R(0);
  R comp_ = R(0);
};

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace hermite_obs
