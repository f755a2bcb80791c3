#include "hermite_obs/numeric.hpp"

#include <cstdlib>

namespace hermite_obs {

unsigned default_precision_bits() {
  if (const char* env = std::getenv("HERMITE_OBS_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 53 && v <= 65536) return static_cast<unsigned>(v);
  }
  return 256;
}

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits_(mp_real::default_precision()) {
  mp_real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { mp_real::default_precision(saved_digits_); }

double log_add_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace hermite_obs
