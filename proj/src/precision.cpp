#include "christoffel/precision.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace christoffel {
namespace {

unsigned initial_bits() {
  const char* env = std::getenv("CHRISTOFFEL_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return kDefaultPrecisionBits;
  char* end = nullptr;
  const long bits = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || bits < 64 || bits > 16384)
    throw std::invalid_argument("CHRISTOFFEL_PRECISION_BITS must be an integer in [64, 16384]");
  return static_cast<unsigned>(bits);
}

unsigned& configured_bits() {
  static unsigned bits = initial_bits();
  return bits;
}

unsigned digits10_for(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

unsigned precision_bits() { return configured_bits(); }

void set_precision_bits(unsigned bits) {
  if (bits < 64) throw std::invalid_argument("precision below 64 bits");
  configured_bits() = bits;
  Real::default_precision(digits10_for(bits));
}

void use_working_precision() {
  const unsigned digits = digits10_for(configured_bits());
  if (Real::default_precision() != digits) Real::default_precision(digits);
}

std::string to_decimal(const Real& value, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << value;
  return os.str();
}

std::string to_decimal(double value, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << value;
  return os.str();
}

Real parse_real(const std::string& text) {
  use_working_precision();
  return Real(text);
}

}  // namespace christoffel
