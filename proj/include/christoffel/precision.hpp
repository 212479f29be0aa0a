#pragma once

#include <string>

#include <boost/multiprecision/mpfr.hpp>

namespace christoffel {

// Extended-precision real used for moments, Gram matrices and kernel
// evaluation. The mantissa width is chosen once per process from
// CHRISTOFFEL_PRECISION_BITS (default 256).
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;

// Mantissa bits in effect. Reads the environment on first use.
unsigned precision_bits();

// Makes `bits` the working precision for every Real created afterwards.
// Values below 64 are rejected with std::invalid_argument.
void set_precision_bits(unsigned bits);

// Applies the configured precision to the calling thread. Every entry point
// that creates Real values calls this first.
void use_working_precision();

// Decimal rendering with `digits` significant digits (scientific when needed).
std::string to_decimal(const Real& value, int digits);
std::string to_decimal(double value, int digits = 17);

Real parse_real(const std::string& text);

}  // namespace christoffel
