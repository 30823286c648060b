// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/codec.hpp"

#include <cmath>

#include "flexquant/errors.hpp"

namespace flexquant {

namespace {

std::uint8_t pack(int sign, int exp_field, int mantissa,
                  const FpFormatSpec& spec) {
  const int m = spec.mantissa_bits;
  return static_cast<std::uint8_t>((sign << (spec.exponent_bits + m)) |
                                   (exp_field << m) | mantissa);
}

// nearbyint in the default rounding mode is round-half-to-even.
long round_even(double x) { return static_cast<long>(std::nearbyint(x)); }

}  // namespace

bool is_valid_code(std::uint8_t bits, const FpFormatSpec& spec) {
  if (bits >> spec.total_bits()) return false;
  const int m = spec.mantissa_bits;
  const int exp_field = (bits >> m) & ((1 << spec.exponent_bits) - 1);
  const int mantissa = bits & ((1 << m) - 1);
  if (exp_field > spec.max_exponent_field()) return false;
  if (exp_field == spec.max_exponent_field() &&
      mantissa > spec.top_binade_max_mantissa()) {
    return false;  // Nia E4M3 NaN slot
  }
  if (exp_field == 0 && mantissa != 0 && !spec.subnormals_enabled) return false;
  return true;
}

Code fp_encode(double x, const FpFormatSpec& spec) {
  return Code{fp_encode_bits(x, spec), spec};
}

std::uint8_t fp_encode_bits(double x, const FpFormatSpec& spec) {
  if (!std::isfinite(x)) throw InputError("fp_encode: non-finite input");
  const int m = spec.mantissa_bits;
  const int sign = std::signbit(x) ? 1 : 0;
  const double a = std::fabs(x);
  if (a == 0.0) return 0;

  const double top = max_normal(spec);
  if (a >= top) {
    return pack(sign, spec.max_exponent_field(),
                spec.top_binade_max_mantissa(), spec);
  }

  const double mn = min_normal(spec);
  if (a < mn) {
    if (spec.subnormals_enabled) {
      const long q = round_even(std::ldexp(a, spec.bias - 1 + m));
      if (q == 0) return 0;
      if (q == (1L << m)) return pack(sign, 1, 0, spec);
      return pack(sign, 0, static_cast<int>(q), spec);
    }
    // Candidates are {0, min_normal}; the halfway point has even
    // mantissa on both sides and resolves to 0.
    return round_even(a / mn) ? pack(sign, 1, 0, spec) : 0;
  }

  int k = std::ilogb(a);
  long q = round_even(std::ldexp(a, m - k));  // in [2^m, 2^(m+1)]
  if (q == (1L << (m + 1))) {
    ++k;
    q >>= 1;
  }
  return pack(sign, k + spec.bias, static_cast<int>(q - (1L << m)), spec);
}

double fp_decode(const Code& code) { return fp_decode_bits(code.bits, code.format); }

double fp_decode_bits(std::uint8_t bits, const FpFormatSpec& spec) {
  if (!is_valid_code(bits, spec)) {
    throw InputError("fp_decode: reserved or invalid code " +
                     std::to_string(bits));
  }
  const int m = spec.mantissa_bits;
  const int exp_field = (bits >> m) & ((1 << spec.exponent_bits) - 1);
  const int mantissa = bits & ((1 << m) - 1);
  double v;
  if (exp_field == 0) {
    v = std::ldexp(mantissa, 1 - spec.bias - m);  // subnormal, bias - 1
  } else {
    v = std::ldexp((1 << m) + mantissa, exp_field - spec.bias - m);
  }
  if (v == 0.0) return 0.0;  // -0 collapses
  const int sign = bits >> (spec.exponent_bits + m);
  return sign ? -v : v;
}

double fp_quantize_value(double x, const FpFormatSpec& spec) {
  return fp_decode_bits(fp_encode_bits(x, spec), spec);
}

int int_quantize(double x, double step, int bits) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InputError("int_quantize: step must be positive and finite");
  }
  if (!std::isfinite(x)) throw InputError("int_quantize: non-finite input");
  if (bits != 4 && bits != 6 && bits != 8) {
    throw InputError("int_quantize: unsupported bit width " +
                     std::to_string(bits));
  }
  const double c = (1 << (bits - 1)) - 1;
  double q = std::nearbyint(x / step);
  if (q > c) q = c;
  if (q < -c) q = -c;
  return static_cast<int>(q);
}

double int_dequantize(int q, double step, int bits) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InputError("int_dequantize: step must be positive and finite");
  }
  const int c = (1 << (bits - 1)) - 1;
  if (q > c || q < -c) {
    throw InputError("int_dequantize: code " + std::to_string(q) +
                     " out of range for int" + std::to_string(bits));
  }
  return q * step;
}

}  // namespace flexquant
