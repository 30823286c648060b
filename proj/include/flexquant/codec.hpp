// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_CODEC_HPP
#define FLEXQUANT_CODEC_HPP

#include <cstdint>

#include "flexquant/formats.hpp"

namespace flexquant {

// One encoded minifloat scalar. Only the low total_bits() of `bits` are
// significant: sign | exponent field | mantissa field.
struct Code {
  std::uint8_t bits = 0;
  FpFormatSpec format;
};

// True iff `bits` decodes to a finite value under the format's policy.
// Rejected: reserved Inf/NaN patterns, the unused all-ones binade under
// Ours, subnormal codes when subnormals are disabled, and anything above
// the format width.
bool is_valid_code(std::uint8_t bits, const FpFormatSpec& spec);

// Round-to-nearest-even over the format's representable values.
// Magnitudes at or beyond max_normal saturate to max_normal with the
// input's sign; with subnormals disabled, magnitudes below min_normal
// round to the nearest of {0, +-min_normal} (the exact halfway point
// goes to 0). Throws InputError on non-finite input.
Code fp_encode(double x, const FpFormatSpec& spec);
std::uint8_t fp_encode_bits(double x, const FpFormatSpec& spec);

// Exact decoded value. Subnormal codes (exponent field 0) use the
// bias-minus-one subnormal form; -0 normalizes to +0. Throws InputError
// on invalid codes.
double fp_decode(const Code& code);
double fp_decode_bits(std::uint8_t bits, const FpFormatSpec& spec);

// decode(encode(x)): the representable value nearest to x. Idempotent.
double fp_quantize_value(double x, const FpFormatSpec& spec);

// clip(round_half_to_even(x / step), -c, c) with c = 2^(bits-1) - 1.
int int_quantize(double x, double step, int bits);

// q * step; rejects |q| > 2^(bits-1) - 1.
double int_dequantize(int q, double step, int bits = 8);

}  // namespace flexquant

#endif  // FLEXQUANT_CODEC_HPP
