// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_DATAPATH_HPP
#define FLEXQUANT_DATAPATH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flexquant/codec.hpp"
#include "flexquant/formats.hpp"

namespace flexquant {

// The three multiplier input lanes. Every supported source format embeds
// losslessly into one of them:
//   Fp19 (1+8+10, bias 127) covers BF16 and FP16
//   Fp11 (1+5+5,  bias 15)  covers every 8-bit minifloat
//   Int9 (signed)           covers INT8 and UINT8
enum class LaneFormat { Fp19, Fp11, Int9 };

enum class OperandKind { Bf16, Fp16, Fp8, Int8, Uint8 };

struct DecodedOperand {
  LaneFormat lane = LaneFormat::Int9;
  std::uint8_t sign = 0;
  std::int32_t exponent = 0;   // biased field value
  std::uint32_t mantissa = 0;  // fraction field, no implicit bit
  std::int32_t payload = 0;    // Int9 only

  // Exact value of an Fp19/Fp11 operand.
  double value() const;
};

DecodedOperand decode_bf16(std::uint16_t raw);
DecodedOperand decode_fp16(std::uint16_t raw);
DecodedOperand decode_fp8(const Code& code);  // any 8-bit minifloat
DecodedOperand decode_int8(std::int8_t v);
DecodedOperand decode_uint8(std::uint8_t v);

// Multiply lanes a source occupies per element pair: wide formats use
// one (the second idles), 8-bit formats stream through both.
int lanes_used(OperandKind kind);

// Replayable record of one dot product evaluation.
struct DotTrace {
  std::string mode;               // "int8" or "fp8"
  int lanes = 2;
  std::vector<double> products;   // exact per-element products
  std::vector<double> partials;   // accumulator after each element
  double bias_applied = 0.0;      // accumulator after the bias add
  float result = 0.0f;
};

// INT8 path: products and accumulation in exact 32-bit integers, bias
// added in integers, one multiplication by the 32-bit real scale.
// Rejects length mismatches and any length whose worst case 127^2 * n
// could overflow the 32-bit accumulator.
float dot_int8(std::span<const std::int8_t> a, std::span<const std::int8_t> b,
               float scale, std::int32_t bias, DotTrace* trace = nullptr);

// FP8 path: exact per-element products, sequential 32-bit real
// accumulation with round-to-nearest-even at each add, then bias, then
// scale. The two operands may use different minifloat formats.
float dot_fp8(std::span<const std::uint8_t> a, const FpFormatSpec& spec_a,
              std::span<const std::uint8_t> b, const FpFormatSpec& spec_b,
              float scale, float bias, DotTrace* trace = nullptr);

// Dispatch on the operand number systems; an INT x FP mix always fails
// with UnsupportedMixedOperands (the caller must requantize one side).
float dot_product(std::span<const std::uint8_t> a_codes,
                  const NumberSystem& a_system,
                  std::span<const std::uint8_t> b_codes,
                  const NumberSystem& b_system, float scale, double bias,
                  DotTrace* trace = nullptr);

std::string to_json(const DotTrace& trace);

}  // namespace flexquant

#endif  // FLEXQUANT_DATAPATH_HPP
