// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/datapath.hpp"

#include <cmath>

#include "json.hpp"

#include "flexquant/errors.hpp"

namespace flexquant {

namespace {

constexpr int kFp19ExpBits = 8, kFp19ManBits = 10, kFp19Bias = 127;
constexpr int kFp11ExpBits = 5, kFp11ManBits = 5, kFp11Bias = 15;

double lane_value(int exp_bits, int man_bits, int bias, std::uint8_t sign,
                  std::int32_t exponent, std::uint32_t mantissa) {
  (void)exp_bits;
  double v;
  if (exponent == 0) {
    v = std::ldexp(static_cast<double>(mantissa), 1 - bias - man_bits);
  } else {
    v = std::ldexp(static_cast<double>((1u << man_bits) + mantissa),
                   exponent - bias - man_bits);
  }
  return sign ? -v : v;
}

// Packs an exact value into sign/exponent/mantissa lane fields; the
// value must be representable (callers only pass lossless embeddings).
DecodedOperand pack_lane(LaneFormat lane, int man_bits, int bias, double v) {
  DecodedOperand op;
  op.lane = lane;
  if (v == 0.0) return op;
  op.sign = std::signbit(v) ? 1 : 0;
  const double a = std::fabs(v);
  const double mn = std::ldexp(1.0, 1 - bias);
  if (a < mn) {
    const double man = std::ldexp(a, bias - 1 + man_bits);
    op.exponent = 0;
    op.mantissa = static_cast<std::uint32_t>(man);
    if (man != op.mantissa || op.mantissa >= (1u << man_bits)) {
      throw InternalError("lossy lane embedding");
    }
  } else {
    const int k = std::ilogb(a);
    const double man = std::ldexp(a, man_bits - k) - (1 << man_bits);
    op.exponent = k + bias;
    op.mantissa = static_cast<std::uint32_t>(man);
    if (man != op.mantissa || op.exponent >= (1 << (lane == LaneFormat::Fp19
                                                        ? kFp19ExpBits
                                                        : kFp11ExpBits))) {
      throw InternalError("lossy lane embedding");
    }
  }
  return op;
}

}  // namespace

double DecodedOperand::value() const {
  switch (lane) {
    case LaneFormat::Fp19:
      return lane_value(kFp19ExpBits, kFp19ManBits, kFp19Bias, sign, exponent,
                        mantissa);
    case LaneFormat::Fp11:
      return lane_value(kFp11ExpBits, kFp11ManBits, kFp11Bias, sign, exponent,
                        mantissa);
    case LaneFormat::Int9:
      return payload;
  }
  throw InternalError("bad lane tag");
}

DecodedOperand decode_bf16(std::uint16_t raw) {
  const std::uint8_t sign = raw >> 15;
  const std::int32_t exp = (raw >> 7) & 0xFF;
  const std::uint32_t man = raw & 0x7F;
  if (exp == 0xFF) throw InputError("decode_bf16: Inf/NaN input");
  DecodedOperand op;
  op.lane = LaneFormat::Fp19;
  op.sign = sign;
  op.exponent = exp;  // BF16 shares the 8-bit exponent and bias 127
  op.mantissa = man << 3;
  return op;
}

DecodedOperand decode_fp16(std::uint16_t raw) {
  const std::uint8_t sign = raw >> 15;
  const std::int32_t exp = (raw >> 10) & 0x1F;
  const std::uint32_t man = raw & 0x3FF;
  if (exp == 0x1F) throw InputError("decode_fp16: Inf/NaN input");
  double v;
  if (exp == 0) {
    v = std::ldexp(static_cast<double>(man), 1 - 15 - 10);
  } else {
    v = std::ldexp(static_cast<double>(1024 + man), exp - 15 - 10);
  }
  DecodedOperand op =
      pack_lane(LaneFormat::Fp19, kFp19ManBits, kFp19Bias, sign ? -v : v);
  return op;
}

DecodedOperand decode_fp8(const Code& code) {
  if (code.format.total_bits() != 8) {
    throw InputError("decode_fp8: source must be an 8-bit minifloat");
  }
  return pack_lane(LaneFormat::Fp11, kFp11ManBits, kFp11Bias, fp_decode(code));
}

DecodedOperand decode_int8(std::int8_t v) {
  DecodedOperand op;
  op.lane = LaneFormat::Int9;
  op.payload = v;
  return op;
}

DecodedOperand decode_uint8(std::uint8_t v) {
  DecodedOperand op;
  op.lane = LaneFormat::Int9;
  op.payload = v;  // zero-extends; the 9th bit is the sign headroom
  return op;
}

int lanes_used(OperandKind kind) {
  switch (kind) {
    case OperandKind::Bf16:
    case OperandKind::Fp16:
      return 1;
    case OperandKind::Fp8:
    case OperandKind::Int8:
    case OperandKind::Uint8:
      return 2;
  }
  throw InputError("lanes_used: unsupported source format");
}

float dot_int8(std::span<const std::int8_t> a, std::span<const std::int8_t> b,
               float scale, std::int32_t bias, DotTrace* trace) {
  if (a.size() != b.size()) throw InputError("dot_int8: length mismatch");
  if (static_cast<std::uint64_t>(a.size()) * (127ull * 127ull) >=
      (1ull << 31)) {
    throw InputError("dot_int8: length could overflow the 32-bit accumulator");
  }
  if (trace) {
    trace->mode = "int8";
    trace->lanes = lanes_used(OperandKind::Int8);
    trace->products.clear();
    trace->partials.clear();
  }
  std::int32_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int32_t p =
        static_cast<std::int32_t>(decode_int8(a[i]).payload) *
        decode_int8(b[i]).payload;
    acc += p;
    if (trace) {
      trace->products.push_back(p);
      trace->partials.push_back(acc);
    }
  }
  const std::int64_t biased = static_cast<std::int64_t>(acc) + bias;
  const float result = static_cast<float>(biased) * scale;
  if (trace) {
    trace->bias_applied = static_cast<double>(biased);
    trace->result = result;
  }
  return result;
}

float dot_fp8(std::span<const std::uint8_t> a, const FpFormatSpec& spec_a,
              std::span<const std::uint8_t> b, const FpFormatSpec& spec_b,
              float scale, float bias, DotTrace* trace) {
  if (a.size() != b.size()) throw InputError("dot_fp8: length mismatch");
  if (trace) {
    trace->mode = "fp8";
    trace->lanes = lanes_used(OperandKind::Fp8);
    trace->products.clear();
    trace->partials.clear();
  }
  float acc = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double va = decode_fp8(Code{a[i], spec_a}).value();
    const double vb = decode_fp8(Code{b[i], spec_b}).value();
    const float p = static_cast<float>(va * vb);  // exact: <= 12 mantissa bits
    acc += p;
    if (trace) {
      trace->products.push_back(p);
      trace->partials.push_back(acc);
    }
  }
  acc += bias;
  const float result = acc * scale;
  if (trace) {
    trace->bias_applied = acc;
    trace->result = result;
  }
  return result;
}

float dot_product(std::span<const std::uint8_t> a_codes,
                  const NumberSystem& a_system,
                  std::span<const std::uint8_t> b_codes,
                  const NumberSystem& b_system, float scale, double bias,
                  DotTrace* trace) {
  if (a_system.is_int() != b_system.is_int()) {
    throw UnsupportedMixedOperands();
  }
  if (a_system.is_int()) {
    if (a_system.int_bits() != 8 || b_system.int_bits() != 8) {
      throw InputError("dot_product: integer path supports int8 only");
    }
    const double rounded = std::nearbyint(bias);
    if (rounded != bias || std::fabs(bias) > 2147483647.0) {
      throw InputError("dot_product: int8 bias must be a 32-bit integer");
    }
    return dot_int8(
        std::span<const std::int8_t>(
            reinterpret_cast<const std::int8_t*>(a_codes.data()),
            a_codes.size()),
        std::span<const std::int8_t>(
            reinterpret_cast<const std::int8_t*>(b_codes.data()),
            b_codes.size()),
        scale, static_cast<std::int32_t>(rounded), trace);
  }
  return dot_fp8(a_codes, a_system.fp_spec(), b_codes, b_system.fp_spec(),
                 scale, static_cast<float>(bias), trace);
}

std::string to_json(const DotTrace& trace) {
  nlohmann::ordered_json j;
  j["mode"] = trace.mode;
  j["lanes"] = trace.lanes;
  j["products"] = trace.products;
  j["partials"] = trace.partials;
  j["bias_applied"] = trace.bias_applied;
  j["result"] = trace.result;
  return j.dump(2) + "\n";
}

}  // namespace flexquant
