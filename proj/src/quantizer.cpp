// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/quantizer.hpp"

#include <cmath>

#include "flexquant/codec.hpp"
#include "flexquant/errors.hpp"

namespace flexquant {

double representable_max(const NumberSystem& system) {
  if (system.is_int()) return (1 << (system.int_bits() - 1)) - 1;
  return max_normal(system.fp_spec());
}

QuantConfig make_config(const NumberSystem& system, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("scale must be positive and finite");
  }
  QuantConfig cfg;
  cfg.system = system;
  cfg.scale = scale;
  cfg.clip_bound = scale * representable_max(system);
  return cfg;
}

QuantConfig calibrate_minmax(const Tensor& t, const NumberSystem& system) {
  if (t.data.empty()) throw InputError("calibrate_minmax: empty tensor");
  double maxabs = 0.0;
  for (float v : t.data) {
    const double a = std::fabs(static_cast<double>(v));
    if (a > maxabs) maxabs = a;
  }
  if (maxabs == 0.0) {
    QuantConfig cfg = make_config(system, 1.0);
    cfg.degenerate = true;
    return cfg;
  }
  QuantConfig cfg;
  cfg.system = system;
  cfg.scale = maxabs / representable_max(system);
  // scale * representable_max == maxabs in exact arithmetic; anchoring
  // the bound there keeps the extreme element un-clipped.
  cfg.clip_bound = maxabs;
  return cfg;
}

double quantize_element(double x, const QuantConfig& cfg) {
  if (cfg.system.is_int()) {
    const int bits = cfg.system.int_bits();
    return int_dequantize(int_quantize(x, cfg.scale, bits), cfg.scale, bits);
  }
  return cfg.scale * fp_quantize_value(x / cfg.scale, cfg.system.fp_spec());
}

QuantizedTensor quantize_tensor(const Tensor& t, const QuantConfig& cfg) {
  if (!(cfg.scale > 0.0)) throw InputError("quantize_tensor: invalid scale");
  QuantizedTensor out;
  out.values.shape = t.shape;
  out.values.data.resize(t.data.size());
  out.codes.resize(t.data.size());
  if (cfg.system.is_int()) {
    const int bits = cfg.system.int_bits();
    const std::uint8_t mask = static_cast<std::uint8_t>((1 << bits) - 1);
    for (std::size_t i = 0; i < t.data.size(); ++i) {
      const int q = int_quantize(t.data[i], cfg.scale, bits);
      out.values.data[i] = static_cast<float>(q * cfg.scale);
      out.codes[i] = static_cast<std::uint8_t>(q) & mask;
    }
  } else {
    const FpFormatSpec& spec = cfg.system.fp_spec();
    for (std::size_t i = 0; i < t.data.size(); ++i) {
      const std::uint8_t bits = fp_encode_bits(t.data[i] / cfg.scale, spec);
      out.values.data[i] =
          static_cast<float>(cfg.scale * fp_decode_bits(bits, spec));
      out.codes[i] = bits;
    }
  }
  return out;
}

double element_resolution(double x, const QuantConfig& cfg) {
  if (cfg.system.is_int()) return cfg.scale;
  const FpFormatSpec& spec = cfg.system.fp_spec();
  const int m = spec.mantissa_bits;
  const double u = std::fabs(x) / cfg.scale;
  const double mn = min_normal(spec);
  if (u < mn) {
    const int sub_exp =
        spec.subnormals_enabled ? 1 - spec.bias - m : 1 - spec.bias;
    return cfg.scale * std::ldexp(1.0, sub_exp);
  }
  int k = std::ilogb(u);
  const int k_top = spec.max_exponent_field() - spec.bias;
  if (k > k_top) k = k_top;  // clipped elements get the top binade
  return cfg.scale * std::ldexp(1.0, k - m);
}

ResolutionProfile resolution_profile(const Tensor& t, const QuantConfig& cfg) {
  ResolutionProfile r(t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    r[i] = element_resolution(t.data[i], cfg);
  }
  return r;
}

}  // namespace flexquant
