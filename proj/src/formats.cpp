// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/formats.hpp"

#include <algorithm>
#include <cmath>

#include "flexquant/codec.hpp"
#include "flexquant/errors.hpp"

namespace flexquant {

int FpFormatSpec::max_exponent_field() const {
  const int all_ones = (1 << exponent_bits) - 1;
  if (policy == SpecialPolicy::Nia && exponent_bits == 4) return all_ones;
  return all_ones - 1;
}

int FpFormatSpec::top_binade_max_mantissa() const {
  const int all_ones = (1 << mantissa_bits) - 1;
  if (policy == SpecialPolicy::Nia && exponent_bits == 4) return all_ones - 1;
  return all_ones;
}

int FpFormatSpec::reserved_codes() const {
  // Codes in the all-ones exponent binade that carry no value, per sign.
  int top;
  if (policy == SpecialPolicy::Nia && exponent_bits == 4) {
    top = 1;  // only S.1111.111 (NaN)
  } else {
    top = 1 << mantissa_bits;  // the whole binade (Inf/NaN or unused)
  }
  int sub = subnormals_enabled ? 0 : (1 << mantissa_bits) - 1;
  return 2 * (top + sub);
}

FpFormatSpec make_fp_spec(int exponent_bits, int mantissa_bits,
                          SpecialPolicy policy, bool subnormals_enabled) {
  if (exponent_bits < 2 || exponent_bits > 5 || mantissa_bits < 2 ||
      mantissa_bits > 5) {
    throw InputError("fp format fields out of range: e=" +
                     std::to_string(exponent_bits) +
                     " m=" + std::to_string(mantissa_bits));
  }
  const int total = 1 + exponent_bits + mantissa_bits;
  if (total != 6 && total != 8) {
    throw InputError("fp format must be 6 or 8 bits wide, got " +
                     std::to_string(total));
  }
  if (policy != SpecialPolicy::Ours &&
      !(total == 8 && (exponent_bits == 4 || exponent_bits == 5))) {
    throw InputError("nia/ieee variants exist only for e4m3 and e5m2");
  }
  FpFormatSpec spec;
  spec.exponent_bits = exponent_bits;
  spec.mantissa_bits = mantissa_bits;
  spec.bias = (1 << (exponent_bits - 1)) - 1;
  spec.subnormals_enabled = subnormals_enabled;
  spec.policy = policy;
  return spec;
}

double max_normal(const FpFormatSpec& spec) {
  const int m = spec.mantissa_bits;
  const int top_exp = spec.max_exponent_field() - spec.bias;
  return std::ldexp((1 << m) + spec.top_binade_max_mantissa(), top_exp - m);
}

double min_normal(const FpFormatSpec& spec) {
  return std::ldexp(1.0, 1 - spec.bias);
}

double max_subnormal(const FpFormatSpec& spec) {
  const int m = spec.mantissa_bits;
  return std::ldexp((1 << m) - 1, 1 - spec.bias - m);
}

double min_subnormal(const FpFormatSpec& spec) {
  return std::ldexp(1.0, 1 - spec.bias - spec.mantissa_bits);
}

double min_positive(const FpFormatSpec& spec) {
  return spec.subnormals_enabled ? min_subnormal(spec) : min_normal(spec);
}

std::vector<double> enumerate_values(const FpFormatSpec& spec) {
  std::vector<double> values;
  const int n_codes = 1 << spec.total_bits();
  values.reserve(static_cast<std::size_t>(n_codes));
  for (int c = 0; c < n_codes; ++c) {
    const auto bits = static_cast<std::uint8_t>(c);
    if (!is_valid_code(bits, spec)) continue;
    values.push_back(fp_decode_bits(bits, spec));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

NumberSystem NumberSystem::integer(int bits) {
  if (bits != 4 && bits != 6 && bits != 8) {
    throw InputError("integer format must be 4, 6 or 8 bits, got " +
                     std::to_string(bits));
  }
  NumberSystem s;
  s.repr_ = bits;
  return s;
}

NumberSystem NumberSystem::fp(const FpFormatSpec& spec) {
  NumberSystem s;
  s.repr_ = spec;
  return s;
}

int NumberSystem::int_bits() const {
  if (!is_int()) throw InternalError("int_bits() on fp number system");
  return std::get<int>(repr_);
}

const FpFormatSpec& NumberSystem::fp_spec() const {
  if (!is_fp()) throw InternalError("fp_spec() on integer number system");
  return std::get<FpFormatSpec>(repr_);
}

int NumberSystem::total_bits() const {
  return is_int() ? int_bits() : fp_spec().total_bits();
}

std::string NumberSystem::name() const {
  if (is_int()) return "int" + std::to_string(int_bits());
  const auto& spec = fp_spec();
  std::string n = "e" + std::to_string(spec.exponent_bits) + "m" +
                  std::to_string(spec.mantissa_bits);
  if (spec.policy == SpecialPolicy::Nia) n += ":nia";
  if (spec.policy == SpecialPolicy::Ieee754) n += ":ieee";
  if (!spec.subnormals_enabled) n += ":nosub";
  return n;
}

NumberSystem parse_number_system(std::string_view name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= name.size()) {
    const std::size_t colon = name.find(':', start);
    const std::size_t end = colon == std::string_view::npos ? name.size() : colon;
    parts.emplace_back(name.substr(start, end - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.empty() || parts.front().empty()) {
    throw InputError("empty format name");
  }

  const std::string& base = parts.front();
  if (base == "int8" || base == "int6") {
    if (parts.size() > 1) {
      throw InputError("integer formats take no suffix: " + std::string(name));
    }
    return NumberSystem::integer(base == "int8" ? 8 : 6);
  }

  int e = 0, m = 0;
  if (base.size() == 4 && base[0] == 'e' && base[2] == 'm' &&
      base[1] >= '0' && base[1] <= '9' && base[3] >= '0' && base[3] <= '9') {
    e = base[1] - '0';
    m = base[3] - '0';
  } else {
    throw InputError("unknown format name: " + std::string(name));
  }

  SpecialPolicy policy = SpecialPolicy::Ours;
  bool subnormals = true;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i] == "nia") {
      policy = SpecialPolicy::Nia;
    } else if (parts[i] == "ieee") {
      policy = SpecialPolicy::Ieee754;
    } else if (parts[i] == "nosub") {
      subnormals = false;
    } else {
      throw InputError("unknown format suffix ':" + parts[i] + "' in " +
                       std::string(name));
    }
  }
  return NumberSystem::fp(make_fp_spec(e, m, policy, subnormals));
}

std::vector<NumberSystem> builtin_formats(int bit_width) {
  if (bit_width == 8) {
    return {NumberSystem::integer(8), NumberSystem::fp(e5m2()),
            NumberSystem::fp(e4m3()), NumberSystem::fp(e3m4()),
            NumberSystem::fp(e2m5())};
  }
  if (bit_width == 6) {
    return {NumberSystem::integer(6), NumberSystem::fp(e3m2()),
            NumberSystem::fp(e2m3())};
  }
  throw InputError("unsupported bit width: " + std::to_string(bit_width));
}

std::vector<FpFormatSpec> builtin_fp_variants() {
  return {e5m2(), e4m3(), e3m4(), e2m5(), e3m2(), e2m3(), e5m2_nia(),
          e4m3_nia()};
}

}  // namespace flexquant
