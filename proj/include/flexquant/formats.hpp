// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_FORMATS_HPP
#define FLEXQUANT_FORMATS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flexquant {

// How a format treats the all-ones exponent field.
//
//   Ours    - no Inf/NaN; the all-ones exponent carries no values at all
//             (the encoder saturates below it, the decoder rejects it).
//   Nia     - E4M3: all-ones exponent holds normals except S.1111.111 (NaN),
//             extending max normal to 448. E5M2: Inf/NaN like IEEE-754.
//   Ieee754 - all-ones exponent reserved for Inf/NaN.
enum class SpecialPolicy { Ours, Nia, Ieee754 };

// A minifloat format: 1 sign bit + `exponent_bits` + `mantissa_bits`,
// 6 or 8 bits total. Normal values decode as (-1)^s 2^(p-bias) (1 + d/2^m),
// subnormal values (p = 0) as (-1)^s 2^(1-bias) d/2^m.
struct FpFormatSpec {
  int exponent_bits = 0;
  int mantissa_bits = 0;
  int bias = 0;  // always 2^(e-1) - 1 for built-ins
  bool subnormals_enabled = true;
  SpecialPolicy policy = SpecialPolicy::Ours;

  int total_bits() const { return 1 + exponent_bits + mantissa_bits; }

  // Largest exponent field that carries values (Nia E4M3 uses the
  // all-ones field, everything else stops one below it).
  int max_exponent_field() const;
  // Largest mantissa field in that top binade (Nia E4M3 gives one code
  // up to NaN).
  int top_binade_max_mantissa() const;
  // Bit patterns that never carry a value (Inf/NaN codes, the unused
  // all-ones binade under Ours, subnormal codes when disabled).
  int reserved_codes() const;

  friend bool operator==(const FpFormatSpec&, const FpFormatSpec&) = default;
};

// Validates field widths (e, m in 2..5, total 6 or 8 bits) and the
// policy (Nia/Ieee754 exist only for E4M3 and E5M2, per their specs).
FpFormatSpec make_fp_spec(int exponent_bits, int mantissa_bits,
                          SpecialPolicy policy = SpecialPolicy::Ours,
                          bool subnormals_enabled = true);

inline FpFormatSpec e5m2() { return make_fp_spec(5, 2); }
inline FpFormatSpec e4m3() { return make_fp_spec(4, 3); }
inline FpFormatSpec e3m4() { return make_fp_spec(3, 4); }
inline FpFormatSpec e2m5() { return make_fp_spec(2, 5); }
inline FpFormatSpec e3m2() { return make_fp_spec(3, 2); }
inline FpFormatSpec e2m3() { return make_fp_spec(2, 3); }
inline FpFormatSpec e5m2_nia() { return make_fp_spec(5, 2, SpecialPolicy::Nia); }
inline FpFormatSpec e4m3_nia() { return make_fp_spec(4, 3, SpecialPolicy::Nia); }
inline FpFormatSpec e5m2_ieee() { return make_fp_spec(5, 2, SpecialPolicy::Ieee754); }
inline FpFormatSpec e4m3_ieee() { return make_fp_spec(4, 3, SpecialPolicy::Ieee754); }

// Largest finite positive value: 240 for E4M3 (Ours/Ieee754), 448 for
// E4M3 (Nia), 57344 for E5M2, 15.5 for E3M4, 3.9375 for E2M5.
double max_normal(const FpFormatSpec& spec);
// 2^(1-bias).
double min_normal(const FpFormatSpec& spec);
// Largest/smallest positive subnormal (defined even when disabled).
double max_subnormal(const FpFormatSpec& spec);
double min_subnormal(const FpFormatSpec& spec);
// Smallest positive representable magnitude; min subnormal when
// subnormals are enabled, min normal otherwise.
double min_positive(const FpFormatSpec& spec);

// Every finite representable value, ascending, +-0 collapsed to one 0.
std::vector<double> enumerate_values(const FpFormatSpec& spec);

// Either a signed symmetric integer format or a minifloat format.
struct NumberSystem {
  static NumberSystem integer(int bits);  // bits in {4, 6, 8}
  static NumberSystem fp(const FpFormatSpec& spec);

  bool is_int() const { return std::holds_alternative<int>(repr_); }
  bool is_fp() const { return !is_int(); }
  int int_bits() const;
  const FpFormatSpec& fp_spec() const;
  int total_bits() const;

  // Canonical string: "int8", "e4m3", "e4m3:nia", "e2m5:nosub", ...
  std::string name() const;

  friend bool operator==(const NumberSystem&, const NumberSystem&) = default;

 private:
  std::variant<int, FpFormatSpec> repr_ = 8;
};

// Inverse of NumberSystem::name(); accepts the ":nia"/":ieee"/":nosub"
// suffixes in any order.
NumberSystem parse_number_system(std::string_view name);

// Candidate sets in canonical order (integer first, then descending
// exponent width); this order is the tie-break everywhere downstream.
//   8 -> [int8, e5m2, e4m3, e3m4, e2m5]
//   6 -> [int6, e3m2, e2m3]
std::vector<NumberSystem> builtin_formats(int bit_width);

// The eight built-in minifloat variants: six Ours formats plus the two
// Nia comparison formats.
std::vector<FpFormatSpec> builtin_fp_variants();

}  // namespace flexquant

#endif  // FLEXQUANT_FORMATS_HPP
