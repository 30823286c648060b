// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "flexquant/codec.hpp"
#include "flexquant/errors.hpp"
#include "support.hpp"

using namespace flexquant;

TEST_CASE("encode hits the documented bit patterns") {
  CHECK(fp_encode_bits(240.0, e4m3()) == 0b0'1110'111);
  CHECK(fp_encode_bits(-240.0, e4m3()) == 0b1'1110'111);
  CHECK(fp_encode_bits(0.0, e4m3()) == 0);
  CHECK(fp_encode_bits(0.0, e2m5()) == 0);
  CHECK(fp_encode_bits(0.03125, e2m5()) == 0b0'00'00001);
  CHECK(fp_encode_bits(448.0, e4m3_nia()) == 0b0'1111'110);
  CHECK(fp_encode_bits(1.0, e4m3()) == 0b0'0111'000);
}

TEST_CASE("saturation goes to max normal with the input's sign") {
  CHECK(fp_quantize_value(1000.0, e4m3()) == 240.0);
  CHECK(fp_quantize_value(-1000.0, e4m3()) == -240.0);
  CHECK(fp_quantize_value(1e30, e2m5()) == 3.9375);
  CHECK(fp_quantize_value(1000.0, e4m3_nia()) == 448.0);
  CHECK(fp_quantize_value(240.0, e4m3()) == 240.0);
}

TEST_CASE("decode hits the documented values") {
  CHECK(fp_decode_bits(0b0'110'1111, e3m4()) == 15.5);
  CHECK(fp_decode_bits(0b1'00000'00, e5m2()) == 0.0);
  CHECK_FALSE(std::signbit(fp_decode_bits(0b1'00000'00, e5m2())));
  CHECK(fp_decode_bits(0b0'0000'001, e4m3()) == 0.001953125);
  CHECK(fp_decode_bits(0b0'00'00001, e2m5()) == 0.03125);
  CHECK(fp_decode_bits(0b0'1111'110, e4m3_nia()) == 448.0);
}

TEST_CASE("reserved and invalid codes are rejected") {
  // Ours: the all-ones exponent binade carries no values.
  CHECK_FALSE(is_valid_code(0b0'1111'000, e4m3()));
  CHECK_THROWS_AS(fp_decode_bits(0b0'1111'000, e4m3()), InputError);
  CHECK_THROWS_AS(fp_decode_bits(0b0'11111'01, e5m2()), InputError);
  // Nia E4M3 keeps everything in the top binade except the NaN slot.
  CHECK(is_valid_code(0b0'1111'110, e4m3_nia()));
  CHECK_FALSE(is_valid_code(0b0'1111'111, e4m3_nia()));
  CHECK_FALSE(is_valid_code(0b1'1111'111, e4m3_nia()));
  // Nia/Ieee754 E5M2 reserve the whole top binade (Inf + NaN).
  CHECK_FALSE(is_valid_code(0b0'11111'00, e5m2_nia()));
  CHECK_FALSE(is_valid_code(0b0'11111'11, e5m2_nia()));
  CHECK_FALSE(is_valid_code(0b0'11111'00, e5m2_ieee()));
  // Ieee754 E4M3 reserves all S.1111.* codes.
  for (int man = 0; man < 8; ++man) {
    CHECK_FALSE(is_valid_code(static_cast<std::uint8_t>(0b0'1111'000 | man),
                              e4m3_ieee()));
  }
  // Subnormal codes are invalid when subnormals are disabled.
  const auto nosub = make_fp_spec(2, 5, SpecialPolicy::Ours, false);
  CHECK_FALSE(is_valid_code(0b0'00'00001, nosub));
  CHECK(is_valid_code(0, nosub));
  CHECK(is_valid_code(0b0'01'00000, nosub));
  // Out-of-width bits.
  CHECK_FALSE(is_valid_code(0x40, e3m2()));
  CHECK_THROWS_AS(fp_encode(std::nan(""), e4m3()), InputError);
  CHECK_THROWS_AS(fp_encode(INFINITY, e4m3()), InputError);
}

TEST_CASE("exhaustive roundtrip over every valid code") {
  for (const auto& spec : builtin_fp_variants()) {
    CAPTURE(NumberSystem::fp(spec).name());
    const int n = 1 << spec.total_bits();
    const std::uint8_t minus_zero =
        static_cast<std::uint8_t>(1 << (spec.total_bits() - 1));
    int valid = 0;
    for (int c = 0; c < n; ++c) {
      const auto bits = static_cast<std::uint8_t>(c);
      if (!is_valid_code(bits, spec)) continue;
      ++valid;
      const double v = fp_decode_bits(bits, spec);
      const std::uint8_t back = fp_encode_bits(v, spec);
      const std::uint8_t expect = bits == minus_zero ? 0 : bits;
      CHECK(back == expect);
    }
    CHECK(valid == (1 << spec.total_bits()) - spec.reserved_codes());
  }
}

TEST_CASE("round-to-nearest-even at exact midpoints") {
  // Between 1.0 (mantissa 0000) and 1.0625 (0001) in E3M4: halfway is
  // 1.03125, which must go down to the even mantissa.
  CHECK(fp_quantize_value(1.03125, e3m4()) == 1.0);
  // Between 1.0625 (0001) and 1.125 (0010): halfway goes up to even.
  CHECK(fp_quantize_value(1.09375, e3m4()) == 1.125);
  // Across a binade boundary: top of [1,2) is 1.9375 (mantissa 1111,
  // odd), bottom of [2,4) is 2.0 (mantissa 0000, even).
  CHECK(fp_quantize_value(1.96875, e3m4()) == 2.0);
  // Subnormal grid of E2M5: 0.03125 * k; halfway between 0 and min
  // subnormal goes to 0, halfway between codes 1 and 2 goes to 2.
  CHECK(fp_quantize_value(0.015625, e2m5()) == 0.0);
  CHECK(fp_quantize_value(0.046875, e2m5()) == 0.0625);
  // With subnormals disabled both sides of the {0, 1} gap have even
  // mantissa; the tie resolves to the zero side.
  const auto nosub = make_fp_spec(2, 5, SpecialPolicy::Ours, false);
  CHECK(fp_quantize_value(0.5, nosub) == 0.0);
  CHECK(fp_quantize_value(-0.5, nosub) == 0.0);
  CHECK(fp_quantize_value(0.5000001, nosub) == 1.0);
  CHECK(fp_quantize_value(0.4999999, nosub) == 0.0);
}

TEST_CASE("random values match the brute-force nearest oracle") {
  for (const auto& spec : builtin_fp_variants()) {
    CAPTURE(NumberSystem::fp(spec).name());
    const auto oracle = fxtest::oracle_values(spec);
    fxtest::Rng rng(0xC0DEC + spec.exponent_bits * 31 + spec.mantissa_bits);
    const double top = max_normal(spec);
    for (int i = 0; i < 10000; ++i) {
      double x;
      if (i % 2 == 0) {
        x = rng.uniform(-1.5 * top, 1.5 * top);
      } else {
        const double mag = std::exp2(
            rng.uniform(std::log2(min_subnormal(spec)) - 2.0,
                        std::log2(top) + 1.0));
        x = rng.uniform() < 0.5 ? -mag : mag;
      }
      const double got = fp_quantize_value(x, spec);
      const double want = fxtest::oracle_nearest(x, oracle);
      CAPTURE(x);
      CHECK(got == want);
    }
  }
}

TEST_CASE("quantize value properties") {
  for (const auto& spec : builtin_fp_variants()) {
    CAPTURE(NumberSystem::fp(spec).name());
    fxtest::Rng rng(0xFACADE);
    double prev_x = -2.0 * max_normal(spec);
    double prev_q = fp_quantize_value(prev_x, spec);
    for (int i = 0; i < 2000; ++i) {
      const double x = rng.uniform(-1.2, 1.2) * max_normal(spec);
      const double q = fp_quantize_value(x, spec);
      // Idempotent and sign-symmetric.
      CHECK(fp_quantize_value(q, spec) == q);
      CHECK(fp_quantize_value(-x, spec) == -q);
      // Monotone (compare against the previous sample).
      if (x >= prev_x) {
        CHECK(q >= prev_q);
      } else {
        CHECK(q <= prev_q);
      }
      prev_x = x;
      prev_q = q;
    }
  }
}

TEST_CASE("integer quantization") {
  CHECK(int_quantize(1.0, 1.0 / 127, 8) == 127);
  CHECK(int_quantize(-5.0, 1.0, 8) == -5);
  CHECK(int_quantize(200.0, 1.0, 8) == 127);
  CHECK(int_quantize(-200.0, 1.0, 8) == -127);
  CHECK(int_quantize(40.0, 1.0, 6) == 31);
  CHECK(int_quantize(0.5, 1.0, 8) == 0);   // half to even
  CHECK(int_quantize(1.5, 1.0, 8) == 2);
  CHECK(int_quantize(2.5, 1.0, 8) == 2);
  CHECK_THROWS_AS(int_quantize(1.0, 0.0, 8), InputError);
  CHECK_THROWS_AS(int_quantize(1.0, -1.0, 8), InputError);
  CHECK_THROWS_AS(int_quantize(1.0, 1.0, 7), InputError);

  CHECK(int_dequantize(127, 1.0 / 127) == 1.0);
  CHECK(int_dequantize(0, 123.0) == 0.0);
  CHECK_THROWS_AS(int_dequantize(128, 1.0), InputError);
  CHECK_THROWS_AS(int_dequantize(-128, 1.0), InputError);
  CHECK_THROWS_AS(int_dequantize(32, 1.0, 6), InputError);

  // Roundtrip bound: |dq(q(x)) - x| <= step/2 inside the clip range.
  fxtest::Rng rng(0x1B17);
  for (int i = 0; i < 2000; ++i) {
    const double step = std::exp2(rng.uniform(-8.0, 3.0));
    const double x = rng.uniform(-127.0, 127.0) * step;
    const double back = int_dequantize(int_quantize(x, step, 8), step);
    CHECK(std::fabs(back - x) <= step / 2);
  }
}
