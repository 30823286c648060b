// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "flexquant/errors.hpp"
#include "flexquant/formats.hpp"
#include "support.hpp"

using namespace flexquant;

TEST_CASE("builtin candidate lists use the canonical order") {
  const auto eight = builtin_formats(8);
  REQUIRE(eight.size() == 5);
  CHECK(eight[0].name() == "int8");
  CHECK(eight[1].name() == "e5m2");
  CHECK(eight[2].name() == "e4m3");
  CHECK(eight[3].name() == "e3m4");
  CHECK(eight[4].name() == "e2m5");

  const auto six = builtin_formats(6);
  REQUIRE(six.size() == 3);
  CHECK(six[0].name() == "int6");
  CHECK(six[1].name() == "e3m2");
  CHECK(six[2].name() == "e2m3");

  CHECK_THROWS_AS(builtin_formats(7), InputError);
  CHECK_THROWS_AS(builtin_formats(4), InputError);
}

TEST_CASE("max normal values") {
  CHECK(max_normal(e2m5()) == 3.9375);
  CHECK(max_normal(e3m4()) == 15.5);
  CHECK(max_normal(e4m3()) == 240.0);
  CHECK(max_normal(e5m2()) == 57344.0);
  CHECK(max_normal(e3m2()) == 14.0);
  CHECK(max_normal(e2m3()) == 3.75);
  CHECK(max_normal(e4m3_nia()) == 448.0);
  CHECK(max_normal(e5m2_nia()) == 57344.0);
  CHECK(max_normal(e4m3_ieee()) == 240.0);
  CHECK(max_normal(e5m2_ieee()) == 57344.0);
}

TEST_CASE("min positive depends on the subnormal toggle") {
  CHECK(min_positive(e2m5()) == 0.03125);
  CHECK(min_positive(make_fp_spec(2, 5, SpecialPolicy::Ours, false)) == 1.0);
  CHECK(min_positive(e4m3()) == std::ldexp(1.0, -9));
  CHECK(min_normal(e4m3()) == 0.015625);
  CHECK(max_subnormal(e4m3()) == 0.013671875);
  CHECK(min_subnormal(e5m2()) == std::ldexp(1.0, -16));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(make_fp_spec(6, 1), InputError);
  CHECK_THROWS_AS(make_fp_spec(3, 3), InputError);  // 7 bits total
  CHECK_THROWS_AS(make_fp_spec(3, 4, SpecialPolicy::Nia), InputError);
  CHECK_THROWS_AS(make_fp_spec(2, 3, SpecialPolicy::Ieee754), InputError);
  CHECK(make_fp_spec(4, 3).bias == 7);
  CHECK(make_fp_spec(5, 2).bias == 15);
  CHECK(make_fp_spec(3, 4).bias == 3);
  CHECK(make_fp_spec(2, 5).bias == 1);
  CHECK(make_fp_spec(3, 2).bias == 3);
  CHECK(make_fp_spec(2, 3).bias == 1);
}

TEST_CASE("enumeration counts, order and symmetry") {
  struct Expect {
    FpFormatSpec spec;
    std::size_t count;
  };
  // 2^(1+e+m) minus reserved codes minus the duplicate zero.
  const Expect cases[] = {
      {e5m2(), 247},     {e4m3(), 239},     {e3m4(), 223}, {e2m5(), 191},
      {e3m2(), 55},      {e2m3(), 47},      {e5m2_nia(), 247},
      {e4m3_nia(), 253}, {e4m3_ieee(), 239},
      {make_fp_spec(2, 5, SpecialPolicy::Ours, false), 129},
  };
  for (const auto& [spec, count] : cases) {
    CAPTURE(NumberSystem::fp(spec).name());
    const auto values = enumerate_values(spec);
    CHECK(values.size() == count);
    CHECK(values.size() ==
          (1u << spec.total_bits()) - spec.reserved_codes() - 1);
    for (std::size_t i = 1; i < values.size(); ++i) {
      CHECK(values[i - 1] < values[i]);
    }
    // Sign symmetry: v present iff -v present.
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(values[values.size() - 1 - i] == -values[i]);
    }
    CHECK(values.front() == -max_normal(spec));
    CHECK(values.back() == max_normal(spec));
  }
}

TEST_CASE("enumeration matches the independent oracle decode") {
  for (const auto& spec : builtin_fp_variants()) {
    CAPTURE(NumberSystem::fp(spec).name());
    const auto values = enumerate_values(spec);
    const auto oracle = fxtest::oracle_values(spec);
    REQUIRE(values.size() == oracle.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(values[i] == oracle[i].value);
    }
  }
}

TEST_CASE("normal binade spacing is constant and equal to 2^(k-m)") {
  for (const auto& spec : builtin_fp_variants()) {
    CAPTURE(NumberSystem::fp(spec).name());
    const auto values = enumerate_values(spec);
    for (std::size_t i = 1; i < values.size(); ++i) {
      const double lo = values[i - 1], hi = values[i];
      if (lo < min_normal(spec) || hi >= 2 * std::ldexp(1.0, std::ilogb(lo))) {
        continue;  // not inside one normal binade
      }
      const int k = std::ilogb(lo);
      CHECK(hi - lo == std::ldexp(1.0, k - spec.mantissa_bits));
    }
  }
}

TEST_CASE("format names parse and round-trip") {
  const char* names[] = {"int8",     "int6",      "e5m2",       "e4m3",
                         "e3m4",     "e2m5",      "e3m2",       "e2m3",
                         "e4m3:nia", "e5m2:ieee", "e2m5:nosub", "e4m3:nia:nosub"};
  for (const char* name : names) {
    CAPTURE(name);
    CHECK(parse_number_system(name).name() == name);
  }
  CHECK(parse_number_system("e2m5:nosub").is_fp());
  CHECK_FALSE(parse_number_system("e2m5:nosub").fp_spec().subnormals_enabled);

  CHECK_THROWS_AS(parse_number_system("fp8"), InputError);
  CHECK_THROWS_AS(parse_number_system("e3m4:nia"), InputError);
  CHECK_THROWS_AS(parse_number_system("int8:nosub"), InputError);
  CHECK_THROWS_AS(parse_number_system("e4m3:bogus"), InputError);
  CHECK_THROWS_AS(parse_number_system(""), InputError);
  CHECK_THROWS_AS(parse_number_system("int4"), InputError);
}

TEST_CASE("number system basics") {
  const NumberSystem i8 = NumberSystem::integer(8);
  CHECK(i8.is_int());
  CHECK(i8.total_bits() == 8);
  CHECK_THROWS_AS(NumberSystem::integer(5), InputError);
  CHECK(NumberSystem::integer(4).name() == "int4");
  const NumberSystem f = NumberSystem::fp(e3m4());
  CHECK(f.is_fp());
  CHECK(f.total_bits() == 8);
  CHECK(f == NumberSystem::fp(e3m4()));
  CHECK_FALSE(f == NumberSystem::fp(e4m3()));
  CHECK_FALSE(f == i8);
}
