// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only helpers: a deterministic RNG (identical streams on every
// platform) and an independent minifloat decode used as the oracle
// against the library codec.

#ifndef FLEXQUANT_TESTS_SUPPORT_HPP
#define FLEXQUANT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "flexquant/formats.hpp"
#include "flexquant/tensor.hpp"

namespace fxtest {

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller standard normal.
  double gaussian() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

  std::size_t index(std::size_t n) { return next() % n; }
};

inline flexquant::Tensor gaussian_tensor(std::uint64_t seed, std::size_t n,
                                         double sigma = 1.0) {
  Rng rng(seed);
  std::vector<float> data(n);
  for (auto& v : data) v = static_cast<float>(sigma * rng.gaussian());
  return flexquant::Tensor::from({n}, std::move(data));
}

// Gaussian matrix with a seed-determined fraction of amplified outliers,
// which is what makes the synthetic layers look like real weight/activation
// tensors (bell curve with long tails).
inline flexquant::Tensor outlier_matrix(std::uint64_t seed, std::size_t rows,
                                        std::size_t cols, double sigma,
                                        double outlier_fraction,
                                        double outlier_gain) {
  Rng rng(seed);
  std::vector<float> data(rows * cols);
  for (auto& v : data) {
    double x = sigma * rng.gaussian();
    if (outlier_fraction > 0.0 && rng.uniform() < outlier_fraction) {
      x *= outlier_gain;
    }
    v = static_cast<float>(x);
  }
  return flexquant::Tensor::from({rows, cols}, std::move(data));
}

// Straight transcription of the normal/subnormal value equations plus the
// policy's reserved patterns; deliberately independent of the library
// decode path.
inline std::optional<double> oracle_decode(std::uint8_t bits,
                                           const flexquant::FpFormatSpec& spec) {
  using flexquant::SpecialPolicy;
  const int e = spec.exponent_bits, m = spec.mantissa_bits, b = spec.bias;
  if (bits >> (1 + e + m)) return std::nullopt;
  const int sign = bits >> (e + m);
  const int p = (bits >> m) & ((1 << e) - 1);
  const int d = bits & ((1 << m) - 1);

  const bool top = p == (1 << e) - 1;
  if (top) {
    if (spec.policy == SpecialPolicy::Ours) return std::nullopt;
    if (spec.policy == SpecialPolicy::Ieee754) return std::nullopt;
    // Nia: E5M2 reserves the whole binade, E4M3 only the NaN slot.
    if (e == 5) return std::nullopt;
    if (d == (1 << m) - 1) return std::nullopt;
  }
  if (p == 0 && d != 0 && !spec.subnormals_enabled) return std::nullopt;

  double v;
  if (p == 0) {
    v = std::pow(2.0, 1 - b) * (static_cast<double>(d) / (1 << m));
  } else {
    v = std::pow(2.0, p - b) * (1.0 + static_cast<double>(d) / (1 << m));
  }
  if (v == 0.0) return 0.0;
  return sign ? -v : v;
}

// (value, mantissa field) for every valid code, ascending by value with
// the +-0 duplicate removed. The mantissa parity drives the tie rule.
struct OracleEntry {
  double value;
  int mantissa;
};

inline std::vector<OracleEntry> oracle_values(const flexquant::FpFormatSpec& spec) {
  std::vector<OracleEntry> entries;
  for (int c = 0; c < (1 << spec.total_bits()); ++c) {
    const auto decoded = oracle_decode(static_cast<std::uint8_t>(c), spec);
    if (!decoded) continue;
    if (*decoded == 0.0 && (c >> (spec.total_bits() - 1)) != 0) continue;
    entries.push_back({*decoded, c & ((1 << spec.mantissa_bits) - 1)});
  }
  std::sort(entries.begin(), entries.end(),
            [](const OracleEntry& a, const OracleEntry& b) {
              return a.value < b.value;
            });
  return entries;
}

// Nearest value with ties to the even mantissa; the only double-even tie
// (0 vs min normal with subnormals disabled) resolves to the smaller
// magnitude.
inline double oracle_nearest(double x, const std::vector<OracleEntry>& entries) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double di = std::fabs(x - entries[i].value);
    const double db = std::fabs(x - entries[best].value);
    if (di < db) {
      best = i;
    } else if (di == db) {
      const bool i_even = (entries[i].mantissa & 1) == 0;
      const bool b_even = (entries[best].mantissa & 1) == 0;
      if (i_even && !b_even) {
        best = i;
      } else if (i_even == b_even &&
                 std::fabs(entries[i].value) < std::fabs(entries[best].value)) {
        best = i;
      }
    }
  }
  return entries[best].value;
}

}  // namespace fxtest

#endif  // FLEXQUANT_TESTS_SUPPORT_HPP
