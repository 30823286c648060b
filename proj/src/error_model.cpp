// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/error_model.hpp"

#include <cmath>

#include "json.hpp"

#include "flexquant/errors.hpp"

namespace flexquant {

ErrorBreakdown error_breakdown(const Tensor& t, const QuantConfig& cfg) {
  if (t.data.empty()) throw InputError("error_breakdown: empty tensor");
  ErrorBreakdown b;
  b.count = t.data.size();
  double clip_sum = 0.0, round_sum = 0.0, res_sum = 0.0;
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    const double x = t.data[i];
    const double a = std::fabs(x);
    if (a > cfg.clip_bound) {
      const double d = a - cfg.clip_bound;
      clip_sum += d * d;
    } else {
      const double q = static_cast<float>(quantize_element(x, cfg));
      const double d = x - q;
      round_sum += d * d;
      const double r = element_resolution(x, cfg);
      res_sum += r * r;
    }
  }
  const double inv = 1.0 / static_cast<double>(b.count);
  b.clip = clip_sum * inv;
  b.round = round_sum * inv;
  b.total = b.clip + b.round;
  b.resolution_bound = res_sum * inv * 0.25;
  return b;
}

double resolution_bound(const Tensor& t, const QuantConfig& cfg) {
  if (t.data.empty()) throw InputError("resolution_bound: empty tensor");
  double res_sum = 0.0;
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    const double a = std::fabs(static_cast<double>(t.data[i]));
    if (a > cfg.clip_bound) continue;
    const double r = element_resolution(t.data[i], cfg);
    res_sum += r * r;
  }
  return res_sum / static_cast<double>(t.data.size()) * 0.25;
}

double mse(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) throw InputError("mse: shape mismatch");
  if (a.data.empty()) throw InputError("mse: empty tensor");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.data.size());
}

std::string to_json(const ErrorBreakdown& b) {
  nlohmann::ordered_json j;
  j["total"] = b.total;
  j["clip"] = b.clip;
  j["round"] = b.round;
  j["count"] = b.count;
  j["resolution_bound"] = b.resolution_bound;
  return j.dump();
}

}  // namespace flexquant
