// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_SEARCH_HPP
#define FLEXQUANT_SEARCH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flexquant/formats.hpp"
#include "flexquant/tensor.hpp"

namespace flexquant {

// Which (weight, input) format pairs a layer may use.
//   MixedFp    - fp candidates only
//   AllMixed   - int + fp, weights and inputs free to differ
//   LimitedMix - weights and inputs share a number-system family
//                (both int or both fp; the fp formats may differ)
//   NiaOnly    - {e5m2:nia, e4m3:nia}
//   IntOnly    - the integer format alone
enum class MixPolicy { MixedFp, AllMixed, LimitedMix, NiaOnly, IntOnly };

// What the search minimizes.
//   OutputMse - joint search over pairs on the layer-output MSE
//   TensorMse - per-tensor MSE, weights and inputs independently
//   Resolution - per-tensor resolution bound, independently; no
//                quantized products are evaluated during selection
enum class Criterion { OutputMse, TensorMse, Resolution };

std::string to_string(MixPolicy policy);
std::string to_string(Criterion criterion);
MixPolicy parse_policy(const std::string& name);
Criterion parse_criterion(const std::string& name);

// Candidates for one tensor slot under the policy, canonical order.
std::vector<NumberSystem> policy_candidates(MixPolicy policy, int bit_width);

struct TensorSelection {
  NumberSystem format;
  std::vector<std::pair<NumberSystem, double>> losses;  // canonical order
  bool degenerate = false;
};

// Calibrates each candidate with MinMax and picks the loss minimizer;
// ties go to the earlier candidate. Criterion OutputMse/TensorMse uses
// mse(t, quantized t), Resolution uses the resolution bound.
TensorSelection select_tensor_format(const Tensor& t,
                                     const std::vector<NumberSystem>& candidates,
                                     Criterion criterion);

using FormatPair = std::pair<NumberSystem, NumberSystem>;  // (weight, input)

struct LayerSelection {
  std::string name;
  NumberSystem weight_format;
  NumberSystem input_format;
  double loss = 0.0;  // realized output MSE of the chosen pair
  std::vector<std::pair<FormatPair, double>> loss_table;
  Criterion criterion = Criterion::OutputMse;
  bool degenerate = false;
};

// W is (out, in), X is (batch, in); the layer surrogate is W * X^T.
// OutputMse evaluates every policy-admissible pair. TensorMse and
// Resolution pick the two formats independently (for LimitedMix, within
// the better of the two families by summed per-tensor loss) and then
// report the realized output MSE of that single pair.
LayerSelection select_layer_formats(const Tensor& weights, const Tensor& inputs,
                                    MixPolicy policy, Criterion criterion,
                                    int bit_width = 8);

struct SearchLayer {
  std::string name;
  Tensor weights;
  Tensor inputs;
};

struct SearchOptions {
  MixPolicy policy = MixPolicy::AllMixed;
  Criterion criterion = Criterion::OutputMse;
  int bit_width = 8;
  std::size_t max_calib_rows = 256;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct FormatHistogramRow {
  std::string format;
  std::size_t weight_count = 0;
  std::size_t input_count = 0;
};

struct FormatReport {
  std::vector<LayerSelection> layers;
  std::vector<FormatHistogramRow> histogram;  // canonical candidate order
  MixPolicy policy = MixPolicy::AllMixed;
  Criterion criterion = Criterion::OutputMse;
  int bit_width = 8;
  double wall_ms = 0.0;
};

// Runs select_layer_formats over every layer (inputs subsampled to
// max_calib_rows first) and aggregates the selection histogram. Results
// are independent of the thread count.
FormatReport run_search(const std::vector<SearchLayer>& layers,
                        const SearchOptions& options);

// Seeded deterministic row subsample (identity when rows <= max_rows).
Tensor subsample_rows(const Tensor& t, std::size_t max_rows,
                      std::uint64_t seed);

// Reference product W * X^T as a row-major (out x batch) buffer;
// accumulation order is fixed, so results are reproducible.
std::vector<double> matmul_wxt(const Tensor& weights, const Tensor& inputs);

// {"policy":..., "criterion":..., "bits":..., "layers":[...],
//  "histogram":{...}, "wall_ms":...}; wall_ms is dropped when
// with_meta is false so reruns compare byte-identical.
std::string to_json(const FormatReport& report, bool with_meta = true);
std::string histogram_csv(const FormatReport& report);

}  // namespace flexquant

#endif  // FLEXQUANT_SEARCH_HPP
