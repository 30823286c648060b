// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/search.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "json.hpp"

#include "flexquant/error_model.hpp"
#include "flexquant/errors.hpp"
#include "flexquant/quantizer.hpp"
#include "parallel.hpp"

namespace flexquant {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double tensor_loss(const Tensor& t, const QuantConfig& cfg,
                   Criterion criterion) {
  if (criterion == Criterion::Resolution) return resolution_bound(t, cfg);
  return mse(t, quantize_tensor(t, cfg).values);
}

double output_mse(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

// Family split for LimitedMix: integer candidates first, fp second.
std::vector<std::vector<NumberSystem>> families(
    const std::vector<NumberSystem>& candidates) {
  std::vector<NumberSystem> ints, fps;
  for (const auto& c : candidates) (c.is_int() ? ints : fps).push_back(c);
  std::vector<std::vector<NumberSystem>> out;
  if (!ints.empty()) out.push_back(std::move(ints));
  if (!fps.empty()) out.push_back(std::move(fps));
  return out;
}

}  // namespace

std::string to_string(MixPolicy policy) {
  switch (policy) {
    case MixPolicy::MixedFp: return "mixed-fp";
    case MixPolicy::AllMixed: return "all-mixed";
    case MixPolicy::LimitedMix: return "limited-mix";
    case MixPolicy::NiaOnly: return "nia";
    case MixPolicy::IntOnly: return "int-only";
  }
  throw InternalError("bad policy tag");
}

std::string to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::OutputMse: return "mse";
    case Criterion::TensorMse: return "tensor-mse";
    case Criterion::Resolution: return "resolution";
  }
  throw InternalError("bad criterion tag");
}

MixPolicy parse_policy(const std::string& name) {
  if (name == "mixed-fp") return MixPolicy::MixedFp;
  if (name == "all-mixed") return MixPolicy::AllMixed;
  if (name == "limited-mix") return MixPolicy::LimitedMix;
  if (name == "nia") return MixPolicy::NiaOnly;
  if (name == "int-only") return MixPolicy::IntOnly;
  throw InputError("unknown policy: " + name);
}

Criterion parse_criterion(const std::string& name) {
  if (name == "mse") return Criterion::OutputMse;
  if (name == "tensor-mse") return Criterion::TensorMse;
  if (name == "resolution") return Criterion::Resolution;
  throw InputError("unknown criterion: " + name);
}

std::vector<NumberSystem> policy_candidates(MixPolicy policy, int bit_width) {
  const std::vector<NumberSystem> all = builtin_formats(bit_width);
  switch (policy) {
    case MixPolicy::AllMixed:
    case MixPolicy::LimitedMix:
      return all;
    case MixPolicy::MixedFp:
      return {all.begin() + 1, all.end()};
    case MixPolicy::IntOnly:
      return {all.front()};
    case MixPolicy::NiaOnly:
      if (bit_width != 8) {
        throw InputError("nia policy exists only at 8 bits");
      }
      return {NumberSystem::fp(e5m2_nia()), NumberSystem::fp(e4m3_nia())};
  }
  throw InternalError("bad policy tag");
}

TensorSelection select_tensor_format(const Tensor& t,
                                     const std::vector<NumberSystem>& candidates,
                                     Criterion criterion) {
  if (candidates.empty()) {
    throw InputError("select_tensor_format: empty candidate list");
  }
  TensorSelection sel;
  sel.losses.reserve(candidates.size());
  std::size_t best = 0;
  double best_loss = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const QuantConfig cfg = calibrate_minmax(t, candidates[i]);
    sel.degenerate = sel.degenerate || cfg.degenerate;
    const double loss = tensor_loss(t, cfg, criterion);
    sel.losses.emplace_back(candidates[i], loss);
    if (i == 0 || loss < best_loss) {
      best = i;
      best_loss = loss;
    }
  }
  sel.format = candidates[best];
  return sel;
}

std::vector<double> matmul_wxt(const Tensor& weights, const Tensor& inputs) {
  const std::size_t out = weights.rows();
  const std::size_t in = weights.cols();
  const std::size_t batch = inputs.rows();
  if (inputs.cols() != in) {
    throw InputError("matmul_wxt: inner dimensions do not match");
  }
  std::vector<double> r(out * batch, 0.0);
  for (std::size_t i = 0; i < out; ++i) {
    for (std::size_t j = 0; j < batch; ++j) {
      double acc = 0.0;
      const float* wrow = weights.data.data() + i * in;
      const float* xrow = inputs.data.data() + j * in;
      for (std::size_t k = 0; k < in; ++k) {
        acc += static_cast<double>(wrow[k]) * xrow[k];
      }
      r[i * batch + j] = acc;
    }
  }
  return r;
}

LayerSelection select_layer_formats(const Tensor& weights, const Tensor& inputs,
                                    MixPolicy policy, Criterion criterion,
                                    int bit_width) {
  if (weights.shape.size() != 2 || inputs.shape.size() != 2) {
    throw InputError("select_layer_formats: W and X must be 2-D");
  }
  if (weights.cols() != inputs.cols()) {
    throw InputError("select_layer_formats: W is (out,in), X is (batch,in); "
                     "inner dims differ");
  }
  const std::vector<NumberSystem> candidates =
      policy_candidates(policy, bit_width);

  LayerSelection sel;
  sel.criterion = criterion;
  const std::vector<double> reference = matmul_wxt(weights, inputs);

  auto realized = [&](const NumberSystem& wf, const NumberSystem& xf,
                      bool* degenerate) {
    const QuantConfig wc = calibrate_minmax(weights, wf);
    const QuantConfig xc = calibrate_minmax(inputs, xf);
    if (degenerate) *degenerate = wc.degenerate || xc.degenerate;
    const Tensor qw = quantize_tensor(weights, wc).values;
    const Tensor qx = quantize_tensor(inputs, xc).values;
    return output_mse(matmul_wxt(qw, qx), reference);
  };

  if (criterion == Criterion::OutputMse) {
    // Quantize once per candidate, evaluate every admissible pair.
    std::vector<Tensor> qw, qx;
    qw.reserve(candidates.size());
    qx.reserve(candidates.size());
    for (const auto& c : candidates) {
      const QuantConfig wc = calibrate_minmax(weights, c);
      const QuantConfig xc = calibrate_minmax(inputs, c);
      sel.degenerate = sel.degenerate || wc.degenerate || xc.degenerate;
      qw.push_back(quantize_tensor(weights, wc).values);
      qx.push_back(quantize_tensor(inputs, xc).values);
    }
    bool have_best = false;
    std::size_t best_i = 0, best_j = 0;
    double best_loss = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (policy == MixPolicy::LimitedMix &&
            candidates[i].is_int() != candidates[j].is_int()) {
          continue;
        }
        const double loss = output_mse(matmul_wxt(qw[i], qx[j]), reference);
        sel.loss_table.emplace_back(
            FormatPair{candidates[i], candidates[j]}, loss);
        if (!have_best || loss < best_loss) {
          have_best = true;
          best_i = i;
          best_j = j;
          best_loss = loss;
        }
      }
    }
    sel.weight_format = candidates[best_i];
    sel.input_format = candidates[best_j];
    sel.loss = best_loss;
    return sel;
  }

  // Factorized criteria: weights and inputs selected independently.
  NumberSystem wf, xf;
  if (policy == MixPolicy::LimitedMix) {
    bool have_best = false;
    double best_score = 0.0;
    for (const auto& family : families(candidates)) {
      const TensorSelection sw = select_tensor_format(weights, family, criterion);
      const TensorSelection sx = select_tensor_format(inputs, family, criterion);
      double loss_w = 0.0, loss_x = 0.0;
      for (const auto& [fmt, loss] : sw.losses) {
        if (fmt == sw.format) loss_w = loss;
      }
      for (const auto& [fmt, loss] : sx.losses) {
        if (fmt == sx.format) loss_x = loss;
      }
      const double score = loss_w + loss_x;
      sel.degenerate = sel.degenerate || sw.degenerate || sx.degenerate;
      if (!have_best || score < best_score) {
        have_best = true;
        best_score = score;
        wf = sw.format;
        xf = sx.format;
      }
    }
  } else {
    const TensorSelection sw = select_tensor_format(weights, candidates, criterion);
    const TensorSelection sx = select_tensor_format(inputs, candidates, criterion);
    sel.degenerate = sw.degenerate || sx.degenerate;
    wf = sw.format;
    xf = sx.format;
  }
  bool deg = false;
  const double loss = realized(wf, xf, &deg);
  sel.degenerate = sel.degenerate || deg;
  sel.weight_format = wf;
  sel.input_format = xf;
  sel.loss = loss;
  sel.loss_table.emplace_back(FormatPair{wf, xf}, loss);
  return sel;
}

Tensor subsample_rows(const Tensor& t, std::size_t max_rows,
                      std::uint64_t seed) {
  if (t.shape.size() != 2) throw InputError("subsample_rows: need a 2-D tensor");
  const std::size_t rows = t.rows();
  if (max_rows == 0 || rows <= max_rows) return t;
  // Fisher-Yates over row indices with an explicit generator, so the
  // subset is identical on every platform.
  std::vector<std::size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  std::uint64_t state = seed;
  for (std::size_t i = rows - 1; i > 0; --i) {
    const std::size_t j =
        static_cast<std::size_t>(splitmix64(state) % (i + 1));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(max_rows);
  std::sort(idx.begin(), idx.end());  // keep original row order
  const std::size_t cols = t.cols();
  Tensor out;
  out.shape = {max_rows, cols};
  out.data.reserve(max_rows * cols);
  for (std::size_t r : idx) {
    const float* row = t.data.data() + r * cols;
    out.data.insert(out.data.end(), row, row + cols);
  }
  return out;
}

FormatReport run_search(const std::vector<SearchLayer>& layers,
                        const SearchOptions& options) {
  if (layers.empty()) throw InputError("run_search: no layers");
  const auto start = std::chrono::steady_clock::now();

  FormatReport report;
  report.policy = options.policy;
  report.criterion = options.criterion;
  report.bit_width = options.bit_width;
  report.layers.resize(layers.size());

  parallel_for(layers.size(), options.threads, [&](std::size_t i) {
    std::uint64_t state = options.seed + 0x51ED2701ull * (i + 1);
    const std::uint64_t layer_seed = splitmix64(state);
    const Tensor inputs =
        subsample_rows(layers[i].inputs, options.max_calib_rows, layer_seed);
    LayerSelection sel = select_layer_formats(
        layers[i].weights, inputs, options.policy, options.criterion,
        options.bit_width);
    sel.name = layers[i].name;
    report.layers[i] = std::move(sel);
  });

  // Histogram over the policy's candidate list plus anything else that
  // was actually selected (canonical order first).
  std::vector<std::string> order;
  for (const auto& c : policy_candidates(options.policy, options.bit_width)) {
    order.push_back(c.name());
  }
  std::map<std::string, FormatHistogramRow> rows;
  for (const auto& name : order) rows[name].format = name;
  for (const auto& layer : report.layers) {
    auto& w = rows[layer.weight_format.name()];
    w.format = layer.weight_format.name();
    w.weight_count++;
    auto& x = rows[layer.input_format.name()];
    x.format = layer.input_format.name();
    x.input_count++;
  }
  for (const auto& name : order) {
    report.histogram.push_back(rows.at(name));
    rows.erase(name);
  }
  for (auto& [name, row] : rows) report.histogram.push_back(row);

  const auto end = std::chrono::steady_clock::now();
  report.wall_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

std::string to_json(const FormatReport& report, bool with_meta) {
  nlohmann::ordered_json j;
  j["policy"] = to_string(report.policy);
  j["criterion"] = to_string(report.criterion);
  j["bits"] = report.bit_width;
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& layer : report.layers) {
    nlohmann::ordered_json lj;
    lj["name"] = layer.name;
    lj["w_format"] = layer.weight_format.name();
    lj["x_format"] = layer.input_format.name();
    lj["loss"] = layer.loss;
    nlohmann::ordered_json table;
    for (const auto& [pair, loss] : layer.loss_table) {
      table[pair.first.name() + "/" + pair.second.name()] = loss;
    }
    lj["loss_table"] = std::move(table);
    if (layer.degenerate) lj["degenerate"] = true;
    j["layers"].push_back(std::move(lj));
  }
  nlohmann::ordered_json hist;
  for (const auto& row : report.histogram) {
    hist[row.format] = {{"w", row.weight_count}, {"x", row.input_count}};
  }
  j["histogram"] = std::move(hist);
  if (with_meta) j["wall_ms"] = report.wall_ms;
  return j.dump(2) + "\n";
}

std::string histogram_csv(const FormatReport& report) {
  std::string csv = "format,w_count,x_count\n";
  for (const auto& row : report.histogram) {
    csv += row.format + "," + std::to_string(row.weight_count) + "," +
           std::to_string(row.input_count) + "\n";
  }
  return csv;
}

}  // namespace flexquant
