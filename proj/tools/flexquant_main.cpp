// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0
//
// flexquant - calibrate, quantize, search formats, and simulate the
// mixed-format dot-product datapath over binary tensor files.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flexquant/codec.hpp"
#include "flexquant/datapath.hpp"
#include "flexquant/error_model.hpp"
#include "flexquant/errors.hpp"
#include "flexquant/formats.hpp"
#include "flexquant/quantizer.hpp"
#include "flexquant/search.hpp"
#include "flexquant/tensorio.hpp"

namespace {

using namespace flexquant;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitInternal = 4;

unsigned threads_from_env() {
  const char* env = std::getenv("FLEXQUANT_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 0) {
    throw InputError("FLEXQUANT_THREADS must be a non-negative integer");
  }
  return static_cast<unsigned>(v);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path + ": write failure");
}

int cmd_formats() {
  std::vector<NumberSystem> rows;
  for (int bits : {8, 6}) {
    for (const auto& f : builtin_formats(bits)) rows.push_back(f);
  }
  rows.push_back(NumberSystem::fp(e5m2_nia()));
  rows.push_back(NumberSystem::fp(e4m3_nia()));
  rows.push_back(NumberSystem::fp(e5m2_ieee()));
  rows.push_back(NumberSystem::fp(e4m3_ieee()));

  std::printf("%-12s %4s %5s %14s %14s %14s %14s\n", "format", "bits", "bias",
              "max_normal", "min_normal", "max_subnormal", "min_subnormal");
  for (const auto& sys : rows) {
    if (sys.is_int()) {
      const int c = (1 << (sys.int_bits() - 1)) - 1;
      std::printf("%-12s %4d %5s %14d %14d %14s %14s\n", sys.name().c_str(),
                  sys.int_bits(), "-", c, 1, "-", "-");
    } else {
      const auto& spec = sys.fp_spec();
      std::printf("%-12s %4d %5d %14.10g %14.10g %14.10g %14.10g\n",
                  sys.name().c_str(), spec.total_bits(), spec.bias,
                  max_normal(spec), min_normal(spec), max_subnormal(spec),
                  min_subnormal(spec));
    }
  }
  return kExitOk;
}

int cmd_quantize(const std::string& in_path, const std::string& format_name,
                 const std::string& out_path, const std::string& report_path) {
  const NumberSystem system = parse_number_system(format_name);
  const Tensor t = read_tensor(in_path);
  const QuantConfig cfg = calibrate_minmax(t, system);
  const QuantizedTensor q = quantize_tensor(t, cfg);
  if (!out_path.empty()) write_tensor(out_path, q.values);

  const ErrorBreakdown breakdown = error_breakdown(t, cfg);
  nlohmann::ordered_json j;
  j["format"] = system.name();
  j["scale"] = cfg.scale;
  j["clip_bound"] = cfg.clip_bound;
  j["degenerate"] = cfg.degenerate;
  j["breakdown"] = nlohmann::ordered_json::parse(to_json(breakdown));
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!report_path.empty()) write_text(report_path, text);
  if (cfg.degenerate) {
    std::fputs("warning: all-zero tensor, scale defaulted to 1\n", stderr);
  }
  return kExitOk;
}

int cmd_search(const std::vector<std::string>& weight_paths,
               const std::vector<std::string>& activation_paths,
               const std::string& policy_name, const std::string& criterion_name,
               int bits, std::uint64_t seed, std::size_t calib,
               const std::string& out_path, const std::string& hist_path,
               bool no_meta) {
  if (weight_paths.size() != activation_paths.size()) {
    throw InputError("search: need one activation file per weight file");
  }
  if (weight_paths.empty()) throw InputError("search: no layers given");

  std::vector<SearchLayer> layers;
  layers.reserve(weight_paths.size());
  for (std::size_t i = 0; i < weight_paths.size(); ++i) {
    SearchLayer layer;
    const std::size_t slash = weight_paths[i].find_last_of('/');
    layer.name = slash == std::string::npos ? weight_paths[i]
                                            : weight_paths[i].substr(slash + 1);
    layer.weights = read_tensor(weight_paths[i]);
    layer.inputs = read_tensor(activation_paths[i]);
    layers.push_back(std::move(layer));
  }

  SearchOptions options;
  options.policy = parse_policy(policy_name);
  options.criterion = parse_criterion(criterion_name);
  options.bit_width = bits;
  options.seed = seed;
  options.max_calib_rows = calib;
  options.threads = threads_from_env();

  const FormatReport report = run_search(layers, options);
  const std::string text = to_json(report, !no_meta);
  std::fputs(text.c_str(), stdout);
  if (!out_path.empty()) write_text(out_path, text);
  if (!hist_path.empty()) write_text(hist_path, histogram_csv(report));
  return kExitOk;
}

int cmd_dot(const std::string& a_path, const std::string& b_path,
            const std::string& format_a, const std::string& format_b,
            double scale, double bias, const std::string& out_path) {
  const NumberSystem sys_a = parse_number_system(format_a);
  const NumberSystem sys_b = parse_number_system(format_b);
  const Tensor a = read_tensor(a_path);
  const Tensor b = read_tensor(b_path);

  // File values are taken as already-dequantized grid points; encode
  // them at unit scale, then run the datapath with the given scale/bias.
  auto encode = [](const Tensor& t, const NumberSystem& sys) {
    std::vector<std::uint8_t> codes(t.data.size());
    if (sys.is_int()) {
      if (sys.int_bits() != 8) {
        throw InputError("dot: integer operands must be int8");
      }
      for (std::size_t i = 0; i < t.data.size(); ++i) {
        codes[i] = static_cast<std::uint8_t>(
            static_cast<std::int8_t>(int_quantize(t.data[i], 1.0, 8)));
      }
    } else {
      for (std::size_t i = 0; i < t.data.size(); ++i) {
        codes[i] = fp_encode_bits(t.data[i], sys.fp_spec());
      }
    }
    return codes;
  };

  const std::vector<std::uint8_t> a_codes = encode(a, sys_a);
  const std::vector<std::uint8_t> b_codes = encode(b, sys_b);

  DotTrace trace;
  const float result = dot_product(a_codes, sys_a, b_codes, sys_b,
                                   static_cast<float>(scale), bias, &trace);
  (void)result;
  const std::string text = to_json(trace);
  std::fputs(text.c_str(), stdout);
  if (!out_path.empty()) write_text(out_path, text);
  return kExitOk;
}

int fail_json(const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = message;
  j["exit_code"] = code;
  std::fputs((j.dump() + "\n").c_str(), stderr);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexible 8-bit/6-bit quantization toolkit"};
  app.require_subcommand(1);

  auto* formats_cmd = app.add_subcommand("formats", "list built-in formats");

  auto* quantize_cmd =
      app.add_subcommand("quantize", "MinMax-calibrate and quantize a tensor");
  std::string q_in, q_format, q_out, q_report;
  quantize_cmd->add_option("--in", q_in, "input tensor file")->required();
  quantize_cmd->add_option("--format", q_format, "target format")->required();
  quantize_cmd->add_option("--out", q_out, "quantized tensor output file");
  quantize_cmd->add_option("--report", q_report, "error breakdown JSON file");

  auto* search_cmd =
      app.add_subcommand("search", "select formats per layer");
  std::vector<std::string> s_weights, s_activations;
  std::string s_policy = "all-mixed", s_criterion = "mse";
  std::string s_out, s_hist;
  int s_bits = 8;
  std::uint64_t s_seed = 0;
  std::size_t s_calib = 256;
  bool s_no_meta = false;
  search_cmd->add_option("--weights", s_weights, "weight tensor files")
      ->required();
  search_cmd->add_option("--activations", s_activations,
                         "activation tensor files")
      ->required();
  search_cmd->add_option("--policy", s_policy,
                         "mixed-fp|all-mixed|limited-mix|nia");
  search_cmd->add_option("--criterion", s_criterion, "mse|resolution");
  search_cmd->add_option("--bits", s_bits, "candidate bit width (6 or 8)");
  search_cmd->add_option("--seed", s_seed, "calibration subsampling seed");
  search_cmd->add_option("--calib", s_calib, "max calibration rows");
  search_cmd->add_option("--out", s_out, "report JSON file");
  search_cmd->add_option("--histogram", s_hist, "selection histogram CSV file");
  search_cmd->add_flag("--no-meta", s_no_meta, "omit wall time from the report");

  auto* dot_cmd = app.add_subcommand("dot", "simulate one dot product");
  std::string d_a, d_b, d_fa, d_fb, d_out;
  double d_scale = 1.0, d_bias = 0.0;
  dot_cmd->add_option("--a", d_a, "left operand tensor file")->required();
  dot_cmd->add_option("--b", d_b, "right operand tensor file")->required();
  dot_cmd->add_option("--format-a", d_fa, "left operand format")->required();
  dot_cmd->add_option("--format-b", d_fb, "right operand format")->required();
  dot_cmd->add_option("--scale", d_scale, "output scale");
  dot_cmd->add_option("--bias", d_bias, "accumulator bias");
  dot_cmd->add_option("--out", d_out, "trace JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (formats_cmd->parsed()) return cmd_formats();
    if (quantize_cmd->parsed()) {
      return cmd_quantize(q_in, q_format, q_out, q_report);
    }
    if (search_cmd->parsed()) {
      return cmd_search(s_weights, s_activations, s_policy, s_criterion,
                        s_bits, s_seed, s_calib, s_out, s_hist, s_no_meta);
    }
    if (dot_cmd->parsed()) {
      return cmd_dot(d_a, d_b, d_fa, d_fb, d_scale, d_bias, d_out);
    }
  } catch (const UnsupportedMixedOperands& e) {
    return fail_json(e.what(), kExitUnsupported);
  } catch (const InputError& e) {
    return fail_json(e.what(), kExitInput);
  } catch (const std::exception& e) {
    return fail_json(e.what(), kExitInternal);
  }
  return kExitInternal;
}
