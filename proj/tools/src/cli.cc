// Copyright 2026 The Coolcodec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coolcodec_cli/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>

#include "coolcodec/bitstream.h"
#include "coolcodec/codec.h"
#include "coolcodec/error.h"
#include "coolcodec/image.h"

namespace coolcodec::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::vector<uint8_t> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const fs::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

void RequireReadable(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIo, "no such file: " + path.string());
  }
}

void RequireWritableDir(const fs::path& path) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : ".";
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "no such directory: " + dir.string());
  }
}

// JSON has no infinity; identical images report a null PSNR.
json PsnrJson(double psnr) { return std::isfinite(psnr) ? json(psnr) : json(); }

json ReportJson(const RdReport& r) {
  return {{"psnr_db", PsnrJson(r.psnr_db)},
          {"bpp_total", r.bpp_total},
          {"bpp_latent", r.bpp_latent},
          {"bpp_mlp", r.bpp_mlp},
          {"bpp_header", r.bpp_header},
          {"iterations", r.iterations},
          {"seconds", r.seconds},
          {"lambda", r.lambda},
          {"seed", r.seed},
          {"total_bytes", r.total_bytes},
          {"header_bytes", r.header_bytes},
          {"mlp_bytes", r.mlp_bytes},
          {"latent_bytes", r.latent_bytes}};
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kCorruptStream:
      return kExitCorruptStream;
    case ErrorCode::kDivergence:
      return kExitDivergence;
    default:
      return kExitUsage;
  }
}

struct EncodeArgs {
  std::string input;
  std::string output;
  std::optional<double> lambda;
  std::optional<int> quality;
  long iterations = EncodeConfig{}.iterations;
  uint64_t seed = 0;
  int width = EncodeConfig{}.hidden_width;
  int levels = EncodeConfig{}.num_levels;
  std::string report;
};

int RunEncode(const EncodeArgs& a, std::ostream& out) {
  RequireReadable(a.input);
  RequireWritableDir(a.output);
  const fs::path report_path = a.report.empty() ? a.output + ".json" : a.report;
  RequireWritableDir(report_path);

  EncodeConfig cfg;
  if (a.quality) cfg.lambda = LambdaForQuality(*a.quality);
  if (a.lambda) cfg.lambda = *a.lambda;
  cfg.iterations = a.iterations;
  cfg.seed = a.seed;
  cfg.hidden_width = a.width;
  cfg.num_levels = a.levels;
  cfg.Validate();

  const Image image = LoadImage(a.input);
  const EncodeResult result = Encode(image, cfg);
  WriteFile(a.output, result.stream);
  const std::string text = ReportJson(result.report).dump(2) + "\n";
  WriteFile(report_path, std::vector<uint8_t>(text.begin(), text.end()));
  out << text;
  return kExitOk;
}

int RunDecode(const std::string& input, const std::string& output, int threads) {
  RequireReadable(input);
  RequireWritableDir(output);
  const std::vector<uint8_t> stream = ReadFile(input);
  DecodeOptions options;
  options.threads = threads;
  SaveImage(Decode(stream, options), output);
  return kExitOk;
}

int RunEval(const std::string& original, const std::string& decoded,
            const std::string& stream_path, std::ostream& out) {
  RequireReadable(original);
  RequireReadable(decoded);
  RequireReadable(stream_path);
  const Image a = LoadImage(original);
  const Image b = LoadImage(decoded);
  if (a.height != b.height || a.width != b.width) {
    throw Error(ErrorCode::kInvalidArgument, "image sizes differ");
  }
  const std::vector<uint8_t> stream = ReadFile(stream_path);
  RdReport r = EstimateRateReport(stream, &a, &b);
  const StreamHeader h = ParseHeader(stream);
  if (h.height != a.height || h.width != a.width) {
    throw Error(ErrorCode::kInvalidArgument, "stream size differs from the images");
  }
  json j = ReportJson(r);
  for (const char* key : {"iterations", "seconds", "lambda", "seed"}) j.erase(key);
  j["height"] = h.height;
  j["width"] = h.width;
  out << j.dump(2) << "\n";
  return kExitOk;
}

int RunInfo(const std::string& input, std::ostream& out) {
  RequireReadable(input);
  const std::vector<uint8_t> stream = ReadFile(input);
  const Container c = ParseContainer(stream);
  const StreamHeader& h = c.header;
  out << "version=" << int{h.version} << "\n"
      << "H=" << h.height << "\n"
      << "W=" << h.width << "\n"
      << "L=" << int{h.num_levels} << "\n"
      << "C=" << int{h.num_contexts} << "\n"
      << "width=" << int{h.hidden_width} << "\n"
      << "synthesis_step=" << kWeightSteps[h.synthesis_step_index] << "\n"
      << "arm_step=" << kWeightSteps[h.arm_step_index] << "\n"
      << "synthesis_sigma=" << h.synthesis_sigma << "\n"
      << "arm_sigma=" << h.arm_sigma << "\n"
      << "amplitudes=";
  for (size_t k = 0; k < h.amplitudes.size(); ++k) {
    out << (k ? "," : "") << h.amplitudes[k];
  }
  out << "\n"
      << "arm_bytes=" << c.arm_weights.size() << "\n"
      << "synthesis_bytes=" << c.synthesis_weights.size() << "\n"
      << "latent_bytes=";
  for (size_t k = 0; k < c.latent_channels.size(); ++k) {
    out << (k ? "," : "") << c.latent_channels[k].size();
  }
  out << "\n"
      << "total_bytes=" << stream.size() << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Overfitted neural image codec", "coolcodec"};
  app.require_subcommand(1);

  EncodeArgs enc;
  CLI::App* encode = app.add_subcommand("encode", "Encode an image (PPM or PNG)");
  encode->add_option("input", enc.input, "Input image")->required();
  encode->add_option("output", enc.output, "Output stream")->required();
  CLI::Option* lambda_opt =
      encode->add_option("--lambda", enc.lambda, "Rate weight")
          ->check(CLI::PositiveNumber);
  CLI::Option* quality_opt =
      encode->add_option("--quality", enc.quality, "Preset 1 (small) .. 5 (best)")
          ->check(CLI::Range(1, 5));
  lambda_opt->excludes(quality_opt);
  encode->add_option("--iterations", enc.iterations, "Training iterations")
      ->check(CLI::PositiveNumber);
  encode->add_option("--seed", enc.seed, "Random seed");
  encode->add_option("--width", enc.width, "Hidden width of both MLPs")
      ->check(CLI::Range(1, 64));
  encode->add_option("--levels", enc.levels, "Latent pyramid levels")
      ->check(CLI::Range(1, 16));
  encode->add_option("--report", enc.report,
                     "JSON report path (default: <output>.json)");

  std::string dec_in, dec_out;
  int threads = 0;
  CLI::App* decode = app.add_subcommand("decode", "Decode a stream to PPM or PNG");
  decode->add_option("input", dec_in, "Input stream")->required();
  decode->add_option("output", dec_out, "Output image")->required();
  decode->add_option("--threads", threads, "Decoder threads (0: automatic)")
      ->check(CLI::NonNegativeNumber);

  std::string eval_orig, eval_dec, eval_stream;
  CLI::App* eval = app.add_subcommand("eval", "PSNR and rate split as JSON");
  eval->add_option("original", eval_orig, "Original image")->required();
  eval->add_option("decoded", eval_dec, "Decoded image")->required();
  eval->add_option("stream", eval_stream, "Stream")->required();

  std::string info_in;
  CLI::App* info = app.add_subcommand("info", "Print header fields");
  info->add_option("input", info_in, "Input stream")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*encode) return RunEncode(enc, out);
    if (*decode) return RunDecode(dec_in, dec_out, threads);
    if (*eval) return RunEval(eval_orig, eval_dec, eval_stream, out);
    return RunInfo(info_in, out);
  } catch (const Error& e) {
    err << "coolcodec: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "coolcodec: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace coolcodec::cli
