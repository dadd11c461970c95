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

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "coolcodec/codec.h"
#include "coolcodec/error.h"
#include "coolcodec/grad.h"
#include "coolcodec/random.h"
#include "coolcodec/synthesis.h"
#include "coolcodec/upsample.h"

namespace coolcodec {

double LearningRateSchedule::RateAt(long iteration, long total_iterations) const {
  const double boundary = constant_fraction * static_cast<double>(total_iterations);
  const double it = static_cast<double>(iteration);
  if (it < boundary || total_iterations <= 0) return peak_rate;
  const double span = static_cast<double>(total_iterations) - boundary;
  const double t = span > 0.0 ? std::min(1.0, (it - boundary) / span) : 1.0;
  return final_rate +
         0.5 * (peak_rate - final_rate) * (1.0 + std::cos(std::numbers::pi * t));
}

double LambdaForQuality(int quality) {
  if (quality < 1 || quality > static_cast<int>(kQualityLambdas.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "quality must be in 1.." + std::to_string(kQualityLambdas.size()));
  }
  return kQualityLambdas[quality - 1];
}

void EncodeConfig::Validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
  if (iterations < 1) fail("iterations must be at least 1");
  if (num_levels < 1 || num_levels > 16) fail("levels must be in 1..16");
  if (num_contexts != ContextPattern::Default().size()) {
    fail("the stream format carries exactly 12 context pixels");
  }
  if (hidden_width < 1 || hidden_width > 64) fail("width must be in 1..64");
  if (!(quantized_eval_fraction >= 0.0 && quantized_eval_fraction <= 1.0)) {
    fail("quantized_eval_fraction must be in [0, 1]");
  }
  if (!(schedule.peak_rate > 0.0) || !(schedule.final_rate > 0.0) ||
      !(schedule.constant_fraction >= 0.0 && schedule.constant_fraction <= 1.0)) {
    fail("invalid learning rate schedule");
  }
  if (step_candidates.empty()) fail("step_candidates is empty");
  for (int s : step_candidates) {
    if (s < 0 || s >= static_cast<int>(kWeightSteps.size())) {
      fail("step candidate index out of range");
    }
  }
}

namespace {

// Trainable state: one parameter per latent channel, then weight and bias
// per layer of the synthesis and ARM networks.
struct Model {
  int height = 0;
  int width = 0;
  MlpArchitecture synthesis_arch;
  MlpArchitecture arm_arch;
  std::vector<grad::Parameter> latents;
  std::vector<grad::Parameter> synthesis;  // weight, bias per layer
  std::vector<grad::Parameter> arm;

  std::vector<grad::Parameter*> All() {
    std::vector<grad::Parameter*> out;
    for (auto* group : {&latents, &synthesis, &arm}) {
      for (grad::Parameter& p : *group) out.push_back(&p);
    }
    return out;
  }
};

std::vector<grad::Parameter> ToParameters(const MlpWeights& w) {
  std::vector<grad::Parameter> out;
  for (const DenseLayer& layer : w.layers) {
    out.emplace_back(layer.weight);
    out.emplace_back(layer.bias);
  }
  return out;
}

MlpWeights FromParameters(const MlpArchitecture& arch,
                          const std::vector<grad::Parameter>& params) {
  MlpWeights w = MlpWeights::Zeros(arch);
  for (size_t l = 0; l < w.layers.size(); ++l) {
    w.layers[l].weight = params[2 * l].values;
    w.layers[l].bias = params[2 * l + 1].values;
  }
  return w;
}

LatentPyramid LatentsOf(const Model& m) {
  LatentPyramid y = LatentPyramid::Create(m.height, m.width,
                                          static_cast<int>(m.latents.size()));
  for (int k = 0; k < y.num_levels(); ++k) {
    y.channel(k).values = m.latents[k].values;
  }
  return y;
}

Model InitialModel(const Image& image, const EncodeConfig& cfg) {
  Model m;
  m.height = image.height;
  m.width = image.width;
  m.synthesis_arch = MlpArchitecture::Synthesis(cfg.num_levels, cfg.hidden_width);
  m.arm_arch = MlpArchitecture::Arm(cfg.num_contexts, cfg.hidden_width);
  const LatentPyramid y = LatentPyramid::Create(image.height, image.width,
                                                cfg.num_levels);
  for (const Grid& g : y.channels()) m.latents.emplace_back(g.values);
  Rng rng(cfg.seed);
  m.synthesis = ToParameters(MlpWeights::RandomInit(m.synthesis_arch, rng));
  m.arm = ToParameters(MlpWeights::RandomInit(m.arm_arch, rng));
  return m;
}

grad::Var MlpGraph(grad::Tape& tape, grad::Var x, const MlpArchitecture& arch,
                   std::vector<grad::Parameter>& params) {
  for (int l = 0; l < arch.num_layers(); ++l) {
    const grad::Var weight =
        tape.Leaf(params[2 * l], arch.layer_out(l), arch.layer_in(l));
    const grad::Var bias = tape.Leaf(params[2 * l + 1], 1, arch.layer_out(l));
    x = tape.Affine(x, weight, bias);
    if (l + 1 < arch.num_layers()) x = tape.Relu(x);
  }
  return x;
}

// Builds the noisy-latent training loss on the tape and returns it.
grad::Var TrainingLoss(grad::Tape& tape, Model& m, const std::vector<double>& target,
                       const ContextPattern& pattern, double lambda, Rng& rng,
                       std::vector<double>& noise) {
  const int levels = static_cast<int>(m.latents.size());
  std::vector<grad::Var> noisy(levels);
  std::vector<grad::Var> columns(levels);
  std::vector<grad::Var> contexts(levels);
  std::vector<grad::Var> flat(levels);
  for (int k = 0; k < levels; ++k) {
    const int h = LevelExtent(m.height, k);
    const int w = LevelExtent(m.width, k);
    noise.resize(m.latents[k].size());
    for (double& u : noise) u = rng.Uniform(-0.5, 0.5);
    noisy[k] = tape.Add(tape.Leaf(m.latents[k], h, w), tape.Constant(noise, h, w));
    grad::Var up = noisy[k];
    for (int j = k - 1; j >= 0; --j) {
      up = tape.UpsampleX2(up, LevelExtent(m.height, j), LevelExtent(m.width, j));
    }
    columns[k] = up;
    contexts[k] = tape.GatherContext(noisy[k], pattern);
    flat[k] = tape.Reshape(noisy[k], h * w, 1);
  }
  const grad::Var dense = tape.StackColumns(columns);
  const grad::Var rgb = MlpGraph(tape, dense, m.synthesis_arch, m.synthesis);
  const int pixels = m.height * m.width;
  const grad::Var mse =
      tape.MeanSquaredError(rgb, tape.Constant(target, pixels, 3));
  const grad::Var net =
      MlpGraph(tape, tape.ConcatRows(contexts), m.arm_arch, m.arm);
  const grad::Var rate = tape.LaplaceRate(tape.ConcatRows(flat), net);
  return tape.Add(mse, tape.Scale(rate, lambda / pixels));
}

// Loss of the model as the decoder would see it with unquantized weights:
// rounded latents, 8-bit output.
double QuantizedLoss(const Model& m, const Image& image,
                     const ContextPattern& pattern, double lambda) {
  const LatentPyramid q = Quantize(LatentsOf(m));
  const Image recon =
      Synthesize(BuildDense(q), FromParameters(m.synthesis_arch, m.synthesis));
  const double d = MeanSquaredError(image, recon) / (255.0 * 255.0);
  const double r = RateBits(q, FromParameters(m.arm_arch, m.arm), pattern);
  return d + lambda * r / static_cast<double>(image.pixel_count());
}

struct TrainOutcome {
  Model model;
  bool diverged = false;
};

TrainOutcome Train(const Image& image, const EncodeConfig& cfg, double rate_scale,
                   const TrainingObserver& observer) {
  const ContextPattern pattern = ContextPattern::Default();
  std::vector<double> target(image.samples.size());
  for (size_t i = 0; i < target.size(); ++i) {
    target[i] = SampleToUnit(image.samples[i]);
  }

  TrainOutcome out{InitialModel(image, cfg), false};
  Model& m = out.model;
  std::vector<grad::Parameter*> params = m.All();
  grad::AdamOptimizer adam;
  grad::Tape tape;
  Rng noise_rng(cfg.seed ^ 0x9E3779B97F4A7C15ull);
  std::vector<double> noise;

  const long total = cfg.iterations;
  const long eval_count = static_cast<long>(
      std::ceil(cfg.quantized_eval_fraction * static_cast<double>(total)));
  const long eval_start = total - eval_count;
  std::optional<Model> best;
  double best_loss = std::numeric_limits<double>::infinity();

  for (long it = 0; it < total; ++it) {
    adam.learning_rate = rate_scale * cfg.schedule.RateAt(it, total);
    tape.Clear();
    for (grad::Parameter* p : params) p->ZeroGrad();
    const grad::Var loss =
        TrainingLoss(tape, m, target, pattern, cfg.lambda, noise_rng, noise);
    const double value = tape.scalar(loss);
    if (!std::isfinite(value)) {
      out.diverged = true;
      return out;
    }
    tape.Backprop(loss);
    try {
      grad::AdamStep(adam, params);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDivergence) throw;
      out.diverged = true;
      return out;
    }
    if (observer) observer({it, value, adam.learning_rate});
    if (it >= eval_start) {
      double q = std::numeric_limits<double>::infinity();
      try {
        q = QuantizedLoss(m, image, pattern, cfg.lambda);
      } catch (const Error&) {
      }
      if (q < best_loss) {
        best_loss = q;
        best = m;
      }
    }
  }
  if (best) m = std::move(*best);
  return out;
}

}  // namespace

EncodeResult Encode(const Image& image, const EncodeConfig& cfg,
                    const TrainingObserver& observer) {
  cfg.Validate();
  if (image.channels != 3 || image.height < 1 || image.width < 1 ||
      image.height > 0xFFFF || image.width > 0xFFFF ||
      image.samples.size() != image.pixel_count() * 3) {
    throw Error(ErrorCode::kInvalidArgument, "image must be RGB, 1..65535 per side");
  }
  if (image.pixel_count() > kMaxStreamPixels) {
    throw Error(ErrorCode::kInvalidArgument, "image too large");
  }
  const auto start = std::chrono::steady_clock::now();

  EncodeResult result;
  TrainOutcome trained = Train(image, cfg, 1.0, observer);
  if (trained.diverged) {
    result.restarts = 1;
    trained = Train(image, cfg, 0.2, observer);
    if (trained.diverged) {
      throw Error(ErrorCode::kDivergence,
                  "training loss became non-finite after a restart");
    }
  }
  const Model& m = trained.model;
  const ContextPattern pattern = ContextPattern::Default();
  const LatentPyramid latents = Quantize(LatentsOf(m));
  const MlpWeights synthesis = FromParameters(m.synthesis_arch, m.synthesis);
  const MlpWeights arm = FromParameters(m.arm_arch, m.arm);

  StepSearchInput search{&image, &latents, &synthesis, &arm, &pattern, cfg.lambda};
  result.step_search = SearchSteps(search, cfg.step_candidates);
  const QuantizedMlp synthesis_q =
      QuantizeWeights(synthesis, result.step_search.best.synthesis_step_index);
  const QuantizedMlp arm_q =
      QuantizeWeights(arm, result.step_search.best.arm_step_index);
  result.synthesis = synthesis_q.Dequantize();
  result.arm = arm_q.Dequantize();
  result.trained_synthesis = synthesis;
  result.trained_arm = arm;

  Container c;
  StreamHeader& h = c.header;
  h.height = static_cast<uint16_t>(image.height);
  h.width = static_cast<uint16_t>(image.width);
  h.num_levels = static_cast<uint8_t>(cfg.num_levels);
  h.num_contexts = static_cast<uint8_t>(cfg.num_contexts);
  h.hidden_width = static_cast<uint8_t>(cfg.hidden_width);
  h.synthesis_step_index = static_cast<uint8_t>(synthesis_q.step_index);
  h.arm_step_index = static_cast<uint8_t>(arm_q.step_index);
  h.synthesis_sigma = synthesis_q.sigma;
  h.arm_sigma = arm_q.sigma;
  for (int a : latents.amplitudes()) h.amplitudes.push_back(static_cast<uint16_t>(a));
  c.arm_weights = EncodeWeights(arm_q);
  c.synthesis_weights = EncodeWeights(synthesis_q);
  for (int k = 0; k < latents.num_levels(); ++k) {
    c.latent_channels.push_back(EncodeLatentChannel(
        latents.channel(k), latents.amplitude(k), result.arm, pattern));
  }
  result.stream = SerializeContainer(c);

  result.reconstruction = Synthesize(BuildDense(latents), result.synthesis);
  result.estimated_latent_bits = RateBits(latents, result.arm, pattern);
  result.latents = latents;
  result.report =
      EstimateRateReport(result.stream, &image, &result.reconstruction);
  result.report.iterations = cfg.iterations;
  result.report.lambda = cfg.lambda;
  result.report.seed = cfg.seed;
  result.report.seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  return result;
}

}  // namespace coolcodec
