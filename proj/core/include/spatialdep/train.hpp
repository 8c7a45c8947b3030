// Copyright 2026 The spatialdep Authors.
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

#ifndef SPATIALDEP_TRAIN_HPP_
#define SPATIALDEP_TRAIN_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "spatialdep/augment.hpp"
#include "spatialdep/decoder.hpp"
#include "spatialdep/encoder.hpp"
#include "spatialdep/graph.hpp"
#include "spatialdep/metrics.hpp"
#include "spatialdep/tca.hpp"
#include "spatialdep/vocab.hpp"

namespace spatialdep {

// Encoder plus one edge scorer per relation, with everything needed to run
// a document end to end.
struct Model {
  FieldSchema schema;
  Vocabulary vocab;
  EncoderConfig encoder_config;
  QuantizationSpec quantization;
  EncoderParams encoder;
  std::array<ScorerParams, 2> scorers;  // indexed by Relation

  static Model Init(const FieldSchema& schema, Vocabulary vocab, EncoderConfig encoder_config,
                    QuantizationSpec quantization, int d_score);

  TensorList Tensors();
  // Tensors of the scorers only; the remaining ones belong to the encoder.
  std::size_t EncoderTensorCount();
};

struct TrainConfig {
  double lr_encoder = 1e-3;
  double lr_scorer = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int batch_size = 4;
  int epochs = 30;
  double p_th = 0.5;
  std::uint64_t seed = 7;
  double grad_clip = 5.0;  // global L2 norm; <= 0 disables
  int d_score = 64;
  int vocab_min_count = 2;
  bool tca = true;
  EncoderConfig encoder;  // vocab_size is filled in from the data
  QuantizationSpec quantization;
  AugmentConfig augment;

  void Validate() const;
};

struct LabeledExample {
  Document doc;
  ChainParse labels;
};

struct Prediction {
  std::array<EdgeProbabilities, 2> probs;
  std::array<RelationMatrix, 2> binary;  // after TCA when enabled
  std::array<TcaResult, 2> tca;          // iterations == 0 when TCA was off
  DecodeResult decoded;
};

Prediction Predict(const Model& model, const Document& doc, double p_th = 0.5, bool use_tca = true);

// clamp(#neg / #pos, 1, 100); 1 when there are no positives.
double PositiveWeight(const RelationMatrix& gt);

// Mean over every cell of both relations of the weighted binary cross-entropy
//   -w_pos * gt * log p - (1 - gt) * log(1 - p),
// with p clipped to [eps, 1 - eps]. Optional outputs receive dLoss/dp.
double EdgeLoss(const EdgeProbabilities& p_serial, const EdgeProbabilities& p_group,
                const RelationMatrix& gt_serial, const RelationMatrix& gt_group,
                Mat* d_p_serial = nullptr, Mat* d_p_group = nullptr, double eps = 1e-7);

// Loss and exact gradients of one labeled document w.r.t. every model
// tensor; gradients are accumulated into `grads` (same layout as the model).
double LossAndGradient(const Model& model, const Document& doc, const ChainParse& labels,
                       Model& grads);

struct EvalReport {
  PRF rel_serial;
  PRF rel_group;
  ParseScore parse;
  int tail_collision_diagnostics = 0;
};

EvalReport Evaluate(const Model& model, const std::vector<LabeledExample>& examples,
                    const FieldSchema& schema, double p_th, bool use_tca, const MatchConfig& match);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_rel_s_f1 = 0.0;
  double dev_rel_g_f1 = 0.0;
  double dev_parse_f1 = 0.0;
};

struct TrainResult {
  Model model;  // best dev checkpoint
  std::vector<EpochLog> log;
  int best_epoch = 0;
};

// Joint Adam training of encoder and scorers. Two learning-rate groups; the
// dev split (mean of rel-s and rel-g edge F1) picks the returned checkpoint.
// Throws std::runtime_error when the loss turns non-finite.
TrainResult Train(const std::vector<LabeledExample>& train, const std::vector<LabeledExample>& dev,
                  const FieldSchema& schema, const TrainConfig& cfg,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

// Receipt name fields get edit-distance tolerance.
MatchConfig DefaultMatchConfig();

}  // namespace spatialdep

#endif  // SPATIALDEP_TRAIN_HPP_
