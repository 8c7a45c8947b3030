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

#include "spatialdep/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace spatialdep {

Model Model::Init(const FieldSchema& schema, Vocabulary vocab, EncoderConfig encoder_config,
                  QuantizationSpec quantization, int d_score) {
  schema.Validate();
  if (d_score < 1) throw std::invalid_argument("d_score must be positive");
  Model m;
  m.schema = schema;
  encoder_config.vocab_size = vocab.size();
  m.vocab = std::move(vocab);
  m.encoder_config = encoder_config;
  m.quantization = quantization;
  m.encoder = EncoderParams::Init(encoder_config);
  const int nf = static_cast<int>(schema.size());
  m.scorers[0] = ScorerParams::Init(nf, encoder_config.d_model, d_score, encoder_config.rng_seed + 101);
  m.scorers[1] = ScorerParams::Init(nf, encoder_config.d_model, d_score, encoder_config.rng_seed + 202);
  return m;
}

TensorList Model::Tensors() {
  TensorList out = encoder.Tensors();
  for (Relation r : kRelations) {
    TensorList s = scorers[static_cast<std::size_t>(r)].Tensors(
        "scorer." + std::string(RelationName(r)) + ".");
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::size_t Model::EncoderTensorCount() { return encoder.Tensors().size(); }

void TrainConfig::Validate() const {
  if (!(lr_encoder > 0.0) || !(lr_scorer > 0.0)) {
    throw std::invalid_argument("learning rates must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam decay rates must lie in [0, 1)");
  }
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (!(p_th > 0.0 && p_th < 1.0)) throw std::invalid_argument("p_th must lie in (0, 1)");
  augment.Validate();
}

Prediction Predict(const Model& model, const Document& doc, double p_th, bool use_tca) {
  const int nf = static_cast<int>(model.schema.size());
  const int n = static_cast<int>(doc.tokens.size());
  Prediction out;
  Mat context;
  if (n > 0) {
    const EncoderInput input = PrepareInput(doc, model.vocab, model.quantization);
    context = Encode(input, model.encoder, model.encoder_config);
  }
  for (Relation r : kRelations) {
    const std::size_t k = static_cast<std::size_t>(r);
    if (n > 0) {
      out.probs[k] = ScoreEdges(context, model.scorers[k], r);
    } else {
      out.probs[k] = EdgeProbabilities{r, nf, Mat(nf, 0)};
    }
    RelationMatrix bin = Binarize(out.probs[k], p_th);
    if (use_tca) {
      out.tca[k] = ResolveCollisions(out.probs[k], bin, p_th, 20);
      out.binary[k] = out.tca[k].matrix;
    } else {
      out.tca[k] = TcaResult{bin, CountTailCollisions(bin) == 0, 0};
      out.binary[k] = std::move(bin);
    }
  }
  const std::vector<std::string> texts = doc.Texts();
  out.decoded = Decode(out.binary[0], out.binary[1], model.schema, texts, &out.probs[1].p);
  return out;
}

double PositiveWeight(const RelationMatrix& gt) {
  const double total = static_cast<double>(gt.m.size());
  const double pos = static_cast<double>(gt.EdgeCount());
  if (pos == 0.0) return 1.0;
  return std::clamp((total - pos) / pos, 1.0, 100.0);
}

double EdgeLoss(const EdgeProbabilities& p_serial, const EdgeProbabilities& p_group,
                const RelationMatrix& gt_serial, const RelationMatrix& gt_group, Mat* d_p_serial,
                Mat* d_p_group, double eps) {
  const std::array<const EdgeProbabilities*, 2> ps{&p_serial, &p_group};
  const std::array<const RelationMatrix*, 2> gts{&gt_serial, &gt_group};
  const std::array<Mat*, 2> grads{d_p_serial, d_p_group};
  double cells = 0.0;
  for (int r = 0; r < 2; ++r) {
    if (ps[r]->p.rows() != gts[r]->m.rows() || ps[r]->p.cols() != gts[r]->m.cols()) {
      throw std::invalid_argument("probability and label matrices differ in shape");
    }
    cells += static_cast<double>(ps[r]->p.size());
  }
  if (cells == 0.0) return 0.0;
  double total = 0.0;
  for (int r = 0; r < 2; ++r) {
    const Mat& p = ps[r]->p;
    const BinaryMat& gt = gts[r]->m;
    const double w = PositiveWeight(*gts[r]);
    if (grads[r] != nullptr) grads[r]->setZero(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) {
        const double q = std::clamp(p(i, j), eps, 1.0 - eps);
        const bool clipped = q != p(i, j);
        if (gt(i, j)) {
          total -= w * std::log(q);
          if (grads[r] != nullptr && !clipped) (*grads[r])(i, j) = -w / q / cells;
        } else {
          total -= std::log(1.0 - q);
          if (grads[r] != nullptr && !clipped) (*grads[r])(i, j) = 1.0 / (1.0 - q) / cells;
        }
      }
    }
  }
  return total / cells;
}

double LossAndGradient(const Model& model, const Document& doc, const ChainParse& labels,
                       Model& grads) {
  const int n = static_cast<int>(doc.tokens.size());
  if (n == 0) return 0.0;
  const EncoderInput input = PrepareInput(doc, model.vocab, model.quantization);
  EncoderCache enc_cache;
  const Mat context = EncodeWithCache(input, model.encoder, model.encoder_config, enc_cache);

  std::array<ScorerCache, 2> caches;
  std::array<EdgeProbabilities, 2> probs;
  for (Relation r : kRelations) {
    const std::size_t k = static_cast<std::size_t>(r);
    probs[k] = ScoreEdgesWithCache(context, model.scorers[k], r, caches[k]);
  }
  const auto [gt_s, gt_g] = EncodeParse(labels, model.schema, n);
  const double loss = EdgeLoss(probs[0], probs[1], gt_s, gt_g);

  const double cells = static_cast<double>(probs[0].p.size() + probs[1].p.size());
  Mat d_context = Mat::Zero(context.rows(), context.cols());
  const std::array<const RelationMatrix*, 2> gts{&gt_s, &gt_g};
  for (Relation r : kRelations) {
    const std::size_t k = static_cast<std::size_t>(r);
    const double w = PositiveWeight(*gts[k]);
    const Mat& p = probs[k].p;
    // d/dm of the cell loss through the logistic: -w (1 - p) for positives, p
    // otherwise, and zero where the loss clips p.
    constexpr double kEps = 1e-7;
    Mat d_margin(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) {
        const double q = p(i, j);
        if (q < kEps || q > 1.0 - kEps) {
          d_margin(i, j) = 0.0;
          continue;
        }
        d_margin(i, j) = (gts[k]->m(i, j) ? -w * (1.0 - q) : q) / cells;
      }
    }
    d_context += ScorerBackward(caches[k], context, model.scorers[k], d_margin, grads.scorers[k]);
  }
  EncoderBackward(enc_cache, model.encoder, model.encoder_config, d_context, grads.encoder);
  return loss;
}

EvalReport Evaluate(const Model& model, const std::vector<LabeledExample>& examples,
                    const FieldSchema& schema, double p_th, bool use_tca, const MatchConfig& match) {
  EvalReport report;
  for (const LabeledExample& ex : examples) {
    const Prediction pred = Predict(model, ex.doc, p_th, use_tca);
    const int n = static_cast<int>(ex.doc.tokens.size());
    const auto [gt_s, gt_g] = EncodeParse(ex.labels, schema, n);
    report.rel_serial += EdgePRF(pred.binary[0], gt_s);
    report.rel_group += EdgePRF(pred.binary[1], gt_g);
    const Parse gt_parse = Detokenize(ex.labels, ex.doc.Texts(), schema);
    report.parse += ScoreParse(pred.decoded.parse, gt_parse, match);
    report.tail_collision_diagnostics +=
        pred.decoded.CountDiagnostics(Diagnostic::Kind::kTailCollision);
  }
  return report;
}

MatchConfig DefaultMatchConfig() {
  MatchConfig cfg;
  cfg.tolerant_fields = {"store_name", "menu_name", "item_name"};
  return cfg;
}

namespace {

struct AdamState {
  std::vector<Mat> m;
  std::vector<Mat> v;
  long step = 0;
};

}  // namespace

TrainResult Train(const std::vector<LabeledExample>& train, const std::vector<LabeledExample>& dev,
                  const FieldSchema& schema, const TrainConfig& cfg,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  cfg.Validate();
  schema.Validate();
  std::vector<Document> docs;
  docs.reserve(train.size());
  for (const auto& ex : train) docs.push_back(ex.doc);
  EncoderConfig ecfg = cfg.encoder;
  ecfg.rng_seed = cfg.seed;
  Model model = Model::Init(schema, Vocabulary::Build(docs, cfg.vocab_min_count), ecfg,
                            cfg.quantization, cfg.d_score);

  TrainResult result;
  result.model = model;
  if (cfg.epochs == 0 || train.empty()) return result;

  std::vector<std::string> pool(model.vocab.words().begin() + 1, model.vocab.words().end());
  Model grads = model;
  TensorList params = model.Tensors();
  TensorList grad_tensors = grads.Tensors();
  const std::size_t n_encoder = model.EncoderTensorCount();
  AdamState adam;
  for (const auto& t : params) {
    adam.m.push_back(Mat::Zero(t.value->rows(), t.value->cols()));
    adam.v.push_back(Mat::Zero(t.value->rows(), t.value->cols()));
  }

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const MatchConfig match = DefaultMatchConfig();
  double best_score = -1.0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      ZeroTensors(grad_tensors);
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const LabeledExample& ex = train[order[b]];
        const LabeledDocument aug = Augment(ex.doc, ex.labels, cfg.augment, pool, rng);
        const double l = LossAndGradient(model, aug.doc, aug.labels, grads);
        if (!std::isfinite(l)) {
          throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch) +
                                   " on document '" + ex.doc.id + "'");
        }
        batch_loss += l;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (const auto& g : grad_tensors) *g.value *= inv;
      if (cfg.grad_clip > 0.0) {
        const double norm = std::sqrt(SquaredNorm(grad_tensors));
        if (!std::isfinite(norm)) {
          throw std::runtime_error("non-finite gradient at epoch " + std::to_string(epoch));
        }
        if (norm > cfg.grad_clip) {
          for (const auto& g : grad_tensors) *g.value *= cfg.grad_clip / norm;
        }
      }
      ++adam.step;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.step));
      for (std::size_t k = 0; k < params.size(); ++k) {
        const double lr = k < n_encoder ? cfg.lr_encoder : cfg.lr_scorer;
        const Mat& g = *grad_tensors[k].value;
        adam.m[k] = cfg.beta1 * adam.m[k] + (1.0 - cfg.beta1) * g;
        adam.v[k] = cfg.beta2 * adam.v[k] + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        *params[k].value -= (lr * (adam.m[k] / bc1).array() /
                             ((adam.v[k] / bc2).array().sqrt() + cfg.adam_eps))
                                .matrix();
      }
      epoch_loss += batch_loss;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(train.size());
    double score = static_cast<double>(epoch);  // without dev data keep the latest
    if (!dev.empty()) {
      const EvalReport rep = Evaluate(model, dev, schema, cfg.p_th, cfg.tca, match);
      entry.dev_rel_s_f1 = rep.rel_serial.f1();
      entry.dev_rel_g_f1 = rep.rel_group.f1();
      entry.dev_parse_f1 = rep.parse.overall.f1();
      score = 0.5 * (entry.dev_rel_s_f1 + entry.dev_rel_g_f1);
    }
    if (score > best_score) {
      best_score = score;
      result.model = model;
      result.best_epoch = epoch;
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

}  // namespace spatialdep
