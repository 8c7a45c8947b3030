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

#include "spatialdep/encoder.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace spatialdep {

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)

Mat Bias(int d) { return Mat::Zero(1, d); }
Mat Gain(int d) { return Mat::Ones(1, d); }

Mat Affine(const Mat& x, const Mat& w, const Mat& b) {
  Mat y = x * w.transpose();
  y.rowwise() += b.row(0);
  return y;
}

Mat LayerNorm(const Mat& x, const Mat& gain, const Mat& bias, LayerNormCache& cache) {
  const Eigen::Index n = x.rows();
  const double d = static_cast<double>(x.cols());
  cache.normalized.resize(n, x.cols());
  cache.inv_std.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = x.row(i).sum() / d;
    const double var = (x.row(i).array() - mean).square().sum() / d;
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    cache.inv_std(i) = inv;
    cache.normalized.row(i) = (x.row(i).array() - mean) * inv;
  }
  Mat y = cache.normalized.array().rowwise() * gain.row(0).array();
  y.rowwise() += bias.row(0);
  return y;
}

// Returns dL/dx and accumulates gain/bias gradients.
Mat LayerNormBackward(const LayerNormCache& cache, const Mat& gain, const Mat& d_y,
                      Mat& d_gain, Mat& d_bias) {
  d_gain.row(0) += (d_y.array() * cache.normalized.array()).colwise().sum().matrix();
  d_bias.row(0) += d_y.colwise().sum();
  Mat d_norm = d_y.array().rowwise() * gain.row(0).array();
  const double d = static_cast<double>(d_y.cols());
  Mat d_x(d_y.rows(), d_y.cols());
  for (Eigen::Index i = 0; i < d_y.rows(); ++i) {
    const double mean_g = d_norm.row(i).sum() / d;
    const double mean_gx = d_norm.row(i).dot(cache.normalized.row(i)) / d;
    d_x.row(i) = cache.inv_std(i) *
                 (d_norm.row(i).array() - mean_g - cache.normalized.row(i).array() * mean_gx)
                     .matrix();
  }
  return d_x;
}

double Gelu(double x) { return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + 0.044715 * x * x * x))); }

double GeluGrad(double x) {
  const double t = std::tanh(kGeluC * (x + 0.044715 * x * x * x));
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * 0.044715 * x * x);
}

void SoftmaxRows(Mat& s) {
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double m = s.row(i).maxCoeff();
    s.row(i) = (s.row(i).array() - m).exp().matrix();
    s.row(i) /= s.row(i).sum();
  }
}

void CheckLayer(const EncoderConfig& cfg, int layer) {
  if (layer < 0 || layer >= cfg.n_layers) {
    throw std::invalid_argument("layer index " + std::to_string(layer) + " out of range");
  }
}

}  // namespace

void EncoderConfig::Validate() const {
  if (n_layers < 1 || d_model < 1 || n_heads < 1 || d_head < 1 || d_ff < 1 || vocab_size < 1) {
    throw std::invalid_argument("encoder dimensions must be positive");
  }
  if (d_model != n_heads * d_head) {
    throw std::invalid_argument("d_model must equal n_heads * d_head");
  }
  if (d_rel_component < 2 || d_rel_component % 2 != 0) {
    throw std::invalid_argument("d_rel_component must be a positive even integer");
  }
}

EncoderParams EncoderParams::Init(const EncoderConfig& cfg) {
  cfg.Validate();
  std::mt19937_64 rng(cfg.rng_seed);
  const int d = cfg.d_model;
  EncoderParams p;
  p.token_embed = RandomMatrix(cfg.vocab_size, d, 0.5 * std::sqrt(static_cast<double>(d)), rng);
  for (int l = 0; l < cfg.n_layers; ++l) {
    EncoderLayerParams L;
    L.wq = RandomMatrix(d, d, 1.0, rng);
    L.bq = Bias(d);
    L.wk = RandomMatrix(d, d, 1.0, rng);
    L.bk = Bias(d);
    L.wv = RandomMatrix(d, d, 1.0, rng);
    L.bv = Bias(d);
    L.wo = RandomMatrix(d, d, 0.5, rng);
    L.bo = Bias(d);
    L.w_rel = RandomMatrix(d, cfg.d_rel_base(), 1.0, rng);
    L.b_key = Bias(d);
    L.b_rel = Bias(d);
    L.ln1_gain = Gain(d);
    L.ln1_bias = Bias(d);
    L.ln2_gain = Gain(d);
    L.ln2_bias = Bias(d);
    L.ff1_w = RandomMatrix(cfg.d_ff, d, 1.0, rng);
    L.ff1_b = Bias(cfg.d_ff);
    L.ff2_w = RandomMatrix(d, cfg.d_ff, 0.5, rng);
    L.ff2_b = Bias(d);
    p.layers.push_back(std::move(L));
  }
  p.final_gain = Gain(d);
  p.final_bias = Bias(d);
  return p;
}

EncoderParams EncoderParams::Zeros(const EncoderConfig& cfg) {
  EncoderParams p = Init(cfg);
  ZeroTensors(p.Tensors());
  return p;
}

TensorList EncoderParams::Tensors() {
  TensorList out{{"encoder.token_embed", &token_embed}};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string pre = "encoder.layer" + std::to_string(l) + ".";
    EncoderLayerParams& L = layers[l];
    for (auto [name, m] : std::initializer_list<std::pair<const char*, Mat*>>{
             {"wq", &L.wq},           {"bq", &L.bq},           {"wk", &L.wk},
             {"bk", &L.bk},           {"wv", &L.wv},           {"bv", &L.bv},
             {"wo", &L.wo},           {"bo", &L.bo},           {"w_rel", &L.w_rel},
             {"b_key", &L.b_key},     {"b_rel", &L.b_rel},     {"ln1_gain", &L.ln1_gain},
             {"ln1_bias", &L.ln1_bias}, {"ln2_gain", &L.ln2_gain}, {"ln2_bias", &L.ln2_bias},
             {"ff1_w", &L.ff1_w},     {"ff1_b", &L.ff1_b},     {"ff2_w", &L.ff2_w},
             {"ff2_b", &L.ff2_b}}) {
      out.push_back({pre + name, m});
    }
  }
  out.push_back({"encoder.final_gain", &final_gain});
  out.push_back({"encoder.final_bias", &final_bias});
  return out;
}

EncoderInput PrepareInput(const Document& doc, const Vocabulary& vocab,
                          const QuantizationSpec& quant) {
  EncoderInput in;
  in.token_ids = vocab.Ids(doc);
  const std::vector<Point> centers = doc.Centers();
  in.rel = QuantizeFeatures(PairFeatures(centers), quant.Resolve(doc.width));
  return in;
}

Mat RelBaseEmbeddings(const PairGrid<QuantizedRelFeature>& rel, int d_rel_component) {
  const std::size_t n = rel.size();
  const int dc = d_rel_component;
  Mat base(static_cast<Eigen::Index>(n * n), 4 * dc);
  std::map<int, std::vector<double>> memo;
  auto embed = [&](int k) -> const std::vector<double>& {
    auto it = memo.find(k);
    if (it == memo.end()) it = memo.emplace(k, SinCosEmbed(k, dc)).first;
    return it->second;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const QuantizedRelFeature& q = rel(i, j);
      const Eigen::Index row = static_cast<Eigen::Index>(i * n + j);
      const int bins[4] = {q.qx, q.qy, q.qdist, q.qangle};
      for (int part = 0; part < 4; ++part) {
        const std::vector<double>& e = embed(bins[part]);
        for (int c = 0; c < dc; ++c) base(row, part * dc + c) = e[static_cast<std::size_t>(c)];
      }
    }
  }
  return base;
}

Mat BuildRelVectors(const PairGrid<QuantizedRelFeature>& rel, const EncoderParams& params,
                    const EncoderConfig& cfg, int layer) {
  CheckLayer(cfg, layer);
  const Mat& w = params.layers[static_cast<std::size_t>(layer)].w_rel;
  if (w.cols() != cfg.d_rel_base() || w.rows() != cfg.d_model) {
    throw std::invalid_argument("relative projection shape mismatch");
  }
  return RelBaseEmbeddings(rel, cfg.d_rel_component) * w.transpose();
}

double AttentionLogit(const Eigen::VectorXd& q, const Eigen::VectorXd& k,
                      const Eigen::VectorXd& r, const Eigen::VectorXd& b_key,
                      const Eigen::VectorXd& b_rel) {
  return q.dot(k) + q.dot(r) + b_key.dot(k) + b_rel.dot(r);
}

Mat Encode(const EncoderInput& input, const EncoderParams& params, const EncoderConfig& cfg) {
  EncoderCache cache;
  return EncodeWithCache(input, params, cfg, cache);
}

Mat EncodeWithCache(const EncoderInput& input, const EncoderParams& params,
                    const EncoderConfig& cfg, EncoderCache& cache) {
  cfg.Validate();
  const Eigen::Index n = static_cast<Eigen::Index>(input.size());
  if (n == 0) throw std::invalid_argument("cannot encode an empty document");
  if (input.rel.size() != input.size()) {
    throw std::invalid_argument("relative feature grid does not match token count");
  }
  if (static_cast<int>(params.layers.size()) != cfg.n_layers) {
    throw std::invalid_argument("parameter layer count does not match config");
  }
  const int d = cfg.d_model;
  const int dh = cfg.d_head;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  cache.token_ids = input.token_ids;
  for (int& id : cache.token_ids) {
    if (id < 0 || id >= params.token_embed.rows()) id = Vocabulary::kUnk;
  }
  if (cfg.use_relative) {
    cache.rel_base = RelBaseEmbeddings(input.rel, cfg.d_rel_component);
  } else {
    cache.rel_base.resize(0, 0);
  }

  Mat x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = params.token_embed.row(cache.token_ids[i]);

  cache.layers.assign(params.layers.size(), EncoderLayerCache{});
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const EncoderLayerParams& L = params.layers[l];
    EncoderLayerCache& C = cache.layers[l];
    C.input = x;
    C.attn_in = LayerNorm(x, L.ln1_gain, L.ln1_bias, C.ln1);
    C.q = Affine(C.attn_in, L.wq, L.bq);
    C.k = Affine(C.attn_in, L.wk, L.bk);
    C.v = Affine(C.attn_in, L.wv, L.bv);
    C.probs.assign(static_cast<std::size_t>(cfg.n_heads), Mat());
    C.rel_key.assign(static_cast<std::size_t>(cfg.n_heads), Mat());
    C.heads_out.resize(n, d);
    for (int h = 0; h < cfg.n_heads; ++h) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(h) * dh;
      Mat q_key = C.q.middleCols(c0, dh);
      q_key.rowwise() += L.b_key.row(0).segment(c0, dh);
      Mat s = q_key * C.k.middleCols(c0, dh).transpose();
      if (cfg.use_relative) {
        // q_i.(W e_ij) == (W^T q_i).e_ij, so project the query once per row.
        Mat q_rel = C.q.middleCols(c0, dh);
        q_rel.rowwise() += L.b_rel.row(0).segment(c0, dh);
        Mat& g = C.rel_key[static_cast<std::size_t>(h)];
        g = q_rel * L.w_rel.middleRows(c0, dh);
        for (Eigen::Index i = 0; i < n; ++i) {
          s.row(i) += (cache.rel_base.middleRows(i * n, n) * g.row(i).transpose()).transpose();
        }
      }
      s *= scale;
      SoftmaxRows(s);
      C.heads_out.middleCols(c0, dh) = s * C.v.middleCols(c0, dh);
      C.probs[static_cast<std::size_t>(h)] = std::move(s);
    }
    C.resid1 = x + Affine(C.heads_out, L.wo, L.bo);
    C.ff_in = LayerNorm(C.resid1, L.ln2_gain, L.ln2_bias, C.ln2);
    C.ff_pre = Affine(C.ff_in, L.ff1_w, L.ff1_b);
    C.ff_act = C.ff_pre.unaryExpr(&Gelu);
    x = C.resid1 + Affine(C.ff_act, L.ff2_w, L.ff2_b);
  }
  cache.final_in = x;
  cache.output = LayerNorm(x, params.final_gain, params.final_bias, cache.final_ln);
  return cache.output;
}

void EncoderBackward(const EncoderCache& cache, const EncoderParams& params,
                     const EncoderConfig& cfg, const Mat& d_output, EncoderParams& grads) {
  const Eigen::Index n = cache.output.rows();
  if (d_output.rows() != n || d_output.cols() != cfg.d_model) {
    throw std::invalid_argument("upstream gradient shape mismatch");
  }
  const int dh = cfg.d_head;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Mat dx = LayerNormBackward(cache.final_ln, params.final_gain, d_output, grads.final_gain,
                             grads.final_bias);

  for (std::size_t li = params.layers.size(); li-- > 0;) {
    const EncoderLayerParams& L = params.layers[li];
    const EncoderLayerCache& C = cache.layers[li];
    EncoderLayerParams& G = grads.layers[li];

    // Feed-forward block.
    G.ff2_w += dx.transpose() * C.ff_act;
    G.ff2_b.row(0) += dx.colwise().sum();
    Mat d_pre = (dx * L.ff2_w).array() * C.ff_pre.unaryExpr(&GeluGrad).array();
    G.ff1_w += d_pre.transpose() * C.ff_in;
    G.ff1_b.row(0) += d_pre.colwise().sum();
    Mat d_resid1 = dx + LayerNormBackward(C.ln2, L.ln2_gain, d_pre * L.ff1_w, G.ln2_gain,
                                          G.ln2_bias);

    // Attention block.
    G.wo += d_resid1.transpose() * C.heads_out;
    G.bo.row(0) += d_resid1.colwise().sum();
    Mat d_heads = d_resid1 * L.wo;
    Mat dq = Mat::Zero(n, cfg.d_model);
    Mat dk = Mat::Zero(n, cfg.d_model);
    Mat dv = Mat::Zero(n, cfg.d_model);
    for (int h = 0; h < cfg.n_heads; ++h) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(h) * dh;
      const Mat& p = C.probs[static_cast<std::size_t>(h)];
      Mat d_oh = d_heads.middleCols(c0, dh);
      Mat dp = d_oh * C.v.middleCols(c0, dh).transpose();
      dv.middleCols(c0, dh) += p.transpose() * d_oh;
      Eigen::VectorXd row_dot = (dp.array() * p.array()).rowwise().sum();
      Mat ds = p.array() * (dp.colwise() - row_dot).array();
      ds *= scale;

      Mat q_key = C.q.middleCols(c0, dh);
      q_key.rowwise() += L.b_key.row(0).segment(c0, dh);
      Mat dq_key = ds * C.k.middleCols(c0, dh);
      dq.middleCols(c0, dh) += dq_key;
      G.b_key.row(0).segment(c0, dh) += dq_key.colwise().sum();
      dk.middleCols(c0, dh) += ds.transpose() * q_key;

      if (cfg.use_relative) {
        Mat dg(n, cfg.d_rel_base());
        for (Eigen::Index i = 0; i < n; ++i) {
          dg.row(i) = ds.row(i) * cache.rel_base.middleRows(i * n, n);
        }
        Mat q_rel = C.q.middleCols(c0, dh);
        q_rel.rowwise() += L.b_rel.row(0).segment(c0, dh);
        Mat dq_rel = dg * L.w_rel.middleRows(c0, dh).transpose();
        dq.middleCols(c0, dh) += dq_rel;
        G.b_rel.row(0).segment(c0, dh) += dq_rel.colwise().sum();
        G.w_rel.middleRows(c0, dh) += q_rel.transpose() * dg;
      }
    }
    G.wq += dq.transpose() * C.attn_in;
    G.bq.row(0) += dq.colwise().sum();
    G.wk += dk.transpose() * C.attn_in;
    G.bk.row(0) += dk.colwise().sum();
    G.wv += dv.transpose() * C.attn_in;
    G.bv.row(0) += dv.colwise().sum();
    Mat d_attn_in = dq * L.wq + dk * L.wk + dv * L.wv;
    dx = d_resid1 +
         LayerNormBackward(C.ln1, L.ln1_gain, d_attn_in, G.ln1_gain, G.ln1_bias);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    grads.token_embed.row(cache.token_ids[static_cast<std::size_t>(i)]) += dx.row(i);
  }
}

}  // namespace spatialdep
